#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fitzkit/app.hpp"
#include "fitzkit/conjugate.hpp"
#include "fitzkit/errors.hpp"
#include "fitzkit/fitzpatrick.hpp"
#include "fitzkit/gates.hpp"
#include "fitzkit/json_io.hpp"
#include "fitzkit/lemmas.hpp"

namespace py = pybind11;
using namespace fitzkit;
using json_io::json;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Bounds = std::vector<std::pair<double, double>>;

GridSpec spec_of(const Bounds& bounds, std::span<const py::ssize_t> shape) {
  if (bounds.size() != shape.size())
    throw InputError("got " + std::to_string(bounds.size()) + " axis bounds for a " + std::to_string(shape.size()) +
                     "-dimensional array");
  GridSpec spec;
  for (std::size_t k = 0; k < bounds.size(); ++k)
    spec.axes.push_back({bounds[k].first, bounds[k].second, static_cast<std::size_t>(shape[k])});
  spec.validate();
  return spec;
}

GridSpec spec_of(const std::vector<std::tuple<double, double, std::size_t>>& axes) {
  GridSpec spec;
  for (const auto& [lo, hi, m] : axes) spec.axes.push_back({lo, hi, m});
  spec.validate();
  return spec;
}

GridFn grid_of(const Array& values, const Bounds& bounds) {
  const auto* shape = values.shape();
  GridFn f{spec_of(bounds, {shape, shape + values.ndim()}), {}};
  f.values.assign(values.data(), values.data() + values.size());
  return f;
}

Array to_array(const GridFn& f) {
  const auto shape = f.spec.shape();
  Array out(std::vector<py::ssize_t>(shape.begin(), shape.end()));
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

py::array_t<bool> to_mask(const GridSpec& spec, const std::vector<std::uint8_t>& mask) {
  const auto shape = spec.shape();
  py::array_t<bool> out(std::vector<py::ssize_t>(shape.begin(), shape.end()));
  bool* p = out.mutable_data();
  for (std::size_t i = 0; i < mask.size(); ++i) p[i] = mask[i] != 0;
  return out;
}

py::object witness(const std::optional<RVec>& w) {
  if (!w) return py::none();
  return py::cast(*w);
}

py::dict majorize(const MajorizeResult& r) {
  py::dict d;
  d["holds"] = r.holds;
  d["worst"] = r.worst;
  d["witness"] = witness(r.witness);
  d["checked"] = r.checked;
  return d;
}

CatalogOperator operator_of(const std::string& text) { return json_io::read_operator(json_io::parse(text, "operator")); }

const FiniteOperator& finite_of(const CatalogOperator& op) {
  if (const auto* t = std::get_if<FiniteOperator>(&op)) return *t;
  throw InputError("operator: expected kind \"finite\"");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fitzpatrick functions, convex conjugates and representability checks";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);

  m.attr("DEFAULT_SEED") = kDefaultSeed;

  m.def(
      "conjugate_grid",
      [](const Array& values, const Bounds& bounds, const std::vector<std::tuple<double, double, std::size_t>>& dual,
         const std::string& method) {
        const GridFn f = grid_of(values, bounds);
        const GridSpec d = dual.empty() ? default_dual_spec(f) : spec_of(dual);
        ConjugateResult r;
        if (method == "llt") {
          r = conjugate_grid(f, d);
        } else if (method == "bruteforce") {
          r = conjugate_bruteforce(f, d);
        } else {
          throw InputError("method must be \"llt\" or \"bruteforce\", got \"" + method + "\"");
        }
        return py::make_tuple(to_array(r.function), to_mask(r.function.spec, r.saturation_mask));
      },
      py::arg("values"), py::arg("bounds"), py::arg("dual") = std::vector<std::tuple<double, double, std::size_t>>{},
      py::arg("method") = "llt");

  m.def(
      "llt_1d",
      [](const Array& slopes, const Array& coords, const Array& values) {
        const auto out = llt_1d({slopes.data(), static_cast<std::size_t>(slopes.size())},
                                {coords.data(), static_cast<std::size_t>(coords.size())},
                                {values.data(), static_cast<std::size_t>(values.size())});
        return Array(static_cast<py::ssize_t>(out.size()), out.data());
      },
      py::arg("slopes"), py::arg("coords"), py::arg("values"));

  m.def(
      "conjugate_exact",
      [](const std::string& function) {
        const auto f = json_io::read_function(json_io::parse(function, "function"));
        return std::visit([](const auto& g) { return json_io::to_json(conjugate_exact(g)).dump(); }, f);
      },
      py::arg("function"));

  m.def(
      "phi_exact", [](const std::string& op) { return json_io::to_json(phi_finite(finite_of(operator_of(op)))).dump(); },
      py::arg("operator"));
  m.def(
      "sigma_exact",
      [](const std::string& op) { return json_io::to_json(sigma_finite(finite_of(operator_of(op)))).dump(); },
      py::arg("operator"));

  m.def(
      "phi_on_grid",
      [](const std::string& op, const std::vector<std::tuple<double, double, std::size_t>>& axes) {
        const GridSpec spec = spec_of(axes);
        return std::visit([&](const auto& t) { return to_array(phi_on_grid(t, spec)); }, operator_of(op));
      },
      py::arg("operator"), py::arg("axes"));
  m.def(
      "sigma_on_grid",
      [](const std::string& op, const std::vector<std::tuple<double, double, std::size_t>>& axes) {
        return to_array(sigma_on_grid(finite_of(operator_of(op)), spec_of(axes)));
      },
      py::arg("operator"), py::arg("axes"));

  m.def(
      "is_monotone",
      [](const std::string& op) {
        const MonotoneReport r = is_monotone(finite_of(operator_of(op)));
        py::dict d;
        d["monotone"] = r.monotone;
        d["worst"] = r.worst.get_str();
        d["violator"] = r.violator ? py::cast(*r.violator) : py::none();
        return d;
      },
      py::arg("operator"));

  m.def(
      "gate",
      [](const Array& values, const Bounds& bounds, double tol) {
        const GateReport g = representability_gate(grid_of(values, bounds), tol);
        py::dict d;
        d["holds"] = g.holds();
        d["h_ge_pi"] = majorize(g.h_ge_pi);
        d["jh_ge_pi"] = majorize(g.jh_ge_pi);
        d["domain_note"] = g.domain_condition_note;
        return d;
      },
      py::arg("values"), py::arg("bounds"), py::arg("tol") = 1e-9);

  m.def(
      "extract",
      [](const Array& values, const Bounds& bounds, double tol, double gate_tol) {
        const ExtractionResult e = extract_operator(grid_of(values, bounds), tol, gate_tol);
        std::vector<std::pair<RVec, RVec>> pairs;
        for (const auto& p : e.graph.pairs) {
          RVec x, xs;
          for (const auto& v : p.x) x.push_back(v.get_d());
          for (const auto& v : p.xstar) xs.push_back(v.get_d());
          pairs.emplace_back(std::move(x), std::move(xs));
        }
        py::dict d;
        d["pairs"] = pairs;
        d["monotone"] = e.monotone.monotone;
        return d;
      },
      py::arg("values"), py::arg("bounds"), py::arg("tol") = 1e-9, py::arg("gate_tol") = 1e-9);

  m.def(
      "lemma_battery",
      [](std::uint64_t seed) {
        json out = json::array();
        for (const auto& e : run_lemma_battery(default_catalog(seed), seed)) out.push_back(json_io::to_json(e));
        return out.dump();
      },
      py::arg("seed") = kDefaultSeed);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"fitzkit"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = app::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
