#include "fitzkit/app.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fitzkit/conjugate.hpp"
#include "fitzkit/errors.hpp"
#include "fitzkit/fitzpatrick.hpp"
#include "fitzkit/gates.hpp"
#include "fitzkit/json_io.hpp"
#include "fitzkit/lemmas.hpp"

namespace fitzkit::app {

using json_io::json;

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw InputError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

using Clock = std::chrono::steady_clock;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string csv_text(const GridFn& f) {
  std::ostringstream s;
  write_csv(s, f);
  return s.str();
}

std::string mask_text(const GridSpec& spec, std::span<const std::uint8_t> mask) {
  std::ostringstream s;
  write_mask_csv(s, spec, mask);
  return s.str();
}

GridFn read_grid_file(const std::string& path) {
  std::istringstream s(read_file(path));
  return read_csv(s);
}

std::string graph_csv(const FiniteOperator& g, std::size_t n) {
  std::ostringstream s;
  for (std::size_t i = 0; i < n; ++i) s << "x" << i + 1 << ",";
  for (std::size_t i = 0; i < n; ++i) s << "xstar" << i + 1 << (i + 1 < n ? "," : "\n");
  for (const auto& p : g.pairs) {
    for (const auto& v : p.x) s << format_double(v.get_d()) << ",";
    for (std::size_t i = 0; i < n; ++i) s << format_double(p.xstar[i].get_d()) << (i + 1 < n ? "," : "\n");
  }
  return s.str();
}

json number(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

json point(std::span<const double> z) {
  json a = json::array();
  for (double v : z) a.push_back(number(v));
  return a;
}

json spec_json(const GridSpec& spec) {
  json a = json::array();
  for (const auto& ax : spec.axes) a.push_back({{"lo", ax.lo}, {"hi", ax.hi}, {"m", ax.m}});
  return a;
}

json majorize_json(const MajorizeResult& m) {
  json j = {{"holds", m.holds}, {"worst", number(m.worst)}, {"checked", m.checked}};
  j["witness"] = m.witness ? point(*m.witness) : json(nullptr);
  return j;
}

json gate_json(const GateReport& g) {
  return {{"holds", g.holds()},
          {"h_ge_pi", majorize_json(g.h_ge_pi)},
          {"jh_ge_pi", majorize_json(g.jh_ge_pi)},
          {"masked_nodes", g.jh.masked_count()},
          {"domain_condition", g.domain_condition_note}};
}

// Shared RunReport skeleton; timings are the only nondeterministic field.
struct Run {
  std::string command;
  json config = json::object();
  json results = json::object();
  Clock::time_point start = Clock::now();

  std::string text() const {
    json j = {{"command", command}, {"config", config}, {"results", results}};
    j["timings"] = {{"wall_seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
    return j.dump(2) + "\n";
  }
};

std::string echo(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += " ";
    s += argv[i];
  }
  return s;
}

// ---------------------------------------------------------------- conjugate

struct ConjugateArgs {
  std::string input, grid, dual_grid, method = "llt", out = "conjugate";
  bool j = false;
};

int cmd_conjugate(const ConjugateArgs& a, Run& run, std::ostream& out) {
  run.config = {{"input", a.input}, {"method", a.method}, {"j", a.j}, {"grid", a.grid}, {"dual_grid", a.dual_grid}};
  if (a.method == "exact") {
    const json doc = json_io::parse(read_file(a.input), a.input);
    json result;
    std::string kind = doc.is_object() && doc.contains("kind") && doc["kind"].is_string() ? doc["kind"].get<std::string>()
                                                                                          : "";
    json_io::ExactFunction f;
    if (kind == "finite") {
      // An operator document stands for its σ_T.
      f = sigma_finite(std::get<FiniteOperator>(json_io::read_operator(doc)));
    } else {
      f = json_io::read_function(doc);
    }
    if (const auto* g = std::get_if<GeneratorFn>(&f)) {
      const MaxAffineFn c = prune(a.j ? j_transform(*g) : conjugate_exact(*g));
      result = json_io::to_json(c);
      run.results = {{"kind", "max_affine"}, {"pieces", c.pieces.size()}};
    } else {
      const GeneratorFn c = prune(a.j ? j_transform(std::get<MaxAffineFn>(f)) : conjugate_exact(std::get<MaxAffineFn>(f)));
      result = json_io::to_json(c);
      run.results = {{"kind", "generator"}, {"generators", c.generators.size()}};
    }
    write_atomic(a.out + ".json", result.dump(2) + "\n");
    write_atomic(a.out + "_report.json", run.text());
    out << "exact conjugate written to " << a.out << ".json\n";
    return kOk;
  }

  GridFn f;
  if (has_suffix(a.input, ".json")) {
    if (a.grid.empty()) throw InputError("--grid is required to sample a JSON function");
    const GridSpec spec = parse_grid_spec(a.grid);
    const json_io::ExactFunction ef = json_io::read_function(json_io::parse(read_file(a.input), a.input));
    f = sample(spec, [&](std::span<const double> z) {
      const QVec q = to_qvec(z);
      return to_double(std::visit([&](const auto& fn) { return fn.eval(q); }, ef));
    });
  } else {
    f = read_grid_file(a.input);
  }
  f.require_proper("conjugate");
  GridSpec dual = f.spec;
  if (!a.dual_grid.empty()) {
    dual = parse_grid_spec(a.dual_grid);
  } else if (!a.j) {
    dual = default_dual_spec(f);
  }
  ConjugateResult r;
  if (a.j) {
    if (a.method != "llt") throw InputError("--j uses the llt method");
    r = j_transform(f, dual);
  } else if (a.method == "llt") {
    r = conjugate_grid(f, dual);
  } else {
    r = conjugate_bruteforce(f, dual);
  }
  write_atomic(a.out + ".csv", csv_text(r.function));
  write_atomic(a.out + "_mask.csv", mask_text(r.function.spec, r.saturation_mask));
  run.results = {{"nodes", r.function.values.size()}, {"masked_nodes", r.masked_count()},
                 {"dual_grid", spec_json(r.function.spec)}};
  write_atomic(a.out + "_report.json", run.text());
  out << "conjugate written to " << a.out << ".csv (" << r.masked_count() << " masked nodes)\n";
  return kOk;
}

// ---------------------------------------------------------------- fitzpatrick

struct FitzArgs {
  std::string input, which = "both", grid, out = "fitzpatrick";
  double tol = 0.0;
};

GridFn sigma_grid(const CatalogOperator& op, const GridSpec& spec, std::string& note) {
  if (const auto* t = std::get_if<FiniteOperator>(&op)) return sigma_on_grid(*t, spec);
  if (const auto* t = std::get_if<LinearOperator>(&op)) {
    const std::size_t n = t->n();
    return sample(spec, [&](std::span<const double> z) {
      const QVec q = to_qvec(z);
      return to_double(sigma_linear_eval(*t, std::span(q).first(n), std::span(q).subspan(n)));
    });
  }
  const auto& t = std::get<PwlCurve1d>(op);
  Box box{{from_double(spec.axes[0].lo), from_double(spec.axes[1].lo)},
          {from_double(spec.axes[0].hi), from_double(spec.axes[1].hi)}};
  const std::size_t count = std::max(spec.axes[0].m, spec.axes[1].m);
  note = "sigma of the curve sampled inside the grid window (" + std::to_string(count) + " per segment)";
  return sigma_on_grid(sample_graph(t, box, count, count), spec);
}

int cmd_fitzpatrick(const FitzArgs& a, Run& run, std::ostream& out) {
  run.config = {{"input", a.input}, {"which", a.which}, {"grid", a.grid}, {"tol", a.tol}};
  const CatalogOperator op = json_io::read_operator(json_io::parse(read_file(a.input), a.input));
  const GridSpec spec = parse_grid_spec(a.grid);
  const bool want_phi = a.which != "sigma", want_sigma = a.which != "phi";
  GridFn phi, sigma;
  std::string note;
  if (const auto* t = std::get_if<FiniteOperator>(&op)) {
    if (spec.dim() != 2 * t->n()) throw InputError("--grid must have 2n axes");
    if (want_phi) write_atomic(a.out + "_phi.json", json_io::to_json(phi_finite(*t)).dump(2) + "\n");
    if (want_sigma) write_atomic(a.out + "_sigma.json", json_io::to_json(sigma_finite(*t)).dump(2) + "\n");
    if (want_phi) phi = phi_on_grid(*t, spec);
  } else if (const auto* t = std::get_if<LinearOperator>(&op)) {
    if (want_phi) phi = phi_on_grid(*t, spec);
  } else {
    if (want_phi) phi = phi_on_grid(std::get<PwlCurve1d>(op), spec);
  }
  if (want_sigma) sigma = sigma_grid(op, spec, note);
  if (want_phi) write_atomic(a.out + "_phi.csv", csv_text(phi));
  if (want_sigma) write_atomic(a.out + "_sigma.csv", csv_text(sigma));
  int code = kOk;
  if (want_phi && want_sigma) {
    double worst = kNegInf;
    std::optional<RVec> witness;
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
      if (sigma.values[i] == kPosInf) continue;
      const double gap = phi.values[i] - sigma.values[i];
      if (gap > worst) worst = gap;
      if (gap > a.tol && !witness) witness = spec.point(i);
    }
    run.results["phi_le_sigma"] = {{"holds", !witness}, {"worst", number(worst)}};
    run.results["phi_le_sigma"]["witness"] = witness ? point(*witness) : json(nullptr);
    if (witness) {
      code = kAssertionFailed;
      out << "phi <= sigma fails at " << format_point(std::span<const double>(*witness)) << "\n";
    } else {
      out << "phi <= sigma holds at every node\n";
    }
  }
  if (!note.empty()) run.results["note"] = note;
  write_atomic(a.out + "_report.json", run.text());
  return code;
}

// ---------------------------------------------------------------- gate / extract

struct GateArgs {
  std::string input, declared, out = "gate";
  double tol = 0.0, extract_tol = 0.0;
};

int cmd_gate(const GateArgs& a, Run& run, std::ostream& out) {
  run.config = {{"input", a.input}, {"tol", a.tol}, {"declared_domain", a.declared}};
  const GridFn h = read_grid_file(a.input);
  const GateReport g = representability_gate(h, a.tol, a.declared);
  write_atomic(a.out + "_jh.csv", csv_text(g.jh.function));
  write_atomic(a.out + "_jh_mask.csv", mask_text(g.jh.function.spec, g.jh.saturation_mask));
  run.results = gate_json(g);
  write_atomic(a.out + "_report.json", run.text());
  out << "h >= pi: " << (g.h_ge_pi.holds ? "holds" : "fails") << ", Jh >= pi off the mask: "
      << (g.jh_ge_pi.holds ? "holds" : "fails") << "\n";
  if (!g.h_ge_pi.holds) out << "witness (h < pi): " << format_point(std::span<const double>(*g.h_ge_pi.witness)) << "\n";
  if (!g.jh_ge_pi.holds)
    out << "witness (Jh < pi): " << format_point(std::span<const double>(*g.jh_ge_pi.witness)) << "\n";
  return g.holds() ? kOk : kAssertionFailed;
}

int cmd_extract(const GateArgs& a, Run& run, std::ostream& out) {
  run.config = {{"input", a.input}, {"gate_tol", a.tol}, {"extract_tol", a.extract_tol}, {"declared_domain", a.declared}};
  const GridFn h = read_grid_file(a.input);
  const GateReport g = representability_gate(h, a.tol, a.declared);
  if (!g.holds()) {
    run.results = {{"gate", gate_json(g)}, {"extracted", 0}};
    write_atomic(a.out + "_report.json", run.text());
    out << "gate fails; nothing extracted\n";
    return kAssertionFailed;
  }
  const ExtractionResult e = extract_operator(h, a.extract_tol, a.tol, a.declared);
  const std::size_t n = h.spec.dim() / 2;
  write_atomic(a.out + "_graph.csv", graph_csv(e.graph, n));
  run.results = {{"gate", gate_json(e.gate)}, {"extracted", e.graph.pairs.size()},
                 {"monotone", e.monotone.monotone}};
  if (e.monotone.violator) {
    const auto [i, j] = *e.monotone.violator;
    run.results["monotone_witness"] = {format_point(e.graph.pairs[i].joined()), format_point(e.graph.pairs[j].joined())};
  }
  write_atomic(a.out + "_report.json", run.text());
  out << e.graph.pairs.size() << " nodes extracted, monotone: " << (e.monotone.monotone ? "yes" : "no") << "\n";
  return e.monotone.monotone ? kOk : kAssertionFailed;
}

// ---------------------------------------------------------------- cw

struct CwArgs {
  std::size_t m = 17;
  double window = 2.0, gate_tol = 1e-6, extract_tol = 1e-9;
  std::string out = "cw";
};

int cmd_cw(const CwArgs& a, Run& run, std::ostream& out) {
  run.config = {{"resolution", a.m}, {"window", a.window}, {"gate_tol", a.gate_tol}, {"extract_tol", a.extract_tol}};
  if (a.m < 9) throw InputError("--resolution must be at least 9 (coarser grids make the extraction vacuous)");
  if (!(a.window >= 1.0)) throw InputError("--window must be at least 1 so the window contains the unit ball");
  const GridSpec spec = uniform_spec(4, -a.window, a.window, a.m);
  PipelineOptions o;
  o.gate_tol = a.gate_tol;
  o.extract_tol = a.extract_tol;
  o.coverage_radius = 1.0;
  const PipelineReport p = main_pipeline(build_cw_h(spec), o);
  const double step = spec.axes[0].step();
  const double hd = rotation_graph_hausdorff(p.extraction, 1.0, step, 16);
  const bool close = hd <= 2.0 * step;
  write_atomic(a.out + "_graph.csv", graph_csv(p.extraction.graph, 2));
  run.results = {{"gate", gate_json(p.gate)},
                 {"extracted", p.extraction.graph.pairs.size()},
                 {"range_bound", number(p.range_bound)},
                 {"max_extracted_range_norm", number(p.max_extracted_range_norm)},
                 {"range_ok", p.range_ok},
                 {"fibers_checked", p.fibers_checked},
                 {"fibers_missing", p.fibers_missing},
                 {"fibers_ok", p.fibers_ok},
                 {"monotone", p.monotone_ok},
                 {"step", step},
                 {"hausdorff_to_rotation", number(hd)},
                 {"hausdorff_within_2_steps", close},
                 {"window_note", p.window_note},
                 {"type_d_note", "the non-type-(D) item needs a non-reflexive space and is not checked"}};
  if (p.missing_fiber) run.results["missing_fiber"] = point(*p.missing_fiber);
  write_atomic(a.out + "_report.json", run.text());
  out << "gate " << (p.gate.holds() ? "holds" : "fails") << "; " << p.extraction.graph.pairs.size()
      << " nodes; range norm " << format_double(p.max_extracted_range_norm) << "; fibers "
      << p.fibers_checked - p.fibers_missing << "/" << p.fibers_checked << "; monotone "
      << (p.monotone_ok ? "yes" : "no") << "; Hausdorff " << format_double(hd) << " (step " << format_double(step)
      << ")\n";
  return p.holds() && close ? kOk : kAssertionFailed;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all", catalog = "default", out = "verify";
  std::uint64_t seed = kDefaultSeed;
};

int cmd_verify(const VerifyArgs& a, Run& run, std::ostream& out) {
  run.config = {{"suite", a.suite}, {"catalog", a.catalog}, {"seed", a.seed}};
  std::vector<BatteryEntry> entries;
  const bool all = a.suite == "all";
  if (all || a.suite == "lemmas") {
    const std::vector<CatalogEntry> catalog =
        a.catalog == "default" ? default_catalog(a.seed)
                               : json_io::read_catalog(json_io::parse(read_file(a.catalog), a.catalog));
    for (auto& e : run_lemma_battery(catalog, a.seed)) entries.push_back(std::move(e));
    for (auto& e : negative_controls()) entries.push_back(std::move(e));
  }
  if (all || a.suite == "gate")
    for (auto& e : run_gate_suite()) entries.push_back(std::move(e));
  if (all || a.suite == "pipeline")
    for (auto& e : run_pipeline_suite()) entries.push_back(std::move(e));

  json reports = json::array();
  for (const auto& e : entries) reports.push_back(json_io::to_json(e));
  write_atomic(a.out + "_lemmas.json", reports.dump(2) + "\n");

  // Summary table per statement.
  struct Row {
    std::size_t checked = 0, held = 0, skipped = 0, controls = 0, controls_failed = 0, mismatches = 0;
  };
  std::map<std::string, Row> rows;
  std::size_t mismatches = 0;
  for (const auto& e : entries) {
    Row& r = rows[e.report.lemma_id];
    if (e.expected) {
      ++r.checked;
      if (e.report.skipped) ++r.skipped;
      if (e.report.holds) ++r.held;
    } else {
      ++r.controls;
      if (!e.report.holds) ++r.controls_failed;
    }
    if (!e.passed()) {
      ++r.mismatches;
      ++mismatches;
    }
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %8s %6s %8s %10s %8s\n", "statement", "checked", "held", "skipped",
                "controls", "status");
  out << line;
  json summary = json::object();
  for (const auto& [id, r] : rows) {
    std::snprintf(line, sizeof line, "%-10s %8zu %6zu %8zu %6zu/%-3zu %8s\n", id.c_str(), r.checked, r.held, r.skipped,
                  r.controls_failed, r.controls, r.mismatches ? "FAIL" : "ok");
    out << line;
    summary[id] = {{"checked", r.checked}, {"held", r.held},           {"skipped", r.skipped},
                   {"controls", r.controls}, {"controls_failed", r.controls_failed}, {"mismatches", r.mismatches}};
  }
  for (const auto& e : entries) {
    if (e.passed()) continue;
    out << "MISMATCH " << e.report.lemma_id << " on " << e.operator_name << ": expected "
        << (e.expected ? "holds" : "fails") << ", witness " << e.report.witness.value_or("none") << "\n";
  }
  out << entries.size() << " reports, " << mismatches << " mismatches\n";
  run.results = {{"reports", entries.size()}, {"mismatches", mismatches}, {"summary", summary}};
  write_atomic(a.out + "_report.json", run.text());
  return mismatches == 0 ? kOk : kAssertionFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Fitzpatrick functions, conjugation and representability checks"};
  cli.require_subcommand(1);
  double tol_default = 1e-9;
  try {
    tol_default = default_tolerance();
  } catch (const InputError& ex) {
    err << "input error: " << ex.what() << "\n";
    return kInputError;
  }

  ConjugateArgs conj;
  auto* c = cli.add_subcommand("conjugate", "Fenchel conjugate of a grid (CSV) or exact (JSON) function");
  c->add_option("input", conj.input, "CSV grid or JSON function")->required();
  c->add_option("--grid", conj.grid, "lo:hi:m,... to sample a JSON function");
  c->add_option("--dual-grid", conj.dual_grid, "output grid (default: slope range, or the input grid with --j)");
  c->add_option("--method", conj.method)->check(CLI::IsMember({"llt", "bruteforce", "exact"}));
  c->add_flag("--j", conj.j, "apply the block swap: (Jh)(x,x*) = h*(x*,x)");
  c->add_option("--out", conj.out, "output prefix");

  FitzArgs fitz;
  fitz.tol = tol_default;
  auto* f = cli.add_subcommand("fitzpatrick", "phi_T and sigma_T of an operator on a grid");
  f->add_option("input", fitz.input, "operator JSON")->required();
  f->add_option("--which", fitz.which)->check(CLI::IsMember({"phi", "sigma", "both"}));
  f->add_option("--grid", fitz.grid, "lo:hi:m,... with 2n axes")->required();
  f->add_option("--tol", fitz.tol);
  f->add_option("--out", fitz.out, "output prefix");

  GateArgs gate;
  gate.tol = tol_default;
  auto* g = cli.add_subcommand("gate", "check h >= pi and Jh >= pi on a grid");
  g->add_option("input", gate.input, "CSV grid over X x X*")->required();
  g->add_option("--tol", gate.tol);
  g->add_option("--declared-domain", gate.declared, "statement about P1 D(h) recorded in the report");
  g->add_option("--out", gate.out, "output prefix");

  GateArgs ext;
  ext.tol = tol_default;
  ext.extract_tol = tol_default;
  ext.out = "extract";
  auto* e = cli.add_subcommand("extract", "extract the operator {Jh = pi} after the gate");
  e->add_option("input", ext.input, "CSV grid over X x X*")->required();
  e->add_option("--gate-tol", ext.tol);
  e->add_option("--tol", ext.extract_tol, "tolerance on Jh - pi");
  e->add_option("--declared-domain", ext.declared);
  e->add_option("--out", ext.out, "output prefix");

  CwArgs cw;
  auto* w = cli.add_subcommand("cw-example", "bounded-range rotation instance on R^4");
  w->alias("cw");
  w->add_option("--resolution", cw.m, "nodes per axis");
  w->add_option("--window", cw.window, "half-width of the window");
  w->add_option("--gate-tol", cw.gate_tol);
  w->add_option("--tol", cw.extract_tol);
  w->add_option("--out", cw.out, "output prefix");

  VerifyArgs ver;
  auto* v = cli.add_subcommand("verify-lemmas", "run the checker battery");
  v->alias("verify");
  v->add_option("--suite", ver.suite)->check(CLI::IsMember({"lemmas", "gate", "pipeline", "all"}));
  v->add_option("--catalog", ver.catalog, "default or a catalog JSON file");
  v->add_option("--seed", ver.seed);
  v->add_option("--out", ver.out, "output prefix");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << cli.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << cli.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kInputError;
  }

  Run run;
  run.command = echo(argc, argv);
  try {
    if (*c) return cmd_conjugate(conj, run, out);
    if (*f) return cmd_fitzpatrick(fitz, run, out);
    if (*g) return cmd_gate(gate, run, out);
    if (*e) return cmd_extract(ext, run, out);
    if (*w) return cmd_cw(cw, run, out);
    if (*v) return cmd_verify(ver, run, out);
  } catch (const InputError& ex) {
    err << "input error: " << ex.what() << "\n";
  } catch (const PreconditionError& ex) {
    err << "precondition: " << ex.what() << "\n";
  } catch (const UnsupportedError& ex) {
    err << "unsupported: " << ex.what() << "\n";
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
  }
  return kInputError;
}

}  // namespace fitzkit::app
