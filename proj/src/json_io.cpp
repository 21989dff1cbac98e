#include "fitzkit/json_io.hpp"

#include <cmath>

#include "fitzkit/errors.hpp"

namespace fitzkit::json_io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw InputError(path + ": " + what); }

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing");
  return *it;
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

std::size_t read_size(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    bad(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  return j;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_size(const QVec& v, std::size_t n, const std::string& path) {
  if (v.size() != n) bad(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
}

}  // namespace

json to_json(const Rational& v) { return to_string(v); }

json to_json(const ExtRational& v) { return to_string(v); }

json to_json(std::span<const Rational> v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Rational read_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (!std::isfinite(d)) bad(path, "expected a finite number");
    return from_double(d);
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      bad(path, e.what());
    }
  }
  bad(path, "expected a rational (\"p/q\" string or number)");
}

ExtRational read_ext_rational(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return ExtRational::pos_inf();
    if (s == "-inf") return ExtRational::neg_inf();
  }
  return ExtRational(read_rational(j, path));
}

QVec read_qvec(const json& j, const std::string& path) {
  array(j, path);
  QVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_rational(j[i], at(path, i)));
  return v;
}

json to_json(const Region& r) {
  return std::visit(
      [](const auto& c) -> json {
        using R = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<R, HPolyhedron>) {
          json faces = json::array();
          for (const auto& f : c.faces) faces.push_back({{"a", to_json(f.a)}, {"b", to_json(f.b)}});
          return {{"kind", "hpolyhedron"}, {"dim", c.dim}, {"faces", faces}};
        } else if constexpr (std::is_same_v<R, VPolytope>) {
          json vs = json::array();
          for (const auto& v : c.vertices) vs.push_back(to_json(v));
          return {{"kind", "vpolytope"}, {"dim", c.dim}, {"vertices", vs}};
        } else {
          return {{"kind", "norm_ball"}, {"center", to_json(c.center)}, {"radius", to_json(c.radius)}};
        }
      },
      r);
}

Region read_region(const json& j, const std::string& path) {
  const std::string kind = read_string(field(j, path, "kind"), path + ".kind");
  if (kind == "hpolyhedron") {
    HPolyhedron h{read_size(field(j, path, "dim"), path + ".dim"), {}};
    const json& faces = array(field(j, path, "faces"), path + ".faces");
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const std::string p = at(path + ".faces", i);
      HalfSpace f{read_qvec(field(faces[i], p, "a"), p + ".a"), read_rational(field(faces[i], p, "b"), p + ".b")};
      expect_size(f.a, h.dim, p + ".a");
      h.faces.push_back(std::move(f));
    }
    return h;
  }
  if (kind == "vpolytope") {
    VPolytope v{read_size(field(j, path, "dim"), path + ".dim"), {}};
    const json& vs = array(field(j, path, "vertices"), path + ".vertices");
    if (vs.empty()) bad(path + ".vertices", "must not be empty");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      v.vertices.push_back(read_qvec(vs[i], at(path + ".vertices", i)));
      expect_size(v.vertices.back(), v.dim, at(path + ".vertices", i));
    }
    return v;
  }
  if (kind == "norm_ball") {
    NormBall b{read_qvec(field(j, path, "center"), path + ".center"),
               read_rational(field(j, path, "radius"), path + ".radius")};
    if (sgn(b.radius) < 0) bad(path + ".radius", "must be nonnegative");
    return b;
  }
  bad(path + ".kind", "unknown region kind \"" + kind + "\"");
}

json to_json(const MaxAffineFn& f) {
  json pieces = json::array();
  for (const auto& p : f.pieces) pieces.push_back({{"slope", to_json(p.slope)}, {"offset", to_json(p.offset)}});
  json j = {{"kind", "max_affine"}, {"dim", f.dim}, {"pieces", pieces}};
  if (f.domain) j["domain"] = to_json(*f.domain);
  return j;
}

json to_json(const GeneratorFn& f) {
  json gs = json::array();
  for (const auto& g : f.generators) gs.push_back({{"point", to_json(g.point)}, {"value", to_json(g.value)}});
  return {{"kind", "generator"}, {"dim", f.dim}, {"generators", gs}};
}

ExactFunction read_function(const json& j, const std::string& path) {
  const std::string kind = read_string(field(j, path, "kind"), path + ".kind");
  if (kind == "max_affine") {
    MaxAffineFn f{read_size(field(j, path, "dim"), path + ".dim"), {}, std::nullopt};
    const json& ps = array(field(j, path, "pieces"), path + ".pieces");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string p = at(path + ".pieces", i);
      AffinePiece a{read_qvec(field(ps[i], p, "slope"), p + ".slope"),
                    read_rational(field(ps[i], p, "offset"), p + ".offset")};
      expect_size(a.slope, f.dim, p + ".slope");
      f.pieces.push_back(std::move(a));
    }
    if (j.contains("domain")) {
      f.domain = read_region(j["domain"], path + ".domain");
      if (region_dim(*f.domain) != f.dim) bad(path + ".domain", "dimension does not match dim");
    }
    f.validate();
    return f;
  }
  if (kind == "generator") {
    GeneratorFn f{read_size(field(j, path, "dim"), path + ".dim"), {}};
    const json& gs = array(field(j, path, "generators"), path + ".generators");
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const std::string p = at(path + ".generators", i);
      Generator g{read_qvec(field(gs[i], p, "point"), p + ".point"),
                  read_rational(field(gs[i], p, "value"), p + ".value")};
      expect_size(g.point, f.dim, p + ".point");
      f.generators.push_back(std::move(g));
    }
    f.validate();
    return f;
  }
  bad(path + ".kind", "unknown function kind \"" + kind + "\"");
}

json to_json(const CatalogOperator& op) {
  if (const auto* t = std::get_if<FiniteOperator>(&op)) {
    json pairs = json::array();
    for (const auto& p : t->pairs) pairs.push_back({{"x", to_json(p.x)}, {"xstar", to_json(p.xstar)}});
    return {{"kind", "finite"}, {"pairs", pairs}};
  }
  if (const auto* t = std::get_if<PwlCurve1d>(&op)) {
    json segs = json::array();
    for (const auto& s : t->segments) {
      if (const auto* p = std::get_if<Sloped>(&s)) {
        segs.push_back({{"type", "sloped"},
                        {"from", to_json(p->from)},
                        {"to", to_json(p->to)},
                        {"a", to_json(p->a)},
                        {"b", to_json(p->b)}});
      } else {
        const auto& v = std::get<Vertical>(s);
        segs.push_back({{"type", "vertical"}, {"y", to_json(v.y)}, {"lo", to_json(v.lo)}, {"hi", to_json(v.hi)}});
      }
    }
    return {{"kind", "pwl1d"}, {"segments", segs}};
  }
  const auto& t = std::get<LinearOperator>(op);
  json m = json::array();
  for (const auto& row : t.m) m.push_back(to_json(row));
  return {{"kind", "linear"}, {"m", m}};
}

CatalogOperator read_operator(const json& j, const std::string& path) {
  const std::string kind = read_string(field(j, path, "kind"), path + ".kind");
  if (kind == "finite") {
    FiniteOperator t;
    const json& ps = array(field(j, path, "pairs"), path + ".pairs");
    if (ps.empty()) bad(path + ".pairs", "must not be empty");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string p = at(path + ".pairs", i);
      PrimalDualPoint z{read_qvec(field(ps[i], p, "x"), p + ".x"), read_qvec(field(ps[i], p, "xstar"), p + ".xstar")};
      if (z.x.empty()) bad(p + ".x", "must not be empty");
      expect_size(z.xstar, z.x.size(), p + ".xstar");
      if (i > 0) expect_size(z.x, t.pairs.front().n(), p + ".x");
      t.pairs.push_back(std::move(z));
    }
    t.validate();
    return t;
  }
  if (kind == "pwl1d") {
    PwlCurve1d t;
    const json& ss = array(field(j, path, "segments"), path + ".segments");
    if (ss.empty()) bad(path + ".segments", "must not be empty");
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const std::string p = at(path + ".segments", i);
      const std::string type = read_string(field(ss[i], p, "type"), p + ".type");
      if (type == "sloped") {
        t.segments.push_back(Sloped{read_ext_rational(field(ss[i], p, "from"), p + ".from"),
                                    read_ext_rational(field(ss[i], p, "to"), p + ".to"),
                                    read_rational(field(ss[i], p, "a"), p + ".a"),
                                    read_rational(field(ss[i], p, "b"), p + ".b")});
      } else if (type == "vertical") {
        t.segments.push_back(Vertical{read_rational(field(ss[i], p, "y"), p + ".y"),
                                      read_ext_rational(field(ss[i], p, "lo"), p + ".lo"),
                                      read_ext_rational(field(ss[i], p, "hi"), p + ".hi")});
      } else {
        bad(p + ".type", "unknown segment type \"" + type + "\"");
      }
    }
    try {
      is_maximal_1d(t);
    } catch (const InputError& e) {
      bad(path + ".segments", e.what());
    }
    return t;
  }
  if (kind == "linear") {
    LinearOperator t;
    const json& rows = array(field(j, path, "m"), path + ".m");
    for (std::size_t i = 0; i < rows.size(); ++i) t.m.push_back(read_qvec(rows[i], at(path + ".m", i)));
    if (t.m.empty()) bad(path + ".m", "must not be empty");
    for (std::size_t i = 0; i < t.m.size(); ++i) expect_size(t.m[i], t.m.size(), at(path + ".m", i));
    return t;
  }
  if (kind == "rotation") return rotation_operator();
  bad(path + ".kind", "unknown operator kind \"" + kind + "\"");
}

json to_json(const std::vector<CatalogEntry>& catalog) {
  json a = json::array();
  for (const auto& e : catalog) a.push_back({{"name", e.name}, {"operator", to_json(e.op)}});
  return a;
}

std::vector<CatalogEntry> read_catalog(const json& j) {
  const json& list = j.is_object() ? field(j, "catalog", "operators") : j;
  array(list, "catalog");
  std::vector<CatalogEntry> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = at("catalog", i);
    std::string name = read_string(field(list[i], p, "name"), p + ".name");
    out.push_back({std::move(name), read_operator(field(list[i], p, "operator"), p + ".operator")});
  }
  return out;
}

json to_json(const LemmaReport& r) {
  json j = {{"lemma_id", r.lemma_id},  {"inputs_digest", r.inputs_digest}, {"holds", r.holds},
            {"skipped", r.skipped},    {"note", r.note}};
  // JSON has no infinities.
  j["worst_margin"] = std::isfinite(r.worst_margin) ? json(r.worst_margin) : json(format_double(r.worst_margin));
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  return j;
}

json to_json(const BatteryEntry& e) {
  json j = to_json(e.report);
  j["operator"] = e.operator_name;
  j["expected"] = e.expected;
  j["passed"] = e.passed();
  return j;
}

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace fitzkit::json_io
