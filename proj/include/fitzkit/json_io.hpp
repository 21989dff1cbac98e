#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fitzkit/exact_fn.hpp"
#include "fitzkit/lemmas.hpp"
#include "fitzkit/operators.hpp"
#include "fitzkit/region.hpp"

namespace fitzkit::json_io {

using nlohmann::json;

// Rationals are written as "p/q" strings (integers as "p"); reading also
// accepts JSON integers and binary floats (taken exactly). Extended reals
// add "+inf" and "-inf". Every reader throws InputError naming the
// offending field, e.g. "operator.pairs[2].x".

json to_json(const Rational& v);
json to_json(const ExtRational& v);
json to_json(std::span<const Rational> v);

Rational read_rational(const json& j, const std::string& path);
ExtRational read_ext_rational(const json& j, const std::string& path);
QVec read_qvec(const json& j, const std::string& path);

/// {"kind": "hpolyhedron", "dim", "faces": [{"a", "b"}]},
/// {"kind": "vpolytope", "dim", "vertices"}, {"kind": "norm_ball", "center", "radius"}
json to_json(const Region& r);
Region read_region(const json& j, const std::string& path = "region");

/// {"kind": "max_affine", "dim", "pieces": [{"slope", "offset"}], "domain"?}
/// {"kind": "generator", "dim", "generators": [{"point", "value"}]}
using ExactFunction = std::variant<MaxAffineFn, GeneratorFn>;
json to_json(const MaxAffineFn& f);
json to_json(const GeneratorFn& f);
ExactFunction read_function(const json& j, const std::string& path = "function");

/// {"kind": "finite", "pairs": [{"x", "xstar"}]}
/// {"kind": "pwl1d", "segments": [{"type": "sloped", "from", "to", "a", "b"} |
///                                {"type": "vertical", "y", "lo", "hi"}]}
/// {"kind": "linear", "m": [[...], ...]}
/// {"kind": "rotation"}
json to_json(const CatalogOperator& op);
CatalogOperator read_operator(const json& j, const std::string& path = "operator");

/// A catalog file: [{"name", "operator"}, ...] or {"operators": [...]}.
json to_json(const std::vector<CatalogEntry>& catalog);
std::vector<CatalogEntry> read_catalog(const json& j);

json to_json(const LemmaReport& r);
json to_json(const BatteryEntry& e);

/// Parses text, turning syntax errors into InputError.
json parse(const std::string& text, const std::string& what);

}  // namespace fitzkit::json_io
