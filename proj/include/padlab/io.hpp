#pragma once

// JSON documents shared by the CLI and the tests. Exact quantities are written
// as "num/den" strings; reals use a fixed 12-significant-digit format so that
// identical inputs give byte-identical output.

#include "padlab/dynamics.hpp"
#include "padlab/entropy_lab.hpp"
#include "padlab/matrix.hpp"
#include "padlab/spectral.hpp"

#include <json.hpp>

#include <string>

namespace padlab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "padlab/1";

std::string format_real(double x);
std::string rational_string(const Rational& q);
// Parses "a/b", "a" or a JSON integer. InvalidInput otherwise.
Rational parse_rational(const Json& j);
// Accepts a number, a rational string or a decimal string.
double parse_real(const Json& j);

// Inline JSON when the text starts with '[' or '{', otherwise a file path.
Json load_document(const std::string& literal_or_path);

// [["1/3","0"],["0","3"]].
PadicMatrix matrix_from_json(const Json& j, PadicContext ctx);
Json matrix_to_json(const PadicMatrix& m);
std::string scalar_string(const PadicScalar& x);

Json decomposition_to_json(const HorosphericalDecomposition& dec);

// {"transition": [[...], ...]} or {"bernoulli": [...]}; a bare array of rows also works.
MarkovMeasure markov_from_json(const Json& j);
// {"s": 2, "depth": 1, "values": [...]} or wrapped as {"f": {...}}.
CylinderFunction cylinder_from_json(const Json& j, int s);

Json bundle_to_json(const ConstantsBundle& b);
ConstantsBundle bundle_from_json(const Json& j);

}  // namespace padlab::io
