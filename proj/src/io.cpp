#include "padlab/io.hpp"

#include "padlab/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace padlab::io {

std::string format_real(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string rational_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s, const std::string& whole) {
  if (s.empty()) fail(ErrorCode::invalid_input, "malformed rational \"" + whole + "\"");
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) fail(ErrorCode::invalid_input, "malformed rational \"" + whole + "\"");
  std::int64_t v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') fail(ErrorCode::invalid_input, "malformed rational \"" + whole + "\"");
    if (v > (INT64_MAX - 9) / 10) fail(ErrorCode::invalid_input, "rational \"" + whole + "\" overflows");
    v = v * 10 + (s[i] - '0');
  }
  return negative ? -v : v;
}

}  // namespace

Rational parse_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) fail(ErrorCode::invalid_input, "expected a rational string, got " + j.dump());
  const auto s = j.get<std::string>();
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_int(s, s));
  const auto num = parse_int(std::string_view(s).substr(0, slash), s);
  const auto den = parse_int(std::string_view(s).substr(slash + 1), s);
  if (den == 0) fail(ErrorCode::invalid_input, "zero denominator in \"" + s + "\"");
  return Rational(num, den);
}

double parse_real(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.find_first_of(".eE") != std::string::npos && s.find('/') == std::string::npos) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty()) fail(ErrorCode::invalid_input, "malformed real \"" + s + "\"");
      return v;
    }
  }
  const Rational q = parse_rational(j);
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

Json load_document(const std::string& literal_or_path) {
  std::string text;
  const auto first = literal_or_path.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (literal_or_path[first] == '[' || literal_or_path[first] == '{')) {
    text = literal_or_path;
  } else {
    std::ifstream in(literal_or_path);
    if (!in) fail(ErrorCode::invalid_input, "cannot open " + literal_or_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::invalid_input, std::string("malformed JSON: ") + e.what());
  }
}

PadicMatrix matrix_from_json(const Json& j, PadicContext ctx) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::invalid_input, "matrix must be a nonempty array of rows");
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != j.size())
      fail(ErrorCode::invalid_input, "matrix must be square with one array per row");
    auto& out = rows.emplace_back();
    for (const auto& e : row) out.push_back(parse_rational(e));
  }
  return PadicMatrix::from_rationals(ctx, rows);
}

std::string scalar_string(const PadicScalar& x) { return x.to_string(); }

Json matrix_to_json(const PadicMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_string(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json decomposition_to_json(const HorosphericalDecomposition& dec) {
  const std::uint64_t p = dec.a.context().prime();
  Json spaces = Json::array();
  for (const auto& s : dec.eigenspaces) {
    Json basis = Json::array();
    for (const auto& b : s.basis) basis.push_back(matrix_to_json(b));
    spaces.push_back(Json{{"eigenvalue", scalar_string(s.eigenvalue)},
                          {"valuation", s.valuation},
                          {"class", std::string(eigen_class_name(s.cls))},
                          {"dimension", s.basis.size()},
                          {"basis", std::move(basis)}});
  }
  const auto h = entropy(dec);
  return Json{{"group", dec.group.name()},
              {"p", p},
              {"element", matrix_to_json(dec.a)},
              {"a_norm", rational_string(dec.a_norm)},
              {"eigenspaces", std::move(spaces)},
              {"nu", dec.nu},
              {"nu_total", dec.nu_total},
              {"nu_unstable_total", dec.nu_unstable_total},
              {"entropy", Json{{"exact", std::to_string(h.log_p_units) + "·log " + std::to_string(p)},
                               {"log_p_units", h.log_p_units},
                               {"nats", format_real(h.nats)}}},
              {"mod_character", rational_string(mod_character(dec))},
              {"min_partition_level", min_partition_level(dec)}};
}

namespace {

std::vector<double> real_vector(const Json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::invalid_input, std::string(what) + " must be an array");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(parse_real(e));
  return v;
}

}  // namespace

MarkovMeasure markov_from_json(const Json& j) {
  if (j.is_array()) {
    std::vector<std::vector<double>> t;
    for (const auto& row : j) t.push_back(real_vector(row, "transition row"));
    return MarkovMeasure(std::move(t));
  }
  if (!j.is_object()) fail(ErrorCode::invalid_input, "Markov document must be an object");
  if (j.contains("transition")) return markov_from_json(j.at("transition"));
  if (j.contains("bernoulli")) return MarkovMeasure::bernoulli(real_vector(j.at("bernoulli"), "bernoulli"));
  if (j.contains("uniform")) {
    if (!j.at("uniform").is_number_integer()) fail(ErrorCode::invalid_input, "uniform needs a symbol count");
    return MarkovMeasure::uniform(j.at("uniform").get<int>());
  }
  fail(ErrorCode::invalid_input, "Markov document needs \"transition\", \"bernoulli\" or \"uniform\"");
}

CylinderFunction cylinder_from_json(const Json& j, int s) {
  if (j.is_object() && j.contains("f")) return cylinder_from_json(j.at("f"), s);
  if (!j.is_object() || !j.contains("depth") || !j.contains("values"))
    fail(ErrorCode::invalid_input, "cylinder function needs \"depth\" and \"values\"");
  if (!j.at("depth").is_number_integer()) fail(ErrorCode::invalid_input, "depth must be an integer");
  int symbols = s;
  if (j.contains("s")) {
    if (!j.at("s").is_number_integer()) fail(ErrorCode::invalid_input, "s must be an integer");
    symbols = j.at("s").get<int>();
    if (symbols != s) fail(ErrorCode::symbol_count_mismatch, "function alphabet differs from the chain");
  }
  return CylinderFunction::make(symbols, j.at("depth").get<int>(), real_vector(j.at("values"), "values"));
}

Json bundle_to_json(const ConstantsBundle& b) {
  return Json{{"schema", kSchema},
              {"c", format_real(b.mixing.c)},
              {"alpha", format_real(b.mixing.alpha)},
              {"delta", format_real(b.mixing.delta)},
              {"p", b.p},
              {"d", b.d},
              {"entropy_nats", format_real(b.entropy_nats)},
              {"base_ball_measure", format_real(b.base_ball_measure)},
              {"a_norm", format_real(b.a_norm)},
              {"nu_total", b.nu_total},
              {"lf_shift_applied", b.lf_shift_applied}};
}

ConstantsBundle bundle_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::invalid_input, "constants bundle must be an object");
  static const char* required[] = {"c", "alpha", "delta", "p", "d", "base_ball_measure", "a_norm"};
  for (const char* key : required)
    if (!j.contains(key)) fail(ErrorCode::invalid_input, std::string("constants bundle lacks \"") + key + "\"");
  ConstantsBundle b;
  b.mixing = {parse_real(j.at("c")), parse_real(j.at("alpha")), parse_real(j.at("delta"))};
  const auto p = parse_rational(j.at("p"));
  if (p.denominator() != 1 || p.numerator() < 2 || !is_prime(static_cast<std::uint64_t>(p.numerator())))
    fail(ErrorCode::invalid_input, "p must be a prime");
  b.p = static_cast<std::uint64_t>(p.numerator());
  const auto d = parse_rational(j.at("d"));
  if (d.denominator() != 1) fail(ErrorCode::invalid_input, "d must be an integer");
  b.d = static_cast<int>(d.numerator());
  b.base_ball_measure = parse_real(j.at("base_ball_measure"));
  b.a_norm = parse_real(j.at("a_norm"));
  b.nu_total = j.contains("nu_total") ? static_cast<int>(parse_rational(j.at("nu_total")).numerator()) : 0;
  b.entropy_nats = j.contains("entropy_nats") ? parse_real(j.at("entropy_nats"))
                                              : b.nu_total * std::log(static_cast<double>(b.p));
  b.lf_shift_applied = j.value("lf_shift_applied", false);
  b.validate();
  return b;
}

}  // namespace padlab::io
