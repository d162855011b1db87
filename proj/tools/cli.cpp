#include "padlab/dynamics.hpp"
#include "padlab/entropy_lab.hpp"
#include "padlab/error.hpp"
#include "padlab/io.hpp"
#include "padlab/liegroup.hpp"
#include "padlab/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace padlab;
using io::Json;

namespace {

// Exit statuses. Each nonzero value is one error class.
enum Exit : int {
  kOk = 0,
  kInput = 1,  // parse errors, schema violations, mismatched shapes or alphabets
  kNotDiagonalizable = 2,
  kNoHyperbolicity = 3,
  kNegativeGap = 4,
  kDomain = 5,
  kPrecision = 6,
  kSingular = 7,
  kNoConvergence = 8,
  kLevelTooSmall = 9,
  kBudget = 10,
  kSupport = 11,
  kNegativeExponent = 12,
  kDivergent = 13,
  kCheckFailed = 14,  // oracle DISAGREE or a failed re-multiplication check
  kInternal = 70,
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::symbol_count_mismatch:
    case ErrorCode::division_by_zero: return kInput;
    case ErrorCode::not_diagonalizable:
    case ErrorCode::not_split_at_precision: return kNotDiagonalizable;
    case ErrorCode::no_hyperbolicity: return kNoHyperbolicity;
    case ErrorCode::negative_gap: return kNegativeGap;
    case ErrorCode::domain_error: return kDomain;
    case ErrorCode::precision_exhausted: return kPrecision;
    case ErrorCode::singular_at_precision: return kSingular;
    case ErrorCode::no_convergence: return kNoConvergence;
    case ErrorCode::level_too_small: return kLevelTooSmall;
    case ErrorCode::budget_exceeded: return kBudget;
    case ErrorCode::support_mismatch: return kSupport;
    case ErrorCode::negative_exponent: return kNegativeExponent;
    case ErrorCode::divergent_series: return kDivergent;
  }
  return kInternal;
}

struct Globals {
  std::uint64_t p = 3;
  int precision = PadicContext::kDefaultPrecision;
  std::string format = "json";
};

struct Report {
  Json body;
  std::vector<std::string> summary;  // leading lines of the text format
  int status = kOk;
};

std::string text_value(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void emit(const Report& r, const Globals& g, const std::string& command) {
  if (g.format == "json") {
    Json out{{"schema", io::kSchema}, {"command", command}};
    for (const auto& [k, v] : r.body.items()) out[k] = v;
    std::cout << out.dump(2) << "\n";
    return;
  }
  for (const auto& line : r.summary) std::cout << line << "\n";
  for (const auto& [k, v] : r.body.items()) std::cout << k << ": " << text_value(v) << "\n";
}

std::string norm_string(const PadicMatrix& m) {
  if (const auto v = certified_norm_valuation(m)) {
    if (*v == kInfiniteValuation) return "0";
    return io::rational_string(rational_power(m.context().prime(), -*v));
  }
  return "<= " + std::to_string(m.context().prime()) + "^-" + std::to_string(norm_valuation_bound(m));
}

GroupSpec make_group(const std::string& family, std::size_t d, const PadicContext& ctx) {
  if (family == "sl") return GroupSpec::sl(d, ctx);
  return GroupSpec::gl(d, ctx);
}

// Options shared by the subcommands that act on a group element a.
struct ElementArgs {
  std::string element;
  std::string group = "sl";
  std::size_t dim = 0;

  void attach(CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--element", element, "matrix literal or JSON file");
    if (required) opt->required();
    sub->add_option("--group", group, "sl or gl")->check(CLI::IsMember({"sl", "gl"}));
    sub->add_option("--dim", dim, "matrix size (checked against the element)");
  }

  PadicMatrix matrix(const PadicContext& ctx) const {
    auto a = io::matrix_from_json(io::load_document(element), ctx);
    if (dim != 0 && dim != a.rows())
      fail(ErrorCode::dimension_mismatch, "--dim " + std::to_string(dim) + " but the element is " +
                                              std::to_string(a.rows()) + " x " + std::to_string(a.rows()));
    return a;
  }

  HorosphericalDecomposition decomposition(const PadicContext& ctx) const {
    const auto a = matrix(ctx);
    return decompose(a, make_group(group, a.rows(), ctx));
  }
};

Report cmd_analyze(const ElementArgs& e, const PadicContext& ctx) {
  const auto dec = e.decomposition(ctx);
  Report r{io::decomposition_to_json(dec), {}, kOk};
  r.summary.push_back("nu " + Json(dec.nu).dump() + " entropy " + r.body["entropy"]["exact"].get<std::string>());
  return r;
}

Report cmd_exp(const std::string& x_text, const PadicContext& ctx) {
  const auto x = io::matrix_from_json(io::load_document(x_text), ctx);
  const auto g = exp(x);
  return {Json{{"input_norm", norm_string(x)},
               {"result", io::matrix_to_json(g)},
               {"distance_to_identity", norm_string(g - PadicMatrix::identity(ctx, g.rows()))}},
          {},
          kOk};
}

Report cmd_log(const std::string& g_text, const PadicContext& ctx) {
  const auto g = io::matrix_from_json(io::load_document(g_text), ctx);
  const auto x = log(g);
  return {Json{{"distance_to_identity", norm_string(g - PadicMatrix::identity(ctx, g.rows()))},
               {"result", io::matrix_to_json(x)},
               {"result_norm", norm_string(x)}},
          {},
          kOk};
}

Report cmd_bch(const std::string& x_text, const std::string& y_text, const std::string& mode,
               const PadicContext& ctx) {
  const auto x = io::matrix_from_json(io::load_document(x_text), ctx);
  const auto y = io::matrix_from_json(io::load_document(y_text), ctx);
  const auto z = bch(x, y, mode == "direct" ? BchMode::direct : BchMode::dynkin_series);
  const int w = std::min(norm_valuation_bound(x), norm_valuation_bound(y));
  Json body{{"mode", mode}, {"result", io::matrix_to_json(z)}};
  if (mode != "direct" && w != kInfiniteValuation) body["truncation_degree"] = bch_truncation_degree(w, ctx);
  return {body, {}, kOk};
}

Report cmd_factor(const ElementArgs& e, const std::string& g_text, int k, const PadicContext& ctx) {
  const auto dec = e.decomposition(ctx);
  const auto g = io::matrix_from_json(io::load_document(g_text), ctx);
  const auto fac = horospherical_factor(g, k, dec);
  const PadicMatrix diff = fac.f * fac.h - g;
  const bool close = norm_valuation_bound(diff) >= ctx.precision();
  const bool f_ok = in_unstable_ball(dec, fac.f, k);
  const bool h_ok = in_thickened_stable_ball(dec, fac.h, k, k);
  const bool pass = close && f_ok && h_ok;
  Report r{Json{{"k", k},
                {"f", io::matrix_to_json(fac.f)},
                {"h", io::matrix_to_json(fac.h)},
                {"iterations", fac.iterations},
                {"f_in_unstable_ball", f_ok},
                {"h_in_thickened_stable_ball", h_ok},
                {"remultiplication_error", norm_string(diff)},
                {"check", pass ? "PASS" : "FAIL"}},
           {std::string("remultiplication ") + (pass ? "PASS" : "FAIL")},
           pass ? kOk : kCheckFailed};
  return r;
}

Report cmd_bowen(const ElementArgs& e, int k, int n, const PadicContext& ctx) {
  const auto dec = e.decomposition(ctx);
  const auto ball = bowen_ball(dec, k, n);
  Json classes = Json::array();
  for (auto c : dec.classes) classes.push_back(std::string(eigen_class_name(c)));
  const Rational ratio = bowen_volume_ratio(dec, k, n);
  return {Json{{"k", k},
               {"n", n},
               {"classes", classes},
               {"levels", ball.levels},
               {"volume_ratio", io::rational_string(ratio)}},
          {"volume ratio " + io::rational_string(ratio)},
          kOk};
}

Report cmd_oracle(const ElementArgs& e, int k, int n, std::optional<int> level, const std::string& mode,
                  std::uint64_t budget, const PadicContext& ctx) {
  const auto dec = e.decomposition(ctx);
  const int L = level.value_or(k + (n - 1) * dec.max_nu_unstable() + 1);
  const auto res = bowen_count_oracle(dec, k, n, L, mode == "factored" ? OracleMode::factored : OracleMode::full,
                                      budget);
  Json windows = Json::array();
  bool agree = true;
  for (int w = 1; w <= n; ++w) {
    const Rational closed = bowen_volume_ratio(dec, k, w);
    const Rational got = res.ratios[static_cast<std::size_t>(w - 1)];
    agree = agree && got == closed;
    windows.push_back(Json{{"n", w},
                           {"count", res.counts[static_cast<std::size_t>(w - 1)].str()},
                           {"oracle_ratio", io::rational_string(got)},
                           {"closed_form_ratio", io::rational_string(closed)}});
  }
  const std::string verdict = agree ? "AGREE" : "DISAGREE";
  const std::string ratio = io::rational_string(res.ratios.back());
  return {Json{{"mode", mode},
               {"k", k},
               {"n", n},
               {"level", L},
               {"windows", windows},
               {"ratio", ratio},
               {"verdict", verdict}},
          {"ratio " + ratio + " " + verdict},
          agree ? kOk : kCheckFailed};
}

Report cmd_atoms(const ElementArgs& e, int k, const PadicContext& ctx) {
  const auto dec = e.decomposition(ctx);
  const auto reps = atom_representatives(dec, k);
  Json list = Json::array();
  for (const auto& m : reps) list.push_back(io::matrix_to_json(m));
  return {Json{{"k", k},
               {"count", reps.size()},
               {"expected_count", io::rational_string(mod_character(dec))},
               {"representatives", list}},
          {"atoms " + std::to_string(reps.size())},
          kOk};
}

Json markov_json(const MarkovMeasure& m) {
  std::vector<std::string> pi;
  for (double x : m.stationary()) pi.push_back(io::format_real(x));
  return Json{{"symbols", m.symbols()},
              {"stationary", pi},
              {"entropy_rate", io::format_real(entropy_rate(m))}};
}

Report cmd_gap(const std::string& markov, int nu, const PadicContext& ctx) {
  const auto m = io::markov_from_json(io::load_document(markov));
  const auto g = entropy_gap(m, nu, ctx.prime());
  Json body = markov_json(m);
  body["nu_total"] = nu;
  body["side_a"] = io::format_real(g.side_a);
  body["side_b"] = io::format_real(g.side_b);
  body["gap"] = io::format_real(g.side_b);
  body["agree"] = g.agree;
  return {body, {"gap " + io::format_real(g.side_b) + (g.agree ? " AGREE" : " DISAGREE")},
          g.agree ? kOk : kCheckFailed};
}

std::vector<double> real_list(const std::string& text) {
  const auto j = io::load_document(text);
  if (!j.is_array()) fail(ErrorCode::invalid_input, "expected an array of weights");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(io::parse_real(e));
  return v;
}

Report cmd_pinsker(const std::string& p_text, const std::string& q_text) {
  const auto pv = real_list(p_text), qv = real_list(q_text);
  const auto r = pinsker_check(pv, qv);
  return {Json{{"phi", io::format_real(r.bound / 2)},
               {"l1", io::format_real(r.l1)},
               {"l1_squared", io::format_real(r.l1 * r.l1)},
               {"two_phi", io::format_real(r.bound)},
               {"holds", r.holds}},
          {std::string("pinsker ") + (r.holds ? "HOLDS" : "FAILS")},
          r.holds ? kOk : kCheckFailed};
}

Report cmd_telescope(const std::string& markov, const std::string& f_text) {
  const auto m = io::markov_from_json(io::load_document(markov));
  const auto f = io::cylinder_from_json(io::load_document(f_text), m.symbols());
  const auto r = telescope_bound_check(f, m);
  Json steps = Json::array();
  for (std::size_t n = 0; n < r.delta.size(); ++n)
    steps.push_back(Json{{"n", n}, {"delta", io::format_real(r.delta[n])}, {"bound", io::format_real(r.step_bound[n])}});
  const bool ok = r.steps_hold && r.total_holds;
  return {Json{{"gap", io::format_real(r.gap)},
               {"haar_mean", io::format_real(r.haar_mean)},
               {"mu_integral", io::format_real(r.mu_integral)},
               {"total", io::format_real(r.total)},
               {"delta_sum", io::format_real(r.delta_sum)},
               {"steps", steps},
               {"steps_hold", r.steps_hold},
               {"total_holds", r.total_holds}},
          {std::string("telescope ") + (ok ? "HOLDS" : "FAILS")},
          ok ? kOk : kCheckFailed};
}

Report cmd_xi(std::uint64_t p, int k) {
  const double v = xi_pgl2(p, k);
  return {Json{{"p", p}, {"k", k}, {"xi", io::format_real(v)}}, {io::format_real(v)}, kOk};
}

Report cmd_oh(std::uint64_t p, const std::string& cartan_text, const std::string& element, int kv, int kw,
              const PadicContext& ctx) {
  std::vector<int> cartan;
  if (!element.empty()) {
    cartan = cartan_valuations(io::matrix_from_json(io::load_document(element), ctx));
  } else {
    const auto j = io::load_document(cartan_text);
    if (!j.is_array()) fail(ErrorCode::invalid_input, "--cartan must be an array of integers");
    for (const auto& e : j) {
      if (!e.is_number_integer()) fail(ErrorCode::invalid_input, "--cartan must be an array of integers");
      cartan.push_back(e.get<int>());
    }
  }
  const double b = oh_bound(p, static_cast<int>(cartan.size()), cartan, kv, kw);
  return {Json{{"p", p}, {"cartan", cartan}, {"dim_kv", kv}, {"dim_kw", kw}, {"bound", io::format_real(b)}},
          {io::format_real(b)},
          kOk};
}

Report cmd_kappa(const std::string& bundle_text) {
  const auto b = io::bundle_from_json(io::load_document(bundle_text));
  const double k = kappa(b);
  Json body{{"bundle", io::bundle_to_json(b)}, {"kappa", io::format_real(k)}};
  body["bundle"].erase("schema");
  return {body, {io::format_real(k)}, kOk};
}

double gap_from_report(const std::string& path) {
  const auto j = io::load_document(path);
  if (!j.is_object() || !j.contains("gap")) fail(ErrorCode::invalid_input, "gap report lacks \"gap\"");
  return io::parse_real(j.at("gap"));
}

Report cmd_bound(const std::string& bundle_text, int l_f, double f_norm, std::optional<double> gap,
                 const std::string& gap_report) {
  const auto b = io::bundle_from_json(io::load_document(bundle_text));
  double g = 0.0;
  if (!gap_report.empty())
    g = gap_from_report(gap_report);
  else if (gap)
    g = *gap;
  else
    fail(ErrorCode::invalid_input, "bound needs --gap or --gap-report");
  const double k = kappa(b);
  const double rhs = theorem1_rhs(k, b.p, b.mixing.alpha, b.d, l_f, f_norm, g);
  return {Json{{"kappa", io::format_real(k)},
               {"l_f", l_f},
               {"f_l2_norm", io::format_real(f_norm)},
               {"gap", io::format_real(g)},
               {"bound", io::format_real(rhs)}},
          {io::format_real(rhs)},
          kOk};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic entropy and equidistribution lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--p", g.p, "prime")->check(CLI::PositiveNumber);
  app.add_option("--precision", g.precision, "relative p-adic precision N")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  ElementArgs element;
  std::string x_text, y_text, g_text, bch_mode = "dynkin", oracle_mode = "full";
  std::string markov, f_text, pv, qv, cartan, bundle, gap_report;
  int k = 2, n = 1, nu = 0, kv = 1, kw = 1, l_f = 0;
  std::optional<int> level;
  std::optional<double> gap;
  double f_norm = 1.0;
  std::uint64_t budget = kOracleBudget;

  auto* analyze = app.add_subcommand("analyze", "eigen-decomposition, nu and entropy of a");
  element.attach(analyze);

  auto* exp_cmd = app.add_subcommand("exp", "matrix exponential on K^m_2");
  exp_cmd->add_option("--matrix", x_text, "matrix literal or file")->required();
  auto* log_cmd = app.add_subcommand("log", "matrix logarithm on e + K^m_2");
  log_cmd->add_option("--matrix", g_text, "matrix literal or file")->required();

  auto* bch_cmd = app.add_subcommand("bch", "Baker-Campbell-Hausdorff product");
  bch_cmd->add_option("--x", x_text)->required();
  bch_cmd->add_option("--y", y_text)->required();
  bch_cmd->add_option("--mode", bch_mode)->check(CLI::IsMember({"dynkin", "direct"}));

  auto* factor = app.add_subcommand("factor", "split g in K^G_k as unstable times thickened stable");
  element.attach(factor);
  factor->add_option("--g", g_text, "group element to factor")->required();
  factor->add_option("--k", k);

  auto* bowen = app.add_subcommand("bowen", "Bowen ball levels and volume ratio");
  element.attach(bowen);
  bowen->add_option("--k", k)->required();
  bowen->add_option("--n", n)->required();

  auto* oracle = app.add_subcommand("oracle", "count Bowen-ball lattice points and compare");
  element.attach(oracle);
  oracle->add_option("--k", k)->required();
  oracle->add_option("--n", n)->required();
  oracle->add_option("--level", level, "truncation level L");
  oracle->add_option("--mode", oracle_mode)->check(CLI::IsMember({"full", "factored"}));
  oracle->add_option("--budget", budget, "lattice point budget for the full mode");

  auto* atoms = app.add_subcommand("atoms", "coset representatives of the level-k atom");
  element.attach(atoms);
  atoms->add_option("--k", k)->required();

  auto* gap_cmd = app.add_subcommand("gap", "entropy gap of a Markov measure, both sides");
  gap_cmd->add_option("--markov", markov)->required();
  gap_cmd->add_option("--nu", nu)->required();

  auto* pinsker = app.add_subcommand("pinsker", "Pinsker inequality for two probability vectors");
  pinsker->add_option("--pvec", pv, "reference vector")->required();
  pinsker->add_option("--qvec", qv, "compared vector")->required();

  auto* telescope = app.add_subcommand("telescope", "telescoping bound for a cylinder function");
  telescope->add_option("--markov", markov)->required();
  telescope->add_option("--f", f_text)->required();

  auto* xi = app.add_subcommand("xi", "Harish-Chandra function of PGL_2");
  xi->add_option("--k", k)->required();

  auto* oh = app.add_subcommand("oh", "matrix coefficient bound from Cartan data");
  auto* cartan_opt = oh->add_option("--cartan", cartan, "descending valuation list");
  auto* oh_element = oh->add_option("--element", element.element, "read Cartan data from this matrix");
  cartan_opt->excludes(oh_element);
  oh->add_option("--dim-kv", kv);
  oh->add_option("--dim-kw", kw);

  auto* kappa_cmd = app.add_subcommand("kappa", "theorem constant from a constants bundle");
  kappa_cmd->add_option("--bundle", bundle)->required();

  auto* bound = app.add_subcommand("bound", "full equidistribution bound");
  bound->add_option("--bundle", bundle)->required();
  bound->add_option("--lf", l_f);
  bound->add_option("--f-norm", f_norm);
  auto* gap_opt = bound->add_option("--gap", gap);
  auto* report_opt = bound->add_option("--gap-report", gap_report, "read the gap from a gap report");
  gap_opt->excludes(report_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "InvalidInput: " << e.what() << "\n";
    return kInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const PadicContext ctx(g.p, g.precision);
    Report r;
    if (command == "analyze") r = cmd_analyze(element, ctx);
    else if (command == "exp") r = cmd_exp(x_text, ctx);
    else if (command == "log") r = cmd_log(g_text, ctx);
    else if (command == "bch") r = cmd_bch(x_text, y_text, bch_mode, ctx);
    else if (command == "factor") r = cmd_factor(element, g_text, k, ctx);
    else if (command == "bowen") r = cmd_bowen(element, k, n, ctx);
    else if (command == "oracle") r = cmd_oracle(element, k, n, level, oracle_mode, budget, ctx);
    else if (command == "atoms") r = cmd_atoms(element, k, ctx);
    else if (command == "gap") r = cmd_gap(markov, nu, ctx);
    else if (command == "pinsker") r = cmd_pinsker(pv, qv);
    else if (command == "telescope") r = cmd_telescope(markov, f_text);
    else if (command == "xi") r = cmd_xi(g.p, k);
    else if (command == "oh") {
      if (cartan.empty() && element.element.empty()) fail(ErrorCode::invalid_input, "oh needs --cartan or --element");
      r = cmd_oh(g.p, cartan, element.element, kv, kw, ctx);
    } else if (command == "kappa") r = cmd_kappa(bundle);
    else if (command == "bound") r = cmd_bound(bundle, l_f, f_norm, gap, gap_report);
    emit(r, g, command);
    return r.status;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
