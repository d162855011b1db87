// Acceptance criteria, one PASS/FAIL line each. Usage:
//   padlab_acceptance <padlab cli binary> <golden directory>
#include "padlab/dynamics.hpp"
#include "padlab/entropy_lab.hpp"
#include "padlab/error.hpp"
#include "padlab/liegroup.hpp"
#include "padlab/spectral.hpp"
#include "../unit/support.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace padlab;
using oracle::Q;
using oracle::QMat;
namespace fs = std::filesystem;

namespace {

struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      if (failures == 0) first_failure = what;
      ++failures;
    }
  }
};

int failed_criteria = 0;

void report(int id, const std::string& name, const Tally& t, double seconds, const std::string& tolerance) {
  const bool pass = t.failures == 0 && t.checks > 0;
  if (!pass) ++failed_criteria;
  char time_buf[32];
  std::snprintf(time_buf, sizeof time_buf, "%.2fs", seconds);
  std::cout << "criterion " << id << " [" << (pass ? "PASS" : "FAIL") << "] " << name << ": " << t.checks - t.failures
            << "/" << t.checks << " checks, " << tolerance << ", " << time_buf;
  if (!pass) std::cout << ", first failure: " << (t.checks == 0 ? "no checks ran" : t.first_failure);
  std::cout << std::endl;
}

template <class F>
void run(int id, const std::string& name, const std::string& tolerance, F&& body) {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(t);
  } catch (const std::exception& e) {
    t.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(id, name, t, secs, tolerance);
}

QMat diag(std::uint64_t p, const std::vector<int>& e) {
  QMat m = oracle::zeros(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) m[i][i] = oracle::power(p, e[i]);
  return m;
}


std::vector<double> power_iteration(const std::vector<std::vector<double>>& t) {
  std::vector<double> pi(t.size(), 1.0 / static_cast<double>(t.size()));
  for (int it = 0; it < 5000; ++it) {
    std::vector<double> next(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < t.size(); ++j) next[j] += pi[i] * t[i][j];
    pi = next;
  }
  return pi;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

// ---------------------------------------------------------------------------

void exp_log_roundtrip(Tally& t) {
  gen::Rng rng(1001);
  const std::uint64_t primes[] = {2, 3, 5};
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t p = primes[i % 3];
    const std::size_t d = 2 + static_cast<std::size_t>((i / 3) % 2);
    const PadicContext ctx(p, 12);
    const QMat xq = gen::lie_matrix(rng, p, d, 2, i % 2 == 0);
    const auto x = oracle::to_padic(xq, ctx);
    const auto g = exp(x);
    const std::string tag = " (p=" + std::to_string(p) + ", d=" + std::to_string(d) + ", sample " + std::to_string(i) + ")";
    t.expect(agree_to(log(g), x, ctx.precision()), "log(exp X) != X mod p^12" + tag);
    t.expect(max_norm(g - PadicMatrix::identity(ctx, d)) == max_norm(x), "||exp X - e|| != ||X||" + tag);
  }
}

void bch_consistency(Tally& t) {
  gen::Rng rng(1002);
  const PadicContext ctx(3, 12);
  for (int i = 0; i < 200; ++i) {
    const auto x = oracle::to_padic(gen::lie_matrix(rng, 3, 2, 2, true), ctx);
    const auto y = oracle::to_padic(gen::lie_matrix(rng, 3, 2, 2, true), ctx);
    t.expect(agree_to(bch(x, y, BchMode::dynkin_series), bch(x, y, BchMode::direct), 10),
             "DYNKIN_SERIES and DIRECT differ mod 3^10 on pair " + std::to_string(i));
  }
  for (int i = 0; i < 50; ++i) {
    QMat xq = oracle::zeros(3), yq = oracle::zeros(3);
    for (auto [r, c] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
      xq[r][c] = 9 * rng.integer(-20, 20);
      yq[r][c] = 9 * rng.integer(-20, 20);
    }
    if (oracle::vp(xq, 3) == INT_MAX) xq[0][1] = 9;
    if (oracle::vp(yq, 3) == INT_MAX) yq[1][2] = 27;
    const QMat z = oracle::add(oracle::add(xq, yq), oracle::commutator(xq, yq), Q(1, 2));
    // No digit lost below the inputs' own absolute precision.
    const int floor = std::min(oracle::vp(xq, 3), oracle::vp(yq, 3)) + ctx.precision();
    for (auto mode : {BchMode::dynkin_series, BchMode::direct})
      t.expect(oracle::faithful(z, bch(oracle::to_padic(xq, ctx), oracle::to_padic(yq, ctx), mode), floor),
               "nilpotent sl3 pair " + std::to_string(i) + " is not x + y + [x,y]/2 exactly");
  }
}

void factorization(Tally& t) {
  gen::Rng rng(1003);
  const PadicContext ctx(3, 12);
  const auto group = GroupSpec::sl(2, ctx);
  const auto dec = decompose(oracle::to_padic(diag(3, {-1, 1}), ctx), group);
  for (int i = 0; i < 500; ++i) {
    // Products of two exponentials reach beyond a single exp image's digits.
    auto g = exp(oracle::to_padic(gen::lie_matrix(rng, 3, 2, 2, true), ctx));
    if (i % 2) g = g * exp(oracle::to_padic(gen::lie_matrix(rng, 3, 2, 2, true), ctx));
    const std::string tag = " (sample " + std::to_string(i) + ")";
    t.expect(ball_membership(g, group, 2), "g outside K^G_2" + tag);
    const auto fac = horospherical_factor(g, 2, dec);
    t.expect(in_unstable_ball(dec, fac.f, 2), "F outside K^{G+}_2" + tag);
    t.expect(in_thickened_stable_ball(dec, fac.h, 2, 2), "H outside K^P_{2,2}" + tag);
    t.expect(ball_membership(fac.f, group, 2) && ball_membership(fac.h, group, 2), "factor outside K^G_2" + tag);
    t.expect(norm_valuation_bound(fac.f * fac.h - g) >= 12, "||FH - g|| > 3^-12" + tag);
    t.expect(fac.iterations <= 6, "more than 6 iterations" + tag);
  }
}

void bowen_ratio(Tally& t) {
  for (std::uint64_t p : {2ull, 3ull}) {
    const PadicContext ctx(p, 12);
    const auto dec = decompose(oracle::to_padic(diag(p, {-1, 1}), ctx), GroupSpec::sl(2, ctx));
    const int k = dec.max_nu() + 2;
    for (int n = 1; n <= 3; ++n) {
      const int level = k + (n - 1) * dec.max_nu() + 1;
      const auto full = bowen_count_oracle(dec, k, n, level, OracleMode::full);
      const Rational expected = Rational(1, static_cast<std::int64_t>(gen::ipow(p, (n - 1) * dec.nu_total)));
      t.expect(full.ratios.back() == expected, "FULL sl2 ratio p=" + std::to_string(p) + " n=" + std::to_string(n));
      t.expect(full.ratios.back() == bowen_volume_ratio(dec, k, n), "closed form disagrees");
    }
  }
  for (std::uint64_t p : {2ull, 3ull}) {
    const PadicContext ctx(p, 12);
    const auto dec = decompose(oracle::to_padic(diag(p, {-1, 0, 1}), ctx), GroupSpec::sl(3, ctx));
    t.expect(dec.nu_total == 4, "|nu| != 4 on sl3");
    const int k = dec.max_nu() + 2;
    for (int n = 1; n <= 3; ++n) {
      const int level = k + (n - 1) * dec.max_nu() + 1;
      const auto fac = bowen_count_oracle(dec, k, n, level, OracleMode::factored);
      const Rational expected = Rational(1, static_cast<std::int64_t>(gen::ipow(p, (n - 1) * 4)));
      t.expect(fac.ratios.back() == expected, "FACTORED sl3 ratio p=" + std::to_string(p) + " n=" + std::to_string(n));
      // FULL fits the point budget for p = 2 up to n = 2.
      if (p == 2 && n <= 2) {
        const auto full = bowen_count_oracle(dec, k, n, level, OracleMode::full);
        t.expect(full.counts == fac.counts, "FACTORED and FULL counts differ on sl3, n=" + std::to_string(n));
      }
    }
  }
}

void entropy_consistency(Tally& t) {
  gen::Rng rng(1005);
  const std::uint64_t primes[] = {2, 3, 5};
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t p = primes[i % 3];
    const std::size_t d = i % 2 == 0 ? 2 : 3;
    const PadicContext ctx(p, 12);
    std::vector<int> e(d);
    do {
      int sum = 0;
      for (std::size_t j = 0; j + 1 < d; ++j) {
        e[j] = static_cast<int>(rng.integer(-3, 3));
        sum += e[j];
      }
      e[d - 1] = -sum;
    } while (std::all_of(e.begin(), e.end(), [&](int x) { return x == e[0]; }));
    const auto dec = decompose(oracle::to_padic(diag(p, e), ctx), GroupSpec::sl(d, ctx));
    int stable = 0;
    for (int v : dec.nu) stable += v;
    // log_p of the product of |a_i / a_j|_p over the expanding roots.
    int expanding = 0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        if (e[a] > e[b]) expanding += e[a] - e[b];
    const std::string tag = " (sample " + std::to_string(i) + ")";
    t.expect(stable == expanding, "stable |nu| != expanding product" + tag);
    t.expect(dec.nu_unstable_total == expanding, "unstable total mismatch" + tag);
    t.expect(entropy(dec).log_p_units == expanding, "entropy mismatch" + tag);
  }
}

void pinsker(Tally& t) {
  gen::Rng rng(1006);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 10));
    const auto p = gen::probability_vector(rng, n);
    const auto q = i % 10 == 0 ? p : gen::probability_vector(rng, n, true);
    const auto r = pinsker_check(p, q);
    t.expect(r.l1 * r.l1 <= 2 * phi(p, q) + 1e-12, "Pinsker inequality fails on pair " + std::to_string(i));
    double sup = 0.0;
    for (std::size_t j = 0; j < n; ++j) sup = std::max(sup, std::abs(p[j] - q[j]));
    t.expect((phi(p, q) <= 1e-12) == (sup <= 1e-12), "phi zero-set mismatch on pair " + std::to_string(i));
  }
}

void gap_identity(Tally& t) {
  gen::Rng rng(1007);
  const std::pair<std::uint64_t, int> shapes[] = {{2, 1}, {3, 1}, {2, 2}, {3, 2}};
  for (int i = 0; i < 100; ++i) {
    const auto [p, nu] = shapes[i % 4];
    const std::size_t s = static_cast<std::size_t>(gen::ipow(p, nu));
    const auto tm = gen::stochastic_matrix(rng, s);
    const MarkovMeasure m(tm);
    const auto pi = power_iteration(tm);
    double h = 0.0, rhs = 0.0;
    for (std::size_t a = 0; a < s; ++a) {
      double row_phi = 0.0;
      for (std::size_t b = 0; b < s; ++b) {
        h -= pi[a] * tm[a][b] * std::log(tm[a][b]);
        row_phi += tm[a][b] * std::log(tm[a][b] * static_cast<double>(s));
      }
      rhs += pi[a] * row_phi;
    }
    const double lhs = nu * std::log(static_cast<double>(p)) - h;
    const auto g = entropy_gap(m, nu, p);
    const std::string tag = " (chain " + std::to_string(i) + ", s=" + std::to_string(s) + ")";
    t.expect(std::abs(lhs - rhs) <= 1e-10, "oracle sides differ" + tag);
    t.expect(std::abs(g.side_a - g.side_b) <= 1e-10 && g.agree, "library sides differ" + tag);
    t.expect(std::abs(g.side_a - lhs) <= 1e-10 && std::abs(g.side_b - rhs) <= 1e-10, "library vs oracle" + tag);
  }
}

void telescoping(Tally& t) {
  gen::Rng rng(1008);
  for (int i = 0; i < 100; ++i) {
    const int s = static_cast<int>(rng.integer(2, 4));
    const auto tm = gen::stochastic_matrix(rng, static_cast<std::size_t>(s));
    const MarkovMeasure m(tm);
    const int depth = static_cast<int>(rng.integer(1, 3));
    std::size_t size = 1;
    for (int j = 0; j < depth; ++j) size *= static_cast<std::size_t>(s);
    std::vector<double> v(size);
    for (auto& x : v) x = 4.0 * rng.real() - 2.0;
    const auto f = CylinderFunction::make(s, depth, v);
    const auto r = telescope_bound_check(f, m);
    const auto fs_ = f_sequence(f, depth);
    const std::string tag = " (pair " + std::to_string(i) + ")";
    double sum = 0.0;
    for (int n = 0; n < depth; ++n) {
      const auto& fn = fs_[static_cast<std::size_t>(n)];
      double sup = 0.0;
      for (double x : fn.values) sup = std::max(sup, std::abs(x));
      const double delta = std::abs(fs_[static_cast<std::size_t>(n) + 1].integrate(m) - fn.integrate(m));
      sum += delta;
      t.expect(delta <= std::sqrt(2.0) * sup * std::sqrt(r.gap) + 1e-12, "step bound fails at n=" + std::to_string(n) + tag);
      t.expect(std::abs(delta - r.delta[static_cast<std::size_t>(n)]) <= 1e-12, "reported step differs" + tag);
    }
    t.expect(std::abs(f.mean() - f.integrate(m)) <= sum + 1e-12, "total bound fails" + tag);
    t.expect(r.steps_hold && r.total_holds, "library verdict fails" + tag);
  }
  for (int s : {2, 3, 4}) {
    std::vector<double> v(static_cast<std::size_t>(s * s * s));
    for (auto& x : v) x = 4.0 * rng.real() - 2.0;
    const auto r = telescope_bound_check(CylinderFunction::make(s, 3, v), MarkovMeasure::uniform(s));
    for (double d : r.delta) t.expect(d <= 1e-12, "uniform measure gives nonzero step, s=" + std::to_string(s));
  }
}

void spectral_constants(Tally& t) {
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
    t.expect(xi_pgl2(p, 0) == 1.0, "Xi(p^0) != 1");
    for (int k = 1; k <= 40; ++k) t.expect(xi_pgl2(p, k + 1) < xi_pgl2(p, k), "Xi not decreasing");
  }
  t.expect(std::abs(xi_pgl2(3, 1) - 0.866025) <= 1e-6, "Xi(3)");
  t.expect(std::abs(xi_pgl2(2, 2) - 0.833333) <= 1e-6, "Xi(4)");
  for (int m = 2; m <= 4; ++m)
    for (int a = 1; a <= 5; ++a)
      for (int b = 1; b <= 5; ++b)
        t.expect(oh_bound(3, m, std::vector<int>(static_cast<std::size_t>(m), 0), a, b) == std::sqrt(double(a * b)),
                 "oh_bound(identity)");
  const double grid_c[] = {0.5, 1.0, 2.5}, grid_alpha[] = {0.25, 0.5, 1.0}, grid_delta[] = {0.1, 0.5, 1.0};
  const double grid_h[] = {0.0, std::log(3.0), 2 * std::log(3.0)};
  for (double c : grid_c)
    for (double alpha : grid_alpha)
      for (double delta : grid_delta)
        for (double h : grid_h) {
          ConstantsBundle b;
          b.mixing = {c, alpha, delta};
          b.p = 3;
          b.d = 3;
          b.entropy_nats = h;
          b.base_ball_measure = 0.125;
          b.a_norm = 9.0;
          b.nu_total = 2;
          for (int n = 0; n < 5; ++n)
            t.expect(std::abs(equidistribution_bound(b, 1, n + 1) / equidistribution_bound(b, 1, n) -
                              std::pow(9.0, -delta)) <= 1e-12,
                     "equidistribution ratio");
          // Factor by factor, in long double.
          const long double root2 = std::sqrt(2.0L);
          const long double mix = static_cast<long double>(c) * std::pow(3.0L, 2.0L * alpha);
          const long double ball = 1.0L / std::sqrt(0.125L);
          long double geometric = 0.0L;
          const long double q = std::pow(9.0L, -static_cast<long double>(delta));
          for (long double term = 1.0L; term > 1e-30L; term *= q) geometric += term;
          const long double growth = std::exp((3.0L * alpha + 3.0L) * static_cast<long double>(h));
          const long double k_ref = root2 * mix * ball * geometric * growth;
          const double k = kappa(b);
          t.expect(rel_close(k, static_cast<double>(k_ref), 1e-12), "kappa recomputation");
          for (int lf : {0, 2}) {
            const long double scale = std::pow(3.0L, (2.0L * alpha + 1.5L) * lf);
            const long double rhs_ref = k_ref * scale * 0.75L * std::sqrt(0.04L);
            t.expect(rel_close(theorem1_rhs(k, 3, alpha, 3, lf, 0.75, 0.04), static_cast<double>(rhs_ref), 1e-12),
                     "theorem1_rhs recomputation");
          }
        }
}

// ---------------------------------------------------------------------------
// Golden CLI fixtures: <name>.args holds one argument per line; <name>.expected
// holds "exit: N", then "--- stdout" and "--- stderr" sections.

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string run_cli(const std::string& cli, const std::vector<std::string>& args, const fs::path& cwd) {
  const fs::path tmp = fs::temp_directory_path();
  const fs::path out = tmp / ("padlab_golden_out_" + std::to_string(getpid()));
  const fs::path err = tmp / ("padlab_golden_err_" + std::to_string(getpid()));
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    if (chdir(cwd.c_str()) != 0) _exit(127);
    const int fo = open(out.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    const int fe = open(err.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (fo < 0 || fe < 0) _exit(127);
    dup2(fo, 1);
    dup2(fe, 2);
    setenv("PADLAB_THREADS", "1", 1);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(cli.c_str()));
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execv(cli.c_str(), argv.data());
    _exit(127);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  std::string result = "exit: " + std::to_string(code) + "\n--- stdout\n" + slurp(out) + "--- stderr\n" + slurp(err);
  fs::remove(out);
  fs::remove(err);
  return result;
}

std::vector<std::string> read_args(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> args;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) args.push_back(line);
  return args;
}

bool regenerate = false;

void golden_suite(Tally& t, const std::string& cli, const fs::path& dir) {
  std::vector<fs::path> cases;
  for (const auto& entry : fs::directory_iterator(dir / "cases"))
    if (entry.path().extension() == ".args") cases.push_back(entry.path());
  std::sort(cases.begin(), cases.end());
  std::set<int> codes;
  std::set<std::string> commands;
  for (const auto& c : cases) {
    const auto args = read_args(c);
    const std::string actual = run_cli(cli, args, dir);
    fs::path expected_path = c;
    expected_path.replace_extension(".expected");
    if (regenerate) std::ofstream(expected_path, std::ios::binary) << actual;
    const std::string expected = slurp(expected_path);
    t.expect(!expected.empty() && actual == expected, "golden mismatch: " + c.stem().string());
    codes.insert(std::stoi(actual.substr(6)));
    if (!args.empty()) commands.insert(args.front());
  }
  for (const char* cmd : {"analyze", "exp", "log", "bch", "factor", "bowen", "oracle", "atoms", "gap", "pinsker",
                          "telescope", "xi", "oh", "kappa", "bound"})
    t.expect(commands.count(cmd) == 1, std::string("no golden case for subcommand ") + cmd);
  for (int code : {0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 13, 14})
    t.expect(codes.count(code) == 1, "no golden case exits with " + std::to_string(code));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: padlab_acceptance <cli> <golden dir> [--regenerate]\n";
    return 2;
  }
  const std::string cli = fs::absolute(argv[1]).string();
  const fs::path golden = fs::absolute(argv[2]);
  regenerate = argc > 3 && std::string(argv[3]) == "--regenerate";

  run(1, "exp/log roundtrip and isometry", "agree mod p^12, norms exact", exp_log_roundtrip);
  run(2, "BCH consistency", "mod 3^10; nilpotent pairs digit-exact at input precision", bch_consistency);
  run(3, "horospherical factorization", "||FH - g|| <= 3^-12, iterations <= 6", factorization);
  run(4, "Bowen volume ratio", "exact rationals, zero tolerance", bowen_ratio);
  run(5, "entropy consistency", "exact integers", entropy_consistency);
  run(6, "Pinsker inequality", "1e-12", pinsker);
  run(7, "entropy gap identity", "1e-10", gap_identity);
  run(8, "telescoping chain", "1e-12 slack; uniform steps <= 1e-12", telescoping);
  run(9, "spectral constants", "Xi 1e-6; ratios and recomputation 1e-12 relative", spectral_constants);
  run(10, "CLI golden files", "byte equality", [&](Tally& t) { golden_suite(t, cli, golden); });

  std::cout << (failed_criteria == 0 ? "all criteria PASS" : std::to_string(failed_criteria) + " criteria FAIL")
            << std::endl;
  return failed_criteria == 0 ? 0 : 1;
}
