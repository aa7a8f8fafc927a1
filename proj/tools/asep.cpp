// asep: build, check, and quantify almost-separable pooling designs.
//
// Subcommands:
//   bounds      counting bound, row-count thresholds, case-bound diagnostics
//   rate-curve  CSV of rate lower bounds over a beta grid
//   design      write a seeded random Bernoulli design
//   check       exact separability/disjunctness report for a design file
//   mc          Monte Carlo estimates (overlap probability, epsilon, existence)
//   simulate    decoding error rate of a design under the exhaustive decoder

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "asep/bounds.hpp"
#include "asep/construct.hpp"
#include "asep/design.hpp"
#include "asep/montecarlo.hpp"
#include "asep/verify.hpp"

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::string f6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* yesno(bool b) { return b ? "true" : "false"; }

void print_estimate(const asep::mc::McEstimate& e) {
  std::cout << "trials=" << e.trials << "\n";
  std::cout << "successes=" << e.successes << "\n";
  std::cout << "point=" << f6(e.point) << "\n";
  std::cout << "wilson_lo=" << f6(e.wilson_lo) << "\n";
  std::cout << "wilson_hi=" << f6(e.wilson_hi) << "\n";
}

int cmd_bounds(int n, int k) {
  using namespace asep::bounds;
  if (k < 1 || 2 * k > n) throw std::invalid_argument("need 1 <= k <= n/2");
  const auto sw = binom_sandwich(n, k);
  const auto mo = M_opt(n, k);
  const int m_probe = static_cast<int>(std::ceil(1.5 * mo.value));
  const auto cb = overlap_case_bounds(n, k, m_probe, mo.alpha);

  std::cout << "n=" << n << " k=" << k << "\n";
  std::cout << "counting_bound=" << f6(counting_bound(n, k)) << "\n";
  std::cout << "sandwich_lo=" << f6(sw.lo) << "\n";
  std::cout << "sandwich_hi=" << f6(sw.hi) << "\n";
  std::cout << "M1(ln2)=" << f6(M1(n, k, kLn2)) << "\n";
  std::cout << "M1(1)=" << f6(M1(n, k, 1.0)) << "\n";
  std::cout << "M2(ln2)=" << f6(M2(n, k, kLn2)) << " (log2 units)\n";
  std::cout << "M2(1)=" << f6(M2(n, k, 1.0)) << "\n";
  std::cout << "M_opt=" << f6(mo.value) << "\n";
  std::cout << "alpha_opt=" << f6(mo.alpha) << "\n";
  std::cout << "m_probe=" << m_probe << "\n";
  std::cout << "cond2=" << yesno(cb.cond2) << " cond3=" << yesno(cb.cond3)
            << " cond4a=" << yesno(cb.cond4a) << "\n";
  std::cout << "case1=" << g6(cb.case1) << "\n";
  std::cout << "case2=" << (cb.case2_infinite ? std::string("inf") : g6(cb.case2)) << "\n";
  std::cout << "case3=" << g6(cb.case3) << "\n";
  std::cout << "union_bound=" << g6(cb.total) << "\n";
  return 0;
}

int cmd_rate_curve(double beta_min, double beta_max, int steps, const std::string& out,
                   unsigned threads) {
  const auto pts = asep::bounds::rate_curve(beta_min, beta_max, steps, threads);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + out);
  asep::bounds::write_rate_curve_csv(os, pts);
  if (!os) throw std::runtime_error("write failed: " + out);
  std::cout << "rows=" << steps << " out=" << out << "\n";
  return 0;
}

int cmd_design(int n, int k, double alpha, bool alpha_given, int m, bool m_given,
               double delta, std::uint64_t seed, const std::string& out) {
  const asep::DesignParams params =
      alpha_given ? asep::DesignParams::with_alpha(n, k, alpha, delta, seed)
                  : asep::DesignParams::optimized(n, k, delta, seed);
  const int rows = m_given ? m : params.rows();
  const asep::TestDesign d = asep::bernoulli_design(n, rows, params.p(), seed);
  asep::save_design(out, d);
  std::cout << "n=" << n << " m=" << rows << " k=" << k << "\n";
  std::cout << "alpha=" << f6(params.alpha) << "\n";
  std::cout << "p=" << f6(params.p()) << "\n";
  std::cout << "seed=" << seed << "\n";
  std::cout << "out=" << out << "\n";
  return 0;
}

int cmd_check(const std::string& in, int k, double epsilon, bool epsilon_given,
              bool force_guard, unsigned threads, bool json) {
  const asep::TestDesign d = asep::load_design(in);
  asep::VerifyOptions opts;
  opts.threads = threads;
  if (force_guard) opts.guard = std::numeric_limits<std::uint64_t>::max();
  const asep::SeparabilityReport rep = asep::separability_report(d, k, opts);

  if (json) {
    nlohmann::json j{{"n", d.n},
                     {"m", d.m},
                     {"k", rep.k},
                     {"total_subsets", rep.total_subsets},
                     {"overlapping_sep", rep.overlapping_subsets_sep},
                     {"overlapping_disj", rep.overlapping_subsets_disj},
                     {"epsilon_sep", rep.epsilon_sep},
                     {"epsilon_disj", rep.epsilon_disj},
                     {"k_separable", rep.overlapping_subsets_sep == 0},
                     {"k_disjunct", rep.overlapping_subsets_disj == 0}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "n=" << d.n << " m=" << d.m << " k=" << rep.k << "\n";
    std::cout << "total_subsets=" << rep.total_subsets << "\n";
    std::cout << "overlapping_sep=" << rep.overlapping_subsets_sep << "\n";
    std::cout << "overlapping_disj=" << rep.overlapping_subsets_disj << "\n";
    std::cout << "epsilon_sep=" << f6(rep.epsilon_sep) << "\n";
    std::cout << "epsilon_disj=" << f6(rep.epsilon_disj) << "\n";
    std::cout << "k_separable=" << yesno(rep.overlapping_subsets_sep == 0) << "\n";
    std::cout << "k_disjunct=" << yesno(rep.overlapping_subsets_disj == 0) << "\n";
  }
  if (epsilon_given) return rep.epsilon_sep <= epsilon ? 0 : 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"almost-separable pooling designs: construction, verification, bounds"};
  app.require_subcommand(1);

  int n = 0, k = 0, m = 0, steps = 200, designs = 200;
  double alpha = 0, delta = 0, epsilon = 0;
  double beta_min = 0.01, beta_max = 1.0;
  std::uint64_t seed = 0, trials = 10000;
  unsigned threads = 1;
  std::string in, out;
  bool force_guard = false, markov = false, json = false;

  auto* sb = app.add_subcommand("bounds", "row-count bounds and diagnostics");
  sb->add_option("--n", n)->required();
  sb->add_option("--k", k)->required();

  auto* sr = app.add_subcommand("rate-curve", "rate lower bounds over a beta grid (CSV)");
  sr->add_option("--beta-min", beta_min)->capture_default_str();
  sr->add_option("--beta-max", beta_max)->capture_default_str();
  sr->add_option("--steps", steps)->capture_default_str();
  sr->add_option("--out", out)->required();
  sr->add_option("--threads", threads)->capture_default_str();

  auto* sd = app.add_subcommand("design", "write a seeded random Bernoulli design");
  sd->add_option("--n", n)->required();
  sd->add_option("--k", k)->required();
  auto* sd_alpha = sd->add_option("--alpha", alpha, "override the optimized alpha");
  auto* sd_m = sd->add_option("--m", m, "override the derived row count");
  sd->add_option("--delta", delta)->required();
  sd->add_option("--seed", seed)->capture_default_str();
  sd->add_option("--out", out)->required();

  auto* sc = app.add_subcommand("check", "exact separability report for a design file");
  sc->add_option("--in", in)->required();
  sc->add_option("--k", k)->required();
  auto* sc_eps = sc->add_option("--epsilon", epsilon, "exit 0 iff epsilon_sep <= epsilon");
  sc->add_flag("--force-guard", force_guard, "ignore the enumeration guard");
  sc->add_option("--threads", threads)->capture_default_str();
  sc->add_flag("--json", json, "structured output");

  auto* sm = app.add_subcommand("mc", "Monte Carlo estimates");
  sm->add_option("--n", n);
  sm->add_option("--k", k);
  sm->add_option("--m", m);
  auto* sm_alpha = sm->add_option("--alpha", alpha, "Bernoulli parameter (default ln 2)");
  sm->add_option("--delta", delta, "row slack for --markov");
  sm->add_option("--epsilon", epsilon, "target epsilon for --markov");
  sm->add_option("--designs", designs, "designs for --markov")->capture_default_str();
  sm->add_option("--trials", trials)->capture_default_str();
  sm->add_option("--seed", seed)->capture_default_str();
  sm->add_option("--threads", threads)->capture_default_str();
  sm->add_option("--in", in, "design file: estimate epsilon_sep of this design");
  sm->add_flag("--markov", markov, "fraction of random designs with epsilon_sep <= epsilon");
  sm->add_flag("--force-guard", force_guard, "ignore the enumeration guard");

  auto* ss = app.add_subcommand("simulate", "decoding error rate of a design");
  ss->add_option("--in", in)->required();
  ss->add_option("--k", k)->required();
  ss->add_option("--trials", trials)->capture_default_str();
  ss->add_option("--seed", seed)->capture_default_str();
  ss->add_option("--threads", threads)->capture_default_str();
  ss->add_flag("--force-guard", force_guard, "ignore the enumeration guard");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sb->parsed()) return cmd_bounds(n, k);
    if (sr->parsed()) return cmd_rate_curve(beta_min, beta_max, steps, out, threads);
    if (sd->parsed())
      return cmd_design(n, k, alpha, !sd_alpha->empty(), m, !sd_m->empty(), delta, seed, out);
    if (sc->parsed())
      return cmd_check(in, k, epsilon, !sc_eps->empty(), force_guard, threads, json);
    if (sm->parsed()) {
      asep::mc::McOptions opts;
      opts.threads = threads;
      if (force_guard) opts.guard = std::numeric_limits<std::uint64_t>::max();
      if (sm_alpha->empty()) alpha = kLn2;
      if (!in.empty()) {
        const asep::TestDesign d = asep::load_design(in);
        print_estimate(asep::mc::estimate_epsilon(d, k, trials, seed, opts));
      } else if (markov) {
        const int rows =
            static_cast<int>(std::ceil((1.0 + delta) * asep::bounds::M_opt(n, k).value));
        const double frac = asep::mc::markov_existence_fraction(n, k, alpha, delta, epsilon,
                                                                designs, seed, opts);
        std::cout << "m=" << rows << " designs=" << designs << "\n";
        std::cout << "fraction=" << f6(frac) << "\n";
      } else {
        if (n < 1 || k < 1 || m < 1)
          throw std::invalid_argument("mc: need --n, --k, --m (or --in / --markov)");
        print_estimate(asep::mc::estimate_overlap_prob(n, k, m, alpha, trials, seed, opts));
        std::cout << "union_bound=" << g6(asep::bounds::overlap_union_bound(n, k, m, alpha))
                  << "\n";
      }
      return 0;
    }
    if (ss->parsed()) {
      asep::mc::McOptions opts;
      opts.threads = threads;
      if (force_guard) opts.guard = std::numeric_limits<std::uint64_t>::max();
      const asep::TestDesign d = asep::load_design(in);
      print_estimate(asep::mc::simulate_gt(d, k, trials, seed, opts));
      return 0;
    }
  } catch (const asep::ParseError& e) {
    std::cerr << "error: " << in << ": " << e.what() << "\n";
    return 2;
  } catch (const asep::GuardExceeded& e) {
    std::cerr << "error: " << e.what() << " (use --force-guard to override)\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
