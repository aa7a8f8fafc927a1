#include "asep/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "asep/bounds.hpp"
#include "asep/construct.hpp"
#include "asep/rng.hpp"

namespace asep::mc {

namespace {

constexpr double kZ95 = 1.959963984540054;

/// Sum of per-index successes; the reduction is a plain integer sum, so the
/// result cannot depend on how indices are distributed over threads.
template <typename TrialFn>
std::uint64_t count_successes(std::uint64_t count, unsigned threads, TrialFn&& trial) {
  const unsigned nthreads = std::max(1u, threads);
  if (nthreads == 1) {
    std::uint64_t succ = 0;
    for (std::uint64_t i = 0; i < count; ++i) succ += trial(i) ? 1 : 0;
    return succ;
  }
  std::atomic<std::uint64_t> cursor{0};
  std::atomic<std::uint64_t> succ{0};
  constexpr std::uint64_t chunk = 64;
  const auto worker = [&] {
    std::uint64_t local = 0;
    for (;;) {
      const std::uint64_t begin = cursor.fetch_add(chunk);
      if (begin >= count) break;
      const std::uint64_t end = std::min(count, begin + chunk);
      for (std::uint64_t i = begin; i < end; ++i) local += trial(i) ? 1 : 0;
    }
    succ.fetch_add(local);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return succ.load();
}

std::vector<int> sample_subset(Xoshiro256StarStar& rng, int n, int k) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

McEstimate wilson_estimate(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_estimate: trials = 0");
  if (successes > trials) throw std::invalid_argument("wilson_estimate: successes > trials");
  const double nd = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nd;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nd;
  const double center = (ph + z2 / (2.0 * nd)) / denom;
  const double half =
      (kZ95 / denom) * std::sqrt(ph * (1.0 - ph) / nd + z2 / (4.0 * nd * nd));
  McEstimate e;
  e.trials = trials;
  e.successes = successes;
  e.point = ph;
  e.wilson_lo = std::clamp(center - half, 0.0, ph);
  e.wilson_hi = std::clamp(center + half, ph, 1.0);
  return e;
}

McEstimate estimate_overlap_prob(int n, int k, int m, double alpha, std::uint64_t trials,
                                 std::uint64_t seed, const McOptions& opts) {
  if (k < 1 || k >= n) throw std::invalid_argument("estimate_overlap_prob: need 1 <= k < n");
  if (m < 0) throw std::invalid_argument("estimate_overlap_prob: need m >= 0");
  if (trials == 0) throw std::invalid_argument("estimate_overlap_prob: trials = 0");
  if (m == 0) return wilson_estimate(trials, trials);  // all unions empty: every L collides

  const double p = p_from_alpha(k, alpha);
  std::vector<int> fixed(static_cast<std::size_t>(k));
  std::iota(fixed.begin(), fixed.end(), 0);
  const VerifyOptions vopts{.guard = opts.guard, .threads = 1};

  const std::uint64_t succ = count_successes(trials, opts.threads, [&](std::uint64_t t) {
    const TestDesign d = bernoulli_design(n, m, p, derive_seed(seed, t));
    return subset_overlaps(d, fixed, vopts);
  });
  return wilson_estimate(succ, trials);
}

McEstimate estimate_epsilon(const TestDesign& design, int k, std::uint64_t trials,
                            std::uint64_t seed, const McOptions& opts) {
  if (k < 1 || k > design.n) throw std::invalid_argument("estimate_epsilon: k out of range");
  if (trials == 0) throw std::invalid_argument("estimate_epsilon: trials = 0");
  const VerifyOptions vopts{.guard = opts.guard, .threads = 1};

  const std::uint64_t succ = count_successes(trials, opts.threads, [&](std::uint64_t t) {
    Xoshiro256StarStar rng(derive_seed(seed, t));
    const std::vector<int> subset = sample_subset(rng, design.n, k);
    return subset_overlaps(design, subset, vopts);
  });
  return wilson_estimate(succ, trials);
}

double markov_existence_fraction_m(int n, int k, double alpha, int m, double epsilon,
                                   int designs, std::uint64_t seed, const McOptions& opts) {
  if (designs < 1) throw std::invalid_argument("markov_existence_fraction: designs = 0");
  if (epsilon < 0) throw std::invalid_argument("markov_existence_fraction: epsilon < 0");
  const double p = p_from_alpha(k, alpha);
  const VerifyOptions vopts{.guard = opts.guard, .threads = 1};

  const std::uint64_t succ =
      count_successes(static_cast<std::uint64_t>(designs), opts.threads, [&](std::uint64_t j) {
        const TestDesign d = bernoulli_design(n, m, p, derive_seed(seed, j));
        return separability_report(d, k, vopts).epsilon_sep <= epsilon;
      });
  return static_cast<double>(succ) / static_cast<double>(designs);
}

double markov_existence_fraction(int n, int k, double alpha, double delta, double epsilon,
                                 int designs, std::uint64_t seed, const McOptions& opts) {
  if (!(delta > 0)) throw std::invalid_argument("markov_existence_fraction: need delta > 0");
  const int m = static_cast<int>(std::ceil((1.0 + delta) * bounds::M_opt(n, k).value));
  return markov_existence_fraction_m(n, k, alpha, m, epsilon, designs, seed, opts);
}

McEstimate simulate_gt(const TestDesign& design, int k, std::uint64_t trials,
                       std::uint64_t seed, const McOptions& opts) {
  if (k < 1 || k > design.n) throw std::invalid_argument("simulate_gt: k out of range");
  if (trials == 0) throw std::invalid_argument("simulate_gt: trials = 0");
  const VerifyOptions vopts{.guard = opts.guard, .threads = 1};

  const std::uint64_t errors = count_successes(trials, opts.threads, [&](std::uint64_t t) {
    Xoshiro256StarStar rng(derive_seed(seed, t));
    const std::vector<int> defective = sample_subset(rng, design.n, k);
    const SupportSet outcome = union_support(design, defective);
    const DecodeResult res = decode(design, outcome, k, vopts);
    return res.kind != DecodeResult::Kind::Unique || res.candidates[0] != defective;
  });
  return wilson_estimate(errors, trials);
}

}  // namespace asep::mc
