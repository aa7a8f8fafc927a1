#pragma once

#include <cstdint>

#include "asep/design.hpp"
#include "asep/verify.hpp"

namespace asep::mc {

/// Binomial point estimate with a 95% Wilson score interval. Wilson rather
/// than the normal approximation so zero-success runs still give a sensible
/// upper end.
struct McEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double point = 0;
  double wilson_lo = 0;
  double wilson_hi = 0;
};

McEstimate wilson_estimate(std::uint64_t successes, std::uint64_t trials);

struct McOptions {
  unsigned threads = 1;  // trial outcomes depend only on the trial index,
                         // so any thread count gives identical estimates
  std::uint64_t guard = kDefaultEnumGuard;
};

/// Probability that the fixed k-set {0,..,k-1} of a fresh Bernoulli design
/// (p = 1 - e^{-alpha/k}) collides with some other k-set. Columns are IID,
/// so fixing the set loses nothing. One design per trial, seeded by
/// splitmix64(seed XOR trial). m = 0 degenerates to certain collision.
McEstimate estimate_overlap_prob(int n, int k, int m, double alpha, std::uint64_t trials,
                                 std::uint64_t seed, const McOptions& opts = {});

/// Unbiased sampling estimate of epsilon_sep: per trial draw K uniformly
/// among k-subsets and test it for a collision exhaustively.
McEstimate estimate_epsilon(const TestDesign& design, int k, std::uint64_t trials,
                            std::uint64_t seed, const McOptions& opts = {});

/// Fraction of `designs` independent random designs whose exact epsilon_sep
/// is at most epsilon, at m = ceil((1+delta) M(n,k)) rows.
double markov_existence_fraction(int n, int k, double alpha, double delta, double epsilon,
                                 int designs, std::uint64_t seed, const McOptions& opts = {});

/// Same with the row count given explicitly.
double markov_existence_fraction_m(int n, int k, double alpha, int m, double epsilon,
                                   int designs, std::uint64_t seed,
                                   const McOptions& opts = {});

/// End-to-end decoding error rate: per trial draw a defective set K
/// uniformly, form the outcome S(K), run the exhaustive decoder, and count
/// an error unless it returns exactly K. Estimates exact_error_probability.
McEstimate simulate_gt(const TestDesign& design, int k, std::uint64_t trials,
                       std::uint64_t seed, const McOptions& opts = {});

}  // namespace asep::mc
