#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

// Closed-form and optimized quantities for pooling designs: the counting
// bound, the overlap union bound with its partial-sum case decomposition,
// the row-count thresholds M1/M2/M, and the rate lower-bound curves.
//
// All heavy sums are evaluated per term in the natural-log domain and
// combined with log-sum-exp; binomial coefficients are exact 64-bit
// integers up to n = 64 and log-gamma based beyond.

namespace asep::bounds {

/// Exact C(n,k); throws std::overflow_error if it does not fit in 64 bits.
std::uint64_t binom_exact(int n, int k);

/// min(C(n,k), cap+1) without overflow; cap+1 signals "exceeds cap".
std::uint64_t binom_capped(int n, int k, std::uint64_t cap);

/// Natural log of C(n,k).
double log_binom(int n, int k);

/// log2 C(n,k): the minimum number of tests any k-separable design needs.
double counting_bound(int n, int k);

struct Sandwich {
  double lo;  // k log2(n/k)
  double hi;  // k log2(e n/k)
};

/// Two-sided log2 estimate of C(n,k): (n/k)^k <= C(n,k) <= (e n/k)^k.
Sandwich binom_sandwich(int n, int k);

/// Union bound on the probability that a fixed k-set K of Bernoulli columns
/// with p = 1 - e^{-alpha/k} has another k-set L with S(L) = S(K):
///   sum_{b=0}^{k-1} C(k,b) C(n-k,k-b) (1 - 2q^k + 2q^{2k-b})^m,  q = e^{-alpha/k}.
/// May exceed 1; it is a bound, not a probability. m may be fractional
/// (thresholds like (1+delta) M(n,k) are real-valued).
double overlap_union_bound(int n, int k, double m, double alpha);

/// Same quantity after binomial expansion and exchanging summation order:
///   sum_{j=0}^{m} C(m,j) s^{m-j} t^j u^{jk} sum_{c=1}^{k} C(k,c) C(n-k,c) q^{cj}
/// with s = 1-2e^{-alpha}, t = 2e^{-2alpha}, u = e^{alpha/k}. Algebraically
/// equal to overlap_union_bound; kept as an independent evaluation route.
double overlap_expanded(int n, int k, int m, double alpha);

/// Partial-sum upper bounds on the expanded form, split by the size of the
/// inner-sum maximizer, plus the row-count conditions under which each case
/// becomes small.
struct OverlapBoundBreakdown {
  double total = 0;  // overlap_union_bound value
  double case1 = 0;  // k exp(2k + k ln(n/k) + m ln(s+t))
  double case2 = 0;  // k exp(2k - 2m (t u^k - k ln(nk)/(alpha m))^2), needs cond3
  double case3 = 0;  // 5 exp(ln(nk) + m ln(s + t u^{k-1}))
  bool case2_infinite = false;  // concentration precondition failed; case2 = +inf
  bool cond2 = false;   // m > M1(n,k,alpha)
  bool cond3 = false;   // m t u^k > (k/alpha) ln(nk)
  bool cond4a = false;  // m > ln(nk) / (-ln(s + t u^{k-1}))
};

OverlapBoundBreakdown overlap_case_bounds(int n, int k, double m, double alpha);

/// Row-count thresholds. M1 controls the small-j partial sum, M2 the rest;
/// m > (1+delta) max(M1,M2) makes the overlap bound vanish as n grows.
double M1(int n, int k, double alpha);
double M2(int n, int k, double alpha);

struct MOpt {
  double value;  // min over alpha in [ln 2, 1] of max(M1, M2)
  double alpha;  // minimizer (ties toward smaller alpha)
};

/// 1001-point grid scan over [ln 2, 1] followed by golden-section
/// refinement to |dalpha| < 1e-10. The grid guards against refining into
/// the wrong basin when the max-of-two objective is kinked.
MOpt M_opt(int n, int k);

/// Benchmark rate curve (1/(e ln 2)) min(beta/(1-beta), 1).
double dd_rate(double beta);

struct RateOpt {
  double rate;
  double alpha;
};

/// Optimized rate lower bound for k = n^{1-beta}:
///   (1/ln 2) max_{alpha in [ln 2,1]} min{ 2 alpha e^{-alpha} beta/(2-beta),
///                                         -ln(1 - 2e^{-alpha} + 2e^{-2alpha}) }.
RateOpt rate_thm4(double beta);

/// Independent route for beta >= beta0: bisect on equality of the two
/// minimands (where the maximum is attained in that regime).
RateOpt rate_thm4_crossing(double beta);

/// Sparsity thresholds delimiting the closed-form branches of rate_cor2.
double beta0();
double beta1();

/// Closed-form bound 1 - (1/ln 2) ln(1 + (2(1-beta) ln 2 / (beta(1-ln 2)))^2),
/// valid for beta in (2 ln 2/(1+ln 2), 1].
double rate_cor1(double beta);

/// Piecewise closed-form bound: alpha = 1 value up to beta0, the constant
/// -ln(1-2/e+2/e^2)/ln 2 on (beta0, beta1], rate_cor1 beyond.
double rate_cor2(double beta);

struct AlphaChoice {
  double alpha;
  bool clamped;  // fell outside [ln 2, 1] and was clamped
};

/// Near-optimal alpha for beta > beta0 from the quadratic
///   (4-3b) y^2 + 2 b (1-ln 2) y - 4 (1-b) ln 2 = 0,  y = 1 - 2 e^{-alpha};
/// cheaper than the optimization and accurate to a few 1e-4 in rate.
AlphaChoice closed_form_alpha(double beta);

struct RateCurvePoint {
  double beta;
  double alpha_opt;
  double r_thm4;
  double r_dd;
  double r_cor1;  // NaN where beta is below its domain
  double r_cor2;
};

/// Inclusive uniform beta grid; points are independent, so evaluation is
/// parallel over rows. Output is identical for any thread count.
std::vector<RateCurvePoint> rate_curve(double beta_min, double beta_max, int steps,
                                       unsigned threads = 1);

/// CSV with header beta,alpha_opt,r_thm4,r_dd,r_cor1,r_cor2; 12 significant
/// digits, '.' decimal separator regardless of locale.
void write_rate_curve_csv(std::ostream& os, const std::vector<RateCurvePoint>& points);

}  // namespace asep::bounds
