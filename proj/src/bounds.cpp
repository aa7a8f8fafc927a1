#include "asep/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace asep::bounds {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// log(sum(exp(terms))) with terms in natural-log domain.
double log_sum_exp(const std::vector<double>& terms) {
  double mx = -kInf;
  for (double t : terms) mx = std::max(mx, t);
  if (mx == -kInf) return -kInf;
  double acc = 0;
  for (double t : terms) acc += std::exp(t - mx);
  return mx + std::log(acc);
}

/// exp(log_sum_exp(pos)) - exp(log_sum_exp(neg)), combined in log domain to
/// keep magnitudes representable.
double signed_exp_sum(const std::vector<double>& pos, const std::vector<double>& neg) {
  const double lp = log_sum_exp(pos);
  const double ln = log_sum_exp(neg);
  if (ln == -kInf) return std::exp(lp);
  if (lp == -kInf) return -std::exp(ln);
  if (lp >= ln) return std::exp(lp + std::log1p(-std::exp(ln - lp)));
  return -std::exp(ln + std::log1p(-std::exp(lp - ln)));
}

/// Golden-section search refining a minimum of f inside [a, b] to width tol.
/// Assumes f is unimodal on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

/// Grid scan (first minimum wins, i.e. ties break toward smaller alpha)
/// followed by golden-section refinement between the neighboring grid points.
double grid_then_golden_min(const std::function<double(double)>& f, double lo, double hi,
                            int grid_points, double tol) {
  int best = 0;
  double best_val = kInf;
  const double step = (hi - lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double v = f(lo + i * step);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = lo + std::max(0, best - 1) * step;
  const double b = lo + std::min(grid_points - 1, best + 1) * step;
  return golden_min(f, a, b, tol);
}

// -ln(1 - 2 e^{-a} + 2 e^{-2a}); argument is 1 - 2e^{-a}(1 - e^{-a}) >= 1/2.
double neg_log_s_plus_t(double alpha) {
  return -std::log1p(2.0 * std::exp(-alpha) * std::expm1(-alpha));
}

// -ln(1 - 2 e^{-a} + 2 e^{-a(1+1/k)}) = -ln(1 + 2 e^{-a}(e^{-a/k} - 1)),
// via expm1/log1p so the k -> infinity regime keeps full precision.
double neg_log_s_plus_tu_km1(double alpha, double k) {
  return -std::log1p(2.0 * std::exp(-alpha) * std::expm1(-alpha / k));
}

}  // namespace

std::uint64_t binom_exact(int n, int k) {
  require(n >= 0 && k >= 0, "binom_exact: negative argument");
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binom_exact: value exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t binom_capped(int n, int k, std::uint64_t cap) {
  require(n >= 0 && k >= 0, "binom_capped: negative argument");
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    // partial values C(n-k+i, i) are nondecreasing in i, so we may stop early
    if (c > cap) return cap == std::numeric_limits<std::uint64_t>::max() ? cap : cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

double log_binom(int n, int k) {
  require(n >= 0 && k >= 0 && k <= n, "log_binom: need 0 <= k <= n");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double counting_bound(int n, int k) {
  require(n >= 1 && k >= 0, "counting_bound: need n >= 1, k >= 0");
  require(k <= n, "counting_bound: k > n");
  if (k == 0 || k == n) return 0.0;
  if (n <= 64) return std::log2(static_cast<double>(binom_exact(n, k)));
  return log_binom(n, k) / kLn2;
}

Sandwich binom_sandwich(int n, int k) {
  require(1 <= k && k <= n, "binom_sandwich: need 1 <= k <= n");
  const double nk = static_cast<double>(n) / k;
  return {k * std::log2(nk), k * std::log2(std::exp(1.0) * nk)};
}

double overlap_union_bound(int n, int k, double m, double alpha) {
  require(k >= 1 && 2 * k <= n, "overlap_union_bound: need 1 <= k <= n/2");
  require(m >= 1, "overlap_union_bound: need m >= 1");
  require(alpha > 0, "overlap_union_bound: need alpha > 0");
  const double ea = std::exp(-alpha);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(k));
  for (int b = 0; b < k; ++b) {
    // 1 - 2 q^k + 2 q^{2k-b} = 1 - 2 e^{-a}(1 - e^{-a(k-b)/k}); always >= 1/2
    const double base = 1.0 + 2.0 * ea * std::expm1(-alpha * (k - b) / k);
    terms.push_back(log_binom(k, b) + log_binom(n - k, k - b) + m * std::log(base));
  }
  return std::exp(log_sum_exp(terms));
}

double overlap_expanded(int n, int k, int m, double alpha) {
  require(k >= 1 && 2 * k <= n, "overlap_expanded: need 1 <= k <= n/2");
  require(m >= 1, "overlap_expanded: need m >= 1");
  require(alpha > 0, "overlap_expanded: need alpha > 0");
  const double s = 1.0 - 2.0 * std::exp(-alpha);
  const double log_abs_s = std::log(std::abs(s));
  const double log_q = -alpha / k;

  std::vector<double> inner(static_cast<std::size_t>(k));
  std::vector<double> pos, neg;
  for (int j = 0; j <= m; ++j) {
    if (s == 0.0 && j < m) continue;  // s^{m-j} = 0 unless j = m
    for (int c = 1; c <= k; ++c)
      inner[static_cast<std::size_t>(c - 1)] =
          log_binom(k, c) + log_binom(n - k, c) + c * static_cast<double>(j) * log_q;
    // t^j u^{jk} collapses to exp(j (ln 2 - alpha)) since t u^k = 2 e^{-alpha}
    const double s_part = (j == m) ? 0.0 : (m - j) * log_abs_s;  // avoid 0 * -inf
    const double lg = log_binom(m, j) + s_part + j * (kLn2 - alpha) + log_sum_exp(inner);
    const bool negative = s < 0.0 && ((m - j) & 1);
    (negative ? neg : pos).push_back(lg);
  }
  return signed_exp_sum(pos, neg);
}

double M1(int n, int k, double alpha) {
  require(n > k && k >= 1, "M1: need n > k >= 1");
  require(alpha > 0, "M1: need alpha > 0");
  return k * std::log(static_cast<double>(n) / k) / neg_log_s_plus_t(alpha);
}

double M2(int n, int k, double alpha) {
  require(n > k && k >= 1, "M2: need n > k >= 1");
  require(alpha > 0, "M2: need alpha > 0");
  return std::log(static_cast<double>(n) * k) / neg_log_s_plus_tu_km1(alpha, k);
}

MOpt M_opt(int n, int k) {
  require(n > k && k >= 1, "M_opt: need n > k >= 1");
  const auto objective = [n, k](double a) { return std::max(M1(n, k, a), M2(n, k, a)); };
  const double a = grid_then_golden_min(objective, kLn2, 1.0, 1001, 1e-10);
  return {objective(a), a};
}

OverlapBoundBreakdown overlap_case_bounds(int n, int k, double m, double alpha) {
  require(k >= 1 && 2 * k <= n, "overlap_case_bounds: need 1 <= k <= n/2");
  require(m >= 1, "overlap_case_bounds: need m >= 1");
  require(alpha > 0, "overlap_case_bounds: need alpha > 0");
  const double ea = std::exp(-alpha);
  const double tuk = 2.0 * ea;  // t u^k = 2 e^{-alpha}
  const double ln_nk = std::log(static_cast<double>(n) * k);
  const double kd = k;

  OverlapBoundBreakdown r;
  r.total = overlap_union_bound(n, k, m, alpha);
  r.case1 = kd * std::exp(2.0 * kd + kd * std::log(static_cast<double>(n) / k) -
                          m * neg_log_s_plus_t(alpha));
  r.cond3 = m * tuk > (kd / alpha) * ln_nk;
  if (r.cond3) {
    const double gap = tuk - kd * ln_nk / (alpha * m);
    r.case2 = kd * std::exp(2.0 * kd - 2.0 * m * gap * gap);
  } else {
    r.case2 = kInf;
    r.case2_infinite = true;
  }
  r.case3 = 5.0 * std::exp(ln_nk - m * neg_log_s_plus_tu_km1(alpha, kd));
  r.cond2 = m > M1(n, k, alpha);
  r.cond4a = m > M2(n, k, alpha);
  return r;
}

double dd_rate(double beta) {
  require(beta > 0 && beta <= 1, "dd_rate: need beta in (0,1]");
  constexpr double scale = 1.0 / (2.718281828459045 * kLn2);
  if (beta >= 0.5) return scale;  // beta/(1-beta) >= 1 from 1/2 onward
  return scale * beta / (1.0 - beta);
}

namespace {

double rate_first_minimand(double alpha, double beta) {
  return 2.0 * alpha * std::exp(-alpha) * beta / (2.0 - beta);
}

double rate_objective(double alpha, double beta) {
  return std::min(rate_first_minimand(alpha, beta), neg_log_s_plus_t(alpha));
}

}  // namespace

RateOpt rate_thm4(double beta) {
  require(beta > 0 && beta <= 1, "rate_thm4: need beta in (0,1]");
  const auto neg = [beta](double a) { return -rate_objective(a, beta); };
  const double a = grid_then_golden_min(neg, kLn2, 1.0, 1001, 1e-10);
  return {rate_objective(a, beta) / kLn2, a};
}

RateOpt rate_thm4_crossing(double beta) {
  require(beta >= beta0() && beta <= 1, "rate_thm4_crossing: need beta in [beta0, 1]");
  // first minimand increases in alpha, second decreases; the max of the min
  // sits where they cross.
  double lo = kLn2, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double h = rate_first_minimand(mid, beta) - neg_log_s_plus_t(mid);
    (h < 0 ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);
  return {rate_objective(a, beta) / kLn2, a};
}

double beta0() {
  static const double v = [] {
    const double L = neg_log_s_plus_t(1.0);  // -ln(1 - 2/e + 2/e^2)
    return 2.0 * L / (2.0 * std::exp(-1.0) + L);
  }();
  return v;
}

double beta1() {
  static const double v = [] {
    const double ei = 2.0 * std::exp(-1.0);
    return 2.0 * kLn2 / (1.0 - ei + kLn2 + ei * kLn2);
  }();
  return v;
}

double rate_cor1(double beta) {
  require(beta > 2.0 * kLn2 / (1.0 + kLn2) && beta <= 1,
          "rate_cor1: beta below the validity threshold 2 ln2/(1+ln2)");
  const double w = 2.0 * (1.0 - beta) * kLn2 / (beta * (1.0 - kLn2));
  return 1.0 - std::log1p(w * w) / kLn2;
}

double rate_cor2(double beta) {
  require(beta > 0 && beta <= 1, "rate_cor2: need beta in (0,1]");
  if (beta <= beta0()) return 2.0 * std::exp(-1.0) * beta / (2.0 - beta) / kLn2;
  if (beta <= beta1()) return neg_log_s_plus_t(1.0) / kLn2;
  return rate_cor1(beta);
}

AlphaChoice closed_form_alpha(double beta) {
  require(beta > beta0() && beta < 1, "closed_form_alpha: need beta in (beta0, 1)");
  const double b1 = 1.0 - kLn2;
  const double disc = beta * beta * b1 * b1 + 4.0 * (1.0 - beta) * (4.0 - 3.0 * beta) * kLn2;
  const double y = (-beta * b1 + std::sqrt(disc)) / (4.0 - 3.0 * beta);
  const double y_max = 1.0 - 2.0 * std::exp(-1.0);
  constexpr double tol = 1e-9;
  if (y < -tol || y > y_max + tol)
    throw std::domain_error("closed_form_alpha: 1 - 2e^{-alpha} outside [0, 1-2/e]");
  const double alpha = -std::log((1.0 - y) / 2.0);
  if (alpha < kLn2) return {kLn2, true};
  if (alpha > 1.0) return {1.0, true};
  return {alpha, false};
}

std::vector<RateCurvePoint> rate_curve(double beta_min, double beta_max, int steps,
                                       unsigned threads) {
  require(0 < beta_min && beta_min < beta_max && beta_max <= 1.0,
          "rate_curve: need 0 < beta_min < beta_max <= 1");
  require(steps >= 2, "rate_curve: need steps >= 2");
  const double cor1_min = 2.0 * kLn2 / (1.0 + kLn2);

  std::vector<RateCurvePoint> pts(static_cast<std::size_t>(steps));
  const auto compute = [&](int i) {
    const double beta = beta_min + i * (beta_max - beta_min) / (steps - 1);
    const RateOpt ro = rate_thm4(beta);
    RateCurvePoint p;
    p.beta = beta;
    p.alpha_opt = ro.alpha;
    p.r_thm4 = ro.rate;
    p.r_dd = dd_rate(beta);
    p.r_cor1 = beta > cor1_min ? rate_cor1(beta) : std::numeric_limits<double>::quiet_NaN();
    p.r_cor2 = rate_cor2(beta);
    pts[static_cast<std::size_t>(i)] = p;
  };

  if (threads <= 1) {
    for (int i = 0; i < steps; ++i) compute(i);
    return pts;
  }
  std::vector<std::future<void>> futs;
  const int chunk = (steps + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (int begin = 0; begin < steps; begin += chunk) {
    const int end = std::min(steps, begin + chunk);
    futs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (int i = begin; i < end; ++i) compute(i);
    }));
  }
  for (auto& f : futs) f.get();
  return pts;
}

namespace {

// 12 significant digits, locale-independent.
void append_number(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  out.append(buf, res.ptr);
}

}  // namespace

void write_rate_curve_csv(std::ostream& os, const std::vector<RateCurvePoint>& points) {
  std::string out = "beta,alpha_opt,r_thm4,r_dd,r_cor1,r_cor2\n";
  for (const auto& p : points) {
    append_number(out, p.beta);
    out.push_back(',');
    append_number(out, p.alpha_opt);
    out.push_back(',');
    append_number(out, p.r_thm4);
    out.push_back(',');
    append_number(out, p.r_dd);
    out.push_back(',');
    append_number(out, p.r_cor1);
    out.push_back(',');
    append_number(out, p.r_cor2);
    out.push_back('\n');
  }
  os << out;
}

}  // namespace asep::bounds
