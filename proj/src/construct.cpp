#include "asep/construct.hpp"

#include <cmath>
#include <stdexcept>

#include "asep/rng.hpp"

namespace asep {

double p_from_alpha(int k, double alpha) {
  if (k < 1) throw std::invalid_argument("p_from_alpha: need k >= 1");
  if (!(alpha > 0)) throw std::invalid_argument("p_from_alpha: need alpha > 0");
  return -std::expm1(-alpha / k);
}

TestDesign bernoulli_design(int n, int m, double p, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("bernoulli_design: need n, m >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("bernoulli_design: need p in (0,1)");
  Xoshiro256StarStar rng(seed);
  std::vector<BitVec> rows(static_cast<std::size_t>(m), BitVec(n));
  for (int t = 0; t < m; ++t)
    for (int i = 0; i < n; ++i)
      if (rng.uniform53() < p) rows[static_cast<std::size_t>(t)].set(i);
  return TestDesign::from_rows(n, std::move(rows));
}

TestDesign design_for_params(const DesignParams& params) {
  return bernoulli_design(params.n, params.rows(), p_from_alpha(params.k, params.alpha),
                          params.seed);
}

}  // namespace asep
