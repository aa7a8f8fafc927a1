#pragma once

#include <cstdint>

#include "asep/design.hpp"

namespace asep {

/// p = 1 - e^{-alpha/k}, the per-entry inclusion probability that makes a
/// union of k columns behave like a single Bernoulli(1 - e^{-alpha}) test.
/// p ~ alpha/k for large k.
double p_from_alpha(int k, double alpha);

/// IID Bernoulli(p) matrix, filled row-major (row 0 item 0 first) by
/// comparing successive uniform 53-bit draws from xoshiro256** (seeded via
/// splitmix64) against p. The fill order and generator are pinned:
/// identical (n, m, p, seed) reproduce the identical matrix on every
/// platform.
TestDesign bernoulli_design(int n, int m, double p, std::uint64_t seed);

/// Random design at the parameters' derived size: m = ceil((1+delta) M(n,k))
/// rows with inclusion probability p_from_alpha(k, params.alpha). Build
/// params with DesignParams::optimized to use the alpha achieving M(n,k).
TestDesign design_for_params(const DesignParams& params);

}  // namespace asep
