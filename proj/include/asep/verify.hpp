#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "asep/design.hpp"

namespace asep {

inline constexpr std::uint64_t kDefaultEnumGuard = 10'000'000;

/// Raised before starting an enumeration whose subset count C(n,k) exceeds
/// the guard; override the guard explicitly to proceed anyway.
struct GuardExceeded : std::runtime_error {
  GuardExceeded(std::uint64_t subsets_, std::uint64_t guard_)
      : std::runtime_error("enumeration of " + std::to_string(subsets_) +
                           " subsets exceeds guard " + std::to_string(guard_)),
        subsets(subsets_),
        guard(guard_) {}
  std::uint64_t subsets;
  std::uint64_t guard;
};

struct VerifyOptions {
  std::uint64_t guard = kDefaultEnumGuard;
  unsigned threads = 1;  // results are independent of the thread count
};

/// Exact collision counts over all C(n,k) subsets, enumerated in
/// lexicographic order with incremental unions. A subset K counts as
/// sep-overlapping iff the multiplicity of its union's canonical key is at
/// least 2, and as disj-overlapping iff some column outside K is contained
/// in its union.
SeparabilityReport separability_report(const TestDesign& design, int k,
                                       const VerifyOptions& opts = {});

bool is_k_separable(const TestDesign& design, int k, const VerifyOptions& opts = {});
bool is_k_disjunct(const TestDesign& design, int k, const VerifyOptions& opts = {});

struct DecodeResult {
  enum class Kind { Unique, Ambiguous, NoMatch };
  Kind kind = Kind::NoMatch;
  std::vector<std::vector<int>> candidates;  // all k-subsets matching the outcome
};

/// Exhaustive decoder: collects every k-subset whose union equals the
/// outcome. Unique iff exactly one candidate.
DecodeResult decode(const TestDesign& design, const SupportSet& outcome, int k,
                    const VerifyOptions& opts = {});

struct ExactFraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const ExactFraction&, const ExactFraction&) = default;
};

/// Fraction of k-subsets K whose outcome S(K) does not decode uniquely back
/// to K. Counted by re-scanning all subsets per K (quadratic in C(n,k)),
/// deliberately independent of the hash-map path in separability_report;
/// the two must agree exactly.
ExactFraction exact_error_probability(const TestDesign& design, int k,
                                      const VerifyOptions& opts = {});

/// True iff some other subset of the same size has the same union as
/// `subset`. This is the per-subset overlap event behind epsilon_sep.
bool subset_overlaps(const TestDesign& design, std::span<const int> subset,
                     const VerifyOptions& opts = {});

}  // namespace asep
