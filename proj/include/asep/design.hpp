#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "asep/bitvec.hpp"

namespace asep {

/// An m x n binary pooling matrix. Row t bit i says whether item i is in
/// test t. Column supports are precomputed because verification spends its
/// time taking unions of columns; keeping both orientations turns that hot
/// loop into word-wide ORs at the cost of doubling the m*n bits.
///
/// Immutable after construction; safe to share across threads.
struct TestDesign {
  int n = 0;  // items (columns)
  int m = 0;  // tests (rows)
  std::vector<BitVec> rows;          // m vectors of n bits
  std::vector<BitVec> col_supports;  // n vectors of m bits

  static TestDesign from_rows(int n, std::vector<BitVec> rows);
  static TestDesign identity(int n);
};

/// Consistency check: col_supports must be exactly the transpose of rows.
bool transpose_check(const TestDesign& design);

/// A subset of the m tests, with a canonical byte encoding for hashing:
/// the m-bit string padded to whole bytes, little-endian bit order within
/// each byte. The encoding is injective for a fixed m.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(BitVec bits) : bits_(std::move(bits)) {}

  const BitVec& bits() const { return bits_; }
  int tests() const { return bits_.size(); }
  std::string canonical_key() const { return bits_.bytes(); }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  BitVec bits_;
};

/// Union of the supports of the given columns; empty set of items gives the
/// all-zero support. Throws std::out_of_range on a bad index.
SupportSet union_support(const TestDesign& design, std::span<const int> items);

/// Collision statistics over all k-subsets of columns.
struct SeparabilityReport {
  int k = 0;
  std::uint64_t total_subsets = 0;            // C(n,k)
  std::uint64_t overlapping_subsets_sep = 0;  // K with another L, S(L) = S(K)
  std::uint64_t overlapping_subsets_disj = 0;  // K with some i not in K, S_i subset of S(K)
  double epsilon_sep = 0;
  double epsilon_disj = 0;
};

/// Construction parameters: k of n items defective, Bernoulli parameter
/// alpha in [ln 2, 1], slack delta > 0. Derived: p = 1 - e^{-alpha/k} and
/// m = ceil((1+delta) M(n,k)) with M(n,k) the optimized row-count threshold.
struct DesignParams {
  int n = 0;
  int k = 0;
  double alpha = 0;
  double delta = 0;
  std::uint64_t seed = 0;

  /// alpha set to the minimizer of max(M1, M2) over [ln 2, 1].
  static DesignParams optimized(int n, int k, double delta, std::uint64_t seed);
  static DesignParams with_alpha(int n, int k, double alpha, double delta,
                                 std::uint64_t seed);

  double p() const;   // 1 - e^{-alpha/k}
  int rows() const;   // ceil((1+delta) M(n,k))
};

/// Matrix text format error; line is 1-based.
struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

// Matrix text format:
//   asmat v1
//   n=<n> m=<m>
//   <m lines of exactly n characters in {0,1}>, line t char i = a(t,i)
// No trailing whitespace; the parser rejects wrong line counts and lengths.
void write_design(std::ostream& os, const TestDesign& design);
TestDesign read_design(std::istream& is);
void save_design(const std::filesystem::path& path, const TestDesign& design);
TestDesign load_design(const std::filesystem::path& path);

}  // namespace asep
