#include "asep/verify.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_map>

#include "asep/bounds.hpp"

namespace asep {

namespace {

// Depth-first lexicographic enumeration of k-subsets with a prefix-union
// stack, so each tree edge costs one OR instead of rebuilding unions from
// scratch. leaf(union, indices) returns false to stop the whole walk.
template <typename Leaf>
bool enum_rec(const TestDesign& d, int k, int depth, int start, std::vector<int>& idx,
              std::vector<BitVec>& prefix, Leaf& leaf) {
  if (depth == k) return leaf(prefix[static_cast<std::size_t>(k)], idx);
  for (int i = start; i <= d.n - (k - depth); ++i) {
    idx[static_cast<std::size_t>(depth)] = i;
    auto& next = prefix[static_cast<std::size_t>(depth) + 1];
    next = prefix[static_cast<std::size_t>(depth)];
    next |= d.col_supports[static_cast<std::size_t>(i)];
    if (!enum_rec(d, k, depth + 1, i + 1, idx, prefix, leaf)) return false;
  }
  return true;
}

/// Enumerate every k-subset whose smallest element is `first`.
template <typename Leaf>
bool enumerate_with_first(const TestDesign& d, int k, int first, Leaf&& leaf) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::vector<BitVec> prefix(static_cast<std::size_t>(k) + 1, BitVec(d.m));
  idx[0] = first;
  prefix[1] = d.col_supports[static_cast<std::size_t>(first)];
  return enum_rec(d, k, 1, first + 1, idx, prefix, leaf);
}

template <typename Leaf>
bool enumerate_all(const TestDesign& d, int k, Leaf&& leaf) {
  for (int f = 0; f + k <= d.n; ++f)
    if (!enumerate_with_first(d, k, f, leaf)) return false;
  return true;
}

void check_guard(int n, int k, std::uint64_t guard) {
  const std::uint64_t c = bounds::binom_capped(n, k, guard);
  if (c > guard) throw GuardExceeded(c, guard);
}

void check_k(const TestDesign& d, int k, bool half) {
  if (k < 1 || k > d.n) throw std::invalid_argument("k out of range");
  if (half && 2 * k > d.n) throw std::invalid_argument("need k <= n/2");
}

/// Number of subsets L (|L| = |K|) with the same union as K, counted up to
/// `limit` and then cut short. K itself always matches.
std::uint64_t count_matching(const TestDesign& d, const BitVec& target, int k,
                             std::uint64_t limit) {
  std::uint64_t found = 0;
  enumerate_all(d, k, [&](const BitVec& u, const std::vector<int>&) {
    if (u == target && ++found >= limit) return false;
    return true;
  });
  return found;
}

struct FirstElementTally {
  std::unordered_map<std::string, std::uint64_t> keys;
  std::uint64_t disj = 0;
};

}  // namespace

SeparabilityReport separability_report(const TestDesign& design, int k,
                                       const VerifyOptions& opts) {
  check_k(design, k, /*half=*/true);
  check_guard(design.n, k, opts.guard);

  // One tally per first element; workers pull first elements off a shared
  // counter, so the partition (and thus the merged result) does not depend
  // on scheduling or thread count.
  const int nfirst = design.n - k + 1;
  std::vector<FirstElementTally> parts(static_cast<std::size_t>(nfirst));
  std::atomic<int> cursor{0};

  const auto worker = [&] {
    std::vector<char> in_subset(static_cast<std::size_t>(design.n), 0);
    for (;;) {
      const int f = cursor.fetch_add(1);
      if (f >= nfirst) return;
      auto& part = parts[static_cast<std::size_t>(f)];
      enumerate_with_first(design, k, f, [&](const BitVec& u, const std::vector<int>& idx) {
        ++part.keys[u.bytes()];
        for (int j : idx) in_subset[static_cast<std::size_t>(j)] = 1;
        for (int i = 0; i < design.n; ++i) {
          if (in_subset[static_cast<std::size_t>(i)]) continue;
          if (design.col_supports[static_cast<std::size_t>(i)].is_subset_of(u)) {
            ++part.disj;
            break;
          }
        }
        for (int j : idx) in_subset[static_cast<std::size_t>(j)] = 0;
        return true;
      });
    }
  };

  const unsigned nthreads = std::max(1u, opts.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::unordered_map<std::string, std::uint64_t> multiplicity;
  std::uint64_t disj = 0;
  for (auto& part : parts) {
    for (auto& [key, cnt] : part.keys) multiplicity[key] += cnt;
    disj += part.disj;
  }
  std::uint64_t sep = 0;
  for (const auto& [key, cnt] : multiplicity)
    if (cnt >= 2) sep += cnt;

  SeparabilityReport rep;
  rep.k = k;
  rep.total_subsets = bounds::binom_exact(design.n, k);
  rep.overlapping_subsets_sep = sep;
  rep.overlapping_subsets_disj = disj;
  rep.epsilon_sep = static_cast<double>(sep) / static_cast<double>(rep.total_subsets);
  rep.epsilon_disj = static_cast<double>(disj) / static_cast<double>(rep.total_subsets);
  return rep;
}

bool is_k_separable(const TestDesign& design, int k, const VerifyOptions& opts) {
  return separability_report(design, k, opts).overlapping_subsets_sep == 0;
}

bool is_k_disjunct(const TestDesign& design, int k, const VerifyOptions& opts) {
  return separability_report(design, k, opts).overlapping_subsets_disj == 0;
}

DecodeResult decode(const TestDesign& design, const SupportSet& outcome, int k,
                    const VerifyOptions& opts) {
  check_k(design, k, /*half=*/false);
  if (outcome.tests() != design.m)
    throw std::invalid_argument("decode: outcome length != m");
  check_guard(design.n, k, opts.guard);

  DecodeResult res;
  enumerate_all(design, k, [&](const BitVec& u, const std::vector<int>& idx) {
    if (u == outcome.bits()) res.candidates.push_back(idx);
    return true;
  });
  res.kind = res.candidates.empty()    ? DecodeResult::Kind::NoMatch
             : res.candidates.size() == 1 ? DecodeResult::Kind::Unique
                                          : DecodeResult::Kind::Ambiguous;
  return res;
}

ExactFraction exact_error_probability(const TestDesign& design, int k,
                                      const VerifyOptions& opts) {
  check_k(design, k, /*half=*/false);
  check_guard(design.n, k, opts.guard);

  std::uint64_t errors = 0;
  std::uint64_t total = 0;
  enumerate_all(design, k, [&](const BitVec& u, const std::vector<int>&) {
    ++total;
    if (count_matching(design, u, k, 2) >= 2) ++errors;
    return true;
  });
  return {errors, total};
}

bool subset_overlaps(const TestDesign& design, std::span<const int> subset,
                     const VerifyOptions& opts) {
  const int k = static_cast<int>(subset.size());
  check_k(design, k, /*half=*/false);
  check_guard(design.n, k, opts.guard);

  std::vector<int> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  const SupportSet target = union_support(design, sorted);

  bool found = false;
  enumerate_all(design, k, [&](const BitVec& u, const std::vector<int>& idx) {
    if (u == target.bits() && idx != sorted) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace asep
