#include "asep/design.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "asep/bounds.hpp"

namespace asep {

TestDesign TestDesign::from_rows(int n, std::vector<BitVec> rows) {
  if (n < 1) throw std::invalid_argument("TestDesign: need n >= 1");
  if (rows.empty()) throw std::invalid_argument("TestDesign: need m >= 1");
  const int m = static_cast<int>(rows.size());
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("TestDesign: row length != n");

  TestDesign d;
  d.n = n;
  d.m = m;
  d.rows = std::move(rows);
  d.col_supports.assign(static_cast<std::size_t>(n), BitVec(m));
  for (int t = 0; t < m; ++t)
    for (int i = 0; i < n; ++i)
      if (d.rows[static_cast<std::size_t>(t)].test(i))
        d.col_supports[static_cast<std::size_t>(i)].set(t);
  return d;
}

TestDesign TestDesign::identity(int n) {
  std::vector<BitVec> rows(static_cast<std::size_t>(n), BitVec(n));
  for (int t = 0; t < n; ++t) rows[static_cast<std::size_t>(t)].set(t);
  return from_rows(n, std::move(rows));
}

bool transpose_check(const TestDesign& design) {
  if (design.m != static_cast<int>(design.rows.size())) return false;
  if (design.n != static_cast<int>(design.col_supports.size())) return false;
  for (int i = 0; i < design.n; ++i) {
    const BitVec& s = design.col_supports[static_cast<std::size_t>(i)];
    if (s.size() != design.m) return false;
    for (int t = 0; t < design.m; ++t)
      if (s.test(t) != design.rows[static_cast<std::size_t>(t)].test(i)) return false;
  }
  return true;
}

SupportSet union_support(const TestDesign& design, std::span<const int> items) {
  BitVec u(design.m);
  for (int i : items) {
    if (i < 0 || i >= design.n)
      throw std::out_of_range("union_support: column index out of range");
    u |= design.col_supports[static_cast<std::size_t>(i)];
  }
  return SupportSet(std::move(u));
}

namespace {

void validate_params(int n, int k, double alpha, double delta) {
  if (k < 1) throw std::invalid_argument("DesignParams: need k >= 1");
  if (2 * k > n) throw std::invalid_argument("DesignParams: need k <= n/2");
  if (!(delta > 0)) throw std::invalid_argument("DesignParams: need delta > 0");
  constexpr double ln2 = 0.6931471805599453;
  if (!(alpha >= ln2 - 1e-12 && alpha <= 1.0 + 1e-12))
    throw std::invalid_argument("DesignParams: need alpha in [ln 2, 1]");
}

}  // namespace

DesignParams DesignParams::optimized(int n, int k, double delta, std::uint64_t seed) {
  if (k < 1 || 2 * k > n)
    throw std::invalid_argument("DesignParams: need 1 <= k <= n/2");
  return with_alpha(n, k, bounds::M_opt(n, k).alpha, delta, seed);
}

DesignParams DesignParams::with_alpha(int n, int k, double alpha, double delta,
                                      std::uint64_t seed) {
  validate_params(n, k, alpha, delta);
  DesignParams p;
  p.n = n;
  p.k = k;
  p.alpha = alpha;
  p.delta = delta;
  p.seed = seed;
  return p;
}

double DesignParams::p() const { return -std::expm1(-alpha / k); }

int DesignParams::rows() const {
  return static_cast<int>(std::ceil((1.0 + delta) * bounds::M_opt(n, k).value));
}

void write_design(std::ostream& os, const TestDesign& design) {
  os << "asmat v1\n";
  os << "n=" << design.n << " m=" << design.m << "\n";
  for (const auto& row : design.rows) os << row.to01() << "\n";
}

TestDesign read_design(std::istream& is) {
  std::string line;
  int lineno = 1;
  if (!std::getline(is, line)) throw ParseError(1, "missing header");
  if (line != "asmat v1") throw ParseError(1, "expected 'asmat v1'");

  ++lineno;
  if (!std::getline(is, line)) throw ParseError(2, "missing dimensions");
  int n = 0, m = 0;
  {
    std::istringstream dims(line);
    char c0 = 0, c1 = 0, c2 = 0, c3 = 0;
    if (!(dims >> c0 >> c1 >> n) || c0 != 'n' || c1 != '=' || n < 1)
      throw ParseError(2, "expected 'n=<n> m=<m>'");
    if (!(dims >> c2 >> c3 >> m) || c2 != 'm' || c3 != '=' || m < 1)
      throw ParseError(2, "expected 'n=<n> m=<m>'");
    // canonical form only: no extra tokens, padding, or trailing whitespace
    if (line != "n=" + std::to_string(n) + " m=" + std::to_string(m))
      throw ParseError(2, "expected 'n=<n> m=<m>'");
  }

  std::vector<BitVec> rows;
  rows.reserve(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    ++lineno;
    if (!std::getline(is, line))
      throw ParseError(lineno, "expected " + std::to_string(m) + " matrix rows, got " +
                                   std::to_string(t));
    if (static_cast<int>(line.size()) != n)
      throw ParseError(lineno, "row has " + std::to_string(line.size()) +
                                   " characters, expected " + std::to_string(n));
    try {
      rows.push_back(BitVec::from01(line));
    } catch (const std::invalid_argument&) {
      throw ParseError(lineno, "character outside {0,1}");
    }
  }
  ++lineno;
  if (std::getline(is, line) && !line.empty())
    throw ParseError(lineno, "unexpected content after last row");
  return TestDesign::from_rows(n, std::move(rows));
}

void save_design(const std::filesystem::path& path, const TestDesign& design) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  write_design(os, design);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

TestDesign load_design(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  return read_design(is);
}

}  // namespace asep
