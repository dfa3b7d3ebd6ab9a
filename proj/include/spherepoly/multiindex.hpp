#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherepoly {

/// Exponent vector in N_0^d. Ordered by shortlex: total degree first, then
/// lexicographically with larger leading entries first, so that for d = 2 the
/// sequence reads (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t d) : entries_(d, 0) {
    if (d == 0) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  }
  MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {
    if (entries_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  }
  explicit MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  }

  std::size_t dim() const { return entries_.size(); }
  unsigned operator[](std::size_t j) const { return entries_[j]; }
  unsigned& operator[](std::size_t j) { return entries_[j]; }
  const std::vector<unsigned>& entries() const { return entries_; }

  /// |a| = sum of entries
  unsigned length() const {
    unsigned n = 0;
    for (unsigned e : entries_) n += e;
    return n;
  }

  bool is_zero() const { return length() == 0; }

  /// Unit vector e_j (0-based j).
  static MultiIndex unit(std::size_t d, std::size_t j) {
    MultiIndex e(d);
    e.entries_.at(j) = 1;
    return e;
  }

  /// alpha(n) = n e_d, the last index of length n.
  static MultiIndex level_last(std::size_t d, unsigned n) {
    MultiIndex a(d);
    a.entries_.back() = n;
    return a;
  }

  MultiIndex operator+(const MultiIndex& other) const {
    check_dim(other);
    MultiIndex r = *this;
    for (std::size_t j = 0; j < dim(); ++j) r.entries_[j] += other.entries_[j];
    return r;
  }

  bool operator==(const MultiIndex& other) const = default;
  std::strong_ordering operator<=>(const MultiIndex& other) const;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < entries_.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(entries_[j]);
    }
    return s + ")";
  }

  void check_dim(const MultiIndex& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  }

 private:
  std::vector<unsigned> entries_;
};

/// Binomial coefficient C(n, k) in 64-bit arithmetic; throws on overflow.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r holds C(n - k + i - 1, i - 1); the product below is divisible by i
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) throw std::overflow_error("binomial: overflow");
  }
  return static_cast<std::uint64_t>(r);
}

/// Number of multi-indices in N_0^d with length exactly n.
inline std::uint64_t level_size(std::size_t d, unsigned n) { return binomial(n + d - 1, d - 1); }

/// Number of multi-indices with length < n, i.e. the rank of n e_1.
inline std::uint64_t level_offset(std::size_t d, unsigned n) { return binomial(n + d - 1, d); }

/// 0-based shortlex position.
inline std::uint64_t shortlex_rank(const MultiIndex& a) {
  const std::size_t d = a.dim();
  unsigned remaining = a.length();
  std::uint64_t r = level_offset(d, remaining);
  // Within a level, count indices whose first differing entry is larger.
  for (std::size_t j = 0; j + 1 < d; ++j) {
    const std::size_t tail = d - j - 1;  // entries after position j
    for (unsigned t = a[j] + 1; t <= remaining; ++t) r += binomial(remaining - t + tail - 1, tail - 1);
    remaining -= a[j];
  }
  return r;
}

inline MultiIndex shortlex_unrank(std::uint64_t n, std::size_t d) {
  if (d == 0) throw std::invalid_argument("shortlex_unrank: dimension must be >= 1");
  unsigned level = 0;
  while (level_offset(d, level + 1) <= n) ++level;
  std::uint64_t offset = n - level_offset(d, level);
  MultiIndex a(d);
  unsigned remaining = level;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    const std::size_t tail = d - j - 1;
    // Candidate values for entry j run from `remaining` down to 0.
    unsigned t = remaining;
    for (;; --t) {
      const std::uint64_t block = binomial(remaining - t + tail - 1, tail - 1);
      if (offset < block) break;
      offset -= block;
    }
    a[j] = t;
    remaining -= t;
  }
  a[d - 1] = remaining;
  return a;
}

inline std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  check_dim(other);
  const unsigned la = length(), lb = other.length();
  if (la != lb) return la <=> lb;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (entries_[j] != other.entries_[j]) return other.entries_[j] <=> entries_[j];
  }
  return std::strong_ordering::equal;
}

inline std::strong_ordering compare(const MultiIndex& a, const MultiIndex& b) { return a <=> b; }

inline MultiIndex succ(const MultiIndex& a) { return shortlex_unrank(shortlex_rank(a) + 1, a.dim()); }

inline MultiIndex prec(const MultiIndex& a) {
  if (a.is_zero()) throw std::domain_error("prec: the zero index has no predecessor");
  return shortlex_unrank(shortlex_rank(a) - 1, a.dim());
}

/// Shortlex rank of alpha(n) = n e_d.
inline std::uint64_t level_last_rank(std::size_t d, unsigned n) { return level_offset(d, n + 1) - 1; }

/// Length of the multi-index at shortlex position r.
inline unsigned level_of_rank(std::uint64_t r, std::size_t d) {
  unsigned level = 0;
  while (level_offset(d, level + 1) <= r) ++level;
  return level;
}

/// All multi-indices of ranks 0..N, in order.
inline std::vector<MultiIndex> shortlex_range(std::size_t d, std::uint64_t N) {
  std::vector<MultiIndex> out;
  out.reserve(N + 1);
  MultiIndex a(d);
  for (std::uint64_t r = 0; r <= N; ++r) {
    out.push_back(a);
    if (r < N) a = succ(a);
  }
  return out;
}

}  // namespace spherepoly
