#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kamnls {

/// Sparse exponent vector over integer modes, sorted by mode, no zero entries.
class MultiIndex {
 public:
  using Entry = std::pair<int, int>;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<Entry> entries);

  static MultiIndex unit(int mode, int exponent = 1);

  int operator[](int mode) const;
  /// Adds delta to the exponent at mode; throws if the result is negative.
  void add(int mode, int delta);
  MultiIndex& operator+=(const MultiIndex& other);

  int total() const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  int min_mode() const { return entries_.front().first; }
  int max_mode() const { return entries_.back().first; }
  /// Largest |n| in the support, -1 when empty.
  int max_abs_mode() const;

  std::string str() const;

  friend MultiIndex operator+(MultiIndex lhs, const MultiIndex& rhs) { return lhs += rhs; }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<Entry> entries_;
};

/// Elementwise minimum of two multi-indices.
MultiIndex meet(const MultiIndex& a, const MultiIndex& b);
/// a - b; requires b <= a elementwise.
MultiIndex difference(const MultiIndex& a, const MultiIndex& b);

/// Monomial prod I_n(0)^{a_n} q_n^{k_n} conj(q_n)^{kp_n}.
struct MonomialKey {
  MultiIndex a;
  MultiIndex k;
  MultiIndex kp;

  int degree() const { return 2 * a.total() + k.total() + kp.total(); }
  long mass() const;
  long momentum() const;
  bool conserving() const { return mass() == 0 && momentum() == 0; }
  /// n_1^*: largest |n| with a_n + k_n + kp_n != 0, -1 when the key is empty.
  int n1_star() const;
  bool empty() const { return a.empty() && k.empty() && kp.empty(); }
  /// k and kp share no mode.
  bool disjoint_support() const;
  /// Largest |n| over all three parts; checks window membership.
  bool within(int window) const;

  std::string str() const;

  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
};

/// Canonical order: degree first, then a, k, kp lexicographically.
std::strong_ordering operator<=>(const MonomialKey& x, const MonomialKey& y);

}  // namespace kamnls
