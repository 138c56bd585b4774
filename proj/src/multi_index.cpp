#include "kamnls/multi_index.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace kamnls {

MultiIndex::MultiIndex(std::initializer_list<Entry> entries) {
  for (const auto& [mode, e] : entries) add(mode, e);
}

MultiIndex MultiIndex::unit(int mode, int exponent) {
  MultiIndex m;
  m.add(mode, exponent);
  return m;
}

int MultiIndex::operator[](int mode) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), mode,
                             [](const Entry& e, int m) { return e.first < m; });
  return (it != entries_.end() && it->first == mode) ? it->second : 0;
}

void MultiIndex::add(int mode, int delta) {
  if (delta == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), mode,
                             [](const Entry& e, int m) { return e.first < m; });
  if (it != entries_.end() && it->first == mode) {
    it->second += delta;
    if (it->second < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    if (it->second == 0) entries_.erase(it);
    return;
  }
  if (delta < 0) throw std::invalid_argument("MultiIndex: negative exponent");
  entries_.insert(it, {mode, delta});
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& other) {
  if (other.empty()) return *this;
  if (empty()) {
    entries_ = other.entries_;
    return *this;
  }
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  auto i = entries_.begin();
  auto j = other.entries_.begin();
  while (i != entries_.end() || j != other.entries_.end()) {
    if (j == other.entries_.end() || (i != entries_.end() && i->first < j->first)) {
      merged.push_back(*i++);
    } else if (i == entries_.end() || j->first < i->first) {
      merged.push_back(*j++);
    } else {
      merged.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  entries_ = std::move(merged);
  return *this;
}

int MultiIndex::total() const {
  int t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

int MultiIndex::max_abs_mode() const {
  if (entries_.empty()) return -1;
  return std::max(std::abs(entries_.front().first), std::abs(entries_.back().first));
}

std::string MultiIndex::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(entries_[i].first) + ":" + std::to_string(entries_[i].second);
  }
  return s + "}";
}

MultiIndex meet(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex m;
  for (const auto& [mode, e] : a) {
    const int o = b[mode];
    if (o > 0) m.add(mode, std::min(e, o));
  }
  return m;
}

MultiIndex difference(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex d = a;
  for (const auto& [mode, e] : b) d.add(mode, -e);
  return d;
}

long MonomialKey::mass() const { return static_cast<long>(k.total()) - kp.total(); }

long MonomialKey::momentum() const {
  long p = 0;
  for (const auto& [n, e] : k) p += static_cast<long>(n) * e;
  for (const auto& [n, e] : kp) p -= static_cast<long>(n) * e;
  return p;
}

int MonomialKey::n1_star() const {
  return std::max({a.max_abs_mode(), k.max_abs_mode(), kp.max_abs_mode()});
}

bool MonomialKey::disjoint_support() const {
  auto i = k.begin();
  auto j = kp.begin();
  while (i != k.end() && j != kp.end()) {
    if (i->first == j->first) return false;
    if (i->first < j->first) ++i;
    else ++j;
  }
  return true;
}

bool MonomialKey::within(int window) const { return n1_star() <= window; }

std::string MonomialKey::str() const { return "a" + a.str() + " k" + k.str() + " kp" + kp.str(); }

std::strong_ordering operator<=>(const MonomialKey& x, const MonomialKey& y) {
  if (auto c = x.degree() <=> y.degree(); c != 0) return c;
  if (auto c = x.a <=> y.a; c != 0) return c;
  if (auto c = x.k <=> y.k; c != 0) return c;
  return x.kp <=> y.kp;
}

}  // namespace kamnls
