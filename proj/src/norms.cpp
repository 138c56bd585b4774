#include "kamnls/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "kamnls/errors.hpp"

namespace kamnls {

namespace {

void accumulate(std::vector<std::pair<int, int>>& acc, int n, int mult) {
  const int m = std::abs(n);
  for (auto& e : acc) {
    if (e.first == m) {
      e.second += mult;
      return;
    }
  }
  acc.emplace_back(m, mult);
}

}  // namespace

int Rearrangement::n_star(int i) const {
  int seen = 0;
  for (const auto& [m, mult] : entries) {
    seen += mult;
    if (seen >= i) return m;
  }
  return -1;
}

int Rearrangement::count() const {
  int c = 0;
  for (const auto& e : entries) c += e.second;
  return c;
}

double Rearrangement::total(const SigmaWeight& w) const {
  double s = 0.0;
  for (const auto& [m, mult] : entries) s += mult * w(m);
  return s;
}

double Rearrangement::tail_sum(const SigmaWeight& w) const {
  double s = 0.0;
  int skipped = 0;
  for (const auto& [m, mult] : entries) {
    const int drop = std::min(mult, 2 - skipped);
    skipped += drop;
    s += (mult - drop) * w(m);
  }
  return s;
}

Rearrangement rearrangement(const MonomialKey& key, std::span<const int> j_modes) {
  Rearrangement r;
  for (const auto& [n, e] : key.a) accumulate(r.entries, n, 2 * e);
  for (const auto& [n, e] : key.k) accumulate(r.entries, n, e);
  for (const auto& [n, e] : key.kp) accumulate(r.entries, n, e);
  for (int j : j_modes) accumulate(r.entries, j, 2);
  std::sort(r.entries.begin(), r.entries.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  return r;
}

Rearrangement rearrangement(const MonomialKey& key) { return rearrangement(key, {}); }

double weight_exponent(const MonomialKey& key, const SigmaWeight& w, std::span<const int> j_modes) {
  const Rearrangement r = rearrangement(key, j_modes);
  if (r.entries.empty()) return 0.0;
  return r.total(w) - 2.0 * w(r.entries.front().first);
}

template <CoefficientScalar S>
double weighted_norm(const Hamiltonian<S>& h, double rho) {
  if (rho < 0.0) throw DomainError("weighted_norm: rho must be non-negative");
  double norm = 0.0;
  for (const auto& [key, c] : h.terms())
    norm = std::max(norm, ScalarTraits<S>::abs(c) * std::exp(-rho * weight_exponent(key, h.weight())));
  return norm;
}

template double weighted_norm(const Hamiltonian<Complex>&, double);
template double weighted_norm(const Hamiltonian<ExactComplex>&, double);

double tame_defect(const MonomialKey& key, const SigmaWeight& w) {
  if (key.momentum() != 0) throw DomainError("tame_defect: key " + key.str() + " has nonzero momentum");
  const Rearrangement r = rearrangement(key);
  if (r.entries.empty()) return 0.0;
  return r.total(w) - 2.0 * w(r.entries.front().first) - 0.5 * r.tail_sum(w);
}

}  // namespace kamnls
