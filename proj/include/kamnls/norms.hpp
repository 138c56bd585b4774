#pragma once

#include <span>
#include <vector>

#include "kamnls/hamiltonian.hpp"

namespace kamnls {

/// Decreasing rearrangement of the modes of a key: (|n|, multiplicity 2a_n + k_n + kp_n).
struct Rearrangement {
  std::vector<std::pair<int, int>> entries;

  /// n_i^* for i >= 1, or -1 past the end.
  int n_star(int i) const;
  /// sum_{i >= 3} w(n_i^*)
  double tail_sum(const SigmaWeight& w) const;
  /// sum over all n_i^* of w(n_i^*)
  double total(const SigmaWeight& w) const;
  int count() const;
};

Rearrangement rearrangement(const MonomialKey& key);
/// Rearrangement with extra modes each counted twice (explicit J factors).
Rearrangement rearrangement(const MonomialKey& key, std::span<const int> j_modes);

/// sum (2a+k+kp) w(n) - 2 w(n_1^*), with J modes counted twice.
double weight_exponent(const MonomialKey& key, const SigmaWeight& w, std::span<const int> j_modes = {});

/// sup |B| exp(-rho * weight_exponent).
template <CoefficientScalar S>
double weighted_norm(const Hamiltonian<S>& h, double rho);

/// weight_exponent - (1/2) sum_{i>=3} w(n_i^*); requires zero momentum.
double tame_defect(const MonomialKey& key, const SigmaWeight& w);

}  // namespace kamnls
