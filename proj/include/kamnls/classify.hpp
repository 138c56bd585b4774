#pragma once

#include <algorithm>
#include <compare>
#include <map>

#include "kamnls/hamiltonian.hpp"
#include "kamnls/modes.hpp"

namespace kamnls {

struct R1Key {
  int j;
  MonomialKey key;
  friend bool operator==(const R1Key&, const R1Key&) = default;
  friend std::strong_ordering operator<=>(const R1Key& x, const R1Key& y) {
    if (auto c = x.key <=> y.key; c != 0) return c;
    return x.j <=> y.j;
  }
};

/// j1 <= j2.
struct R2Key {
  int j1;
  int j2;
  MonomialKey key;
  friend bool operator==(const R2Key&, const R2Key&) = default;
  friend std::strong_ordering operator<=>(const R2Key& x, const R2Key& y) {
    if (auto c = x.key <=> y.key; c != 0) return c;
    if (auto c = x.j1 <=> y.j1; c != 0) return c;
    return x.j2 <=> y.j2;
  }
};

/// Split of a perturbation by the degree of its explicit J_n = |q_n|^2 - I_n(0) factors.
template <CoefficientScalar S>
struct ClassifiedPerturbation {
  using Traits = ScalarTraits<S>;

  SigmaWeight weight;
  int window = 0;
  std::map<MonomialKey, S> r0;
  std::map<R1Key, S> r1;
  std::map<R2Key, S> r2;
  ActionVector i0;

  ClassifiedPerturbation() = default;
  ClassifiedPerturbation(SigmaWeight w, int window, ActionVector i0)
      : weight(w), window(window), i0(std::move(i0)) {}

  ClassifiedPerturbation zero_like() const { return {weight, window, i0}; }

  void add_r0(const MonomialKey& key, const S& c);
  void add_r1(int j, const MonomialKey& key, const S& c);
  void add_r2(int j1, int j2, const MonomialKey& key, const S& c);

  bool empty() const { return r0.empty() && r1.empty() && r2.empty(); }
  std::size_t size() const { return r0.size() + r1.size() + r2.size(); }

  ClassifiedPerturbation& operator+=(const ClassifiedPerturbation& other);
  /// Drops class-relative small coefficients in each class separately.
  std::size_t prune(double relative);

  /// Every key in every class is mass- and momentum-conserving.
  bool conserving() const;
};

struct ClassNorms {
  double r0 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double max() const { return std::max({r0, r1, r2}); }
};

template <CoefficientScalar S>
ClassNorms class_norms(const ClassifiedPerturbation<S>& p, double rho);

template <CoefficientScalar S>
double plus_norm(const ClassifiedPerturbation<S>& p, double rho) {
  return class_norms(p, rho).max();
}

template <CoefficientScalar S>
ClassifiedPerturbation<S> classify(const Hamiltonian<S>& h, const ActionVector& i0);

template <CoefficientScalar S>
Hamiltonian<S> reconstruct(const ClassifiedPerturbation<S>& p);

}  // namespace kamnls
