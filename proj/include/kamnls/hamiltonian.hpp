#pragma once

#include <map>

#include "kamnls/multi_index.hpp"
#include "kamnls/scalar.hpp"
#include "kamnls/weight.hpp"

namespace kamnls {

/// Sparse map MonomialKey -> coefficient over the mode window [-M, M].
template <CoefficientScalar S>
class Hamiltonian {
 public:
  using Scalar = S;
  using Traits = ScalarTraits<S>;
  using TermMap = std::map<MonomialKey, S>;

  Hamiltonian() = default;
  Hamiltonian(SigmaWeight w, int window) : weight_(w), window_(window) {}
  /// Adopts a term map; zero coefficients are dropped.
  static Hamiltonian from_terms(SigmaWeight w, int window, TermMap terms);

  const SigmaWeight& weight() const { return weight_; }
  int window() const { return window_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Adds coef to the term at key; a sum of zero removes the term.
  void add(const MonomialKey& key, const S& coef);
  S coefficient(const MonomialKey& key) const;

  Hamiltonian& operator+=(const Hamiltonian& other);
  Hamiltonian& operator-=(const Hamiltonian& other);
  Hamiltonian scaled(const S& factor) const;
  /// Same weight and window, no terms.
  Hamiltonian zero_like() const { return Hamiltonian(weight_, window_); }

  /// Drops terms with |B| < relative * max|B|. Exact coefficients are never pruned.
  std::size_t prune(double relative);

  double max_abs() const;
  int max_degree() const;
  bool conserving() const;

  /// Throws MismatchError unless weight and window agree.
  void check_compatible(const Hamiltonian& other) const;

  friend bool operator==(const Hamiltonian& a, const Hamiltonian& b) {
    return a.window_ == b.window_ && a.weight_ == b.weight_ && a.terms_ == b.terms_;
  }

 private:
  SigmaWeight weight_;
  int window_ = 0;
  TermMap terms_;
};

Hamiltonian<Complex> to_float(const Hamiltonian<ExactComplex>& h);
Hamiltonian<ExactComplex> to_exact(const Hamiltonian<Complex>& h);

extern template class Hamiltonian<Complex>;
extern template class Hamiltonian<ExactComplex>;

}  // namespace kamnls
