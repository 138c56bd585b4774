#include "kamnls/hamiltonian.hpp"

#include <algorithm>
#include <vector>

#include "kamnls/errors.hpp"

namespace kamnls {

template <CoefficientScalar S>
void Hamiltonian<S>::add(const MonomialKey& key, const S& coef) {
  if (Traits::is_zero(coef)) return;
  if (!key.within(window_)) throw MismatchError("Hamiltonian: key " + key.str() + " outside window");
  auto [it, inserted] = terms_.try_emplace(key, coef);
  if (!inserted) {
    it->second += coef;
    if (Traits::is_zero(it->second)) terms_.erase(it);
  }
}

template <CoefficientScalar S>
Hamiltonian<S> Hamiltonian<S>::from_terms(SigmaWeight w, int window, TermMap terms) {
  std::erase_if(terms, [](const auto& kv) { return Traits::is_zero(kv.second); });
  for (const auto& kv : terms)
    if (!kv.first.within(window)) throw MismatchError("Hamiltonian: key " + kv.first.str() + " outside window");
  Hamiltonian h(w, window);
  h.terms_ = std::move(terms);
  return h;
}

template <CoefficientScalar S>
S Hamiltonian<S>::coefficient(const MonomialKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Traits::zero() : it->second;
}

template <CoefficientScalar S>
void Hamiltonian<S>::check_compatible(const Hamiltonian& other) const {
  if (window_ != other.window_) throw MismatchError("Hamiltonian: window mismatch");
  if (!(weight_ == other.weight_)) throw MismatchError("Hamiltonian: weight mismatch");
}

template <CoefficientScalar S>
Hamiltonian<S>& Hamiltonian<S>::operator+=(const Hamiltonian& other) {
  check_compatible(other);
  for (const auto& [k, c] : other.terms_) add(k, c);
  return *this;
}

template <CoefficientScalar S>
Hamiltonian<S>& Hamiltonian<S>::operator-=(const Hamiltonian& other) {
  check_compatible(other);
  for (const auto& [k, c] : other.terms_) add(k, -c);
  return *this;
}

template <CoefficientScalar S>
Hamiltonian<S> Hamiltonian<S>::scaled(const S& factor) const {
  Hamiltonian out = zero_like();
  if (Traits::is_zero(factor)) return out;
  for (const auto& [k, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), k, c * factor);
  return out;
}

template <CoefficientScalar S>
std::size_t Hamiltonian<S>::prune(double relative) {
  if constexpr (!std::is_same_v<S, Complex>) {
    return 0;
  } else {
    const double cut = relative * max_abs();
    return std::erase_if(terms_, [cut](const auto& kv) { return std::abs(kv.second) < cut; });
  }
}

template <CoefficientScalar S>
double Hamiltonian<S>::max_abs() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, Traits::abs(c));
  return m;
}

template <CoefficientScalar S>
int Hamiltonian<S>::max_degree() const {
  return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
}

template <CoefficientScalar S>
bool Hamiltonian<S>::conserving() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first.conserving(); });
}

template class Hamiltonian<Complex>;
template class Hamiltonian<ExactComplex>;

Hamiltonian<Complex> to_float(const Hamiltonian<ExactComplex>& h) {
  Hamiltonian<Complex> out(h.weight(), h.window());
  for (const auto& [k, c] : h.terms()) out.add(k, ScalarTraits<ExactComplex>::to_complex(c));
  return out;
}

Hamiltonian<ExactComplex> to_exact(const Hamiltonian<Complex>& h) {
  Hamiltonian<ExactComplex> out(h.weight(), h.window());
  for (const auto& [k, c] : h.terms()) out.add(k, ScalarTraits<ExactComplex>::from_complex(c));
  return out;
}

}  // namespace kamnls
