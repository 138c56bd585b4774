#include "kamnls/classify.hpp"

#include <array>
#include <cmath>

#include "kamnls/errors.hpp"
#include "kamnls/norms.hpp"

namespace kamnls {

namespace {

template <class Map, class K, class S>
void merge_into(Map& map, K&& key, const S& c) {
  using Traits = ScalarTraits<S>;
  if (Traits::is_zero(c)) return;
  auto [it, inserted] = map.try_emplace(std::forward<K>(key), c);
  if (!inserted) {
    it->second += c;
    if (Traits::is_zero(it->second)) map.erase(it);
  }
}

template <class Map>
std::size_t prune_map(Map& map, double relative) {
  double top = 0.0;
  for (const auto& kv : map) top = std::max(top, std::abs(kv.second));
  const double cut = relative * top;
  return std::erase_if(map, [cut](const auto& kv) { return std::abs(kv.second) < cut; });
}

MonomialKey shifted(const MonomialKey& key, const MultiIndex& da, const MultiIndex& dq) {
  return {key.a + da, key.k + dq, key.kp + dq};
}

}  // namespace

template <CoefficientScalar S>
void ClassifiedPerturbation<S>::add_r0(const MonomialKey& key, const S& c) {
  merge_into(r0, key, c);
}

template <CoefficientScalar S>
void ClassifiedPerturbation<S>::add_r1(int j, const MonomialKey& key, const S& c) {
  merge_into(r1, R1Key{j, key}, c);
}

template <CoefficientScalar S>
void ClassifiedPerturbation<S>::add_r2(int j1, int j2, const MonomialKey& key, const S& c) {
  if (j1 > j2) std::swap(j1, j2);
  merge_into(r2, R2Key{j1, j2, key}, c);
}

template <CoefficientScalar S>
ClassifiedPerturbation<S>& ClassifiedPerturbation<S>::operator+=(const ClassifiedPerturbation& other) {
  if (window != other.window) throw MismatchError("ClassifiedPerturbation: window mismatch");
  if (!(weight == other.weight)) throw MismatchError("ClassifiedPerturbation: weight mismatch");
  for (const auto& [k, c] : other.r0) merge_into(r0, k, c);
  for (const auto& [k, c] : other.r1) merge_into(r1, k, c);
  for (const auto& [k, c] : other.r2) merge_into(r2, k, c);
  return *this;
}

template <CoefficientScalar S>
std::size_t ClassifiedPerturbation<S>::prune(double relative) {
  if constexpr (!std::is_same_v<S, Complex>) {
    return 0;
  } else {
    return prune_map(r0, relative) + prune_map(r1, relative) + prune_map(r2, relative);
  }
}

template <CoefficientScalar S>
bool ClassifiedPerturbation<S>::conserving() const {
  for (const auto& kv : r0)
    if (!kv.first.conserving()) return false;
  for (const auto& kv : r1)
    if (!kv.first.key.conserving()) return false;
  for (const auto& kv : r2)
    if (!kv.first.key.conserving()) return false;
  return true;
}

template <CoefficientScalar S>
ClassNorms class_norms(const ClassifiedPerturbation<S>& p, double rho) {
  if (rho < 0.0) throw DomainError("plus_norm: rho must be non-negative");
  using Traits = ScalarTraits<S>;
  ClassNorms n;
  for (const auto& [key, c] : p.r0)
    n.r0 = std::max(n.r0, Traits::abs(c) * std::exp(-rho * weight_exponent(key, p.weight)));
  for (const auto& [rk, c] : p.r1) {
    const std::array<int, 1> j{rk.j};
    n.r1 = std::max(n.r1, Traits::abs(c) * std::exp(-rho * weight_exponent(rk.key, p.weight, j)));
  }
  for (const auto& [rk, c] : p.r2) {
    const std::array<int, 2> j{rk.j1, rk.j2};
    n.r2 = std::max(n.r2, Traits::abs(c) * std::exp(-rho * weight_exponent(rk.key, p.weight, j)));
  }
  return n;
}

template <CoefficientScalar S>
ClassifiedPerturbation<S> classify(const Hamiltonian<S>& h, const ActionVector& i0) {
  using Traits = ScalarTraits<S>;
  ClassifiedPerturbation<S> p(h.weight(), h.window(), i0);
  for (const auto& [key, coef] : h.terms()) {
    const MultiIndex b = meet(key.k, key.kp);
    const MultiIndex l = difference(key.k, b);
    const MultiIndex lp = difference(key.kp, b);
    const MonomialKey base{key.a, l, lp};
    p.add_r0({key.a + b, l, lp}, coef);
    if (b.empty()) continue;

    const auto modes = b.entries();
    const std::size_t r = modes.size();
    for (const auto& [m, bm] : modes) {
      MultiIndex da = b;
      da.add(m, -1);
      p.add_r1(m, {key.a + da, l, lp}, Traits::scale(coef, bm));
    }

    // prefix[i] = sum_{n < m_i} b_n e_n, suffix[i] = sum_{n > m_i} b_n e_n
    std::vector<MultiIndex> prefix(r + 1), suffix(r + 1);
    for (std::size_t i = 0; i < r; ++i) {
      prefix[i + 1] = prefix[i];
      prefix[i + 1].add(modes[i].first, modes[i].second);
    }
    for (std::size_t i = r; i-- > 0;) {
      suffix[i] = suffix[i + 1];
      suffix[i].add(modes[i].first, modes[i].second);
    }

    for (std::size_t i = 0; i < r; ++i) {
      const auto [m, bm] = modes[i];
      for (int rr = 0; rr + 2 <= bm; ++rr) {
        MultiIndex da = prefix[i];
        da.add(m, rr);
        MultiIndex dq = suffix[i + 1];
        dq.add(m, bm - 2 - rr);
        p.add_r2(m, m, shifted(base, da, dq), Traits::scale(coef, rr + 1));
      }
    }

    for (std::size_t i = 0; i < r; ++i) {
      const auto [m1, b1] = modes[i];
      const S c1 = Traits::scale(coef, b1);
      for (std::size_t j = i + 1; j < r; ++j) {
        const auto [m2, b2] = modes[j];
        // all of b below m2 except one power at m1
        MultiIndex below = prefix[j];
        below.add(m1, -1);
        for (int rr = 0; rr < b2; ++rr) {
          MultiIndex da = below;
          da.add(m2, rr);
          MultiIndex dq = suffix[j + 1];
          dq.add(m2, b2 - 1 - rr);
          p.add_r2(m1, m2, shifted(base, da, dq), c1);
        }
      }
    }
  }
  return p;
}

template <CoefficientScalar S>
Hamiltonian<S> reconstruct(const ClassifiedPerturbation<S>& p) {
  Hamiltonian<S> h(p.weight, p.window);
  for (const auto& [key, c] : p.r0) h.add(key, c);
  for (const auto& [rk, c] : p.r1) {
    const MultiIndex e = MultiIndex::unit(rk.j);
    h.add(shifted(rk.key, {}, e), c);
    h.add(shifted(rk.key, e, {}), -c);
  }
  for (const auto& [rk, c] : p.r2) {
    const MultiIndex e1 = MultiIndex::unit(rk.j1);
    const MultiIndex e2 = MultiIndex::unit(rk.j2);
    h.add(shifted(rk.key, {}, e1 + e2), c);
    h.add(shifted(rk.key, e2, e1), -c);
    h.add(shifted(rk.key, e1, e2), -c);
    h.add(shifted(rk.key, e1 + e2, {}), c);
  }
  return h;
}

template struct ClassifiedPerturbation<Complex>;
template struct ClassifiedPerturbation<ExactComplex>;
template ClassNorms class_norms(const ClassifiedPerturbation<Complex>&, double);
template ClassNorms class_norms(const ClassifiedPerturbation<ExactComplex>&, double);
template ClassifiedPerturbation<Complex> classify(const Hamiltonian<Complex>&, const ActionVector&);
template ClassifiedPerturbation<ExactComplex> classify(const Hamiltonian<ExactComplex>&, const ActionVector&);
template Hamiltonian<Complex> reconstruct(const ClassifiedPerturbation<Complex>&);
template Hamiltonian<ExactComplex> reconstruct(const ClassifiedPerturbation<ExactComplex>&);

}  // namespace kamnls
