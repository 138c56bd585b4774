#include "kamnls/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kamnls {

int uniform_int(Rng& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

double uniform01(Rng& rng) { return std::ldexp(static_cast<double>(rng() >> 11), -53); }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

MonomialKey random_conserving_key(Rng& rng, const KeyShape& shape) {
  if (shape.max_factors < 2) throw std::invalid_argument("random_conserving_key: need at least 2 factors");
  const int b = shape.mode_bound;
  for (;;) {
    MonomialKey key;
    const int factors = uniform_int(rng, 2, shape.max_factors);
    long momentum = 0;
    int sign_last = 1;
    if (shape.mass) {
      if (factors % 2) continue;
      const int half = factors / 2;
      for (int i = 0; i < half; ++i) {
        const int n = uniform_int(rng, -b, b);
        key.k.add(n, 1);
        momentum += n;
      }
      for (int i = 0; i + 1 < half; ++i) {
        const int n = uniform_int(rng, -b, b);
        key.kp.add(n, 1);
        momentum -= n;
      }
      sign_last = -1;
    } else {
      for (int i = 0; i + 1 < factors; ++i) {
        const int n = uniform_int(rng, -b, b);
        if (rng() & 1) {
          key.k.add(n, 1);
          momentum += n;
        } else {
          key.kp.add(n, 1);
          momentum -= n;
        }
      }
      sign_last = (rng() & 1) ? 1 : -1;
    }
    // the last factor closes the momentum balance
    const long last = -sign_last * momentum;
    if (last < -b || last > b) continue;
    if (sign_last > 0) key.k.add(static_cast<int>(last), 1);
    else key.kp.add(static_cast<int>(last), 1);
    const int na = shape.max_a_modes > 0 ? uniform_int(rng, 0, shape.max_a_modes) : 0;
    for (int i = 0; i < na; ++i) key.a.add(uniform_int(rng, -b, b), uniform_int(rng, 1, shape.max_a_exponent));
    return key;
  }
}

template <CoefficientScalar S>
Hamiltonian<S> random_hamiltonian(Rng& rng, const SigmaWeight& w, int window, int terms, const KeyShape& shape) {
  using Traits = ScalarTraits<S>;
  Hamiltonian<S> h(w, window);
  for (int t = 0; t < terms; ++t) {
    const double re = uniform_int(rng, -1024, 1024) / 1024.0;
    const double im = uniform_int(rng, -1024, 1024) / 1024.0;
    h.add(random_conserving_key(rng, shape), Traits::from_complex({re, im}));
  }
  return h;
}

template Hamiltonian<Complex> random_hamiltonian(Rng&, const SigmaWeight&, int, int, const KeyShape&);
template Hamiltonian<ExactComplex> random_hamiltonian(Rng&, const SigmaWeight&, int, int, const KeyShape&);

SequenceState random_state(Rng& rng, int window, const SigmaWeight& w, double radius) {
  SequenceState q(window);
  for (int n = -window; n <= window; ++n)
    q(n) = std::polar(uniform(rng, 0.0, radius) * std::exp(-w(n)), 2.0 * std::numbers::pi * uniform01(rng));
  return q;
}

}  // namespace kamnls
