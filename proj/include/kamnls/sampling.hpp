#pragma once

#include <cstdint>
#include <random>

#include "kamnls/hamiltonian.hpp"
#include "kamnls/modes.hpp"

namespace kamnls {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
int uniform_int(Rng& rng, int lo, int hi);
/// Uniform double in [0, 1).
double uniform01(Rng& rng);
double uniform(Rng& rng, double lo, double hi);

struct KeyShape {
  int mode_bound = 4;
  /// total number of q and q̄ factors, at least 2
  int max_factors = 6;
  /// number of distinct I(0) modes
  int max_a_modes = 0;
  int max_a_exponent = 1;
  /// also enforce sum k = sum kp
  bool mass = true;
};

/// Random key with zero momentum (and zero mass when shape.mass).
MonomialKey random_conserving_key(Rng& rng, const KeyShape& shape);

/// Random conserving Hamiltonian with terms drawn from shape; coefficients are dyadic
/// rationals in [-1,1] + i[-1,1] so both backends hold identical values.
template <CoefficientScalar S>
Hamiltonian<S> random_hamiltonian(Rng& rng, const SigmaWeight& w, int window, int terms, const KeyShape& shape);

/// q_n = r_n e^{i theta_n} with |q_n| e^{w(n)} uniform in [0, radius).
SequenceState random_state(Rng& rng, int window, const SigmaWeight& w, double radius);

}  // namespace kamnls
