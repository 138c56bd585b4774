#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "kamnls/modes.hpp"
#include "kamnls/multi_index.hpp"

namespace kamnls {

inline constexpr double kRho0 = (3.0 - 2.0 * std::numbers::sqrt2) / 100.0;

/// Signed sparse integer vector l over modes, sorted by mode, no zeros.
using ModeIntegers = std::vector<std::pair<int, int>>;

/// k - kp as a signed vector.
ModeIntegers key_difference(const MonomialKey& key);

double nearest_int_dist(double x);

/// gamma * prod 1/(1 + l_n^2 <n>^4) with <n> = max(1, |n|).
double divisor_floor(const ModeIntegers& l, double gamma);

struct DiophantineReport {
  /// min over l of ||sum l_n V_n|| / divisor_floor(l, 1)
  double min_ratio = 0.0;
  ModeIntegers witness;
  std::uint64_t checked_count = 0;
  double gamma = 0.0;
  bool pass = false;
};

/// Exhaustive check of all l != 0 with |l_n| <= height over the window.
DiophantineReport diophantine_verify(const ModeVector& v, double gamma, int window, int height,
                                     std::uint64_t budget = 10'000'000);

/// Fraction of uniform V in [0,1]^{2M+1} failing diophantine_verify at gamma.
double diophantine_measure(double gamma, int window, int height, std::uint64_t samples, std::uint64_t seed,
                           std::uint64_t budget = 10'000'000);

/// sum (k_n - kp_n)(n^2 + vtilde_n)
double divisor(const MonomialKey& key, const ModeVector& vtilde);
mpq_class divisor_exact(const MonomialKey& key, const ModeVector& vtilde);

struct Schedule {
  int s = 0;
  double sigma = 0.0;
  double eps0 = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double eps = 0.0;
  double eps_next = 0.0;
  /// ln eps_s and ln eps_{s+1}; finite when eps underflows.
  double log_eps = 0.0;
  double log_eps_next = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  double d = 0.0;
  double B = 0.0;
  double N = 0.0;
  /// ln exp(B^{1/sigma}) = B^{1/sigma}
  double log_N_star_raw = 0.0;
  long N_star = 0;
  /// 100 B_s (ln B_s)^{1-sigma} <= 0.01 ln(1/eps_s)
  bool small_divisor_budget = false;
};

/// Iteration parameters at step s; N_star is clamped to window when window >= 0.
Schedule schedule(int s, double sigma, double eps0, int window = -1);

/// (2(s+4) ln^2(s+4)/rho0) ln(1/eps_{s+1})
double truncation_threshold(const Schedule& sched, double sigma);

}  // namespace kamnls
