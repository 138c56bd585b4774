#pragma once

#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "kamnls/weight.hpp"

namespace kamnls {

/// Outcome of one verification suite. Margins are RHS - LHS, in log space for products and
/// exponentials.
struct LemmaVerdict {
  std::string id;
  std::string grid;
  long trials = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string witness;
  bool pass = true;
  std::uint64_t seed = 0;
  /// Run outside the lemma's hypotheses; reported but never gated on.
  bool advisory = false;

  /// Folds one checked case into the verdict.
  void record(double margin, const std::string& what);
};

std::vector<double> default_delta_grid();

/// ln^s(x+y) <= ln^s x + ln^s y / 2 for c(s) <= y <= x; uses the true c(sigma).
LemmaVerdict verify_log_superadditivity(double sigma, long trials, std::uint64_t seed);

/// tame_defect >= 0 on random momentum-conserving keys, modes in [-1000, 1000].
LemmaVerdict verify_tame(const SigmaWeight& w, long trials, std::uint64_t seed);

/// sum |k_n - kp_n| w(n) <= 3 4^s sum_{i>=3} w(n_i) on near-resonant momentum-conserving keys.
LemmaVerdict verify_resonance_bound(const SigmaWeight& w, long trials, std::uint64_t seed);

/// Geometric-sum product bound, the ln^s series bound and the infinite product bound.
LemmaVerdict verify_series_and_products(const SigmaWeight& w, const std::vector<double>& delta_grid);

/// Closed-form caps on x - d x^s, p ln x - d x and the weighted product over a.
LemmaVerdict verify_max_bounds(const SigmaWeight& w, const std::vector<double>& delta_grid, int p, long trials,
                               std::uint64_t seed);

struct EstimateParams {
  double rho = 0.1;
  double delta1 = 0.02;
  double delta2 = 0.02;
  int window = 4;
  int terms = 10;
};

LemmaVerdict verify_bracket_estimate(const SigmaWeight& w, long trials, std::uint64_t seed,
                                     const EstimateParams& params = {});

/// Both directions between the plus-norm and the weighted norm.
LemmaVerdict verify_norm_equivalence(const SigmaWeight& w, long trials, std::uint64_t seed, double rho = 0.1,
                                     double delta = 0.05);

LemmaVerdict verify_vector_field_bound(const SigmaWeight& w, long trials, std::uint64_t seed, double rho = 0.1);

struct SuiteOptions {
  std::vector<double> sigmas{2.1, 2.5, 3.0};
  long trials = 10000;
  /// bracket, norm and vector-field suites
  long algebra_trials = 1000;
  std::uint64_t seed = 1;
  std::optional<double> c_override = std::numbers::e;
  std::vector<std::string> suites;  // empty = all
};

/// Runs the selected suites over every sigma.
std::vector<LemmaVerdict> run_lemma_suites(const SuiteOptions& opts);

const std::vector<std::string>& lemma_suite_names();

}  // namespace kamnls
