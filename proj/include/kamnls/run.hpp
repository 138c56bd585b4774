#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kamnls/kam_engine.hpp"

namespace kamnls {

/// Parameters of a run; the same document also feeds the dioph and lemmas commands.
struct RunConfig {
  double sigma = 2.5;
  double gamma = 1e-3;
  double eps = 1e-8;
  /// When set, eps is rescaled so the initial ||R0||^+_{rho0} equals this value.
  std::optional<double> target_r0;
  int window = 3;
  int steps = 3;
  int degree_cap = 12;
  int order_cap = 12;
  double drop_threshold = 1e-16;
  /// nullopt selects the true c(sigma).
  std::optional<double> c_override = std::numbers::e;
  std::string backend = "float64";
  bool freeze = true;
  std::optional<std::vector<double>> omega;
  std::uint64_t seed = 1;
  bool screen_omega = true;
  int screen_attempts = 10000;
  double freeze_tol = 1e-13;
  int freeze_max_outer = 10;
  int torus_samples = 100;
  double action_factor = 0.75;
  int threads = 1;
  std::string output;

  int height = 2;
  std::uint64_t dioph_samples = 10000;
  std::vector<double> dioph_gammas{1e-3, 1e-2, 1e-1};

  std::vector<std::string> suites;
  int lemma_trials = 0;

  void validate() const;
  SigmaWeight weight() const;
  BracketCaps caps() const;

  static RunConfig from_json(const nlohmann::json& j);
  /// Every field except output and threads, which do not influence results.
  nlohmann::json to_json() const;
  /// FNV-1a 64 of to_json().dump().
  std::uint64_t hash() const;
};

struct OuterIteration {
  ModeVector v;
  ModeVector vtilde;
  double residual = 0.0;
};

struct RunReport {
  nlohmann::json config;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  double eps0 = 0.0;
  ModeVector omega;
  int omega_draws = 0;
  ActionVector i0;
  bool actions_within_bound = false;
  bool actions_within_band = false;
  ClassNorms initial_norms;
  std::size_t initial_terms = 0;
  std::vector<StepReport> steps;
  std::vector<OuterIteration> outer;
  bool freeze_converged = false;
  ModeVector v_star;
  double freeze_residual = 0.0;
  NormalForm final_normal;
  double torus_residual = 0.0;
  double torus_bound = 0.0;
  /// ok, resonance, contract, divergence, freeze
  std::string status = "ok";
  std::string message;

  int exit_code() const;
};

/// Draws omega uniformly in [0,1]^{2M+1}; with screening, redraws until every conserving
/// l with sum |l_n| <= max_order has |sum l_n (n^2 + omega_n)| >= floor.
std::pair<ModeVector, int> sample_omega(int window, std::uint64_t seed, bool screen, int max_order, double floor,
                                        int attempts);

/// Smallest |sum l_n (n^2 + v_n)| over conserving l != 0 with sum |l_n| <= max_order.
double min_conserving_divisor(const ModeVector& v, int max_order);

struct FreezeResult {
  ModeVector v_star;
  double residual = 0.0;
  bool converged = false;
  std::vector<OuterIteration> iterations;
};

/// Fixed point V <- V + (omega - vtilde_S(V)) over full S-step passes.
FreezeResult freeze_frequencies(const RunConfig& config, const ModeVector& omega, double tol, int max_outer);

/// eps, or the eps that puts the initial ||R0||^+_{rho0} at target_r0.
double resolve_eps(const RunConfig& c);

RunReport run(const RunConfig& config);

}  // namespace kamnls
