#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kamnls/algebra.hpp"
#include "kamnls/classify.hpp"
#include "kamnls/divisors.hpp"

namespace kamnls {

struct NormalForm {
  ModeVector vtilde;
  /// Accumulated value of the pure-action resonant terms; never fed back.
  double constant = 0.0;
};

struct ResonantPart {
  double constant = 0.0;
  ModeVector shift;
  /// Largest imaginary part discarded from the constant and the shift.
  double max_imag = 0.0;
};

template <CoefficientScalar S>
ResonantPart resonant_part(const ClassifiedPerturbation<S>& p, const ActionVector& i0);

struct DivisorStats {
  std::size_t solved = 0;
  std::size_t deferred = 0;
  std::size_t resonant = 0;
  /// min |D| over solved keys
  double worst_divisor = 0.0;
  /// gamma * lambda_s
  double divisor_floor = 0.0;
  /// min over solved keys of prod 1/(1 + l_n^2 <n>^4)
  double worst_unit_floor = 0.0;
  /// solved keys whose unit floor is at least lambda_s
  std::size_t unit_floor_above_lambda = 0;
  /// truncation cutoff on sum_{i>=3} w(n_i^*)
  double truncation_threshold = 0.0;
};

template <CoefficientScalar S>
struct HomologicalSolution {
  ClassifiedPerturbation<S> f;
  ClassifiedPerturbation<S> deferred;
  /// the eliminated part of R0 + R1
  ClassifiedPerturbation<S> solved;
  DivisorStats stats;
};

/// F = -i B / D for every eliminable nonresonant key of R0 and R1.
template <CoefficientScalar S>
HomologicalSolution<S> solve_homological(const ClassifiedPerturbation<S>& p, const NormalForm& normal,
                                         const Schedule& sched, double gamma);

struct StepTargets {
  bool r0_contraction = false;
  bool r1_bound = false;
  bool r2_bound = false;
  bool strict_r0 = false;
  bool shift_bound = false;
  bool shift_loose_bound = false;
  bool shift_growth_bound = false;
  bool homological_f0 = false;
  bool homological_f1 = false;
  bool divisor_floor = false;
  bool conserving = false;
  /// the three norm targets that decide ContractFailure
  bool contract() const { return r0_contraction && r1_bound && r2_bound; }
};

struct StepReport {
  int s = 0;
  Schedule schedule;
  Schedule next_schedule;
  ClassNorms before;
  ClassNorms after;
  ClassNorms f_norms;
  DivisorStats divisors;
  ModeVector shift;
  double shift_sup = 0.0;
  double shift_imag = 0.0;
  double constant_increment = 0.0;
  TailEstimate tail_r;
  TailEstimate tail_s;
  BracketStats brackets;
  FlowVerdict flow;
  bool flow_overridden = false;
  std::size_t terms_after = 0;
  StepTargets targets;
};

template <CoefficientScalar S>
struct KamState {
  int s = 0;
  double eps0 = 0.0;
  int window = 0;
  NormalForm normal;
  ClassifiedPerturbation<S> pert;
  Schedule schedule;
  ModeVector v_star;
  std::vector<StepReport> history;
};

/// One step of the iteration. Throws ResonanceError; norm-target failures are flagged in the report.
template <CoefficientScalar S>
std::pair<KamState<S>, StepReport> kam_step(const KamState<S>& state, double gamma, const BracketCaps& caps);

/// sup_n |X_R(q)_n| e^{w(n)} over random phases on the torus |q_n|^2 = I_n(0).
template <CoefficientScalar S>
double torus_residual(const KamState<S>& state, const ActionVector& i0, int samples, std::uint64_t seed = 1);

}  // namespace kamnls
