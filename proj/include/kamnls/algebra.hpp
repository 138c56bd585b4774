#pragma once

#include <cstddef>
#include <utility>

#include "kamnls/hamiltonian.hpp"
#include "kamnls/modes.hpp"

namespace kamnls {

struct BracketCaps {
  int degree_cap = 12;
  int order_cap = 12;
  /// Relative to the largest coefficient of each result.
  double drop_threshold = 1e-16;
  int threads = 1;

  void validate() const;
};

/// Accumulated over every bracket a call performs.
struct BracketStats {
  std::size_t products = 0;
  std::size_t dropped_terms = 0;
  /// sum |B1 B2| over monomial pairs skipped by the degree cap.
  double dropped_mass = 0.0;
  std::size_t pruned_terms = 0;

  BracketStats& operator+=(const BracketStats& o);
};

/// {A,B} = i sum_j (dA/dq_j dB/dq̄_j - dA/dq̄_j dB/dq_j), truncated at caps.degree_cap.
template <CoefficientScalar S>
Hamiltonian<S> poisson_bracket(const Hamiltonian<S>& a, const Hamiltonian<S>& b, const BracketCaps& caps,
                               BracketStats* stats = nullptr);

struct TailEstimate {
  double last_term_norm = 0.0;
  double geometric_ratio = 0.0;
  bool converged = true;
  int orders = 0;
};

/// sum_{n=1}^{K} ad_F^n H / (n + shift)!, where ad_F H = {H, F}.
template <CoefficientScalar S>
std::pair<Hamiltonian<S>, TailEstimate> lie_tail(const Hamiltonian<S>& h, const Hamiltonian<S>& f,
                                                 const BracketCaps& caps, int shift = 0,
                                                 BracketStats* stats = nullptr);

/// H o Phi_F^1 = sum_{n=0}^{K} ad_F^n H / n!.
template <CoefficientScalar S>
std::pair<Hamiltonian<S>, TailEstimate> lie_transform(const Hamiltonian<S>& h, const Hamiltonian<S>& f,
                                                      const BracketCaps& caps, BracketStats* stats = nullptr);

struct FlowVerdict {
  bool pass = true;
  /// ln of (2e/delta) exp{(2000/delta) exp{(200/delta)^{1/(sigma-1)}}} ||F||_{rho-delta}
  double log_lhs = 0.0;
  double lhs = 0.0;
};

/// Smallness test for the time-1 flow; log_norm_f = ln ||F||_{rho-delta}.
FlowVerdict flow_guard_log(double log_norm_f, double sigma, double rho, double delta);

template <CoefficientScalar S>
FlowVerdict flow_guard(const Hamiltonian<S>& f, double rho, double delta);

/// i dH/dq̄_n for every mode of the window.
template <CoefficientScalar S>
SequenceState vector_field(const Hamiltonian<S>& h, const SequenceState& q, const ActionVector& i0);

template <CoefficientScalar S>
Complex evaluate(const Hamiltonian<S>& h, const SequenceState& q, const ActionVector& i0);

/// sum (n^2 + V_n)|q_n|^2 + eps sum over ordered sextuples with n1-n2+n3-n4+n5-n6 = 0.
template <CoefficientScalar S>
Hamiltonian<S> build_nls(int window, double eps, const ModeVector& v, const SigmaWeight& w);

/// sum (n^2 + vtilde_n)|q_n|^2
template <CoefficientScalar S>
Hamiltonian<S> normal_form_hamiltonian(const ModeVector& vtilde, const SigmaWeight& w);

/// Splits off the |q_n|^2 terms: returns (V with n^2 removed, remainder).
template <CoefficientScalar S>
std::pair<ModeVector, Hamiltonian<S>> split_quadratic(const Hamiltonian<S>& h);

}  // namespace kamnls
