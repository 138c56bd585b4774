#include "kamnls/kam_engine.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "kamnls/errors.hpp"
#include "kamnls/norms.hpp"

namespace kamnls {

namespace {

double action_product(const MultiIndex& a, const ActionVector& i0) {
  double v = 1.0;
  for (const auto& [n, e] : a) v *= std::pow(i0.at(n), e);
  return v;
}

double unit_floor(const ModeIntegers& l) {
  double f = 1.0;
  for (const auto& [n, ln] : l) {
    const double b = std::max(1.0, std::abs(static_cast<double>(n)));
    f /= 1.0 + static_cast<double>(ln) * ln * b * b * b * b;
  }
  return f;
}

template <class S>
struct DivisorValue;

template <>
struct DivisorValue<Complex> {
  static double get(const MonomialKey& key, const ModeVector& v) { return divisor(key, v); }
};

template <>
struct DivisorValue<ExactComplex> {
  static mpq_class get(const MonomialKey& key, const ModeVector& v) { return divisor_exact(key, v); }
};

}  // namespace

template <CoefficientScalar S>
ResonantPart resonant_part(const ClassifiedPerturbation<S>& p, const ActionVector& i0) {
  using Traits = ScalarTraits<S>;
  ResonantPart r;
  r.shift = ModeVector(p.window);
  double constant_imag = 0.0;
  for (const auto& [key, c] : p.r0) {
    if (!key.k.empty() || !key.kp.empty()) continue;
    const Complex v = Traits::to_complex(c) * action_product(key.a, i0);
    r.constant += v.real();
    constant_imag += v.imag();
  }
  ModeVector shift_imag(p.window);
  for (const auto& [rk, c] : p.r1) {
    if (!rk.key.k.empty() || !rk.key.kp.empty()) continue;
    const Complex v = Traits::to_complex(c) * action_product(rk.key.a, i0);
    r.shift(rk.j) += v.real();
    shift_imag(rk.j) += v.imag();
  }
  r.max_imag = std::max(std::abs(constant_imag), sup_norm(shift_imag));
  return r;
}

template <CoefficientScalar S>
HomologicalSolution<S> solve_homological(const ClassifiedPerturbation<S>& p, const NormalForm& normal,
                                         const Schedule& sched, double gamma) {
  using Traits = ScalarTraits<S>;
  HomologicalSolution<S> sol{p.zero_like(), p.zero_like(), p.zero_like(), {}};
  DivisorStats& st = sol.stats;
  st.divisor_floor = gamma * sched.lambda;
  st.truncation_threshold = truncation_threshold(sched, p.weight.sigma);
  st.worst_divisor = std::numeric_limits<double>::infinity();
  st.worst_unit_floor = std::numeric_limits<double>::infinity();

  // returns F coefficient, or nullopt when the key is deferred
  auto solve = [&](const MonomialKey& key, std::span<const int> j, const S& b) -> std::optional<S> {
    if (!key.disjoint_support()) throw DomainError("solve_homological: R0/R1 key " + key.str() + " has overlapping support");
    if (rearrangement(key, j).tail_sum(p.weight) > st.truncation_threshold) {
      ++st.deferred;
      return std::nullopt;
    }
    const auto d = DivisorValue<S>::get(key, normal.vtilde);
    const double dd = std::abs(Traits::real_to_double(d));
    if (!(dd >= st.divisor_floor))
      throw ResonanceError("solve_homological: divisor below gamma*lambda_s at step " + std::to_string(sched.s),
                           key.str(), dd, st.divisor_floor);
    ++st.solved;
    st.worst_divisor = std::min(st.worst_divisor, dd);
    const double uf = unit_floor(key_difference(key));
    st.worst_unit_floor = std::min(st.worst_unit_floor, uf);
    if (uf >= sched.lambda) ++st.unit_floor_above_lambda;
    return Traits::div_real(-Traits::times_i(b), d);
  };

  for (const auto& [key, c] : p.r0) {
    if (key.k.empty() && key.kp.empty()) {
      ++st.resonant;
      continue;
    }
    if (auto f = solve(key, {}, c)) {
      sol.f.add_r0(key, *f);
      sol.solved.add_r0(key, c);
    } else {
      sol.deferred.add_r0(key, c);
    }
  }
  for (const auto& [rk, c] : p.r1) {
    if (rk.key.k.empty() && rk.key.kp.empty()) {
      ++st.resonant;
      continue;
    }
    const std::array<int, 1> j{rk.j};
    if (auto f = solve(rk.key, j, c)) {
      sol.f.add_r1(rk.j, rk.key, *f);
      sol.solved.add_r1(rk.j, rk.key, c);
    } else {
      sol.deferred.add_r1(rk.j, rk.key, c);
    }
  }
  if (st.solved == 0) {
    st.worst_divisor = 0.0;
    st.worst_unit_floor = 0.0;
  }
  return sol;
}

template <CoefficientScalar S>
std::pair<KamState<S>, StepReport> kam_step(const KamState<S>& state, double gamma, const BracketCaps& caps) {
  caps.validate();
  const Schedule& sc = state.schedule;
  const SigmaWeight& w = state.pert.weight;
  StepReport rep;
  rep.s = state.s;
  rep.schedule = sc;
  rep.next_schedule = schedule(state.s + 1, sc.sigma, state.eps0, state.window);
  const Schedule& next = rep.next_schedule;
  rep.before = class_norms(state.pert, sc.rho);

  const ResonantPart res = resonant_part(state.pert, state.pert.i0);
  HomologicalSolution<S> sol = solve_homological(state.pert, state.normal, sc, gamma);
  rep.divisors = sol.stats;
  rep.f_norms = class_norms(sol.f, sc.rho);

  Hamiltonian<S> f = reconstruct(sol.f);
  f.prune(caps.drop_threshold);
  const double fnorm = weighted_norm(f, sc.rho - sc.delta);
  rep.flow = flow_guard_log(std::log(fnorm), sc.sigma, sc.rho, sc.delta);
  rep.flow_overridden = !rep.flow.pass;

  // R_+ = deferred + R2 + sum_{n>=1} ad_F^n R / n! - sum_{n>=1} ad_F^n S / (n+1)!
  Hamiltonian<S> r = reconstruct(state.pert);
  r.prune(caps.drop_threshold);
  Hamiltonian<S> solved = reconstruct(sol.solved);
  solved.prune(caps.drop_threshold);
  auto [series_r, tail_r] = lie_tail(r, f, caps, 0, &rep.brackets);
  auto [series_s, tail_s] = lie_tail(solved, f, caps, 1, &rep.brackets);
  rep.tail_r = tail_r;
  rep.tail_s = tail_s;
  series_r -= series_s;
  rep.brackets.pruned_terms += series_r.prune(caps.drop_threshold);

  KamState<S> out;
  out.s = state.s + 1;
  out.eps0 = state.eps0;
  out.window = state.window;
  out.v_star = state.v_star;
  out.schedule = next;
  out.history = state.history;
  out.pert = classify(series_r, state.pert.i0);
  ClassifiedPerturbation<S> carried = state.pert.zero_like();
  carried.r2 = state.pert.r2;
  carried += sol.deferred;
  out.pert += carried;
  rep.brackets.pruned_terms += out.pert.prune(caps.drop_threshold);

  out.normal = state.normal;
  out.normal.vtilde.values() += res.shift.values();
  out.normal.constant += res.constant;
  rep.shift = res.shift;
  rep.shift_sup = sup_norm(res.shift);
  rep.shift_imag = res.max_imag;
  rep.constant_increment = res.constant;

  rep.after = class_norms(out.pert, next.rho);
  rep.terms_after = out.pert.size();

  StepTargets& t = rep.targets;
  t.r0_contraction = rep.after.r0 <= std::pow(rep.before.r0, 1.4);
  t.r1_bound = rep.after.r1 <= std::pow(next.eps, 0.6);
  t.r2_bound = rep.after.r2 <= (1.0 + next.d) * state.eps0;
  t.strict_r0 = rep.after.r0 <= next.eps;
  t.shift_bound = rep.shift_sup < 0.9 * next.eps;
  t.shift_loose_bound = rep.shift_sup <= std::sqrt(sc.eps);
  t.shift_growth_bound = std::log(std::max(rep.shift_sup, 1e-300)) <=
                      next.log_eps + 18.0 * std::exp(std::pow(4.0, 1.0 / (w.sigma - 1.0)));
  const double hom = 1.0 / (gamma * sc.lambda);
  t.homological_f0 = rep.f_norms.r0 <= hom * rep.before.r0;
  t.homological_f1 = rep.f_norms.r1 <= hom * rep.before.r1;
  t.divisor_floor = rep.divisors.solved == 0 || rep.divisors.worst_divisor >= rep.divisors.divisor_floor;
  t.conserving = out.pert.conserving();

  out.history.push_back(rep);
  return {std::move(out), rep};
}

template <CoefficientScalar S>
double torus_residual(const KamState<S>& state, const ActionVector& i0, int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("torus_residual: samples must be positive");
  // X_N(q) - i(n^2 + vtilde_n) q_n vanishes identically
  const Hamiltonian<S> h = reconstruct(state.pert);
  const int m = state.window;
  const SigmaWeight& w = state.pert.weight;
  std::mt19937_64 rng(seed);
  SequenceState q(m);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (int n = -m; n <= m; ++n) {
      const double theta = 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(rng() >> 11), -53);
      q(n) = std::polar(std::sqrt(i0(n)), theta);
    }
    const SequenceState x = vector_field(h, q, i0);
    for (int n = -m; n <= m; ++n) worst = std::max(worst, std::abs(x(n)) * std::exp(w(n)));
  }
  return worst;
}

#define KAMNLS_ENGINE(S)                                                                                      \
  template ResonantPart resonant_part(const ClassifiedPerturbation<S>&, const ActionVector&);                 \
  template HomologicalSolution<S> solve_homological(const ClassifiedPerturbation<S>&, const NormalForm&,      \
                                                    const Schedule&, double);                                 \
  template std::pair<KamState<S>, StepReport> kam_step(const KamState<S>&, double, const BracketCaps&);       \
  template double torus_residual(const KamState<S>&, const ActionVector&, int, std::uint64_t);

KAMNLS_ENGINE(Complex)
KAMNLS_ENGINE(ExactComplex)

#undef KAMNLS_ENGINE

}  // namespace kamnls
