#include "kamnls/run.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "kamnls/errors.hpp"
#include "kamnls/norms.hpp"

namespace kamnls {

using nlohmann::json;

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config: " + what);
  };
  need(sigma > 2.0, "sigma must exceed 2");
  need(gamma > 0.0, "gamma must be positive");
  need(eps >= 0.0 && std::isfinite(eps), "eps must be finite and non-negative");
  need(!target_r0 || (*target_r0 > 0.0 && *target_r0 < 1.0), "target_r0 must lie in (0,1)");
  need(window >= 1, "window must be at least 1");
  need(steps >= 0, "steps must be non-negative");
  need(degree_cap >= 6, "degree_cap must be at least 6");
  need(order_cap >= 1, "order_cap must be at least 1");
  need(drop_threshold >= 0.0 && drop_threshold < 1.0, "drop_threshold must lie in [0,1)");
  need(!c_override || *c_override >= std::numbers::e, "c_override must be at least e");
  need(backend == "float64" || backend == "rational", "backend must be float64 or rational");
  need(!omega || static_cast<int>(omega->size()) == 2 * window + 1, "omega must have 2*window+1 entries");
  need(screen_attempts >= 1, "screen_attempts must be positive");
  need(freeze_tol > 0.0, "freeze_tol must be positive");
  need(freeze_max_outer >= 1, "freeze_max_outer must be positive");
  need(torus_samples >= 1, "torus_samples must be positive");
  need(action_factor > 0.0 && action_factor <= 1.0, "action_factor must lie in (0,1]");
  need(threads >= 1, "threads must be positive");
  need(height >= 1, "height must be at least 1");
  need(dioph_samples >= 1, "dioph_samples must be positive");
  for (double g : dioph_gammas) need(g >= 0.0, "dioph_gammas must be non-negative");
  need(lemma_trials >= 0, "lemma_trials must be non-negative");
}

SigmaWeight RunConfig::weight() const { return SigmaWeight::make(sigma, c_override); }

BracketCaps RunConfig::caps() const {
  BracketCaps c;
  c.degree_cap = degree_cap;
  c.order_cap = order_cap;
  c.drop_threshold = drop_threshold;
  c.threads = threads;
  return c;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: document must be an object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "sigma") c.sigma = v.get<double>();
      else if (key == "gamma") c.gamma = v.get<double>();
      else if (key == "eps") c.eps = v.get<double>();
      else if (key == "target_r0") c.target_r0 = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "window") c.window = v.get<int>();
      else if (key == "steps") c.steps = v.get<int>();
      else if (key == "degree_cap") c.degree_cap = v.get<int>();
      else if (key == "order_cap") c.order_cap = v.get<int>();
      else if (key == "drop_threshold") c.drop_threshold = v.get<double>();
      else if (key == "c_override") {
        if (v.is_null() || (v.is_string() && v.get<std::string>() == "none")) c.c_override = std::nullopt;
        else c.c_override = v.get<double>();
      } else if (key == "backend") c.backend = v.get<std::string>();
      else if (key == "freeze") {
        if (v.is_boolean()) c.freeze = v.get<bool>();
        else {
          const auto s = v.get<std::string>();
          if (s != "on" && s != "off") throw ConfigError("config: freeze must be on or off");
          c.freeze = s == "on";
        }
      } else if (key == "omega") {
        if (v.is_null() || (v.is_string() && v.get<std::string>() == "sample")) c.omega = std::nullopt;
        else c.omega = v.get<std::vector<double>>();
      } else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "screen_omega") c.screen_omega = v.get<bool>();
      else if (key == "screen_attempts") c.screen_attempts = v.get<int>();
      else if (key == "freeze_tol") c.freeze_tol = v.get<double>();
      else if (key == "freeze_max_outer") c.freeze_max_outer = v.get<int>();
      else if (key == "torus_samples") c.torus_samples = v.get<int>();
      else if (key == "action_factor") c.action_factor = v.get<double>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "output") c.output = v.get<std::string>();
      else if (key == "height") c.height = v.get<int>();
      else if (key == "dioph_samples") c.dioph_samples = v.get<std::uint64_t>();
      else if (key == "dioph_gammas") c.dioph_gammas = v.get<std::vector<double>>();
      else if (key == "suites") c.suites = v.get<std::vector<std::string>>();
      else if (key == "lemma_trials") c.lemma_trials = v.get<int>();
      else throw ConfigError("config: unknown field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["sigma"] = sigma;
  j["gamma"] = gamma;
  j["eps"] = eps;
  j["target_r0"] = target_r0 ? json(*target_r0) : json(nullptr);
  j["window"] = window;
  j["steps"] = steps;
  j["degree_cap"] = degree_cap;
  j["order_cap"] = order_cap;
  j["drop_threshold"] = drop_threshold;
  j["c_override"] = c_override ? json(*c_override) : json("none");
  j["backend"] = backend;
  j["freeze"] = freeze ? "on" : "off";
  j["omega"] = omega ? json(*omega) : json("sample");
  j["seed"] = seed;
  j["screen_omega"] = screen_omega;
  j["screen_attempts"] = screen_attempts;
  j["freeze_tol"] = freeze_tol;
  j["freeze_max_outer"] = freeze_max_outer;
  j["torus_samples"] = torus_samples;
  j["action_factor"] = action_factor;
  j["height"] = height;
  j["dioph_samples"] = dioph_samples;
  j["dioph_gammas"] = dioph_gammas;
  j["suites"] = suites;
  j["lemma_trials"] = lemma_trials;
  return j;
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json().dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

int RunReport::exit_code() const {
  if (status == "ok") return 0;
  if (status == "resonance") return 3;
  return 4;
}

namespace {

std::vector<std::vector<int>> conserving_vectors(int window, int max_order) {
  const int dim = 2 * window + 1;
  std::vector<std::vector<int>> out;
  std::vector<int> l(dim, 0);
  std::function<void(int, int, long, long)> rec = [&](int i, int budget, long mass, long mom) {
    if (i == dim) {
      if (mass == 0 && mom == 0 && budget < max_order) out.push_back(l);
      return;
    }
    const int n = i - window;
    for (int v = -budget; v <= budget; ++v) {
      l[i] = v;
      rec(i + 1, budget - std::abs(v), mass + v, mom + static_cast<long>(n) * v);
    }
    l[i] = 0;
  };
  rec(0, max_order, 0, 0);
  return out;
}

double min_divisor(const std::vector<std::vector<int>>& ls, const ModeVector& v) {
  const int m = v.window();
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& l : ls) {
    double d = 0.0;
    for (int i = 0; i < static_cast<int>(l.size()); ++i)
      if (l[i]) d += l[i] * (static_cast<double>(i - m) * (i - m) + v(i - m));
    worst = std::min(worst, std::abs(d));
  }
  return worst;
}

template <class S>
struct Prepared {
  SigmaWeight w;
  ActionVector i0;
  Hamiltonian<S> r;
  double eps = 0.0;
  double eps0 = 0.0;
};

template <class S>
Prepared<S> prepare(const RunConfig& c) {
  Prepared<S> p;
  p.w = c.weight();
  p.i0 = torus_actions(c.window, p.w, c.action_factor);
  p.eps = resolve_eps(c);
  const ModeVector zero(c.window);
  p.r = split_quadratic(build_nls<S>(c.window, p.eps, zero, p.w)).second;
  p.eps0 = weighted_norm(p.r, kRho0);
  return p;
}

template <class S>
struct Pass {
  KamState<S> state;
  bool contract_failed = false;
  std::string message;
};

template <class S>
Pass<S> run_pass(const RunConfig& c, const Prepared<S>& prep, const ModeVector& v) {
  const BracketCaps caps = c.caps();
  Pass<S> pass;
  KamState<S>& st = pass.state;
  st.s = 0;
  st.eps0 = prep.eps0;
  st.window = c.window;
  st.normal.vtilde = v;
  st.pert = classify(prep.r, prep.i0);
  st.pert.prune(caps.drop_threshold);
  st.v_star = v;
  // a vanishing perturbation leaves nothing to iterate
  if (!(prep.eps0 > 0.0)) return pass;
  st.schedule = schedule(0, c.sigma, prep.eps0, c.window);
  for (int s = 0; s < c.steps; ++s) {
    auto [next, rep] = kam_step(st, c.gamma, caps);
    st = std::move(next);
    if (!rep.targets.contract()) {
      pass.contract_failed = true;
      pass.message = "norm targets missed at step " + std::to_string(rep.s);
      break;
    }
  }
  return pass;
}

template <class S>
std::pair<FreezeResult, Pass<S>> freeze_impl(const RunConfig& c, const Prepared<S>& prep, const ModeVector& omega,
                                             double tol, int max_outer) {
  FreezeResult fr;
  ModeVector v = omega;
  Pass<S> pass;
  for (int it = 0; it < max_outer; ++it) {
    pass = run_pass(c, prep, v);
    OuterIteration oi;
    oi.v = v;
    oi.vtilde = pass.state.normal.vtilde;
    oi.residual = sup_norm(ModeVector(c.window, oi.vtilde.values() - omega.values()));
    fr.iterations.push_back(oi);
    fr.v_star = v;
    fr.residual = oi.residual;
    if (pass.contract_failed) break;
    if (oi.residual <= tol) {
      fr.converged = true;
      break;
    }
    v.values() += omega.values() - oi.vtilde.values();
  }
  return {fr, std::move(pass)};
}

template <class S>
void run_backend(const RunConfig& c, RunReport& rep) {
  if (c.eps == 0.0 && !c.target_r0) throw ConfigError("config: eps must be positive for a run");
  const Prepared<S> prep = prepare<S>(c);
  rep.eps = prep.eps;
  rep.eps0 = prep.eps0;
  if (!(prep.eps0 > 0.0 && prep.eps0 < 1.0)) throw ConfigError("config: measured eps0 must lie in (0,1)");
  rep.i0 = prep.i0;
  rep.actions_within_bound = within_action_bound(prep.i0, prep.w);
  rep.actions_within_band = within_torus_band(prep.i0, prep.w);
  {
    auto p0 = classify(prep.r, prep.i0);
    p0.prune(c.drop_threshold);
    rep.initial_norms = class_norms(p0, kRho0);
    rep.initial_terms = p0.size();
  }

  if (c.omega) {
    rep.omega = ModeVector(c.window);
    for (int n = -c.window; n <= c.window; ++n) rep.omega(n) = (*c.omega)[n + c.window];
    rep.omega_draws = 0;
  } else {
    const double floor = 2.0 * c.gamma * std::pow(prep.eps0, 0.01);
    auto [om, draws] = sample_omega(c.window, c.seed, c.screen_omega, c.degree_cap, floor, c.screen_attempts);
    rep.omega = om;
    rep.omega_draws = draws;
  }

  Pass<S> pass;
  if (c.freeze) {
    auto [fr, p] = freeze_impl(c, prep, rep.omega, c.freeze_tol, c.freeze_max_outer);
    pass = std::move(p);
    rep.outer = fr.iterations;
    rep.freeze_converged = fr.converged;
    rep.v_star = fr.v_star;
    rep.freeze_residual = fr.residual;
  } else {
    pass = run_pass(c, prep, rep.omega);
    rep.v_star = rep.omega;
    rep.freeze_residual = sup_norm(ModeVector(c.window, pass.state.normal.vtilde.values() - rep.omega.values()));
  }
  rep.steps = pass.state.history;
  rep.final_normal = pass.state.normal;
  rep.torus_residual = torus_residual(pass.state, prep.i0, c.torus_samples, c.seed);
  rep.torus_bound = std::exp(0.5 * schedule(pass.state.s, c.sigma, prep.eps0, c.window).log_eps);
  if (pass.contract_failed) {
    rep.status = "contract";
    rep.message = pass.message;
  } else if (c.freeze && !rep.freeze_converged) {
    rep.status = "freeze";
    rep.message = "frequency freezing did not reach freeze_tol";
  }
}

}  // namespace

double min_conserving_divisor(const ModeVector& v, int max_order) {
  return min_divisor(conserving_vectors(v.window(), max_order), v);
}

std::pair<ModeVector, int> sample_omega(int window, std::uint64_t seed, bool screen, int max_order, double floor,
                                        int attempts) {
  std::mt19937_64 rng(seed);
  ModeVector om(window);
  const auto ls = screen ? conserving_vectors(window, max_order) : std::vector<std::vector<int>>{};
  for (int draw = 1; draw <= attempts; ++draw) {
    for (int n = -window; n <= window; ++n) om(n) = std::ldexp(static_cast<double>(rng() >> 11), -53);
    if (!screen || min_divisor(ls, om) >= floor) return {om, draw};
  }
  throw ResonanceError("sample_omega: no admissible omega in " + std::to_string(attempts) + " draws", "", 0.0, floor);
}

FreezeResult freeze_frequencies(const RunConfig& config, const ModeVector& omega, double tol, int max_outer) {
  config.validate();
  if (!(tol > 0.0)) throw DomainError("freeze_frequencies: tol must be positive");
  if (config.backend == "rational") return freeze_impl(config, prepare<ExactComplex>(config), omega, tol, max_outer).first;
  return freeze_impl(config, prepare<Complex>(config), omega, tol, max_outer).first;
}

double resolve_eps(const RunConfig& c) {
  if (!c.target_r0) return c.eps;
  const SigmaWeight w = c.weight();
  const ActionVector i0 = torus_actions(c.window, w, c.action_factor);
  const auto unit = split_quadratic(build_nls<Complex>(c.window, 1.0, ModeVector(c.window), w)).second;
  const double r0 = class_norms(classify(unit, i0), kRho0).r0;
  if (!(r0 > 0.0)) throw ConfigError("config: target_r0 needs a nonzero resonance-free part");
  return *c.target_r0 / r0;
}

RunReport run(const RunConfig& config) {
  config.validate();
  RunReport rep;
  rep.config = config.to_json();
  rep.config_hash = config.hash();
  rep.seed = config.seed;
  try {
    if (config.backend == "rational") run_backend<ExactComplex>(config, rep);
    else run_backend<Complex>(config, rep);
  } catch (const ResonanceError& e) {
    rep.status = "resonance";
    rep.message = std::string(e.what()) + (e.key.empty() ? "" : " key " + e.key);
  } catch (const DivergenceError& e) {
    rep.status = "divergence";
    rep.message = e.what();
  }
  return rep;
}

}  // namespace kamnls
