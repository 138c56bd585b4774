#include "kamnls/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "kamnls/algebra.hpp"
#include "kamnls/classify.hpp"
#include "kamnls/errors.hpp"
#include "kamnls/norms.hpp"
#include "kamnls/sampling.hpp"

namespace kamnls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kA5Max = 3.0 - 2.0 * std::numbers::sqrt2;

double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string grid_str(const std::vector<double>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s + "}";
}

LemmaVerdict start(std::string id, std::string grid, std::uint64_t seed) {
  LemmaVerdict v;
  v.id = std::move(id);
  v.grid = std::move(grid);
  v.seed = seed;
  v.worst_margin = kInf;
  return v;
}

// ln of the integral of e^{y - d y^s} over [y0, inf): upper Riemann sum on a unimodal integrand,
// then e^{phi(y1)} past the point where phi' <= -1.
double log_integral(double delta, double sigma, double y0) {
  const double y_peak = std::pow(1.0 / (delta * sigma), 1.0 / (sigma - 1.0));
  const double y_steep = std::pow(2.0 / (delta * sigma), 1.0 / (sigma - 1.0));
  const double y1 = std::max({y0, y_peak, y_steep});
  auto phi = [&](double y) { return y - delta * std::pow(y, sigma); };
  double acc = phi(y1);
  if (y1 > y0) {
    constexpr int kSteps = 20000;
    const double h = (y1 - y0) / kSteps;
    for (int i = 0; i < kSteps; ++i) {
      const double lo = y0 + i * h;
      const double hi = i + 1 == kSteps ? y1 : lo + h;
      acc = logaddexp(acc, phi(std::clamp(y_peak, lo, hi)) + std::log(h));
    }
  }
  return acc;
}

// ln of an upper bound for sum_{n > n0} e^{-d w(n)}.
double log_tail_sum(const SigmaWeight& w, double delta, long n0) {
  const long flat_end = std::max(n0, static_cast<long>(std::floor(w.cutoff())));
  double acc = -kInf;
  if (flat_end > n0) acc = std::log(static_cast<double>(flat_end - n0)) - delta * w.at(w.cutoff());
  return logaddexp(acc, log_integral(delta, w.sigma, std::log(static_cast<double>(flat_end))));
}

constexpr long kSeriesCut = 1000000;

void check_geometric_product(LemmaVerdict& v, const SigmaWeight& w, double delta) {
  const std::pair<int, int> shapes[] = {{0, 20}, {1, 12}, {2, 6}};
  for (auto [half, amax] : shapes) {
    const int dim = 2 * half + 1;
    std::vector<double> wn(dim);
    double log_rhs = 0.0;
    for (int i = 0; i < dim; ++i) {
      wn[i] = w(i - half);
      log_rhs -= std::log1p(-std::exp(-delta * wn[i]));
    }
    std::vector<int> a(dim, 0);
    double lhs = 0.0;
    for (;;) {
      double e = 0.0;
      for (int i = 0; i < dim; ++i) e += a[i] * wn[i];
      lhs += std::exp(-delta * e);
      int i = 0;
      while (i < dim && a[i] == amax) a[i++] = 0;
      if (i == dim) break;
      ++a[i];
    }
    v.record(log_rhs - std::log(lhs), "geometric product, window " + std::to_string(half) + ", a <= " +
                                          std::to_string(amax) + ", delta " + fmt(delta));
    ++v.trials;
  }
}

void check_log_series(LemmaVerdict& v, double sigma, double delta) {
  double partial = 0.0;
  for (long n = 3; n <= kSeriesCut; ++n) partial += std::exp(-delta * std::pow(std::log(static_cast<double>(n)), sigma));
  const double lhs = logaddexp(std::log(partial), log_integral(delta, sigma, std::log(static_cast<double>(kSeriesCut))));
  const double rhs = std::log(3.0 / delta) + std::pow(2.0 / (delta * sigma), 1.0 / (sigma - 1.0));
  v.record(rhs - lhs, "series over n >= 3, delta " + fmt(delta));
  ++v.trials;
}

void check_infinite_product(LemmaVerdict& v, const SigmaWeight& w, double delta) {
  // ln prod = sum_n -ln(1 - x_n), x_n = e^{-d w(n)}
  double partial = -std::log1p(-std::exp(-delta * w(0)));
  for (long n = 1; n <= kSeriesCut; ++n) partial -= 2.0 * std::log1p(-std::exp(-delta * w(n)));
  const double x_next = std::exp(-delta * w(kSeriesCut + 1));
  const double tail = std::log(2.0) + log_tail_sum(w, delta, kSeriesCut) - std::log1p(-x_next);
  const double log_sum = logaddexp(std::log(partial), tail);
  const double log_rhs = std::log(18.0 / delta) + std::pow(4.0 / delta, 1.0 / (w.sigma - 1.0));
  v.record(log_rhs - log_sum, "infinite product, delta " + fmt(delta));
  ++v.trials;
}

template <class F>
double golden_max(F&& f, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 < f2 ? x2 : x1;
}

template <class F>
double grid_argmax(F&& f, double lo, double hi, int points) {
  double best = lo, fb = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    if (const double fx = f(x); fx > fb) {
      fb = fx;
      best = x;
    }
  }
  return best;
}

double log_weighted_factor(long a, int p, double delta, double wn) {
  return std::log1p(std::pow(static_cast<double>(a), p)) - 2.0 * delta * static_cast<double>(a) * wn;
}

void check_delta(double delta, double hi) {
  if (!(delta > 0.0 && delta < hi)) throw DomainError("delta " + fmt(delta) + " outside (0, " + fmt(hi) + ")");
}


}  // namespace

void LemmaVerdict::record(double margin, const std::string& what) {
  if (std::isnan(margin)) margin = -kInf;
  if (margin < worst_margin) {
    worst_margin = margin;
    witness = what;
  }
  pass = worst_margin >= 0.0;
}

std::vector<double> default_delta_grid() { return {0.01, 0.05, 0.1, 0.17, 0.5, 0.9}; }

LemmaVerdict verify_log_superadditivity(double sigma, long trials, std::uint64_t seed) {
  const double c = compute_c_sigma(sigma);
  const double top = std::max(1e9, 100.0 * c);
  LemmaVerdict v = start("log_superadditivity", "sigma=" + fmt(sigma) + ", c=" + fmt(c) + ", c <= y <= x <= " + fmt(top), seed);
  auto check = [&](double lx, double ly) {
    const double lsum = lx + std::log1p(std::exp(ly - lx));
    const double margin = std::pow(lx, sigma) + 0.5 * std::pow(ly, sigma) - std::pow(lsum, sigma);
    v.record(margin, "x=" + fmt(std::exp(lx)) + ", y=" + fmt(std::exp(ly)));
    ++v.trials;
  };
  const double lc = std::log(c), ltop = std::log(top);
  for (double lx = lc; lx <= ltop; lx += std::log(10.0)) {
    check(lx, lc);
    check(lx, lx);
  }
  check(ltop, lc);
  check(ltop, ltop);
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const double ly = uniform(rng, lc, ltop);
    check(uniform(rng, ly, ltop), ly);
  }
  return v;
}

LemmaVerdict verify_tame(const SigmaWeight& w, long trials, std::uint64_t seed) {
  LemmaVerdict v = start("tame", "sigma=" + fmt(w.sigma) + ", c=" + fmt(w.cutoff()) + ", modes in [-1000,1000]", seed);
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    KeyShape shape;
    shape.mode_bound = (t % 2) ? 10 : 1000;
    shape.max_factors = 10;
    shape.max_a_modes = 2;
    shape.max_a_exponent = 2;
    shape.mass = false;
    const MonomialKey key = random_conserving_key(rng, shape);
    v.record(tame_defect(key, w), key.str());
    ++v.trials;
  }
  return v;
}

namespace {

struct Factor {
  long n;
  int mu;
};

// Completes rest factors with a pair (n1, n2) so that sum mu n = 0 and sum mu n^2 lands in [-m, m].
std::optional<std::vector<Factor>> near_resonant_factors(Rng& rng, int rest, int bound) {
  std::vector<Factor> f;
  long p = 0, e = 0;
  for (int i = 0; i < rest; ++i) {
    const long n = uniform_int(rng, -bound, bound);
    const int mu = (rng() & 1) ? 1 : -1;
    f.push_back({n, mu});
    p += mu * n;
    e += mu * n * n;
  }
  const long m = rest + 2;
  const bool opposite = rng() & 1;
  std::vector<std::pair<long, long>> pairs;
  for (long target = -m; target <= m; ++target) {
    if (opposite) {
      // n1 - n2 = -p, n1^2 - n2^2 = target - e
      const long d = -p, s = target - e;
      if (d == 0) {
        if (s == 0) {
          const long n = uniform_int(rng, -bound, bound);
          pairs.emplace_back(n, n);
        }
        continue;
      }
      if (s % d) continue;
      const long sum = s / d;
      if ((sum + d) % 2) continue;
      pairs.emplace_back((sum + d) / 2, (sum - d) / 2);
    } else {
      // n1 + n2 = -p, n1^2 + n2^2 = target - e
      const long u = -p, q2 = target - e;
      const long disc = 2 * q2 - u * u;
      if (q2 < 0 || disc < 0) continue;
      const long r = std::lround(std::sqrt(static_cast<double>(disc)));
      if (r * r != disc || (u + r) % 2) continue;
      pairs.emplace_back((u + r) / 2, (u - r) / 2);
    }
  }
  if (pairs.empty()) return std::nullopt;
  const auto [n1, n2] = pairs[uniform_int(rng, 0, static_cast<int>(pairs.size()) - 1)];
  f.push_back({n1, 1});
  f.push_back({n2, opposite ? -1 : 1});
  return f;
}

}  // namespace

LemmaVerdict verify_resonance_bound(const SigmaWeight& w, long trials, std::uint64_t seed) {
  LemmaVerdict v = start("resonance_bound", "sigma=" + fmt(w.sigma) + ", c=" + fmt(w.cutoff()) +
                                                ", |Vtilde| <= 2, |D| <= 1, 4 <= |k|+|k'|", seed);
  Rng rng(seed);
  const double factor = 3.0 * std::pow(4.0, w.sigma);
  const long max_attempts = 1000 * std::max(trials, 1L);
  for (long attempt = 0; v.trials < trials && attempt < max_attempts; ++attempt) {
    MonomialKey key;
    const int kind = static_cast<int>(attempt % 4);
    if (kind == 0) {
      KeyShape shape;
      shape.mode_bound = 3;
      shape.max_factors = 8;
      shape.mass = false;
      key = random_conserving_key(rng, shape);
    } else {
      const int bounds[] = {2, 10, 100};
      const auto f = near_resonant_factors(rng, uniform_int(rng, 2, 6), bounds[kind - 1]);
      if (!f) continue;
      for (const auto& [n, mu] : *f) (mu > 0 ? key.k : key.kp).add(static_cast<int>(n), 1);
    }
    if (key.k.total() + key.kp.total() < 4) continue;
    std::map<int, int> l;
    for (auto [n, e] : key.k) l[n] += e;
    for (auto [n, e] : key.kp) l[n] -= e;
    long base = 0;
    for (auto [n, ln] : l) base += static_cast<long>(ln) * n * n;
    bool accepted = false;
    double divisor = 0.0;
    for (int draw = 0; draw < 20 && !accepted; ++draw) {
      divisor = static_cast<double>(base);
      for (auto [n, ln] : l) divisor += ln * uniform(rng, -2.0, 2.0);
      accepted = std::abs(divisor) <= 1.0;
    }
    if (!accepted) continue;
    double lhs = 0.0;
    for (auto [n, ln] : l) lhs += std::abs(ln) * w(n);
    const double rhs = factor * rearrangement(MonomialKey{{}, key.k, key.kp}).tail_sum(w);
    v.record(rhs - lhs, key.str() + ", D=" + fmt(divisor));
    ++v.trials;
  }
  if (v.trials < trials) throw BudgetError("verify_resonance_bound: acceptance too low");
  return v;
}

LemmaVerdict verify_series_and_products(const SigmaWeight& w, const std::vector<double>& delta_grid) {
  LemmaVerdict v = start("series_and_products",
                         "sigma=" + fmt(w.sigma) + ", c=" + fmt(w.cutoff()) + ", delta in " + grid_str(delta_grid) +
                             ", |n| <= " + std::to_string(kSeriesCut) + " plus tail bound",
                         0);
  for (double delta : delta_grid) {
    check_delta(delta, 1.0);
    check_geometric_product(v, w, delta);
    check_log_series(v, w.sigma, delta);
    if (delta < kA5Max) check_infinite_product(v, w, delta);
  }
  return v;
}

LemmaVerdict verify_max_bounds(const SigmaWeight& w, const std::vector<double>& delta_grid, int p, long trials,
                               std::uint64_t seed) {
  if (p != 1 && p != 2) throw DomainError("verify_max_bounds: p must be 1 or 2");
  const double s = w.sigma;
  LemmaVerdict v = start("max_bounds", "sigma=" + fmt(s) + ", c=" + fmt(w.cutoff()) + ", p=" + std::to_string(p) +
                                           ", delta in " + grid_str(delta_grid),
                         seed);
  Rng rng(seed);
  for (double delta : delta_grid) {
    check_delta(delta, 1.0);
    const std::string at = ", delta " + fmt(delta);

    auto phi = [&](double x) { return x - delta * std::pow(x, s); };
    const double cap_f = std::pow(1.0 / (delta * s), 1.0 / (s - 1.0));
    const double hi_f = std::max(2.0, 4.0 * cap_f);
    const double best_f = std::max(phi(golden_max(phi, 1.0, hi_f)), phi(grid_argmax(phi, 1.0, hi_f, 4001)));
    v.record(cap_f - best_f, "max of x - d x^s" + at);

    auto psi = [&](double x) { return p * std::log(x) - delta * x; };
    const double hi_g = 4.0 * p / delta;
    double x_g = golden_max(psi, 1.0, hi_g);
    if (const double xg = grid_argmax(psi, 1.0, hi_g, 4001); psi(xg) > psi(x_g)) x_g = xg;
    // p ln(p/(e d)) - psi(x) = p (u - 1 - ln u) with u = d x / p
    const double u = delta * x_g / p;
    v.record(p * ((u - 1.0) - std::log(u)), "max of x^p e^{-dx}" + at);
    v.trials += 2;

    const double log_rhs = 3.0 * p * std::pow(p / delta, 1.0 / (s - 1.0)) * std::exp(std::pow(1.0 / delta, 1.0 / s));
    v.record(log_rhs, "a = 0" + at);
    // worst a, chosen mode by mode; factors vanish once 2 d w(n) >= 1 since ln(1 + a^p) <= a
    double worst = 0.0;
    for (long n = 0;; ++n) {
      const double wn = w(n);
      if (2.0 * delta * wn >= 1.0) break;
      if (n > 10000000) throw BudgetError("verify_max_bounds: mode range too large");
      double best = 0.0;
      const long amax = static_cast<long>(std::ceil(1.0 / (delta * wn))) + 1;
      for (long a = 1; a <= amax; ++a) best = std::max(best, log_weighted_factor(a, p, delta, wn));
      worst += n == 0 ? best : 2.0 * best;
    }
    v.record(log_rhs - worst, "mode-wise worst a" + at);
    v.trials += 2;
    for (long t = 0; t < trials; ++t) {
      std::map<int, long> a;
      const int nnz = uniform_int(rng, 1, 8);
      for (int i = 0; i < nnz; ++i) a[uniform_int(rng, -50, 50)] += uniform_int(rng, 1, 20);
      double lhs = 0.0;
      std::string desc = "a={";
      for (auto [n, an] : a) {
        lhs += log_weighted_factor(an, p, delta, w(n));
        desc += std::to_string(n) + ":" + std::to_string(an) + ",";
      }
      v.record(log_rhs - lhs, desc + "}" + at);
      ++v.trials;
    }
  }
  return v;
}

LemmaVerdict verify_bracket_estimate(const SigmaWeight& w, long trials, std::uint64_t seed,
                                     const EstimateParams& params) {
  const double bound = std::min(params.rho / 4.0, kA5Max);
  if (!(params.delta1 > 0 && params.delta1 < bound && params.delta2 > 0 && params.delta2 < bound))
    throw DomainError("verify_bracket_estimate: delta outside (0, min(rho/4, 3-2sqrt2))");
  const double log_const = -std::log(params.delta2) + (1000.0 / params.delta1) *
                                                          std::exp(std::pow(100.0 / params.delta1, 1.0 / (w.sigma - 1.0)));
  if (!std::isfinite(log_const)) throw DomainError("verify_bracket_estimate: constant overflows at this sigma");
  LemmaVerdict v = start("bracket_estimate",
                         "sigma=" + fmt(w.sigma) + ", rho=" + fmt(params.rho) + ", delta1=" + fmt(params.delta1) +
                             ", delta2=" + fmt(params.delta2) + ", modes in [-4,4], <= 10 monomials, degree <= 6",
                         seed);
  Rng rng(seed);
  BracketCaps caps;
  caps.degree_cap = 64;
  caps.drop_threshold = 0.0;
  KeyShape shape;
  shape.mode_bound = params.window;
  shape.max_factors = 6;
  shape.max_a_modes = 1;
  for (long t = 0; t < trials; ++t) {
    const auto r1 = random_hamiltonian<Complex>(rng, w, params.window, uniform_int(rng, 1, params.terms), shape);
    const auto r2 = random_hamiltonian<Complex>(rng, w, params.window, uniform_int(rng, 1, params.terms), shape);
    ++v.trials;
    const double lhs = weighted_norm(poisson_bracket(r1, r2, caps), params.rho);
    if (lhs == 0.0) continue;
    const double rhs = log_const + std::log(weighted_norm(r1, params.rho - params.delta1)) +
                       std::log(weighted_norm(r2, params.rho - params.delta2));
    v.record(rhs - std::log(lhs), "trial " + std::to_string(t));
  }
  return v;
}

LemmaVerdict verify_norm_equivalence(const SigmaWeight& w, long trials, std::uint64_t seed, double rho,
                                     double delta) {
  if (!(rho > 0 && delta > 0)) throw DomainError("verify_norm_equivalence: rho and delta must be positive");
  const double s = w.sigma;
  const double log_c6 = 3.0 * std::pow(6.0 / delta, 1.0 / (s - 1.0)) * std::exp(std::pow(6.0 / delta, 1.0 / s));
  const double log_c7 = std::log(64.0 / (std::exp(2.0) * delta * delta));
  LemmaVerdict v = start("norm_equivalence", "sigma=" + fmt(s) + ", c=" + fmt(w.cutoff()) + ", rho=" + fmt(rho) +
                                                 ", delta=" + fmt(delta) + ", modes in [-4,4]",
                         seed);
  Rng rng(seed);
  constexpr int window = 4;
  const ActionVector i0 = torus_actions(window, w);
  KeyShape shape;
  shape.mode_bound = window;
  shape.max_factors = 8;
  shape.max_a_modes = 2;
  shape.max_a_exponent = 2;
  for (long t = 0; t < trials; ++t) {
    const auto h = random_hamiltonian<Complex>(rng, w, window, uniform_int(rng, 1, 10), shape);
    const auto p = classify(h, i0);
    ++v.trials;
    const double plain = weighted_norm(h, rho), plain_wide = weighted_norm(h, rho + delta);
    const double plus = plus_norm(p, rho), plus_wide = plus_norm(p, rho + delta);
    if (plain == 0.0) continue;
    v.record(log_c6 + std::log(plain) - std::log(plus_wide), "plus-norm direction, trial " + std::to_string(t));
    v.record(log_c7 + std::log(plus) - std::log(plain_wide), "weighted-norm direction, trial " + std::to_string(t));
  }
  return v;
}

LemmaVerdict verify_vector_field_bound(const SigmaWeight& w, long trials, std::uint64_t seed, double rho) {
  if (!(rho > 0 && rho < kA5Max)) throw DomainError("verify_vector_field_bound: rho outside (0, 3-2sqrt2)");
  const double log_const = (100.0 / rho) * std::exp(std::pow(10.0 / rho, 1.0 / (w.sigma - 1.0)));
  if (!std::isfinite(log_const)) throw DomainError("verify_vector_field_bound: constant overflows at this sigma");
  LemmaVerdict v = start("vector_field_bound", "sigma=" + fmt(w.sigma) + ", c=" + fmt(w.cutoff()) +
                                                   ", rho=" + fmt(rho) + ", |q|_sigma < 1, modes in [-4,4]",
                         seed);
  Rng rng(seed);
  constexpr int window = 4;
  const ActionVector i0 = torus_actions(window, w);
  KeyShape shape;
  shape.mode_bound = window;
  shape.max_factors = 6;
  shape.max_a_modes = 1;
  for (long t = 0; t < trials; ++t) {
    const auto h = random_hamiltonian<Complex>(rng, w, window, uniform_int(rng, 1, 10), shape);
    const SequenceState q = random_state(rng, window, w, 0.999);
    Hamiltonian<Complex> swapped(w, window);
    for (const auto& [key, c] : h.terms()) swapped.add(MonomialKey{key.a, key.kp, key.k}, c);
    SequenceState qbar(window);
    qbar.values() = q.values().conjugate();
    const double lhs = std::max(seq_norm(vector_field(h, q, i0), w), seq_norm(vector_field(swapped, qbar, i0), w));
    ++v.trials;
    if (lhs == 0.0) continue;
    v.record(log_const + std::log(weighted_norm(h, rho)) - std::log(lhs), "trial " + std::to_string(t));
  }
  return v;
}

const std::vector<std::string>& lemma_suite_names() {
  static const std::vector<std::string> names{"log_superadditivity", "tame",           "resonance_bound",
                                              "series_and_products", "max_bounds",     "bracket_estimate",
                                              "norm_equivalence",    "vector_field_bound"};
  return names;
}

std::vector<LemmaVerdict> run_lemma_suites(const SuiteOptions& opts) {
  const auto& names = lemma_suite_names();
  for (const auto& s : opts.suites)
    if (std::find(names.begin(), names.end(), s) == names.end()) throw ConfigError("unknown lemma suite: " + s);
  auto selected = [&](const std::string& s) {
    return opts.suites.empty() || std::find(opts.suites.begin(), opts.suites.end(), s) != opts.suites.end();
  };
  std::vector<LemmaVerdict> out;
  for (std::size_t si = 0; si < opts.sigmas.size(); ++si) {
    const double sigma = opts.sigmas[si];
    const SigmaWeight w = SigmaWeight::make(sigma, opts.c_override);
    auto seed_for = [&](std::size_t suite) { return opts.seed + 1000 * suite + si; };
    if (selected("log_superadditivity")) out.push_back(verify_log_superadditivity(sigma, opts.trials, seed_for(0)));
    if (selected("tame")) {
      out.push_back(verify_tame(SigmaWeight::exact(sigma), opts.trials, seed_for(1)));
      if (w.c_override) {
        out.push_back(verify_tame(w, opts.trials, seed_for(1)));
        out.back().advisory = true;
      }
    }
    if (selected("resonance_bound")) out.push_back(verify_resonance_bound(w, opts.trials, seed_for(2)));
    if (selected("series_and_products")) out.push_back(verify_series_and_products(w, default_delta_grid()));
    if (selected("max_bounds"))
      for (int p : {1, 2}) out.push_back(verify_max_bounds(w, {0.01, 0.05, 0.1, 0.5, 0.9}, p, opts.trials / 10, seed_for(4)));
    if (selected("bracket_estimate") && sigma == 2.5)
      out.push_back(verify_bracket_estimate(w, opts.algebra_trials, seed_for(5)));
    if (selected("norm_equivalence")) out.push_back(verify_norm_equivalence(w, opts.algebra_trials, seed_for(6)));
    if (selected("vector_field_bound"))
      out.push_back(verify_vector_field_bound(w, opts.algebra_trials, seed_for(7)));
  }
  return out;
}

}  // namespace kamnls
