#include "kamnls/divisors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "kamnls/errors.hpp"
#include "kamnls/scalar.hpp"

namespace kamnls {

ModeIntegers key_difference(const MonomialKey& key) {
  ModeIntegers l;
  auto i = key.k.begin();
  auto j = key.kp.begin();
  while (i != key.k.end() || j != key.kp.end()) {
    if (j == key.kp.end() || (i != key.k.end() && i->first < j->first)) {
      l.emplace_back(i->first, i->second);
      ++i;
    } else if (i == key.k.end() || j->first < i->first) {
      l.emplace_back(j->first, -j->second);
      ++j;
    } else {
      if (i->second != j->second) l.emplace_back(i->first, i->second - j->second);
      ++i;
      ++j;
    }
  }
  return l;
}

double nearest_int_dist(double x) { return std::abs(x - std::nearbyint(x)); }

namespace {

double unit_floor(const ModeIntegers& l) {
  double f = 1.0;
  for (const auto& [n, ln] : l) {
    const double b = std::max(1.0, std::abs(static_cast<double>(n)));
    f /= 1.0 + static_cast<double>(ln) * ln * b * b * b * b;
  }
  return f;
}

struct Enumeration {
  std::vector<ModeIntegers> ls;
  std::vector<double> floors;
};

Enumeration enumerate(int window, int height, std::uint64_t budget) {
  if (height < 1) throw DomainError("diophantine_verify: height must be at least 1");
  if (window < 0) throw DomainError("diophantine_verify: window must be non-negative");
  const int dim = 2 * window + 1;
  const double size = std::pow(2.0 * height + 1.0, dim);
  if (size > static_cast<double>(budget))
    throw BudgetError("diophantine_verify: enumeration size " + std::to_string(size) + " exceeds budget");
  Enumeration e;
  std::vector<int> l(dim, -height);
  for (;;) {
    ModeIntegers sparse;
    for (int i = 0; i < dim; ++i)
      if (l[i] != 0) sparse.emplace_back(i - window, l[i]);
    if (!sparse.empty()) {
      e.floors.push_back(unit_floor(sparse));
      e.ls.push_back(std::move(sparse));
    }
    int i = 0;
    while (i < dim && l[i] == height) l[i++] = -height;
    if (i == dim) break;
    ++l[i];
  }
  return e;
}

double combination(const ModeIntegers& l, const ModeVector& v) {
  double s = 0.0;
  for (const auto& [n, ln] : l) s += ln * v.at(n);
  return s;
}

}  // namespace

double divisor_floor(const ModeIntegers& l, double gamma) {
  bool any = false;
  for (const auto& e : l) any = any || e.second != 0;
  if (!any) throw DomainError("divisor_floor: l must be nonzero");
  return gamma * unit_floor(l);
}

DiophantineReport diophantine_verify(const ModeVector& v, double gamma, int window, int height, std::uint64_t budget) {
  if (v.window() < window) throw MismatchError("diophantine_verify: V does not cover the window");
  const Enumeration e = enumerate(window, height, budget);
  DiophantineReport r;
  r.gamma = gamma;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e.ls.size(); ++i) {
    const double ratio = nearest_int_dist(combination(e.ls[i], v)) / e.floors[i];
    if (ratio < r.min_ratio || (ratio == r.min_ratio && e.ls[i] < r.witness)) {
      r.min_ratio = ratio;
      r.witness = e.ls[i];
    }
  }
  r.checked_count = e.ls.size();
  r.pass = r.min_ratio >= gamma;
  return r;
}

double diophantine_measure(double gamma, int window, int height, std::uint64_t samples, std::uint64_t seed,
                           std::uint64_t budget) {
  if (samples < 1) throw DomainError("diophantine_measure: samples must be positive");
  const Enumeration e = enumerate(window, height, budget);
  std::mt19937_64 rng(seed);
  std::uint64_t failures = 0;
  ModeVector v(window);
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int n = -window; n <= window; ++n) v(n) = std::ldexp(static_cast<double>(rng() >> 11), -53);
    for (std::size_t i = 0; i < e.ls.size(); ++i) {
      if (nearest_int_dist(combination(e.ls[i], v)) < gamma * e.floors[i]) {
        ++failures;
        break;
      }
    }
  }
  return static_cast<double>(failures) / static_cast<double>(samples);
}

double divisor(const MonomialKey& key, const ModeVector& vtilde) {
  double d = 0.0;
  for (const auto& [n, ln] : key_difference(key))
    d += ln * (static_cast<double>(n) * n + vtilde.at(n));
  return d;
}

mpq_class divisor_exact(const MonomialKey& key, const ModeVector& vtilde) {
  mpq_class d(0);
  for (const auto& [n, ln] : key_difference(key))
    d += mpq_class(ln) * (mpq_class(static_cast<long>(n) * n) + exact_rational(vtilde.at(n)));
  return d;
}

Schedule schedule(int s, double sigma, double eps0, int window) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw DomainError("schedule: eps0 must lie in (0,1)");
  if (!(sigma > 2.0)) throw DomainError("schedule: sigma must exceed 2");
  if (s < 0) throw DomainError("schedule: step must be non-negative");
  auto delta_at = [](int i) {
    const double t = i + 4.0;
    const double l = std::log(t);
    return kRho0 / (t * l * l);
  };
  auto log_eps_at = [&](int i) { return std::pow(1.5, i) * std::log(eps0); };

  Schedule sc;
  sc.s = s;
  sc.sigma = sigma;
  sc.eps0 = eps0;
  sc.rho = kRho0;
  sc.eta = std::exp(0.01 * log_eps_at(0));
  for (int i = 0; i < s; ++i) {
    sc.rho += 3.0 * delta_at(i);
    sc.eta *= std::exp(0.01 * log_eps_at(i)) / 20.0;
    sc.d += 1.0 / (std::numbers::pi * std::numbers::pi * (i + 1.0) * (i + 1.0));
  }
  sc.delta = delta_at(s);
  sc.log_eps = log_eps_at(s);
  sc.log_eps_next = log_eps_at(s + 1);
  sc.eps = std::exp(sc.log_eps);
  sc.eps_next = std::exp(sc.log_eps_next);
  sc.lambda = std::exp(0.01 * sc.log_eps);

  const double t = s + 4.0;
  const double lt = std::log(t);
  sc.B = 3.0 * std::pow(4.0, sigma) * (2.0 * t * lt * lt / kRho0) * (-sc.log_eps_next);
  const double lb = std::log(sc.B);
  sc.N = std::pow(sc.B, (sigma - 1.0) / sigma) / std::pow(lb, sigma);
  sc.log_N_star_raw = std::pow(sc.B, 1.0 / sigma);
  const double raw = std::ceil(std::exp(sc.log_N_star_raw));
  if (window >= 0) {
    sc.N_star = raw < static_cast<double>(window) ? static_cast<long>(raw) : window;
  } else {
    sc.N_star = raw < 9.0e18 ? static_cast<long>(raw) : std::numeric_limits<long>::max();
  }
  sc.small_divisor_budget = 100.0 * sc.B * std::pow(lb, 1.0 - sigma) <= 0.01 * (-sc.log_eps);
  return sc;
}

double truncation_threshold(const Schedule& sched, double /*sigma*/) {
  const double t = sched.s + 4.0;
  const double lt = std::log(t);
  return (2.0 * t * lt * lt / kRho0) * (-sched.log_eps_next);
}

}  // namespace kamnls
