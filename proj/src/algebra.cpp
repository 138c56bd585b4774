#include "kamnls/algebra.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "kamnls/errors.hpp"
#include "kamnls/norms.hpp"

namespace kamnls {

void BracketCaps::validate() const {
  if (degree_cap < 6) throw DomainError("BracketCaps: degree_cap must be at least 6");
  if (order_cap < 1) throw DomainError("BracketCaps: order_cap must be at least 1");
  if (!(drop_threshold >= 0.0) || drop_threshold >= 1.0) throw DomainError("BracketCaps: drop_threshold must lie in [0, 1)");
  if (threads < 1) throw DomainError("BracketCaps: threads must be positive");
}

BracketStats& BracketStats::operator+=(const BracketStats& o) {
  products += o.products;
  dropped_terms += o.dropped_terms;
  dropped_mass += o.dropped_mass;
  pruned_terms += o.pruned_terms;
  return *this;
}

namespace {

constexpr std::size_t kChunk = 16;

template <class S>
using TermRef = std::pair<const MonomialKey*, const S*>;

template <class S>
std::vector<std::vector<TermRef<S>>> by_degree(const Hamiltonian<S>& h) {
  std::vector<std::vector<TermRef<S>>> buckets;
  for (const auto& [k, c] : h.terms()) {
    const auto d = static_cast<std::size_t>(k.degree());
    if (buckets.size() <= d) buckets.resize(d + 1);
    buckets[d].emplace_back(&k, &c);
  }
  return buckets;
}

template <class S>
void bracket_pair(const MonomialKey& x, const MonomialKey& y, const S& product,
                  typename Hamiltonian<S>::TermMap& out) {
  using Traits = ScalarTraits<S>;
  MonomialKey merged;
  bool built = false;
  auto visit = [&](int j) {
    const long c = static_cast<long>(x.k[j]) * y.kp[j] - static_cast<long>(x.kp[j]) * y.k[j];
    if (c == 0) return;
    if (!built) {
      merged = {x.a + y.a, x.k + y.k, x.kp + y.kp};
      built = true;
    }
    MonomialKey key = merged;
    key.k.add(j, -1);
    key.kp.add(j, -1);
    const S contrib = Traits::times_i(Traits::scale(product, c));
    auto [it, inserted] = out.try_emplace(std::move(key), contrib);
    if (!inserted) it->second += contrib;
  };
  // modes where x depends on q_j or q̄_j, each visited once in increasing order
  auto i = x.k.begin();
  auto e = x.kp.begin();
  while (i != x.k.end() || e != x.kp.end()) {
    if (e == x.kp.end() || (i != x.k.end() && i->first < e->first)) {
      visit((i++)->first);
    } else if (i == x.k.end() || e->first < i->first) {
      visit((e++)->first);
    } else {
      visit(i->first);
      ++i;
      ++e;
    }
  }
}

}  // namespace

template <CoefficientScalar S>
Hamiltonian<S> poisson_bracket(const Hamiltonian<S>& a, const Hamiltonian<S>& b, const BracketCaps& caps,
                               BracketStats* stats) {
  using Traits = ScalarTraits<S>;
  using TermMap = typename Hamiltonian<S>::TermMap;
  a.check_compatible(b);
  BracketStats local;

  const auto ba = by_degree(a);
  const auto bb = by_degree(b);

  // Flatten the left operand's kept pairs into fixed-size chunks so the summation
  // order is independent of the number of worker threads.
  struct Job {
    std::size_t da;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Job> jobs;
  for (std::size_t da = 0; da < ba.size(); ++da) {
    if (ba[da].empty()) continue;
    bool any = false;
    for (std::size_t db = 0; db < bb.size(); ++db) {
      if (bb[db].empty()) continue;
      if (static_cast<int>(da + db) - 2 > caps.degree_cap) {
        double ma = 0.0, mb = 0.0;
        for (const auto& t : ba[da]) ma += Traits::abs(*t.second);
        for (const auto& t : bb[db]) mb += Traits::abs(*t.second);
        local.dropped_terms += ba[da].size() * bb[db].size();
        local.dropped_mass += ma * mb;
      } else {
        any = true;
      }
    }
    if (!any) continue;
    for (std::size_t s = 0; s < ba[da].size(); s += kChunk)
      jobs.push_back({da, s, std::min(s + kChunk, ba[da].size())});
  }

  std::vector<TermMap> partial(jobs.size());
  std::vector<std::size_t> products(jobs.size(), 0);
  auto work = [&](std::size_t idx) {
    const Job& job = jobs[idx];
    TermMap& out = partial[idx];
    for (std::size_t t = job.begin; t < job.end; ++t) {
      const auto& [xk, xc] = ba[job.da][t];
      for (std::size_t db = 0; db < bb.size(); ++db) {
        if (static_cast<int>(job.da + db) - 2 > caps.degree_cap) continue;
        for (const auto& [yk, yc] : bb[db]) {
          bracket_pair<S>(*xk, *yk, (*xc) * (*yc), out);
          ++products[idx];
        }
      }
    }
  };

  const int nthreads = std::max(1, std::min<int>(caps.threads, static_cast<int>(jobs.size())));
  if (nthreads <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) work(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) work(j);
      });
    for (auto& th : pool) th.join();
  }

  TermMap merged;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    local.products += products[j];
    for (auto& [k, c] : partial[j]) {
      auto [it, inserted] = merged.try_emplace(k, c);
      if (!inserted) it->second += c;
    }
    TermMap().swap(partial[j]);
  }

  auto result = Hamiltonian<S>::from_terms(a.weight(), a.window(), std::move(merged));
  local.pruned_terms += result.prune(caps.drop_threshold);
  if (stats) *stats += local;
  return result;
}

template <CoefficientScalar S>
std::pair<Hamiltonian<S>, TailEstimate> lie_tail(const Hamiltonian<S>& h, const Hamiltonian<S>& f,
                                                 const BracketCaps& caps, int shift, BracketStats* stats) {
  using Traits = ScalarTraits<S>;
  caps.validate();
  h.check_compatible(f);
  Hamiltonian<S> sum = h.zero_like();
  TailEstimate tail;
  Hamiltonian<S> term = h;
  for (int n = 2; n <= shift; ++n) term = term.scaled(Traits::div_real(Traits::from_int(1), n));

  double prev = term.max_abs();
  int growth = 0;
  for (int n = 1; n <= caps.order_cap; ++n) {
    term = poisson_bracket(term, f, caps, stats);
    if (term.empty()) {
      tail.geometric_ratio = 0.0;
      tail.converged = true;
      return {std::move(sum), tail};
    }
    term = term.scaled(Traits::div_real(Traits::from_int(1), n + shift));
    const double norm = term.max_abs();
    tail.geometric_ratio = prev > 0.0 ? norm / prev : 0.0;
    tail.last_term_norm = norm;
    tail.orders = n;
    growth = norm > prev ? growth + 1 : 0;
    if (growth >= 3)
      throw DivergenceError("lie series: term norms grew for 3 consecutive orders (order " + std::to_string(n) + ")");
    prev = norm;
    sum += term;
  }
  if (stats) stats->pruned_terms += sum.prune(caps.drop_threshold);
  else sum.prune(caps.drop_threshold);
  tail.converged = tail.geometric_ratio < 1.0;
  return {std::move(sum), tail};
}

template <CoefficientScalar S>
std::pair<Hamiltonian<S>, TailEstimate> lie_transform(const Hamiltonian<S>& h, const Hamiltonian<S>& f,
                                                      const BracketCaps& caps, BracketStats* stats) {
  auto [tail_sum, tail] = lie_tail(h, f, caps, 0, stats);
  tail_sum += h;
  return {std::move(tail_sum), tail};
}

FlowVerdict flow_guard_log(double log_norm_f, double sigma, double rho, double delta) {
  const double limit = std::min(rho / 4.0, 3.0 - 2.0 * std::numbers::sqrt2);
  if (!(delta > 0.0) || !(delta < limit))
    throw DomainError("flow_guard: delta must lie in (0, min(rho/4, 3-2*sqrt2))");
  FlowVerdict v;
  if (std::isinf(log_norm_f) && log_norm_f < 0) {
    v.log_lhs = -std::numeric_limits<double>::infinity();
    v.lhs = 0.0;
    v.pass = true;
    return v;
  }
  const double inner = std::log(2000.0 / delta) + std::pow(200.0 / delta, 1.0 / (sigma - 1.0));
  v.log_lhs = std::log(2.0 * std::numbers::e / delta) + std::exp(inner) + log_norm_f;
  v.lhs = std::exp(v.log_lhs);
  v.pass = v.log_lhs < std::log(0.5);
  return v;
}

template <CoefficientScalar S>
FlowVerdict flow_guard(const Hamiltonian<S>& f, double rho, double delta) {
  const double limit = std::min(rho / 4.0, 3.0 - 2.0 * std::numbers::sqrt2);
  if (!(delta > 0.0) || !(delta < limit))
    throw DomainError("flow_guard: delta must lie in (0, min(rho/4, 3-2*sqrt2))");
  return flow_guard_log(std::log(weighted_norm(f, rho - delta)), f.weight().sigma, rho, delta);
}

namespace {

Complex ipow(Complex z, int e) {
  Complex r(1.0, 0.0);
  while (e > 0) {
    if (e & 1) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

Complex monomial_value(const MonomialKey& key, const SequenceState& q, const ActionVector& i0, int skip_conj_mode) {
  Complex v(1.0, 0.0);
  for (const auto& [n, e] : key.a) v *= ipow(i0.at(n), e);
  for (const auto& [n, e] : key.k) v *= ipow(q.at(n), e);
  for (const auto& [n, e] : key.kp) v *= ipow(std::conj(q.at(n)), n == skip_conj_mode ? e - 1 : e);
  return v;
}

}  // namespace

template <CoefficientScalar S>
SequenceState vector_field(const Hamiltonian<S>& h, const SequenceState& q, const ActionVector& i0) {
  SequenceState out(q.window());
  for (const auto& [key, c] : h.terms()) {
    const Complex coef = ScalarTraits<S>::to_complex(c);
    for (const auto& [n, e] : key.kp) {
      const Complex d = coef * static_cast<double>(e) * monomial_value(key, q, i0, n);
      out.at(n) += Complex(-d.imag(), d.real());
    }
  }
  return out;
}

template <CoefficientScalar S>
Complex evaluate(const Hamiltonian<S>& h, const SequenceState& q, const ActionVector& i0) {
  Complex sum(0.0, 0.0);
  for (const auto& [key, c] : h.terms()) sum += ScalarTraits<S>::to_complex(c) * monomial_value(key, q, i0, 0x7fffffff);
  return sum;
}

template <CoefficientScalar S>
Hamiltonian<S> normal_form_hamiltonian(const ModeVector& vtilde, const SigmaWeight& w) {
  using Traits = ScalarTraits<S>;
  const int m = vtilde.window();
  Hamiltonian<S> h(w, m);
  for (int n = -m; n <= m; ++n)
    h.add({{}, MultiIndex::unit(n), MultiIndex::unit(n)}, Traits::from_int(static_cast<long>(n) * n) + Traits::from_double(vtilde(n)));
  return h;
}

template <CoefficientScalar S>
Hamiltonian<S> build_nls(int window, double eps, const ModeVector& v, const SigmaWeight& w) {
  using Traits = ScalarTraits<S>;
  if (window < 1) throw DomainError("build_nls: window must be at least 1");
  if (v.window() != window) throw MismatchError("build_nls: V window mismatch");
  Hamiltonian<S> h = normal_form_hamiltonian<S>(v, w);
  if (eps == 0.0) return h;

  std::map<MonomialKey, long> counts;
  const int m = window;
  for (int n1 = -m; n1 <= m; ++n1)
    for (int n2 = -m; n2 <= m; ++n2)
      for (int n3 = -m; n3 <= m; ++n3)
        for (int n4 = -m; n4 <= m; ++n4)
          for (int n5 = -m; n5 <= m; ++n5) {
            const int n6 = n1 - n2 + n3 - n4 + n5;
            if (n6 < -m || n6 > m) continue;
            MonomialKey key;
            key.k.add(n1, 1);
            key.k.add(n3, 1);
            key.k.add(n5, 1);
            key.kp.add(n2, 1);
            key.kp.add(n4, 1);
            key.kp.add(n6, 1);
            ++counts[key];
          }
  const S e = Traits::from_double(eps);
  for (const auto& [key, n] : counts) h.add(key, Traits::scale(e, n));
  return h;
}

template <CoefficientScalar S>
std::pair<ModeVector, Hamiltonian<S>> split_quadratic(const Hamiltonian<S>& h) {
  ModeVector v(h.window());
  Hamiltonian<S> rest = h.zero_like();
  for (const auto& [key, c] : h.terms()) {
    if (key.a.empty() && key.k.size() == 1 && key.k == key.kp && key.k.total() == 1) {
      const int n = key.k.min_mode();
      v(n) = ScalarTraits<S>::to_complex(c).real() - static_cast<double>(n) * n;
    } else {
      rest.add(key, c);
    }
  }
  return {v, std::move(rest)};
}

#define KAMNLS_ALGEBRA(S)                                                                                        \
  template Hamiltonian<S> poisson_bracket(const Hamiltonian<S>&, const Hamiltonian<S>&, const BracketCaps&,       \
                                          BracketStats*);                                                        \
  template std::pair<Hamiltonian<S>, TailEstimate> lie_tail(const Hamiltonian<S>&, const Hamiltonian<S>&,         \
                                                            const BracketCaps&, int, BracketStats*);             \
  template std::pair<Hamiltonian<S>, TailEstimate> lie_transform(const Hamiltonian<S>&, const Hamiltonian<S>&,    \
                                                                 const BracketCaps&, BracketStats*);             \
  template FlowVerdict flow_guard(const Hamiltonian<S>&, double, double);                                        \
  template SequenceState vector_field(const Hamiltonian<S>&, const SequenceState&, const ActionVector&);          \
  template Complex evaluate(const Hamiltonian<S>&, const SequenceState&, const ActionVector&);                    \
  template Hamiltonian<S> normal_form_hamiltonian(const ModeVector&, const SigmaWeight&);                        \
  template Hamiltonian<S> build_nls(int, double, const ModeVector&, const SigmaWeight&);                          \
  template std::pair<ModeVector, Hamiltonian<S>> split_quadratic(const Hamiltonian<S>&);

KAMNLS_ALGEBRA(Complex)
KAMNLS_ALGEBRA(ExactComplex)

#undef KAMNLS_ALGEBRA

}  // namespace kamnls
