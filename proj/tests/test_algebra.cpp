#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "bracket_oracle.hpp"
#include "kamnls/algebra.hpp"
#include "kamnls/classify.hpp"
#include "kamnls/errors.hpp"
#include "kamnls/norms.hpp"
#include "kamnls/sampling.hpp"

using namespace kamnls;
using doctest::Approx;

namespace {

const SigmaWeight w25 = SigmaWeight::make(2.5);

BracketCaps open_caps() {
  BracketCaps c;
  c.degree_cap = 100;
  c.drop_threshold = 0.0;
  return c;
}

MonomialKey key(MultiIndex a, MultiIndex k, MultiIndex kp) { return {std::move(a), std::move(k), std::move(kp)}; }

ExactComplex q(long num, long den = 1) { return {mpq_class(num, den)}; }

KeyShape small_shape(int factors = 6, int bound = 4) {
  KeyShape s;
  s.mode_bound = bound;
  s.max_factors = factors;
  s.max_a_modes = 1;
  return s;
}

}  // namespace

TEST_CASE("bracket matches the partial-derivative oracle") {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_hamiltonian<ExactComplex>(rng, w25, 4, uniform_int(rng, 1, 10), small_shape());
    const auto b = random_hamiltonian<ExactComplex>(rng, w25, 4, uniform_int(rng, 1, 10), small_shape());
    CHECK(poisson_bracket(a, b, open_caps()) == oracle::bracket(a, b));
    const auto af = to_float(a), bf = to_float(b);
    const auto got = poisson_bracket(af, bf, open_caps());
    const auto ref = oracle::bracket(af, bf);
    const double scale = std::max(ref.max_abs(), 1.0);
    for (const auto& [k, c] : ref.terms()) CHECK(std::abs(got.coefficient(k) - c) <= 1e-10 * scale);
    for (const auto& [k, c] : got.terms()) CHECK(std::abs(ref.coefficient(k) - c) <= 1e-10 * scale);
  }
}

TEST_CASE("bracket hand examples") {
  Hamiltonian<ExactComplex> a(w25, 3), b(w25, 3);
  a.add(key({}, {{1, 1}}, {{2, 1}}), q(1));
  b.add(key({}, {{2, 1}}, {{1, 1}}), q(1));
  const auto r = poisson_bracket(a, b, open_caps());
  CHECK(r.size() == 2);
  CHECK(r.coefficient(key({}, {{2, 1}}, {{2, 1}})) == ExactComplex{0, 1});
  CHECK(r.coefficient(key({}, {{1, 1}}, {{1, 1}})) == ExactComplex{0, -1});

  ModeVector vt(3);
  for (int n = -3; n <= 3; ++n) vt(n) = 0.125 * n - 0.05;
  const auto nf = normal_form_hamiltonian<ExactComplex>(vt, w25);
  Hamiltonian<ExactComplex> m(w25, 3);
  const MonomialKey mk = key({{0, 1}}, {{1, 2}, {-3, 1}}, {{-1, 1}, {0, 1}, {0, 1}});
  m.add(mk, q(2, 3));
  mpq_class d = 0;
  for (auto [n, e] : mk.k) d += e * (mpq_class(n * n) + exact_rational(vt(n)));
  for (auto [n, e] : mk.kp) d -= e * (mpq_class(n * n) + exact_rational(vt(n)));
  const auto br = poisson_bracket(nf, m, open_caps());
  CHECK(br.size() == 1);
  CHECK(br.coefficient(mk) == ExactComplex{0, -d * mpq_class(2, 3)});
}

TEST_CASE("bracket algebraic identities") {
  Rng rng(8);
  for (int t = 0; t < 60; ++t) {
    const auto a = random_hamiltonian<ExactComplex>(rng, w25, 3, 5, small_shape(4, 3));
    const auto b = random_hamiltonian<ExactComplex>(rng, w25, 3, 5, small_shape(4, 3));
    const auto c = random_hamiltonian<ExactComplex>(rng, w25, 3, 5, small_shape(4, 3));
    const auto caps = open_caps();
    CHECK(poisson_bracket(a, a, caps).empty());
    auto ab = poisson_bracket(a, b, caps);
    ab += poisson_bracket(b, a, caps);
    CHECK(ab.empty());
    // bilinearity
    auto bc = b;
    bc += c.scaled(q(3, 2));
    auto lin = poisson_bracket(a, b, caps);
    lin += poisson_bracket(a, c, caps).scaled(q(3, 2));
    CHECK(poisson_bracket(a, bc, caps) == lin);
    // Jacobi
    auto jac = poisson_bracket(a, poisson_bracket(b, c, caps), caps);
    jac += poisson_bracket(b, poisson_bracket(c, a, caps), caps);
    jac += poisson_bracket(c, poisson_bracket(a, b, caps), caps);
    CHECK(jac.empty());
    // conservation is inherited
    CHECK(poisson_bracket(a, b, caps).conserving());
  }
}

TEST_CASE("Leibniz rule on monomial triples") {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const MonomialKey ka = random_conserving_key(rng, small_shape(4));
    const MonomialKey kb = random_conserving_key(rng, small_shape(4));
    const MonomialKey kc = random_conserving_key(rng, small_shape(4));
    auto mono = [&](const MonomialKey& k) {
      Hamiltonian<ExactComplex> h(w25, 4);
      h.add(k, q(1));
      return h;
    };
    const auto caps = open_caps();
    const auto lhs = poisson_bracket(mono(ka), mono(oracle::multiply(kb, kc)), caps);
    Hamiltonian<ExactComplex> rhs(w25, 4);
    const auto left = poisson_bracket(mono(ka), mono(kb), caps);
    const auto right = poisson_bracket(mono(ka), mono(kc), caps);
    for (const auto& [k, c] : left.terms()) rhs.add(oracle::multiply(k, kc), c);
    for (const auto& [k, c] : right.terms()) rhs.add(oracle::multiply(k, kb), c);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("bracket caps and compatibility") {
  Rng rng(4);
  const auto a = random_hamiltonian<Complex>(rng, w25, 4, 8, small_shape());
  const auto b = random_hamiltonian<Complex>(rng, w25, 4, 8, small_shape());
  BracketCaps caps = open_caps();
  caps.degree_cap = 6;
  BracketStats st;
  const auto r = poisson_bracket(a, b, caps, &st);
  CHECK(r.max_degree() <= 6);
  const auto full = poisson_bracket(a, b, open_caps());
  for (const auto& [k, c] : full.terms())
    if (k.degree() <= 6) CHECK(std::abs(r.coefficient(k) - c) <= 1e-14 * full.max_abs());
  CHECK(st.products > 0);
  CHECK_THROWS_AS(poisson_bracket(a, Hamiltonian<Complex>(w25, 3), caps), MismatchError);
  CHECK_THROWS_AS(poisson_bracket(a, Hamiltonian<Complex>(SigmaWeight::make(3.0), 4), caps), MismatchError);
  BracketCaps bad;
  bad.degree_cap = 5;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("bracket result does not depend on the thread count") {
  Rng rng(77);
  KeyShape s = small_shape(6);
  const auto a = random_hamiltonian<Complex>(rng, w25, 4, 60, s);
  const auto b = random_hamiltonian<Complex>(rng, w25, 4, 60, s);
  BracketCaps one = open_caps(), four = open_caps();
  four.threads = 4;
  const auto r1 = poisson_bracket(a, b, one), r4 = poisson_bracket(a, b, four);
  CHECK(r1 == r4);
}

TEST_CASE("lie transform") {
  Rng rng(12);
  const auto h = random_hamiltonian<Complex>(rng, w25, 3, 8, small_shape(6, 3));
  const auto [same, tail] = lie_transform(h, h.zero_like(), open_caps());
  CHECK(same == h);
  CHECK(tail.converged);

  Hamiltonian<Complex> f(w25, 3);
  f.add(key({}, {{1, 1}, {-1, 1}}, {{0, 2}}), Complex(1e-3, 2e-3));
  f.add(key({}, {{0, 2}}, {{1, 1}, {-1, 1}}), Complex(1e-3, -2e-3));
  BracketCaps caps = open_caps();
  caps.degree_cap = 14;
  const auto [out, t2] = lie_transform(h, f, caps);
  CHECK(out.conserving());
  CHECK(t2.converged);
  // first order agrees with H + {H, F}
  auto first = h;
  first += poisson_bracket(h, f, caps);
  for (const auto& [k, c] : first.terms()) CHECK(std::abs(out.coefficient(k) - c) <= 1e-5 * std::max(std::abs(c), 1e-3));

  Hamiltonian<Complex> n(w25, 2), big(w25, 2);
  n.add(key({}, {{1, 1}}, {{1, 1}}), 1.0);
  big.add(key({}, {{1, 1}}, {{2, 1}}), 40.0);
  big.add(key({}, {{2, 1}}, {{1, 1}}), 40.0);
  CHECK_THROWS_AS(lie_transform(n, big, open_caps()), DivergenceError);
}

TEST_CASE("flow guard") {
  const auto fz = Hamiltonian<Complex>(SigmaWeight::make(4.0), 2);
  const auto v0 = flow_guard(fz, 0.5, 0.1);
  CHECK(v0.pass);
  CHECK(v0.lhs == 0.0);
  CHECK_THROWS_AS(flow_guard(fz, 1.0, 0.2), DomainError);
  CHECK_THROWS_AS(flow_guard(fz, 0.2, 0.06), DomainError);
  const double sigma = 4.0, delta = 0.1;
  const double log_c = std::log(2.0 * std::numbers::e / delta) +
                       (2000.0 / delta) * std::exp(std::pow(200.0 / delta, 1.0 / (sigma - 1.0)));
  const double threshold = std::log(0.5) - log_c;
  CHECK(flow_guard_log(threshold - 1.0, sigma, 0.5, delta).pass);
  CHECK_FALSE(flow_guard_log(threshold + 1.0, sigma, 0.5, delta).pass);
}

TEST_CASE("vector field and evaluation") {
  ModeVector vt(3);
  for (int n = -3; n <= 3; ++n) vt(n) = 0.3 - 0.1 * n;
  const auto nf = normal_form_hamiltonian<Complex>(vt, w25);
  Rng rng(31);
  const SequenceState qs = random_state(rng, 3, w25, 0.9);
  const ActionVector i0 = torus_actions(3, w25);
  const SequenceState x = vector_field(nf, qs, i0);
  for (int n = -3; n <= 3; ++n) CHECK(std::abs(x(n) - Complex(0, n * n + vt(n)) * qs(n)) < 1e-14);

  Hamiltonian<Complex> c(w25, 3);
  c.add(MonomialKey{}, 2.0);
  CHECK(seq_norm(vector_field(c, qs, i0), w25) == 0.0);
  CHECK(evaluate(c.zero_like(), qs, i0) == Complex(0.0));

  Hamiltonian<Complex> one(w25, 3);
  one.add(key({}, {{1, 1}}, {{1, 1}}), 1.0);
  SequenceState q2(3);
  q2(1) = 2.0;
  CHECK(evaluate(one, q2, i0) == Complex(4.0));

  for (int t = 0; t < 50; ++t) {
    const auto h = random_hamiltonian<Complex>(rng, w25, 3, 8, small_shape(6, 3));
    const SequenceState p = random_state(rng, 3, w25, 0.9);
    CHECK(std::abs(evaluate(h, p, i0) - oracle::evaluate(h, p, i0)) <= 1e-13);
    CHECK(std::abs(evaluate(reconstruct(classify(h, i0)), p, i0) - evaluate(h, p, i0)) <= 1e-12);
    const SequenceState field = vector_field(h, p, i0);
    double mass = 0.0;
    for (const auto& [k, c] : h.terms()) mass += std::abs(c);
    for (int n = -3; n <= 3; ++n) {
      const double step = 1e-6 * std::max(std::abs(p(n)), 1e-3);
      auto shifted = [&](Complex d) {
        SequenceState s = p;
        s(n) += d;
        return evaluate(h, s, i0);
      };
      const Complex dx = (shifted(step) - shifted(-step)) / (2 * step);
      const Complex dy = (shifted(Complex(0, step)) - shifted(Complex(0, -step))) / (2 * step);
      // i d/dq̄ = (i/2)(d/dx + i d/dy)
      const Complex fd = Complex(0, 0.5) * (dx + Complex(0, 1) * dy);
      // truncation O(step^2) plus cancellation of order eps_mach * sum|c| / step
      CHECK(std::abs(field(n) - fd) <= 1e-6 * std::abs(fd) + 1e-14 * mass / step);
    }
  }
}

TEST_CASE("quintic NLS construction") {
  for (int m : {1, 2, 3}) {
    std::map<MonomialKey, long> ref;
    long tuples = 0;
    const int span = 2 * m + 1;
    long total = 1;
    for (int i = 0; i < 6; ++i) total *= span;
    for (long code = 0; code < total; ++code) {
      int n[6];
      long c = code;
      for (int i = 0; i < 6; ++i) {
        n[i] = static_cast<int>(c % span) - m;
        c /= span;
      }
      if (n[0] - n[1] + n[2] - n[3] + n[4] - n[5] != 0) continue;
      ++tuples;
      MonomialKey k;
      k.k = MultiIndex{};
      for (int i : {0, 2, 4}) k.k.add(n[i], 1);
      for (int i : {1, 3, 5}) k.kp.add(n[i], 1);
      ++ref[k];
    }
    if (m == 1) CHECK(tuples == 141);
    ModeVector v(m);
    for (int i = -m; i <= m; ++i) v(i) = 0.1 * (i + m + 1);
    const auto h = build_nls<ExactComplex>(m, 1.0, v, w25);
    mpq_class sextic = 0;
    std::size_t sextic_terms = 0;
    for (const auto& [k, c] : h.terms()) {
      CHECK(k.conserving());
      if (k.degree() == 6) {
        sextic += c.re;
        ++sextic_terms;
        CHECK(c == ExactComplex{mpq_class(ref.at(k))});
      } else {
        CHECK(k.degree() == 2);
        const int n = k.k.min_mode();
        CHECK(c == ExactComplex{mpq_class(n * n) + exact_rational(v(n))});
      }
    }
    CHECK(sextic == tuples);
    CHECK(sextic_terms == ref.size());
    const auto quad = build_nls<Complex>(m, 0.0, v, w25);
    CHECK(quad.size() == static_cast<std::size_t>(2 * m + 1));
    CHECK(quad.max_degree() == 2);
  }
}
