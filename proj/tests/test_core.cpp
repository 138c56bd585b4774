#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kamnls/classify.hpp"
#include "kamnls/errors.hpp"
#include "kamnls/norms.hpp"
#include "kamnls/sampling.hpp"
#include "oracles.hpp"

using namespace kamnls;
using doctest::Approx;

namespace {

MonomialKey key(MultiIndex a, MultiIndex k, MultiIndex kp) { return {std::move(a), std::move(k), std::move(kp)}; }

const SigmaWeight e3 = SigmaWeight::make(3.0);
const SigmaWeight e25 = SigmaWeight::make(2.5);

}  // namespace

TEST_CASE("cutoff closed forms") {
  CHECK(compute_c_sigma(3.0) == Approx(16777216.0).epsilon(1e-12));
  const double c_star = 2.0 * std::pow(2.0 / std::numbers::e, 2.0);
  CHECK(c_star == Approx(8.0 / (std::numbers::e * std::numbers::e)));
  CHECK(std::exp(std::cbrt(24.0 * c_star)) == Approx(19.33).epsilon(1e-3));
  for (double s : {1.01, 1.5, 2.0, 2.1, 2.5, 3.0, 4.0}) CHECK(compute_c_sigma(s) > 1.0);
  CHECK_THROWS_AS(compute_c_sigma(1.0), DomainError);
  CHECK_THROWS_AS(compute_c_sigma(0.5), DomainError);
}

TEST_CASE("weight") {
  CHECK(e3(0) == 1.0);
  CHECK(e25(5) == Approx(static_cast<double>(oracle::weight_ld(5, 2.5L, std::numbers::e_v<long double>))).epsilon(1e-14));
  const SigmaWeight exact = SigmaWeight::exact(2.5);
  for (long n = -200; n <= 200; ++n) {
    CHECK(e25(n) == e25(-n));
    CHECK(e25(n) >= 1.0);
    CHECK(e25(std::abs(n) + 1) >= e25(n));
    if (std::abs(n) <= 2) CHECK(e25(n) == 1.0);
    CHECK(exact(n) == exact(0));
  }
  CHECK_THROWS_AS(SigmaWeight::make(2.0), DomainError);
  CHECK_THROWS_AS(SigmaWeight::make(2.5, 2.0), DomainError);
  CHECK(SigmaWeight::make(2.5, 10.0)(3) == SigmaWeight::make(2.5, 10.0)(10));
}

TEST_CASE("multi-index and key invariants") {
  MultiIndex m{{2, 1}, {-1, 3}};
  CHECK(m.total() == 4);
  CHECK(m.min_mode() == -1);
  m.add(2, -1);
  CHECK(m[2] == 0);
  CHECK(m.size() == 1);
  CHECK_THROWS(m.add(-1, -4));
  const MonomialKey k = key({{3, 1}}, {{1, 1}, {2, 1}}, {{0, 1}, {3, 1}});
  CHECK(k.degree() == 6);
  CHECK(k.mass() == 0);
  CHECK(k.momentum() == 0);
  CHECK(k.n1_star() == 3);
  CHECK(k.disjoint_support());
  CHECK_FALSE(k.within(2));
  // degree decides first
  CHECK(key({}, {{5, 1}}, {{5, 1}}) < key({}, {{0, 2}}, {{0, 2}}));
  CHECK(key({}, {}, {}).degree() == 0);
}

TEST_CASE("rearrangement") {
  auto r = rearrangement(key({}, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}}));
  CHECK(r.entries == std::vector<std::pair<int, int>>{{2, 2}, {1, 2}});
  CHECK(r.n_star(1) == 2);
  CHECK(r.n_star(3) == 1);
  CHECK(rearrangement(key({{3, 1}}, {}, {})).entries == std::vector<std::pair<int, int>>{{3, 2}});
  CHECK(rearrangement(MonomialKey{}).entries.empty());
  CHECK(rearrangement(key({}, {{-2, 1}}, {{2, 1}})).entries == std::vector<std::pair<int, int>>{{2, 2}});
}

TEST_CASE("sequence norm") {
  SequenceState q(3);
  CHECK(seq_norm(q, e25) == 0.0);
  q(0) = std::exp(-e25(0));
  CHECK(seq_norm(q, e25) == Approx(1.0));
  for (int n = -3; n <= 3; ++n) q(n) = std::exp(-2.0 * e25(n));
  CHECK(seq_norm(q, e25) == Approx(std::exp(-e25(0))));
}

TEST_CASE("weighted norm") {
  Hamiltonian<Complex> h(e3, 3);
  h.add(key({}, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}}), 1.0);
  CHECK(weighted_norm(h, 0.1) == Approx(std::exp(-0.2)));
  const long double ex = oracle::exponent(h.terms().begin()->first, 3.0L, std::numbers::e_v<long double>);
  CHECK(weighted_norm(h, 0.1) == Approx(std::exp(-0.1 * static_cast<double>(ex))));
  CHECK(weighted_norm(h.zero_like(), 0.1) == 0.0);
  Hamiltonian<Complex> g(e3, 3);
  g.add(key({}, {{3, 2}}, {{-1, 1}, {1, 1}}), Complex(0.0, -2.5));
  CHECK(weighted_norm(g, 0.0) == Approx(2.5));
  CHECK_THROWS_AS(weighted_norm(g, -0.1), DomainError);
}

TEST_CASE("weighted norm: conserving exponent is non-negative, norm monotone in rho") {
  Rng rng(11);
  KeyShape shape;
  shape.mode_bound = 6;
  shape.max_factors = 10;
  shape.max_a_modes = 2;
  for (const SigmaWeight& w : {SigmaWeight::exact(2.1), SigmaWeight::exact(2.5), SigmaWeight::exact(3.0)}) {
    for (int t = 0; t < 300; ++t) {
      const auto h = random_hamiltonian<Complex>(rng, w, 6, 8, shape);
      for (const auto& [k, c] : h.terms()) CHECK(weight_exponent(k, w) >= 0.0);
      double prev = weighted_norm(h, 0.0);
      for (double rho : {0.01, 0.05, 0.1, 0.5, 1.0}) {
        const double cur = weighted_norm(h, rho);
        CHECK(cur <= prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("exponent can go negative under the desk cutoff") {
  const MonomialKey k = key({}, {{0, 1}, {2, 1}}, {{-4, 1}, {6, 1}});
  REQUIRE(k.conserving());
  CHECK(weight_exponent(k, e25) == Approx(2.0 + e25(4) - e25(6)));
  CHECK(weight_exponent(k, e25) < 0.0);
  CHECK(weight_exponent(k, SigmaWeight::exact(2.5)) >= 0.0);
}

TEST_CASE("plus norm") {
  const ActionVector i0 = torus_actions(3, e3);
  ClassifiedPerturbation<Complex> p(e3, 3, i0);
  CHECK(plus_norm(p, 0.1) == 0.0);
  const MonomialKey k = key({}, {{1, 1}, {2, 1}}, {{0, 1}, {3, 1}});
  p.add_r1(2, k, 1.5);
  const double ex = static_cast<double>(oracle::exponent(k, 3.0L, std::numbers::e_v<long double>, {2}));
  const double w3 = std::pow(std::log(3.0), 3.0);
  CHECK(ex == Approx(5.0 - w3));
  CHECK(plus_norm(p, 0.1) == Approx(1.5 * std::exp(-0.1 * ex)));

  Rng rng(5);
  KeyShape shape;
  shape.mode_bound = 3;
  for (int t = 0; t < 100; ++t) {
    const auto h = random_hamiltonian<Complex>(rng, e25, 3, 6, shape);
    ClassifiedPerturbation<Complex> only(e25, 3, torus_actions(3, e25));
    for (const auto& [kk, c] : h.terms())
      if (kk.disjoint_support()) only.add_r0(kk, c);
    Hamiltonian<Complex> r0(e25, 3);
    for (const auto& [kk, c] : only.r0) r0.add(kk, c);
    CHECK(plus_norm(only, 0.07) == Approx(weighted_norm(r0, 0.07)));
  }
}

TEST_CASE("classify hand expansions") {
  const ActionVector i0 = torus_actions(3, e25);
  const ExactComplex b{mpq_class(3, 7), mpq_class(-1, 2)};
  const ExactComplex two{mpq_class(2)};
  {
    Hamiltonian<ExactComplex> h(e25, 3);
    h.add(key({}, {{1, 1}}, {{2, 1}}), b);
    const auto p = classify(h, i0);
    CHECK(p.r0.size() == 1);
    CHECK(p.r0.at(key({}, {{1, 1}}, {{2, 1}})) == b);
    CHECK(p.r1.empty());
    CHECK(p.r2.empty());
  }
  {
    Hamiltonian<ExactComplex> h(e25, 3);
    h.add(key({}, {{1, 1}}, {{1, 1}}), b);
    const auto p = classify(h, i0);
    CHECK(p.r0.size() == 1);
    CHECK(p.r0.at(key({{1, 1}}, {}, {})) == b);
    CHECK(p.r1.size() == 1);
    CHECK(p.r1.at(R1Key{1, MonomialKey{}}) == b);
    CHECK(p.r2.empty());
  }
  {
    Hamiltonian<ExactComplex> h(e25, 3);
    h.add(key({}, {{1, 2}}, {{1, 2}}), b);
    const auto p = classify(h, i0);
    CHECK(p.r0.size() == 1);
    CHECK(p.r0.at(key({{1, 2}}, {}, {})) == b);
    CHECK(p.r1.size() == 1);
    CHECK(p.r1.at(R1Key{1, key({{1, 1}}, {}, {})}) == two * b);
    CHECK(p.r2.size() == 1);
    CHECK(p.r2.at(R2Key{1, 1, MonomialKey{}}) == b);
  }
}

TEST_CASE("reconstruct") {
  const double t = 0.3;
  ActionVector i0(2, 0.0);
  i0(1) = t;
  ClassifiedPerturbation<ExactComplex> p(e25, 2, i0);
  CHECK(reconstruct(p).empty());
  p.add_r1(1, MonomialKey{}, ExactComplex{mpq_class(1)});
  const auto h = reconstruct(p);
  CHECK(h.size() == 2);
  CHECK(h.coefficient(key({}, {{1, 1}}, {{1, 1}})) == ExactComplex{mpq_class(1)});
  CHECK(h.coefficient(key({{1, 1}}, {}, {})) == ExactComplex{mpq_class(-1)});
  SequenceState q(2);
  q(1) = {0.6, -0.2};
  CHECK(std::abs(oracle::evaluate(h, q, i0) - Complex(std::norm(q(1)) - t)) < 1e-15);
}

TEST_CASE("classify: round trip and class invariants") {
  Rng rng(3);
  KeyShape shape;
  shape.mode_bound = 3;
  shape.max_factors = 8;
  shape.max_a_modes = 2;
  shape.max_a_exponent = 2;
  const ActionVector i0 = torus_actions(3, e25);
  for (int t = 0; t < 200; ++t) {
    const auto h = random_hamiltonian<ExactComplex>(rng, e25, 3, 10, shape);
    const auto p = classify(h, i0);
    CHECK(reconstruct(p) == h);
    CHECK(p.conserving());
    for (const auto& [k, c] : p.r0) CHECK(k.disjoint_support());
    for (const auto& [k, c] : p.r1) CHECK(k.key.disjoint_support());
    for (const auto& [k, c] : p.r2) CHECK(k.j1 <= k.j2);

    const auto hf = to_float(h);
    const auto back = reconstruct(classify(hf, i0));
    CHECK(back.size() == hf.size());
    for (const auto& [k, c] : hf.terms()) CHECK(std::abs(back.coefficient(k) - c) <= 1e-12 * std::abs(c));
  }
}

TEST_CASE("tame defect") {
  const MonomialKey k = key({}, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}});
  CHECK(tame_defect(k, e3) == Approx(1.0));
  const SigmaWeight exact = SigmaWeight::exact(3.0);
  const auto m = oracle::magnitudes(k);
  CHECK(m.size() == 4);
  const double w5 = e3(5);
  CHECK(tame_defect(key({}, {{5, 1}, {-5, 1}}, {{5, 1}, {-5, 1}}), e3) == Approx(0.5 * 2 * w5));
  CHECK(tame_defect(key({}, {{5, 2}, {-5, 2}}, {{5, 2}, {-5, 2}}), e3) == Approx(0.5 * 6 * w5));
  CHECK(tame_defect(MonomialKey{}, e3) == 0.0);
  CHECK_THROWS_AS(tame_defect(key({}, {{1, 1}}, {{2, 1}}), e3), DomainError);
  CHECK(tame_defect(k, exact) >= 0.0);
}

TEST_CASE("tame defect matches the definition and is non-negative under the true cutoff") {
  for (double sigma : {2.1, 2.5, 3.0}) {
    const SigmaWeight w = SigmaWeight::exact(sigma);
    Rng rng(static_cast<std::uint64_t>(sigma * 100));
    for (int t = 0; t < 10000; ++t) {
      KeyShape shape;
      shape.mode_bound = t % 2 ? 1000 : 20;
      shape.max_factors = 10;
      shape.max_a_modes = 2;
      shape.mass = false;
      const MonomialKey k = random_conserving_key(rng, shape);
      const double d = tame_defect(k, w);
      const long double ref = oracle::exponent(k, sigma, w.cutoff()) - 0.5L * oracle::tail(k, sigma, w.cutoff());
      CHECK(d == Approx(static_cast<double>(ref)).epsilon(1e-9).scale(1.0));
      CHECK(d >= 0.0);
    }
  }
}

TEST_CASE("hamiltonian container") {
  Hamiltonian<Complex> h(e25, 2);
  const MonomialKey k = key({}, {{1, 1}}, {{1, 1}});
  h.add(k, 2.0);
  h.add(k, -2.0);
  CHECK(h.empty());
  CHECK_THROWS_AS(h.add(key({}, {{3, 1}}, {{3, 1}}), 1.0), MismatchError);
  h.add(key({}, {{0, 2}}, {{0, 2}}), 1.0);
  h.add(key({}, {{2, 1}}, {{2, 1}}), 1.0);
  h.add(key({{1, 1}}, {}, {}), 1.0);
  int prev = -1;
  for (const auto& [kk, c] : h.terms()) {
    CHECK(kk.degree() >= prev);
    prev = kk.degree();
  }
  Hamiltonian<Complex> other(e3, 2);
  CHECK_THROWS_AS(h += other, MismatchError);
  CHECK_THROWS_AS(h += Hamiltonian<Complex>(e25, 3), MismatchError);
}

TEST_CASE("torus actions") {
  for (const SigmaWeight& w : {e25, e3}) {
    const ActionVector i0 = torus_actions(5, w);
    CHECK(within_action_bound(i0, w));
    CHECK(within_torus_band(i0, w));
    for (int n = -5; n <= 5; ++n) CHECK(i0(n) == Approx(0.75 * std::exp(-2.0 * w(n))));
  }
}
