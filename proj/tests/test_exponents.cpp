#include <doctest.h>

#include "formlab/exponents.hpp"
#include "formlab/rng.hpp"

using namespace formlab;

namespace {
ExponentVector ev(std::vector<Exponent> xs) { return ExponentVector{std::move(xs)}; }
}  // namespace

TEST_CASE("rational arithmetic is exact and normalized") {
  Rational a(2, 4);
  CHECK(a.num() == 1);
  CHECK(a.den() == 2);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(7, 3) > Rational(9, 4));
  CHECK((-Rational(1, 2)).num() == -1);
  CHECK(Exponent::parse("9/2").value() == Rational(9, 2));
  CHECK(Exponent::parse("inf").isInf());
  CHECK_THROWS_AS(Exponent::parse("x"), Error);
}

TEST_CASE("sobolev admissibility: forced arithmetic case") {
  auto rep = sobolevAdmissible(3, {1, 1}, MultiIndex{{1, 1}}, ev({Exponent(2), Exponent(2)}));
  CHECK(rep.sobolevAdmissible);
  CHECK(*rep.thetaInv == Rational(1));
  CHECK(*rep.mu[0] == Rational(2));
  CHECK(*rep.mu[1] == Rational(2));
  CHECK(rep.subUnitTheta);
}

TEST_CASE("sobolev admissibility: jacobian scale hits the boundary exactly") {
  for (int n = 2; n <= 4; ++n) {
    std::vector<int> degrees(n, 1);
    MultiIndex alpha{std::vector<int>(n, 1)};
    ExponentVector p;
    for (int i = 0; i < n; ++i) p.p.push_back(Exponent(Rational(n * n, n + 1)));
    auto rep = sobolevAdmissible(n, degrees, alpha, p);
    CHECK(rep.sobolevAdmissible);
    CHECK(*rep.thetaInv == Rational(1) + Rational(1, n));  // exact equality
    CHECK_FALSE(rep.strictTheta);
  }
}

TEST_CASE("sobolev admissibility: squares below the threshold are rejected") {
  // alpha = (2) with a single factor: admissible iff 1 + 1/n >= 2/q.
  for (int n = 2; n <= 5; ++n) {
    const Rational boundary(2 * n, n + 1);
    auto atBoundary =
        sobolevAdmissible(n, {1}, MultiIndex{{2}}, ev({Exponent(boundary)}));
    // nontriviality aside, the arithmetic flag is what is probed here
    CHECK(atBoundary.sobolevAdmissible);
    const Rational below = boundary - Rational(1, 100);
    auto rep = sobolevAdmissible(n, {1}, MultiIndex{{2}}, ev({Exponent(below)}));
    CHECK_FALSE(rep.sobolevAdmissible);
  }
}

TEST_CASE("sobolev admissibility is monotone in each exponent") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(3));
    std::vector<int> degrees(m);
    std::vector<int> alpha(m);
    ExponentVector p;
    for (int i = 0; i < m; ++i) {
      degrees[i] = 1 + static_cast<int>(rng.below(n));
      alpha[i] = static_cast<int>(rng.below(3));
      p.p.push_back(Exponent(Rational(1 + static_cast<std::int64_t>(rng.below(40)),
                                      1 + static_cast<std::int64_t>(rng.below(10)))));
      if (!(p.p.back().value() > Rational(1))) p.p.back() = Exponent(Rational(3, 2));
      if (alpha[i] > n / degrees[i]) alpha[i] = n / degrees[i];
    }
    auto rep = sobolevAdmissible(n, degrees, MultiIndex{{alpha}}, p);
    if (!rep.sobolevAdmissible) continue;
    ExponentVector bigger = p;
    const int which = static_cast<int>(rng.below(m));
    bigger.p[which] = Exponent(p.p[which].value() + Rational(1 + (int)rng.below(5)));
    CHECK(sobolevAdmissible(n, degrees, MultiIndex{{alpha}}, bigger).sobolevAdmissible);
    // exact identity 1/mu_i + 1/theta - 1/p_i = 1, and mu_i >= 1 on active factors
    for (int i = 0; i < m; ++i) {
      REQUIRE(rep.mu[i].has_value());
      CHECK(rep.mu[i]->inverse() + *rep.thetaInv - p.p[i].reciprocal() == Rational(1));
      if (alpha[i] >= 1) CHECK(*rep.mu[i] >= Rational(1));
    }
  }
}

TEST_CASE("holder admissibility and the remark flag") {
  auto rep = holderAdmissible(3, {1, 1}, MultiIndex{{1, 1}},
                              ev({Exponent::infinity(), Exponent(2)}));
  CHECK(rep.holderAdmissible);
  CHECK(*rep.rhoInv == Rational(1, 2));
  CHECK(rep.remarkConsistent);

  auto twoInf = holderAdmissible(3, {1, 1}, MultiIndex{{1, 1}},
                                 ev({Exponent::infinity(), Exponent::infinity()}));
  CHECK(twoInf.holderAdmissible);  // literal inequalities hold: 1/rho = 0
  CHECK_FALSE(twoInf.remarkConsistent);

  auto sq = holderAdmissible(4, {2}, MultiIndex{{2}}, ev({Exponent::infinity()}));
  CHECK(sq.holderAdmissible);
  CHECK_FALSE(sq.remarkConsistent);  // alpha_i = 2 with q_i infinite
}

TEST_CASE("associated pairs") {
  auto rep = associatedPair(3, ev({Exponent(2), Exponent(2)}), ev({Exponent(6), Exponent(6)}));
  CHECK(rep.associatedPair);
  CHECK_FALSE(rep.compactPair);  // n q/(n+q) = 2 exactly

  auto infQ = associatedPair(3, ev({Exponent(3), Exponent(3)}),
                             ev({Exponent::infinity(), Exponent(6)}));
  CHECK(infQ.associatedPair);
  CHECK_FALSE(infQ.compactPair);  // p = n at the infinite slot

  auto compact = associatedPair(2, ev({Exponent(Rational(19, 10)), Exponent(Rational(19, 10))}),
                                ev({Exponent(2), Exponent(2)}));
  CHECK(compact.associatedPair);
  CHECK(compact.compactPair);  // n q/(n+q) = 1 < 19/10

  // p = q degenerates to an always-true bound for huge n
  auto huge = associatedPair(1000000, ev({Exponent(2)}), ev({Exponent(2)}));
  CHECK(huge.associatedPair);
}

TEST_CASE("very weak admissibility") {
  // bounded-plus-derivative scale: alpha all ones, p_i = n - 1, q_i = inf
  for (int n = 3; n <= 5; ++n) {
    MultiIndex alpha{std::vector<int>(n, 1)};
    ExponentVector p, q;
    for (int i = 0; i < n; ++i) {
      p.p.push_back(Exponent(n - 1));
      q.p.push_back(Exponent::infinity());
    }
    auto rep = veryWeakAdmissible(n, alpha, p, q);
    CHECK(rep.veryWeakAdmissible);
    // the defining inequality is tight: 1/theta - 1/p_i = 1 exactly
    CHECK(*rep.thetaInv - Rational(1, n - 1) == Rational(1));
  }

  // p = q with sum alpha_i / p_i <= 1
  auto pq = veryWeakAdmissible(3, MultiIndex{{1, 1}}, ev({Exponent(2), Exponent(2)}),
                               ev({Exponent(2), Exponent(2)}));
  CHECK(pq.veryWeakAdmissible);

  // barely-above-1 exponents with a heavy multiindex fail
  auto bad = veryWeakAdmissible(4, MultiIndex{{3, 1}},
                                ev({Exponent(Rational(11, 10)), Exponent(Rational(11, 10))}),
                                ev({Exponent(4), Exponent(4)}));
  CHECK_FALSE(bad.veryWeakAdmissible);
}
