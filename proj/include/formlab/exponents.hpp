#pragma once

#include <optional>
#include <vector>

#include "formlab/multiindex.hpp"
#include "formlab/rational.hpp"

namespace formlab {

/// A vector of Lebesgue exponents, one per tuple factor.
struct ExponentVector {
  std::vector<Exponent> p;

  int m() const { return static_cast<int>(p.size()); }

  static ExponentVector parse(const std::vector<std::string>& items) {
    ExponentVector v;
    for (const auto& s : items) v.p.push_back(Exponent::parse(s));
    return v;
  }
};

/// Everything the admissibility predicates decide, kept exact: 1/theta and
/// 1/rho are rationals, mu_i solves 1 = 1/mu_i + 1/theta - 1/p_i.
struct ExponentReport {
  std::optional<Rational> thetaInv;
  std::optional<Rational> rhoInv;
  std::vector<std::optional<Rational>> mu;

  bool sobolevAdmissible = false;
  bool holderAdmissible = false;
  bool associatedPair = false;
  bool compactPair = false;
  bool veryWeakAdmissible = false;
  /// 1 + 1/n > 1/theta (strict): the compact-embedding regime.
  bool strictTheta = false;
  /// 1 >= 1/theta: the regime where the product needs no weak definition.
  bool subUnitTheta = false;
  /// Consistency with the prose reading of the Hoelder definition: at most
  /// one q_i infinite and alpha_i = 1 wherever q_i is infinite. The literal
  /// inequalities are authoritative; this flag records the discrepancy.
  bool remarkConsistent = true;
};

namespace detail {
inline Rational thetaInverse(const MultiIndex& alpha, const ExponentVector& p) {
  Rational s(0);
  for (int i = 0; i < p.m(); ++i) s = s + Rational(alpha.alpha[i]) * p.p[i].reciprocal();
  return s;
}
}  // namespace detail

/// Admissible Sobolev exponent test: all p_i finite in (1, inf),
/// 1 + 1/n >= 1/theta and 1 > 1/theta - 1/p_i for every i. Fills mu.
inline ExponentReport sobolevAdmissible(int n, const std::vector<int>& degrees,
                                        const MultiIndex& alpha, const ExponentVector& p) {
  require(static_cast<int>(degrees.size()) == p.m() &&
              static_cast<int>(alpha.alpha.size()) == p.m(),
          ErrorCode::InvalidArgument, "degree/alpha/exponent lengths differ");
  ExponentReport rep;
  bool ok = true;
  for (const auto& pi : p.p) {
    require(!pi.isInf(), ErrorCode::BadExponent, "Sobolev admissibility needs finite exponents");
    if (!(pi.value() > Rational(1))) ok = false;
  }
  const Rational thetaInv = detail::thetaInverse(alpha, p);
  rep.thetaInv = thetaInv;
  const Rational bound = Rational(1) + Rational(1, n);
  if (!(bound >= thetaInv)) ok = false;
  rep.strictTheta = bound > thetaInv;
  rep.subUnitTheta = Rational(1) >= thetaInv;
  rep.mu.resize(p.m());
  for (int i = 0; i < p.m(); ++i) {
    const Rational gap = thetaInv - p.p[i].reciprocal();
    if (!(Rational(1) > gap)) ok = false;
    const Rational muInv = Rational(1) - gap;
    if (muInv > Rational(0)) rep.mu[i] = muInv.inverse();
  }
  rep.sobolevAdmissible = ok;
  return rep;
}

/// Admissible Hoelder exponent test: 1 < q_i <= inf, 1 >= 1/rho and
/// 1 >= 1/rho - 1/q_i, evaluated literally; see remarkConsistent.
inline ExponentReport holderAdmissible(int /*n*/, const std::vector<int>& degrees,
                                       const MultiIndex& alpha, const ExponentVector& q) {
  require(static_cast<int>(degrees.size()) == q.m() &&
              static_cast<int>(alpha.alpha.size()) == q.m(),
          ErrorCode::InvalidArgument, "degree/alpha/exponent lengths differ");
  ExponentReport rep;
  bool ok = true;
  int infCount = 0;
  for (int i = 0; i < q.m(); ++i) {
    if (q.p[i].isInf()) {
      ++infCount;
      if (alpha.alpha[i] != 1) rep.remarkConsistent = false;
    } else if (!(q.p[i].value() > Rational(1))) {
      ok = false;
    }
  }
  if (infCount > 1) rep.remarkConsistent = false;
  const Rational rhoInv = detail::thetaInverse(alpha, q);
  rep.rhoInv = rhoInv;
  if (!(Rational(1) >= rhoInv)) ok = false;
  for (int i = 0; i < q.m(); ++i)
    if (!(Rational(1) >= rhoInv - q.p[i].reciprocal())) ok = false;
  rep.holderAdmissible = ok;
  return rep;
}

/// Associated pair test: p_i >= n q_i/(n + q_i), with p_i >= n on infinite
/// q_i. Strict inequalities everywhere give the compact flag.
inline ExponentReport associatedPair(int n, const ExponentVector& p, const ExponentVector& q) {
  require(p.m() == q.m(), ErrorCode::InvalidArgument, "exponent vectors differ in length");
  ExponentReport rep;
  bool assoc = true;
  bool strict = true;
  for (int i = 0; i < p.m(); ++i) {
    require(!p.p[i].isInf(), ErrorCode::BadExponent, "associated pair needs finite p");
    const Rational pi = p.p[i].value();
    Rational rhs(0);
    if (q.p[i].isInf()) {
      rhs = Rational(n);
    } else {
      const Rational qi = q.p[i].value();
      rhs = Rational(n) * qi / (Rational(n) + qi);
    }
    if (!(pi >= rhs)) assoc = false;
    if (!(pi > rhs)) strict = false;
  }
  rep.associatedPair = assoc;
  rep.compactPair = assoc && strict;
  return rep;
}

/// Very-weak-product admissibility: 1 >= 1/q_i + 1/theta - 1/p_i for all i,
/// with 1 < p_i < inf and 1 < q_i <= inf.
inline ExponentReport veryWeakAdmissible(int /*n*/, const MultiIndex& alpha,
                                         const ExponentVector& p, const ExponentVector& q) {
  require(p.m() == q.m() && static_cast<int>(alpha.alpha.size()) == p.m(),
          ErrorCode::InvalidArgument, "alpha/exponent lengths differ");
  ExponentReport rep;
  bool ok = true;
  for (const auto& pi : p.p) {
    require(!pi.isInf(), ErrorCode::BadExponent, "very-weak admissibility needs finite p");
    if (!(pi.value() > Rational(1))) ok = false;
  }
  for (const auto& qi : q.p)
    if (!qi.isInf() && !(qi.value() > Rational(1))) ok = false;
  const Rational thetaInv = detail::thetaInverse(alpha, p);
  rep.thetaInv = thetaInv;
  rep.subUnitTheta = Rational(1) >= thetaInv;
  for (int i = 0; i < p.m(); ++i) {
    const Rational lhs = q.p[i].reciprocal() + thetaInv - p.p[i].reciprocal();
    if (!(Rational(1) >= lhs)) ok = false;
  }
  rep.veryWeakAdmissible = ok;
  return rep;
}

}  // namespace formlab
