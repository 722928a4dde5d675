#pragma once

#include "formlab/exponents.hpp"
#include "formlab/hodge.hpp"

namespace formlab {

/// Inputs of a distributional wedge pairing: the slotted factors are the
/// potentials omega_i (degree k_i - 1), and psi is the test cochain of degree
/// |k alpha| with vanishing tangential trace.
struct WedgePairingInput {
  CochainTuple potentials;
  MultiIndex alpha;
  Cochain psi;

  std::vector<int> factorDegrees() const {
    std::vector<int> ks;
    for (const auto& p : potentials.parts) ks.push_back(p.degree + 1);
    return ks;
  }
  int weight() const {
    auto ks = factorDegrees();
    return alpha.weight(ks);
  }
};

namespace detail {

inline void checkPairingShapes(const WedgePairingInput& in) {
  require(in.psi.grid && in.potentials.m() > 0, ErrorCode::InvalidArgument, "empty pairing input");
  Cochain::requireCompatible(in.potentials[0], in.psi);
  require(static_cast<int>(in.alpha.alpha.size()) == in.potentials.m(), ErrorCode::InvalidArgument,
          "alpha length does not match the tuple");
  require(in.psi.degree == in.weight(), ErrorCode::DegreeMismatch,
          "test form degree must equal |k alpha|");
  const auto& g = *in.psi.grid;
  const Eigen::VectorXd mask = g.tangentialInteriorMask(in.psi.degree);
  const double trace = ((Eigen::VectorXd::Ones(mask.size()) - mask).cwiseProduct(in.psi.values))
                           .lpNorm<Eigen::Infinity>();
  require(trace <= 1e-12, ErrorCode::BoundaryTrace, "test form must have zero tangential trace");
}

/// Cup chain d w_1^{a_1} ~ ... with the (slotFactor, slotPower) copy replaced
/// by `slotted`; slotFactor < 0 builds the plain full chain.
inline Cochain slottedChain(const CochainTuple& derivatives, const MultiIndex& alpha,
                            int slotFactor, int slotPower, const Cochain* slotted) {
  Cochain acc(derivatives.grid(), 0);
  acc.values.setOnes();  // multiplicative unit of the cup product
  for (int i = 0; i < derivatives.m(); ++i) {
    for (int rep = 1; rep <= alpha.alpha[i]; ++rep) {
      const Cochain& next =
          (i == slotFactor && rep == slotPower) ? *slotted : derivatives[i];
      acc = cup(acc, next);
    }
  }
  return acc;
}

}  // namespace detail

/// Sign exponent of the slotted pairing: k_i (j_i - 1) + sum_{j < i} k_j a_j.
inline int slotSignExponent(const std::vector<int>& degrees, const MultiIndex& alpha,
                            int slotFactor, int slotPower) {
  int n = degrees[slotFactor] * (slotPower - 1);
  for (int j = 0; j < slotFactor; ++j) n += degrees[j] * alpha.alpha[j];
  return n;
}

/// Distributional wedge pairing of exact forms: the slotted copy of factor i
/// is replaced by the coexact part of its potential and the derivative moves
/// onto the test form. Slot choice changes the value only at solver accuracy.
/// When `exponents` is supplied it must be an admissible Sobolev vector.
inline double weakWedgeEval(const WedgePairingInput& in, int slotFactor, int slotPower,
                            const ExponentVector* exponents = nullptr) {
  detail::checkPairingShapes(in);
  const auto degrees = in.factorDegrees();
  require(slotFactor >= 0 && slotFactor < in.potentials.m() && slotPower >= 1 &&
              slotPower <= in.alpha.alpha[slotFactor],
          ErrorCode::InvalidArgument, "slot indices out of range");
  if (exponents) {
    const auto rep = sobolevAdmissible(in.psi.grid->n(), degrees, in.alpha, *exponents);
    require(rep.sobolevAdmissible, ErrorCode::InadmissibleExponents,
            "declared exponents are not Sobolev admissible");
  }
  const CochainTuple derivatives = coboundary(in.potentials);
  const Cochain coexact = hodgeDecompose(in.potentials[slotFactor], BoundaryCondition::Free).coexact;
  const Cochain chain =
      detail::slottedChain(derivatives, in.alpha, slotFactor, slotPower, &coexact);
  const Cochain deltaPsi = codifferential(in.psi, BoundaryCondition::Free);
  const int sign = slotSignExponent(degrees, in.alpha, slotFactor, slotPower);
  return ((sign % 2 == 0) ? 1.0 : -1.0) * massInner(deltaPsi, chain);
}

/// Very weak variant: the potential itself sits in the slot. When `p` and
/// `q` are supplied they must satisfy the very-weak admissibility bounds.
inline double veryWeakWedgeEval(const WedgePairingInput& in, int slotFactor, int slotPower,
                                const ExponentVector* p = nullptr,
                                const ExponentVector* q = nullptr) {
  detail::checkPairingShapes(in);
  const auto degrees = in.factorDegrees();
  require(slotFactor >= 0 && slotFactor < in.potentials.m() && slotPower >= 1 &&
              slotPower <= in.alpha.alpha[slotFactor],
          ErrorCode::InvalidArgument, "slot indices out of range");
  if (p && q) {
    const auto rep = veryWeakAdmissible(in.psi.grid->n(), in.alpha, *p, *q);
    require(rep.veryWeakAdmissible, ErrorCode::InadmissibleExponents,
            "declared exponents are not very-weak admissible");
  }
  const CochainTuple derivatives = coboundary(in.potentials);
  const Cochain chain = detail::slottedChain(derivatives, in.alpha, slotFactor, slotPower,
                                             &in.potentials[slotFactor]);
  const Cochain deltaPsi = codifferential(in.psi, BoundaryCondition::Free);
  const int sign = slotSignExponent(degrees, in.alpha, slotFactor, slotPower);
  return ((sign % 2 == 0) ? 1.0 : -1.0) * massInner(deltaPsi, chain);
}

/// Classical pairing <psi, d omega^alpha> through the cup product, defined
/// whenever the product is integrable.
inline double directWedgePairing(const WedgePairingInput& in) {
  detail::checkPairingShapes(in);
  const CochainTuple derivatives = coboundary(in.potentials);
  const Cochain chain = detail::slottedChain(derivatives, in.alpha, -1, -1, nullptr);
  return massInner(in.psi, chain);
}

/// Spread of the slotted values over every admissible slot.
struct SlotScan {
  double minValue = 0.0;
  double maxValue = 0.0;
  double spread() const { return maxValue - minValue; }
};

inline SlotScan weakWedgeSlotScan(const WedgePairingInput& in, bool veryWeak = false) {
  SlotScan scan;
  bool first = true;
  for (int i = 0; i < in.potentials.m(); ++i) {
    for (int j = 1; j <= in.alpha.alpha[i]; ++j) {
      const double v = veryWeak ? veryWeakWedgeEval(in, i, j) : weakWedgeEval(in, i, j);
      if (first) {
        scan.minValue = scan.maxValue = v;
        first = false;
      } else {
        scan.minValue = std::min(scan.minValue, v);
        scan.maxValue = std::max(scan.maxValue, v);
      }
    }
  }
  require(!first, ErrorCode::InvalidArgument, "alpha has no active slot");
  return scan;
}

/// One observed telescopic-bound ratio: the distributional difference of two
/// wedge powers against the Hoelder product of factor norms.
struct TelescopicSample {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return (rhs > 0.0) ? lhs / rhs : 0.0; }
};

inline TelescopicSample telescopicCheck(const CochainTuple& xiPotentials,
                                        const CochainTuple& zetaPotentials,
                                        const MultiIndex& alpha, const Cochain& psi,
                                        const ExponentVector& p) {
  WedgePairingInput left{xiPotentials, alpha, psi};
  WedgePairingInput right{zetaPotentials, alpha, psi};
  int slotFactor = 0;
  while (alpha.alpha[slotFactor] == 0) ++slotFactor;
  TelescopicSample sample;
  sample.lhs = std::abs(weakWedgeEval(left, slotFactor, 1) - weakWedgeEval(right, slotFactor, 1));

  const auto degrees = left.factorDegrees();
  const auto rep = sobolevAdmissible(psi.grid->n(), degrees, alpha, p);
  require(rep.sobolevAdmissible, ErrorCode::InadmissibleExponents,
          "telescopic bound needs admissible Sobolev exponents");
  const Cochain deltaPsi = codifferential(psi, BoundaryCondition::Free);
  const double deltaPsiInf = lpNorm(deltaPsi, std::numeric_limits<double>::infinity());
  const CochainTuple dXi = coboundary(xiPotentials);
  const CochainTuple dZeta = coboundary(zetaPotentials);

  double rhs = 0.0;
  for (int i = 0; i < xiPotentials.m(); ++i) {
    if (alpha.alpha[i] == 0) continue;
    const double mu = rep.mu[i]->toDouble();
    const Cochain xc = hodgeDecompose(xiPotentials[i], BoundaryCondition::Free).coexact;
    const Cochain zc = hodgeDecompose(zetaPotentials[i], BoundaryCondition::Free).coexact;
    Cochain diff(xc.grid, xc.degree, xc.values - zc.values);
    double term = alpha.alpha[i] * deltaPsiInf * lpNorm(diff, mu);
    const double sum_i = lpNorm(dXi[i], p.p[i].toDouble()) + lpNorm(dZeta[i], p.p[i].toDouble());
    term *= std::pow(sum_i, alpha.alpha[i] - 1);
    for (int j = 0; j < xiPotentials.m(); ++j) {
      if (j == i || alpha.alpha[j] == 0) continue;
      const double sum_j =
          lpNorm(dXi[j], p.p[j].toDouble()) + lpNorm(dZeta[j], p.p[j].toDouble());
      term *= std::pow(sum_j, alpha.alpha[j]);
    }
    rhs += term;
  }
  sample.rhs = rhs;
  return sample;
}

}  // namespace formlab
