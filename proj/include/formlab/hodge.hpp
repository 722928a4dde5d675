#pragma once

#include "formlab/cochain.hpp"

namespace formlab {

/// Conjugate gradients on a symmetric positive semidefinite operator given as
/// a callback. Converges on consistent singular systems; deterministic.
struct CgResult {
  Eigen::VectorXd x;
  double relResidual = 0.0;
  int iterations = 0;
};

inline CgResult conjugateGradient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                                  const Eigen::VectorXd& b, double tol = 1e-12,
                                  std::int64_t maxIter = -1,
                                  const Eigen::VectorXd* start = nullptr) {
  const double bNorm = b.norm();
  CgResult res;
  res.x = start ? *start : Eigen::VectorXd::Zero(b.size());
  if (maxIter < 0) maxIter = 10000LL * std::max<std::int64_t>(1, b.size());
  Eigen::VectorXd r = b - apply(res.x);
  const double floor = (bNorm > 0 ? bNorm : 1.0);
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  Eigen::VectorXd bestX = res.x;
  double bestRr = rr;
  int sinceImprovement = 0;
  int it = 0;
  // Residuals below the roundoff of a single operator application cannot be
  // trusted; stagnation tracking returns the best iterate instead of letting
  // null-space components grow.
  while (std::sqrt(rr) > tol * floor && it < maxIter) {
    const Eigen::VectorXd ap = apply(p);
    const double pap = p.dot(ap);
    if (pap <= 0.0) break;  // hit the null space
    const double alpha = rr / pap;
    res.x += alpha * p;
    r -= alpha * ap;
    const double rrNew = r.squaredNorm();
    p = r + (rrNew / rr) * p;
    rr = rrNew;
    ++it;
    if (rr < 0.9999 * bestRr) {
      bestRr = rr;
      bestX = res.x;
      sinceImprovement = 0;
    } else if (++sinceImprovement >= 50) {
      break;
    }
  }
  if (bestRr < rr) {
    res.x = bestX;
    rr = bestRr;
  }
  res.relResidual = std::sqrt(rr) / floor;
  res.iterations = it;
  return res;
}

/// Orthogonal splitting of a k-cochain into a coboundary, a codifferential
/// image and a harmonic remainder, with potentials. Under the tangential-zero
/// condition all potentials live in the subcomplex vanishing on
/// boundary-tangential cells.
struct HodgeSplit {
  Cochain exact;
  Cochain coexact;
  Cochain harmonic;
  Cochain alpha;  // potential of the exact part, degree k-1
  Cochain beta;   // potential of the coexact part, degree k+1
  double relResidual = 0.0;
};

namespace detail {

struct DegreePack {
  Eigen::SparseMatrix<double> dLo;  // k-1 -> k (empty when k = 0)
  Eigen::SparseMatrix<double> dHi;  // k -> k+1 (empty when k = n)
  Eigen::VectorXd mLo, mK, mHi;
  Eigen::VectorXd pLo, pK, pHi;  // subcomplex masks (all-ones when free)

  static DegreePack build(const CubicalGrid& g, int k, BoundaryCondition bc) {
    DegreePack pack;
    pack.mK = g.massDiagonal(k);
    pack.pK = (bc == BoundaryCondition::TangentialZero) ? g.tangentialInteriorMask(k)
                                                        : Eigen::VectorXd::Ones(g.cellCount(k));
    if (k > 0) {
      pack.dLo = g.coboundaryMatrix(k - 1);
      pack.mLo = g.massDiagonal(k - 1);
      pack.pLo = (bc == BoundaryCondition::TangentialZero)
                     ? g.tangentialInteriorMask(k - 1)
                     : Eigen::VectorXd::Ones(g.cellCount(k - 1));
    }
    if (k < g.n()) {
      pack.dHi = g.coboundaryMatrix(k);
      pack.mHi = g.massDiagonal(k + 1);
      pack.pHi = (bc == BoundaryCondition::TangentialZero)
                     ? g.tangentialInteriorMask(k + 1)
                     : Eigen::VectorXd::Ones(g.cellCount(k + 1));
    }
    return pack;
  }
};

}  // namespace detail

inline HodgeSplit hodgeDecompose(const Cochain& w, BoundaryCondition bc, double tol = 1e-12) {
  const auto& g = *w.grid;
  const int k = w.degree;
  const auto pack = detail::DegreePack::build(g, k, bc);

  HodgeSplit split;
  split.exact = Cochain(w.grid, k);
  split.coexact = Cochain(w.grid, k);
  split.alpha = (k > 0) ? Cochain(w.grid, k - 1) : Cochain(w.grid, k);
  split.beta = (k < g.n()) ? Cochain(w.grid, k + 1) : Cochain(w.grid, k);

  // Exact part: least squares min |d a - w|_M over admissible potentials.
  if (k > 0) {
    const auto normalOp = [&](const Eigen::VectorXd& x) {
      Eigen::VectorXd y = pack.dLo * pack.pLo.cwiseProduct(x);
      y = pack.dLo.transpose() * pack.mK.cwiseProduct(y);
      return pack.pLo.cwiseProduct(y).eval();
    };
    const Eigen::VectorXd rhs =
        pack.pLo.cwiseProduct(pack.dLo.transpose() * pack.mK.cwiseProduct(w.values));
    auto sol = conjugateGradient(normalOp, rhs, tol);
    split.alpha.values = pack.pLo.cwiseProduct(sol.x);
    split.exact.values = pack.dLo * split.alpha.values;
  }

  // Coexact part: least squares min |delta b - r|_M against the remainder.
  const Eigen::VectorXd remainder = w.values - split.exact.values;
  if (k < g.n()) {
    const auto delta = [&](const Eigen::VectorXd& b) {
      Eigen::VectorXd y = pack.dHi.transpose() * pack.mHi.cwiseProduct(pack.pHi.cwiseProduct(b));
      return pack.pK.cwiseProduct(y.cwiseQuotient(pack.mK)).eval();
    };
    // Euclidean-symmetric normal equations for min |delta b - r|_{M_k}:
    // the transposed map carries the mass weights explicitly.
    const auto deltaT = [&](const Eigen::VectorXd& x) {
      Eigen::VectorXd y = pack.dHi * pack.pK.cwiseProduct(x);
      return pack.pHi.cwiseProduct(pack.mHi.cwiseProduct(y)).eval();
    };
    const auto normalOp = [&](const Eigen::VectorXd& b) { return deltaT(delta(b)).eval(); };
    const Eigen::VectorXd rhs = deltaT(remainder);
    auto sol = conjugateGradient(normalOp, rhs, tol);
    split.beta.values = pack.pHi.cwiseProduct(sol.x);
    split.coexact.values = delta(split.beta.values);
  }

  split.harmonic = Cochain(w.grid, k, remainder - split.coexact.values);

  // The sum reproduces w identically; the solver quality shows up as the
  // harmonicity defect of the remainder.
  const double wNorm = std::sqrt(massInner(w, w));
  double defect = 0.0;
  if (k < g.n()) {
    Eigen::VectorXd dh = pack.dHi * pack.pK.cwiseProduct(split.harmonic.values);
    defect += std::sqrt(dh.cwiseAbs2().dot(pack.mHi));
  }
  if (k > 0) {
    Eigen::VectorXd dh = pack.pLo.cwiseProduct(
        (pack.dLo.transpose() * pack.mK.cwiseProduct(pack.pK.cwiseProduct(split.harmonic.values)))
            .cwiseQuotient(pack.mLo));
    defect += std::sqrt(dh.cwiseAbs2().dot(pack.mLo));
  }
  split.relResidual = (wNorm > 0) ? defect / wNorm : defect;
  if (split.relResidual > 1e-6)
    fail(ErrorCode::SolverDiverged,
         "hodge decomposition defect " + std::to_string(split.relResidual));
  return split;
}

/// Coexact part of the splitting plus the measured discrete stability ratio
/// |coexact|_{W^{1,p}} / |dw|_{L^p}.
struct CoexactReport {
  Cochain coexact;
  double stabilityRatio = 0.0;
};

inline CoexactReport coexactPart(const Cochain& w, BoundaryCondition bc, double p = 2.0,
                                 double tol = 1e-12) {
  CoexactReport rep;
  auto split = hodgeDecompose(w, bc, tol);
  rep.coexact = split.coexact;
  double num = lpNorm(rep.coexact, p);
  if (rep.coexact.degree >= 1) num += lpNorm(codifferential(rep.coexact, bc), p);
  if (rep.coexact.degree < w.grid->n()) num += lpNorm(coboundary(rep.coexact), p);
  const double den = (w.degree < w.grid->n()) ? lpNorm(coboundary(w), p) : 0.0;
  rep.stabilityRatio = (den > 0) ? num / den : 0.0;
  return rep;
}

}  // namespace formlab
