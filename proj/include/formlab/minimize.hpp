#pragma once

#include <deque>

#include "formlab/hodge.hpp"
#include "formlab/integrand.hpp"

namespace formlab {

/// Coclosedness of the linear term in the interior (distributional) sense:
/// the free codifferential must vanish off the boundary-tangential cells.
struct CoclosedReport {
  bool coclosed = false;
  double residual = 0.0;
};

inline CoclosedReport checkCoclosed(const CochainTuple& g) {
  CoclosedReport rep;
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& gi : g.parts) {
    scale = std::max(scale, std::sqrt(massInner(gi, gi)));
    if (gi.degree == 0) continue;  // the codifferential of a 0-form vanishes
    Cochain d = codifferential(gi, BoundaryCondition::Free);
    d.values = gi.grid->tangentialInteriorMask(d.degree).cwiseProduct(d.values);
    worst = std::max(worst, std::sqrt(massInner(d, d)));
  }
  rep.residual = worst;
  rep.coclosed = worst <= 1e-9 * std::max(scale, 1e-30);
  return rep;
}

/// Discrete minimization problem for sums of f(x, d omega) with a linear
/// lower-order term. Unknowns are the potentials (degree k_i - 1) with the
/// tangential boundary trace pinned to the boundary data.
struct VariationalProblem {
  GridPtr grid;
  std::vector<int> degrees;  // k_i, the degrees of the derivatives
  IntegrandSpec integrand;
  std::optional<Eigen::VectorXd> cellWeights;  // piecewise-constant x-dependence
  CochainTuple linearTerm;        // g_i paired with omega_i (may be empty)
  CochainTuple linearDerivTerm;   // G_i paired with -<G_i, d omega_i> (may be empty)
  CochainTuple boundaryData;      // omega_0 potentials
  std::vector<double> exponents;  // p_i
  double energyOffset = 0.0;
  bool wellPosed = true;

  VariationalProblem(GridPtr g, std::vector<int> ks, IntegrandSpec f, CochainTuple g0,
                     CochainTuple omega0, std::vector<double> p)
      : grid(std::move(g)),
        degrees(std::move(ks)),
        integrand(std::move(f)),
        linearTerm(std::move(g0)),
        boundaryData(std::move(omega0)),
        exponents(std::move(p)) {
    require(integrand.degrees() == degrees, ErrorCode::DegreeMismatch,
            "integrand degrees do not match the problem");
    require(static_cast<int>(exponents.size()) == m(), ErrorCode::InvalidArgument,
            "exponent count mismatch");
    for (double pi : exponents)
      require(pi > 1.0 && std::isfinite(pi), ErrorCode::BadExponent,
              "exponents must lie in (1, infinity)");
    require(boundaryData.m() == m(), ErrorCode::InvalidArgument, "boundary data count mismatch");
    for (int i = 0; i < m(); ++i)
      require(boundaryData[i].degree == degrees[i] - 1, ErrorCode::DegreeMismatch,
              "boundary data degree mismatch");
    if (linearTerm.m() > 0) {
      require(linearTerm.m() == m(), ErrorCode::InvalidArgument, "linear term count mismatch");
      wellPosed = checkCoclosed(linearTerm).coclosed;
    }
    if (cellWeights)
      require(cellWeights->size() == grid->cellCount(grid->n()), ErrorCode::GridMismatch,
              "cell weight field length mismatch");
  }

  int m() const { return static_cast<int>(degrees.size()); }
};

struct MinimizeReport {
  CochainTuple minimizer;
  double energy = 0.0;
  int iterations = 0;
  double gradientNorm = 0.0;
  double gaugeResidual = 0.0;     // interior codifferential of the gauge-fixed point
  double boundaryResidual = 0.0;  // trace mismatch against the data (zero by construction)
};

namespace detail {

/// Averages a per-top-cell weight field onto the staggered k-cell lattice.
inline Eigen::VectorXd staggeredWeights(const CubicalGrid& g, int k, const Eigen::VectorXd& w) {
  Eigen::VectorXd out(g.cellCount(k));
  const int n = g.n();
  for (std::int64_t i = 0; i < out.size(); ++i) {
    const auto cell = g.cell(k, i);
    const Mask axes = g.axes(k, cell.maskIdx);
    double acc = 0.0;
    int count = 0;
    // adjacent top cells: shift each normal coordinate down by 0 or 1
    const auto normals = maskToTuple(((Mask(1) << n) - 1) & ~axes);
    for (int t = 0; t < (1 << (n - k)); ++t) {
      CubicalGrid::Cell top{0, cell.corner};
      bool valid = true;
      for (int j = 0; j < n - k; ++j) {
        const int ax = normals[j] - 1;
        if (t & (1 << j)) top.corner[ax] -= 1;
        if (top.corner[ax] < 0 || top.corner[ax] >= g.res()) valid = false;
      }
      if (!valid) continue;
      acc += w(g.index(n, top));
      ++count;
    }
    out(i) = count ? acc / count : 1.0;
  }
  return out;
}

/// Problem state shared by the energy and gradient callbacks.
struct EnergyModel {
  const VariationalProblem* problem;
  std::vector<Eigen::SparseMatrix<double>> d;       // coboundary per factor
  std::vector<Eigen::VectorXd> massLo, massHi;      // degree k_i - 1 and k_i
  std::vector<Eigen::VectorXd> interiorMask;        // unknown dofs (1) vs pinned (0)
  std::vector<Eigen::VectorXd> pinned;              // boundary values, zero on interior
  std::vector<Eigen::VectorXd> fWeights;            // per k_i-cell quadrature weight for
                                                    // the norm-power path
  bool normPowerPath = false;

  static EnergyModel build(const VariationalProblem& p, bool pinTouchingLayer = false) {
    EnergyModel mdl;
    mdl.problem = &p;
    const auto& g = *p.grid;
    mdl.normPowerPath = p.integrand.kind() == IntegrandSpec::Kind::NormPower;
    for (int i = 0; i < p.m(); ++i) {
      const int lo = p.degrees[i] - 1;
      mdl.d.push_back(g.coboundaryMatrix(lo));
      mdl.massLo.push_back(g.massDiagonal(lo));
      mdl.massHi.push_back(g.massDiagonal(p.degrees[i]));
      Eigen::VectorXd mask = pinTouchingLayer ? g.strictInteriorMask(lo)
                                              : g.tangentialInteriorMask(lo);
      mdl.interiorMask.push_back(mask);
      mdl.pinned.push_back(
          (Eigen::VectorXd::Ones(mask.size()) - mask).cwiseProduct(p.boundaryData[i].values));
      Eigen::VectorXd wk = Eigen::VectorXd::Ones(g.cellCount(p.degrees[i]));
      if (p.cellWeights) wk = staggeredWeights(g, p.degrees[i], *p.cellWeights);
      mdl.fWeights.push_back(wk);
    }
    return mdl;
  }

  std::vector<Eigen::VectorXd> split(const Eigen::VectorXd& x) const {
    std::vector<Eigen::VectorXd> parts;
    Eigen::Index at = 0;
    for (int i = 0; i < problem->m(); ++i) {
      const Eigen::Index len = interiorMask[i].size();
      parts.push_back(interiorMask[i].cwiseProduct(x.segment(at, len)) + pinned[i]);
      at += len;
    }
    return parts;
  }

  Eigen::Index dofCount() const {
    Eigen::Index total = 0;
    for (const auto& m : interiorMask) total += m.size();
    return total;
  }

  CochainTuple toTuple(const Eigen::VectorXd& x) const {
    std::vector<Cochain> parts;
    auto vals = split(x);
    for (int i = 0; i < problem->m(); ++i)
      parts.emplace_back(problem->grid, problem->degrees[i] - 1, vals[i]);
    return CochainTuple(std::move(parts));
  }

  double energy(const Eigen::VectorXd& x) const {
    const auto& p = *problem;
    const auto& g = *p.grid;
    const auto omega = split(x);
    double e = p.energyOffset;
    std::vector<Eigen::VectorXd> derivs;
    for (int i = 0; i < p.m(); ++i) derivs.push_back(mdlDeriv(i, omega[i]));
    if (normPowerPath) {
      for (int i = 0; i < p.m(); ++i) {
        const double pw = p.integrand.powers()[i];
        const double scale = std::pow(g.h(), p.degrees[i]);
        const auto& w = derivs[i];
        double acc = 0.0;
        for (Eigen::Index c = 0; c < w.size(); ++c)
          acc += fWeights[i](c) * std::pow(std::abs(w(c)) / scale, pw) *
                 g.cellVolume(p.degrees[i], g.cell(p.degrees[i], c));
        e += p.integrand.weights()[i] * acc;
      }
    } else {
      std::vector<Cochain> dcochains;
      for (int i = 0; i < p.m(); ++i)
        dcochains.emplace_back(p.grid, p.degrees[i], derivs[i]);
      const CochainTuple dtuple{std::move(dcochains)};
      const double hn = std::pow(g.h(), g.n());
      for (std::int64_t c = 0; c < g.cellCount(g.n()); ++c) {
        const double w = p.cellWeights ? (*p.cellWeights)(c) : 1.0;
        e += w * p.integrand(reconstructTupleAtCenter(dtuple, c)) * hn;
      }
    }
    for (int i = 0; i < p.m() && i < p.linearTerm.m(); ++i)
      e += p.linearTerm[i].values.cwiseProduct(massLo[i]).dot(omega[i]);
    for (int i = 0; i < p.m() && i < p.linearDerivTerm.m(); ++i)
      e -= p.linearDerivTerm[i].values.cwiseProduct(massHi[i]).dot(derivs[i]);
    return e;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    const auto& p = *problem;
    const auto& g = *p.grid;
    const auto omega = split(x);
    std::vector<Eigen::VectorXd> derivs;
    for (int i = 0; i < p.m(); ++i) derivs.push_back(mdlDeriv(i, omega[i]));
    std::vector<Eigen::VectorXd> gradHi(p.m());
    if (normPowerPath) {
      for (int i = 0; i < p.m(); ++i) {
        const double pw = p.integrand.powers()[i];
        const double scale = std::pow(g.h(), p.degrees[i]);
        const auto& w = derivs[i];
        gradHi[i] = Eigen::VectorXd::Zero(w.size());
        for (Eigen::Index c = 0; c < w.size(); ++c) {
          const double r = w(c) / scale;
          if (r == 0.0) continue;
          gradHi[i](c) = p.integrand.weights()[i] * pw * std::pow(std::abs(r), pw - 1) *
                         (r > 0 ? 1.0 : -1.0) * fWeights[i](c) *
                         g.cellVolume(p.degrees[i], g.cell(p.degrees[i], c)) / scale;
        }
      }
    } else {
      for (int i = 0; i < p.m(); ++i) gradHi[i] = Eigen::VectorXd::Zero(derivs[i].size());
      std::vector<Cochain> dcochains;
      for (int i = 0; i < p.m(); ++i)
        dcochains.emplace_back(p.grid, p.degrees[i], derivs[i]);
      const CochainTuple dtuple{std::move(dcochains)};
      const double hn = std::pow(g.h(), g.n());
      const int n = g.n();
      for (std::int64_t c = 0; c < g.cellCount(n); ++c) {
        const double w = p.cellWeights ? (*p.cellWeights)(c) : 1.0;
        const FormTuple grad = p.integrand.gradient(reconstructTupleAtCenter(dtuple, c));
        const auto top = g.cell(n, c);
        for (int i = 0; i < p.m(); ++i) {
          const int k = p.degrees[i];
          const double scale = std::pow(g.h(), k) * (1 << (n - k));
          const auto& masks = maskTable(n, k).masks;
          for (std::size_t mi = 0; mi < masks.size(); ++mi) {
            const double gval = w * hn * grad[i].coeffs()(static_cast<int>(mi)) / scale;
            if (gval == 0.0) continue;
            const auto normals = maskToTuple(((Mask(1) << n) - 1) & ~masks[mi]);
            for (int t = 0; t < (1 << (n - k)); ++t) {
              CubicalGrid::Cell cell{static_cast<int>(mi), top.corner};
              for (int j = 0; j < n - k; ++j)
                if (t & (1 << j)) cell.corner[normals[j] - 1] += 1;
              gradHi[i](g.index(k, cell)) += gval;
            }
          }
        }
      }
    }
    Eigen::VectorXd out(dofCount());
    Eigen::Index at = 0;
    for (int i = 0; i < p.m(); ++i) {
      Eigen::VectorXd gi = d[i].transpose() * gradHi[i];
      if (i < p.linearTerm.m()) gi += p.linearTerm[i].values.cwiseProduct(massLo[i]);
      if (i < p.linearDerivTerm.m())
        gi -= d[i].transpose() * p.linearDerivTerm[i].values.cwiseProduct(massHi[i]);
      out.segment(at, gi.size()) = interiorMask[i].cwiseProduct(gi);
      at += gi.size();
    }
    return out;
  }

 private:
  Eigen::VectorXd mdlDeriv(int i, const Eigen::VectorXd& omega) const { return d[i] * omega; }
};

/// Limited-memory quasi-Newton descent with Armijo backtracking.
struct DescentResult {
  Eigen::VectorXd x;
  double energy = 0.0;
  double gradNorm = 0.0;
  int iterations = 0;
};

template <typename Model>
DescentResult lbfgs(const Model& mdl, Eigen::VectorXd x, int maxIter = 5000,
                    double gradTolFactor = 1e-8) {
  constexpr int kMemory = 10;
  constexpr double kArmijo = 1e-4;
  constexpr double kShrink = 0.5;
  DescentResult res;
  double e = mdl.energy(x);
  Eigen::VectorXd grad = mdl.gradient(x);
  const double tol = gradTolFactor * std::max(1.0, grad.norm());
  std::deque<Eigen::VectorXd> ss, ys;
  std::deque<double> rhos;
  int it = 0;
  while (grad.norm() > tol && it < maxIter) {
    // two-loop recursion
    Eigen::VectorXd q = grad;
    std::vector<double> alphas(ss.size());
    for (int j = static_cast<int>(ss.size()) - 1; j >= 0; --j) {
      alphas[j] = rhos[j] * ss[j].dot(q);
      q -= alphas[j] * ys[j];
    }
    if (!ss.empty()) {
      const double gamma = ss.back().dot(ys.back()) / ys.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t j = 0; j < ss.size(); ++j) {
      const double beta = rhos[j] * ys[j].dot(q);
      q += (alphas[j] - beta) * ss[j];
    }
    Eigen::VectorXd dir = -q;
    double slope = grad.dot(dir);
    if (slope >= 0.0) {  // fall back to steepest descent
      dir = -grad;
      slope = -grad.squaredNorm();
    }
    double step = 1.0;
    double eNew = e;
    Eigen::VectorXd xNew;
    for (int ls = 0; ls < 60; ++ls) {
      xNew = x + step * dir;
      eNew = mdl.energy(xNew);
      if (eNew <= e + kArmijo * step * slope) break;
      step *= kShrink;
    }
    if (eNew >= e) break;  // line search stalled at the evaluation noise floor
    Eigen::VectorXd gradNew = mdl.gradient(xNew);
    Eigen::VectorXd s = xNew - x;
    Eigen::VectorXd y = gradNew - grad;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      ss.push_back(std::move(s));
      ys.push_back(std::move(y));
      rhos.push_back(1.0 / sy);
      if (static_cast<int>(ss.size()) > kMemory) {
        ss.pop_front();
        ys.pop_front();
        rhos.pop_front();
      }
    }
    x = std::move(xNew);
    grad = std::move(gradNew);
    e = eNew;
    ++it;
  }
  if (grad.norm() > tol && it >= maxIter)
    fail(ErrorCode::MaxIterations, "descent did not reach the gradient tolerance");
  res.x = std::move(x);
  res.energy = e;
  res.gradNorm = grad.norm();
  res.iterations = it;
  return res;
}

inline void requireCoercive(const VariationalProblem& p) {
  const auto& f = p.integrand;
  if (f.kind() == IntegrandSpec::Kind::NormPower) {
    bool ok = true;
    for (int i = 0; i < f.m(); ++i)
      ok = ok && f.weights()[i] > 0.0 && f.powers()[i] > 1.0;
    if (ok) return;
  }
  if (f.growth && f.growth->coercive) return;
  fail(ErrorCode::NotCoercive, "integrand lacks declared coercive growth");
}

}  // namespace detail

enum class MinimizeMethod { LinearSolve, Descent };

/// Gauge fixing: subtracts an exact correction so the result has the same
/// derivative and trace but vanishing interior codifferential.
struct GaugeFixResult {
  CochainTuple fixed;
  double derivativeResidual = 0.0;  // |d beta - d omega|
  double deltaResidual = 0.0;       // |interior codifferential of beta|
  double stabilityRatio = 0.0;      // |beta|_{W^{1,p}} / (|d omega|_p + |omega|_p)
};

inline GaugeFixResult gaugeFix(const CochainTuple& omega, const std::vector<double>& p) {
  GaugeFixResult out;
  std::vector<Cochain> fixedParts;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < omega.m(); ++i) {
    const Cochain& w = omega[i];
    const auto& g = *w.grid;
    const double pi = (i < static_cast<int>(p.size())) ? p[i] : 2.0;
    Cochain beta = w;
    if (w.degree >= 1) {
      const auto dGamma = g.coboundaryMatrix(w.degree - 1);
      const Eigen::VectorXd pGamma = g.tangentialInteriorMask(w.degree - 1);
      const Eigen::VectorXd pW = g.tangentialInteriorMask(w.degree);
      const Eigen::VectorXd mW = g.massDiagonal(w.degree);
      const Eigen::VectorXd mGamma = g.massDiagonal(w.degree - 1);
      const auto deltaT = [&](const Eigen::VectorXd& v) {
        return pGamma
            .cwiseProduct((dGamma.transpose() * mW.cwiseProduct(pW.cwiseProduct(v)))
                              .cwiseQuotient(mGamma))
            .eval();
      };
      const auto laplace = [&](const Eigen::VectorXd& gam) {
        return deltaT(dGamma * pGamma.cwiseProduct(gam)).eval();
      };
      const auto sol = conjugateGradient(laplace, deltaT(w.values));
      beta.values = w.values - dGamma * pGamma.cwiseProduct(sol.x);
      Cochain resid(w.grid, w.degree - 1, deltaT(beta.values));
      out.deltaResidual = std::max(out.deltaResidual, std::sqrt(massInner(resid, resid)));
    }
    Cochain dDiff = coboundary(beta);
    dDiff.values -= coboundary(w).values;
    out.derivativeResidual = std::max(out.derivativeResidual, lpNorm(dDiff, 2.0));
    double betaNorm = lpNorm(beta, pi);
    if (beta.degree < g.n()) betaNorm += lpNorm(coboundary(beta), pi);
    if (beta.degree >= 1)
      betaNorm += lpNorm(codifferential(beta, BoundaryCondition::TangentialZero), pi);
    num += betaNorm;
    den += lpNorm(coboundary(w), pi) + lpNorm(w, pi);
    fixedParts.push_back(std::move(beta));
  }
  out.fixed = CochainTuple(std::move(fixedParts));
  out.stabilityRatio = (den > 0) ? num / den : 0.0;
  return out;
}

inline MinimizeReport minimize(const VariationalProblem& problem, MinimizeMethod method) {
  detail::requireCoercive(problem);
  require(problem.wellPosed, ErrorCode::InvalidArgument,
          "linear term is not coclosed; the problem is not well posed");
  const auto mdl = detail::EnergyModel::build(problem);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(mdl.dofCount());

  MinimizeReport rep;
  if (method == MinimizeMethod::LinearSolve) {
    // quadratic energies only: assemble the normal operator by linearity
    const bool quadratic = problem.integrand.kind() == IntegrandSpec::Kind::NormPower &&
                           [&] {
                             for (double pw : problem.integrand.powers())
                               if (pw != 2.0) return false;
                             return true;
                           }();
    require(quadratic, ErrorCode::InvalidArgument,
            "the linear-solve path needs a quadratic integrand");
    const Eigen::VectorXd b = mdl.gradient(x0);
    const auto applyA = [&](const Eigen::VectorXd& v) {
      return (mdl.gradient(x0 + v) - b).eval();
    };
    const auto sol = conjugateGradient(applyA, (-b).eval());
    rep.minimizer = mdl.toTuple(sol.x);
    rep.energy = mdl.energy(sol.x);
    rep.iterations = sol.iterations;
    rep.gradientNorm = mdl.gradient(sol.x).norm();
  } else {
    auto res = detail::lbfgs(mdl, x0);
    rep.minimizer = mdl.toTuple(res.x);
    rep.energy = res.energy;
    rep.iterations = res.iterations;
    rep.gradientNorm = res.gradNorm;
  }
  const auto gauge = gaugeFix(rep.minimizer, problem.exponents);
  rep.gaugeResidual = gauge.deltaResidual;
  double traceErr = 0.0;
  for (int i = 0; i < problem.m(); ++i) {
    const Eigen::VectorXd mask = problem.grid->tangentialInteriorMask(problem.degrees[i] - 1);
    traceErr = std::max(traceErr, ((Eigen::VectorXd::Ones(mask.size()) - mask)
                                       .cwiseProduct(rep.minimizer[i].values -
                                                     problem.boundaryData[i].values))
                                      .lpNorm<Eigen::Infinity>());
  }
  rep.boundaryResidual = traceErr;
  return rep;
}

/// Minimum over the divergence-free representatives: the admissible class is
/// parametrized as base + delta_T b with a gauge-fixed base, so the search
/// space is exactly the zero-trace coexact gauge slice.
inline MinimizeReport minimizeDivergenceFree(const VariationalProblem& problem) {
  detail::requireCoercive(problem);
  require(problem.wellPosed, ErrorCode::InvalidArgument,
          "linear term is not coclosed; the problem is not well posed");
  const auto& g = *problem.grid;

  // gauge-fixed base with the problem's boundary trace
  std::vector<Cochain> baseParts;
  for (int i = 0; i < problem.m(); ++i) {
    const int lo = problem.degrees[i] - 1;
    const Eigen::VectorXd mask = g.tangentialInteriorMask(lo);
    Cochain base(problem.grid, lo,
                 (Eigen::VectorXd::Ones(mask.size()) - mask)
                     .cwiseProduct(problem.boundaryData[i].values));
    baseParts.push_back(std::move(base));
  }
  const auto gauge = gaugeFix(CochainTuple(std::move(baseParts)), problem.exponents);

  struct Reduced {
    const detail::EnergyModel* mdl;
    std::vector<Eigen::SparseMatrix<double>> dHi;
    std::vector<Eigen::VectorXd> pLo, pHi, mLo, mHi;
    std::vector<Eigen::VectorXd> base;
    std::vector<Eigen::Index> offsets;

    Eigen::VectorXd toOmega(const Eigen::VectorXd& b) const {
      Eigen::VectorXd x(mdl->dofCount());
      Eigen::Index atX = 0;
      for (std::size_t i = 0; i < dHi.size(); ++i) {
        const Eigen::VectorXd bi = b.segment(offsets[i], pHi[i].size());
        Eigen::VectorXd coex =
            pLo[i].cwiseProduct((dHi[i].transpose() * mHi[i].cwiseProduct(pHi[i].cwiseProduct(bi)))
                                    .cwiseQuotient(mLo[i]));
        x.segment(atX, coex.size()) = base[i] + coex;
        atX += coex.size();
      }
      return x;
    }
    Eigen::VectorXd pullback(const Eigen::VectorXd& gradX) const {
      Eigen::VectorXd out(offsets.back() + pHi.back().size());
      Eigen::Index atX = 0;
      for (std::size_t i = 0; i < dHi.size(); ++i) {
        const Eigen::VectorXd gi = gradX.segment(atX, pLo[i].size());
        out.segment(offsets[i], pHi[i].size()) =
            pHi[i].cwiseProduct(mHi[i].cwiseProduct(dHi[i] * pLo[i].cwiseProduct(
                                                                 gi.cwiseQuotient(mLo[i]))));
        atX += pLo[i].size();
      }
      return out;
    }
    double energy(const Eigen::VectorXd& b) const { return mdl->energy(toOmega(b)); }
    Eigen::VectorXd gradient(const Eigen::VectorXd& b) const {
      return pullback(mdl->gradient(toOmega(b)));
    }
  };

  const auto mdl = detail::EnergyModel::build(problem);
  Reduced red;
  red.mdl = &mdl;
  Eigen::Index total = 0;
  for (int i = 0; i < problem.m(); ++i) {
    const int lo = problem.degrees[i] - 1;
    red.dHi.push_back(g.coboundaryMatrix(lo));
    red.pLo.push_back(g.tangentialInteriorMask(lo));
    red.pHi.push_back(g.tangentialInteriorMask(problem.degrees[i]));
    red.mLo.push_back(g.massDiagonal(lo));
    red.mHi.push_back(g.massDiagonal(problem.degrees[i]));
    red.base.push_back(gauge.fixed[i].values);
    red.offsets.push_back(total);
    total += red.pHi.back().size();
  }

  const auto res = detail::lbfgs(red, Eigen::VectorXd::Zero(total), 5000, 1e-9);

  MinimizeReport rep;
  rep.minimizer = mdl.toTuple(red.toOmega(res.x));
  rep.energy = res.energy;
  rep.iterations = res.iterations;
  rep.gradientNorm = res.gradNorm;
  const auto fixedGauge = gaugeFix(rep.minimizer, problem.exponents);
  rep.gaugeResidual = fixedGauge.deltaResidual;
  return rep;
}

/// Removes a coclosed linear term: with G = d Phi solving the zero-trace
/// system, <g, omega> turns into -<G, d omega> plus a recorded constant, and
/// both energies agree on every admissible field.
inline VariationalProblem absorbLinearTerm(const VariationalProblem& problem) {
  require(problem.wellPosed, ErrorCode::InvalidArgument,
          "linear term is not coclosed; nothing to absorb");
  VariationalProblem out = problem;
  if (problem.linearTerm.m() == 0) return out;
  const auto& g = *problem.grid;
  std::vector<Cochain> gTerms;
  for (int i = 0; i < problem.m(); ++i) {
    const int lo = problem.degrees[i] - 1;
    const Cochain& gi = problem.linearTerm[i];
    const auto d = g.coboundaryMatrix(lo);
    const Eigen::VectorXd pLo = g.tangentialInteriorMask(lo);
    const Eigen::VectorXd pHi = g.tangentialInteriorMask(problem.degrees[i]);
    const Eigen::VectorXd mLo = g.massDiagonal(lo);
    const Eigen::VectorXd mHi = g.massDiagonal(problem.degrees[i]);
    const auto deltaT = [&](const Eigen::VectorXd& v) {
      return pLo.cwiseProduct((d.transpose() * mHi.cwiseProduct(pHi.cwiseProduct(v)))
                                  .cwiseQuotient(mLo))
          .eval();
    };
    const auto laplace = [&](const Eigen::VectorXd& phi) {
      return deltaT(d * pLo.cwiseProduct(phi)).eval();
    };
    const Eigen::VectorXd rhs = -pLo.cwiseProduct(gi.values);
    const auto sol = conjugateGradient(laplace, rhs);
    gTerms.emplace_back(problem.grid, problem.degrees[i],
                        (d * pLo.cwiseProduct(sol.x)).eval());
  }
  out.linearDerivTerm = CochainTuple(std::move(gTerms));
  out.linearTerm = CochainTuple();

  // record the constant so both problems report identical energies: evaluate
  // both pairings on the zero-extension of the boundary data
  const auto mdl = detail::EnergyModel::build(problem);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(mdl.dofCount());
  const auto omega = mdl.split(x0);
  double constant = 0.0;
  for (int i = 0; i < problem.m(); ++i) {
    constant += problem.linearTerm[i].values.cwiseProduct(g.massDiagonal(problem.degrees[i] - 1))
                    .dot(omega[i]);
    constant += out.linearDerivTerm[i].values.cwiseProduct(g.massDiagonal(problem.degrees[i]))
                    .dot(mdl.d[i] * omega[i]);
  }
  out.energyOffset = problem.energyOffset + constant;
  return out;
}

/// Discrete replication of the obstruction mechanism for integrands with an
/// additive dependence on the field itself: the pinned solve keeps its
/// boundary layer while the relaxed divergence-free minimizer collapses to
/// zero, and the interior mass of the pinned solution decays under
/// refinement.
struct NonexistenceProbeReport {
  double relaxedMinimizerNorm = 0.0;
  double pinnedEnergy = 0.0;
  double interiorMass = 0.0;        // squared mass on the center quarter box
  double deltaResidualTotal = 0.0;  // interior codifferential of the solution
  double deltaResidualDeep = 0.0;   // same, restricted to the center region
  double pinnedDataNorm = 0.0;
};

inline NonexistenceProbeReport nonexistenceProbe(const GridPtr& grid, int k,
                                                 const FormField& omega0) {
  const auto& g = *grid;
  require(k >= 1 && k <= g.n(), ErrorCode::BadDegree, "factor degree out of range");
  const int lo = k - 1;
  const Cochain data = sampleForm(grid, lo, omega0);

  // pinned problem: all cells meeting the boundary carry the data
  const Eigen::VectorXd interior = g.strictInteriorMask(lo);
  const Eigen::VectorXd pinnedVals =
      (Eigen::VectorXd::Ones(interior.size()) - interior).cwiseProduct(data.values);
  const auto d = g.coboundaryMatrix(lo);
  const Eigen::VectorXd mLo = g.massDiagonal(lo);
  const Eigen::VectorXd mHi = g.massDiagonal(k);
  const auto applyEl = [&](const Eigen::VectorXd& v) {
    // (delta d + id) with the free mass adjoint, restricted to interior dofs
    Eigen::VectorXd y = d.transpose() * mHi.cwiseProduct(d * v);
    return interior.cwiseProduct(y + mLo.cwiseProduct(v)).eval();
  };
  // the pinned block couples into the interior through stiffness and mass
  const Eigen::VectorXd rhsFull = -interior.cwiseProduct(
      d.transpose() * mHi.cwiseProduct(d * pinnedVals) + mLo.cwiseProduct(pinnedVals));
  const auto sol = conjugateGradient(applyEl, rhsFull);
  Cochain omega(grid, lo, interior.cwiseProduct(sol.x) + pinnedVals);

  NonexistenceProbeReport rep;
  rep.pinnedDataNorm = pinnedVals.norm();
  rep.pinnedEnergy = 0.5 * std::pow(lpNorm(coboundary(omega), 2.0), 2.0) +
                     0.5 * std::pow(lpNorm(omega, 2.0), 2.0);

  // relaxed problem over the zero-trace divergence-free class: descent from
  // the projected pinned solution must collapse to zero
  {
    const Eigen::VectorXd pLo = g.tangentialInteriorMask(lo);
    const Eigen::VectorXd pHi = g.tangentialInteriorMask(k);
    const auto toOmega = [&](const Eigen::VectorXd& b) {
      return pLo
          .cwiseProduct(
              (d.transpose() * mHi.cwiseProduct(pHi.cwiseProduct(b))).cwiseQuotient(mLo))
          .eval();
    };
    const auto pullback = [&](const Eigen::VectorXd& gradX) {
      return pHi.cwiseProduct(mHi.cwiseProduct(d * pLo.cwiseProduct(gradX.cwiseQuotient(mLo))))
          .eval();
    };
    const auto normalOp = [&](const Eigen::VectorXd& b) {
      const Eigen::VectorXd w = toOmega(b);
      Eigen::VectorXd gradX = d.transpose() * mHi.cwiseProduct(d * w) + mLo.cwiseProduct(w);
      return pullback(gradX).eval();
    };
    // seed with the reduced image of the pinned solution
    const Eigen::VectorXd b0 = pullback(mLo.cwiseProduct(omega.values));
    const auto relaxed =
        conjugateGradient(normalOp, Eigen::VectorXd::Zero(b0.size()), 1e-12, -1, &b0);
    Cochain relaxedOmega(grid, lo, toOmega(relaxed.x));
    rep.relaxedMinimizerNorm = std::sqrt(massInner(relaxedOmega, relaxedOmega));
  }

  // squared mass over the fixed center box, quadrature by cell-overlap
  // weights so the measured region does not move with the resolution
  double centerMass = 0.0;
  for (std::int64_t c = 0; c < g.cellCount(g.n()); ++c) {
    const auto top = g.cell(g.n(), c);
    double overlap = 1.0;
    for (int a = 0; a < g.n(); ++a) {
      const double loEdge = top.corner[a] * g.h();
      const double hiEdge = loEdge + g.h();
      overlap *= std::max(0.0, std::min(hiEdge, 0.75) - std::max(loEdge, 0.25));
    }
    if (overlap > 0.0) centerMass += reconstructAtCenter(omega, c).squaredNorm() * overlap;
  }
  rep.interiorMass = centerMass;

  if (lo >= 1) {
    Cochain deltaOmega = codifferential(omega, BoundaryCondition::TangentialZero);
    rep.deltaResidualTotal = std::sqrt(massInner(deltaOmega, deltaOmega));
    double deep = 0.0;
    const auto& gg = *grid;
    const Eigen::VectorXd mDeep = gg.massDiagonal(lo - 1);
    for (std::int64_t i = 0; i < deltaOmega.values.size(); ++i) {
      const auto cell = gg.cell(lo - 1, i);
      bool inside = true;
      for (int a = 0; a < gg.n(); ++a) {
        const double c = cell.corner[a] * gg.h();
        if (c < 0.25 - 1e-12 || c > 0.75 + 1e-12) inside = false;
      }
      if (inside) deep += deltaOmega.values(i) * deltaOmega.values(i) * mDeep(i);
    }
    rep.deltaResidualDeep = std::sqrt(deep);
  }
  return rep;
}

}  // namespace formlab
