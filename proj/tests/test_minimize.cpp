#include <doctest.h>

#include "formlab/minimize.hpp"
#include "formlab/rng.hpp"

using namespace formlab;

namespace {

Cochain randomCochain(const GridPtr& g, int k, Rng& rng, double scale = 1.0) {
  Cochain w(g, k);
  for (std::int64_t i = 0; i < w.values.size(); ++i) w.values(i) = scale * rng.uniform(-1, 1);
  return w;
}

/// coclosed linear term: the free codifferential of a random higher cochain
Cochain coclosedTerm(const GridPtr& g, int degree, Rng& rng) {
  Cochain b = randomCochain(g, degree + 1, rng);
  return codifferential(b, BoundaryCondition::Free);
}

VariationalProblem quadraticProblem(const GridPtr& g, Rng& rng, bool withG) {
  const std::vector<int> degrees{2};
  auto f = IntegrandSpec::normPower(g->n(), degrees, {1.0}, {2.0});
  CochainTuple gTerm;
  if (withG) gTerm = CochainTuple(std::vector<Cochain>{coclosedTerm(g, 1, rng)});
  CochainTuple omega0(std::vector<Cochain>{sampleForm(g, 1, [](const Eigen::VectorXd& x) {
    ExteriorForm f0(2, 1);
    f0.setCoeff(tupleToMask({1}, 2), 0.3 * x(1));
    f0.setCoeff(tupleToMask({2}, 2), 0.2 * x(0) * x(0));
    return f0;
  })});
  return VariationalProblem(g, degrees, std::move(f), std::move(gTerm), std::move(omega0),
                            {2.0});
}

}  // namespace

TEST_CASE("coclosed check on constructed and broken terms") {
  auto g = makeGrid(2, 8);
  Rng rng(3);
  const Cochain good = coclosedTerm(g, 1, rng);
  auto rep = checkCoclosed(CochainTuple(std::vector<Cochain>{good}));
  CHECK(rep.coclosed);
  CHECK(rep.residual <= 1e-12);

  // 0-form factors pass unconditionally
  const Cochain any0 = randomCochain(g, 0, rng);
  CHECK(checkCoclosed(CochainTuple(std::vector<Cochain>{any0})).coclosed);

  // d phi for a generic potential is not coclosed
  const Cochain notCoclosed = coboundary(randomCochain(g, 0, rng));
  auto bad = checkCoclosed(CochainTuple(std::vector<Cochain>{notCoclosed}));
  CHECK_FALSE(bad.coclosed);
  CHECK(bad.residual > 1e-3);
}

TEST_CASE("zero data gives the zero minimizer at zero energy") {
  auto g = makeGrid(2, 8);
  const std::vector<int> degrees{1, 2};
  auto f = IntegrandSpec::normPower(2, degrees, {1.0, 1.0}, {2.0, 2.0});
  VariationalProblem p(g, degrees, std::move(f), CochainTuple(),
                       CochainTuple::zero(g, {0, 1}), {2.0, 2.0});
  for (auto method : {MinimizeMethod::LinearSolve, MinimizeMethod::Descent}) {
    const auto rep = minimize(p, method);
    CHECK(rep.energy <= 1e-14);
    for (const auto& part : rep.minimizer.parts)
      CHECK(part.values.lpNorm<Eigen::Infinity>() <= 1e-7);
  }
}

TEST_CASE("descent and the direct solve agree on quadratic problems") {
  auto g = makeGrid(2, 8);
  Rng rng(7);
  const auto p = quadraticProblem(g, rng, /*withG=*/true);
  const auto linear = minimize(p, MinimizeMethod::LinearSolve);
  const auto descent = minimize(p, MinimizeMethod::Descent);
  CHECK(std::abs(linear.energy - descent.energy) <=
        1e-7 * (1.0 + std::abs(linear.energy)));
  CHECK(linear.boundaryResidual <= 1e-14);
  CHECK(descent.boundaryResidual <= 1e-14);
  CHECK(descent.gradientNorm <= 1e-5);  // 1e-8 relative to the initial gradient
}

TEST_CASE("the gauge-fixed minimum matches the unconstrained minimum") {
  auto g = makeGrid(2, 8);
  Rng rng(11);
  const auto p = quadraticProblem(g, rng, /*withG=*/true);
  const auto full = minimize(p, MinimizeMethod::LinearSolve);
  const auto reduced = minimizeDivergenceFree(p);
  CHECK(std::abs(full.energy - reduced.energy) <= 1e-7 * (1.0 + std::abs(full.energy)));
  CHECK(reduced.gaugeResidual <= 1e-8);
}

TEST_CASE("gauge fixing: constraints, fixed points and stability") {
  auto g = makeGrid(2, 8);
  Rng rng(13);
  const Cochain w = randomCochain(g, 1, rng);
  const auto fix = gaugeFix(CochainTuple(std::vector<Cochain>{w}), {2.0});
  CHECK(fix.derivativeResidual <= 1e-9);
  CHECK(fix.deltaResidual <= 1e-9 * (1.0 + std::sqrt(massInner(w, w))));

  // a divergence-free input with matching trace is a fixed point
  const auto again = gaugeFix(fix.fixed, {2.0});
  CHECK((again.fixed[0].values - fix.fixed[0].values).lpNorm<Eigen::Infinity>() <=
        1e-8 * (1.0 + fix.fixed[0].values.lpNorm<Eigen::Infinity>()));

  // stability of the ratio across refinement
  std::vector<double> ratios;
  for (int res : {8, 16, 32}) {
    auto gg = makeGrid(2, res);
    const Cochain smooth = sampleForm(gg, 1, [](const Eigen::VectorXd& x) {
      ExteriorForm f(2, 1);
      f.setCoeff(tupleToMask({1}, 2), std::sin(M_PI * x(1)) + x(0));
      f.setCoeff(tupleToMask({2}, 2), std::cos(M_PI * x(0)));
      return f;
    });
    ratios.push_back(gaugeFix(CochainTuple(std::vector<Cochain>{smooth}), {2.0}).stabilityRatio);
  }
  CHECK(ratios[2] <= 2.0 * ratios[0]);
  CHECK(ratios[0] <= 2.0 * ratios[2]);
}

TEST_CASE("absorbing the linear term preserves energies exactly") {
  auto g = makeGrid(2, 8);
  Rng rng(17);
  const auto p = quadraticProblem(g, rng, /*withG=*/true);
  const auto q = absorbLinearTerm(p);
  CHECK(q.linearTerm.m() == 0);
  CHECK(q.linearDerivTerm.m() == 1);

  const auto mp = detail::EnergyModel::build(p);
  const auto mq = detail::EnergyModel::build(q);
  Rng fieldRng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(mp.dofCount());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = fieldRng.uniform(-1, 1);
    const double ep = mp.energy(x);
    const double eq = mq.energy(x);
    CHECK(std::abs(ep - eq) <= 1e-8 * (1.0 + std::abs(ep)));
  }

  // identity when there is nothing to absorb
  const auto p0 = quadraticProblem(g, rng, /*withG=*/false);
  const auto q0 = absorbLinearTerm(p0);
  CHECK(q0.linearTerm.m() == 0);
  CHECK(q0.linearDerivTerm.m() == 0);
}

TEST_CASE("energy is invariant under exact zero-boundary gauge shifts") {
  auto g = makeGrid(2, 8);
  Rng rng(19);
  const auto p = quadraticProblem(g, rng, /*withG=*/true);
  const auto mdl = detail::EnergyModel::build(p);
  Eigen::VectorXd x(mdl.dofCount());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(-1, 1);
  // shift the unknown by d theta with a zero-trace 0-form theta
  Cochain theta = randomCochain(g, 0, rng);
  theta.values = g->tangentialInteriorMask(0).cwiseProduct(theta.values);
  const Eigen::VectorXd shift = g->coboundaryMatrix(0) * theta.values;
  const double before = mdl.energy(x);
  const double after = mdl.energy(x + shift);
  CHECK(std::abs(before - after) <= 1e-9 * (1.0 + std::abs(before)));
}

TEST_CASE("polyconvex composites descend to small gradients") {
  auto g = makeGrid(2, 8);
  Rng rng(29);
  const std::vector<int> degrees{1, 1};
  const auto tau = wedgeComponentCount(2, degrees);
  Eigen::MatrixXd a(tau, tau);
  for (Eigen::Index i = 0; i < tau; ++i)
    for (Eigen::Index j = 0; j < tau; ++j) a(i, j) = 0.3 * rng.uniform(-1, 1);
  Eigen::MatrixXd q = a * a.transpose() + Eigen::MatrixXd::Identity(tau, tau);
  Eigen::VectorXd b(tau);
  for (Eigen::Index i = 0; i < tau; ++i) b(i) = rng.uniform(-1, 1);
  auto f = IntegrandSpec::polyconvex(2, degrees, ConvexFunction::quadratic(q, b, 0.0));
  f.growth = GrowthInfo{1.0, {1.0, 1.0}, {2.0, 2.0}, true};
  CochainTuple omega0(std::vector<Cochain>{
      sampleForm(g, 0, [](const Eigen::VectorXd& x) { return ExteriorForm::scalar(2, x(0)); }),
      sampleForm(g, 0, [](const Eigen::VectorXd& x) { return ExteriorForm::scalar(2, x(1)); })});
  VariationalProblem p(g, degrees, std::move(f), CochainTuple(), std::move(omega0), {2.0, 2.0});
  const auto rep = minimize(p, MinimizeMethod::Descent);
  CHECK(rep.gradientNorm <= 1e-6);

  const auto reduced = minimizeDivergenceFree(p);
  CHECK(std::abs(reduced.energy - rep.energy) <= 1e-6 * (1.0 + std::abs(rep.energy)));
}

TEST_CASE("the coercivity gate refuses integrands without declared growth") {
  auto g = makeGrid(2, 8);
  const std::vector<int> degrees{1, 1};
  ExteriorForm vol(2, 2);
  vol.setCoeff(tupleToMask({1, 2}, 2), 1.0);
  auto affine = IntegrandSpec::quasiaffine(2, degrees, 0.0, {{MultiIndex{{1, 1}}, vol}});
  VariationalProblem p(g, degrees, std::move(affine), CochainTuple(),
                       CochainTuple::zero(g, {0, 0}), {2.0, 2.0});
  CHECK_THROWS_AS(minimize(p, MinimizeMethod::Descent), Error);
}

TEST_CASE("problems with non-coclosed linear terms are flagged and refused") {
  auto g = makeGrid(2, 8);
  Rng rng(31);
  const std::vector<int> degrees{2};
  auto f = IntegrandSpec::normPower(2, degrees, {1.0}, {2.0});
  CochainTuple gTerm(std::vector<Cochain>{coboundary(randomCochain(g, 0, rng))});
  VariationalProblem p(g, degrees, std::move(f), std::move(gTerm),
                       CochainTuple::zero(g, {1}), {2.0});
  CHECK_FALSE(p.wellPosed);
  CHECK_THROWS_AS(minimize(p, MinimizeMethod::Descent), Error);
}

TEST_CASE("the obstruction probe: relaxed collapse and the boundary layer") {
  // normal-trace data compatible with a vanishing tangential trace
  const FormField omega0 = [](const Eigen::VectorXd& x) {
    ExteriorForm f(2, 1);
    f.setCoeff(tupleToMask({1}, 2), x(1) * (1.0 - x(1)));
    return f;
  };
  std::vector<double> interiorMass;
  for (int res : {8, 16, 32}) {
    auto g = makeGrid(2, res);
    const auto rep = nonexistenceProbe(g, 2, omega0);
    CHECK(rep.relaxedMinimizerNorm <= 1e-9);
    CHECK(rep.pinnedDataNorm > 0.0);
    interiorMass.push_back(rep.interiorMass);
  }
  CHECK(interiorMass[1] < interiorMass[0]);
  CHECK(interiorMass[2] < interiorMass[1]);

  // zero data: nothing to lose, the minimizer is zero
  auto g = makeGrid(2, 8);
  const auto quiet = nonexistenceProbe(
      g, 2, [](const Eigen::VectorXd&) { return ExteriorForm(2, 1); });
  CHECK(quiet.interiorMass <= 1e-18);
  CHECK(quiet.pinnedEnergy <= 1e-18);

  // 0-form control: Dirichlet data is retained, the interior mass stabilizes
  const FormField scalarData = [](const Eigen::VectorXd& x) {
    return ExteriorForm::scalar(2, x(0));
  };
  std::vector<double> controlMass;
  for (int res : {8, 16, 32}) {
    auto gg = makeGrid(2, res);
    controlMass.push_back(nonexistenceProbe(gg, 1, scalarData).interiorMass);
  }
  CHECK(std::abs(controlMass[2] - controlMass[1]) <= 0.05 * controlMass[1]);
}
