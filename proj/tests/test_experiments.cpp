#include <doctest.h>

#include "formlab/experiments.hpp"
#include "formlab/rng.hpp"

using namespace formlab;

namespace {

double weightPoly(const Eigen::VectorXd& x) {
  double w = 30.0;
  w *= x(0) * (1 - x(0)) * (1 - x(0));
  for (Eigen::Index a = 1; a < x.size(); ++a) w *= x(a) * (1 - x(a)) * (1 - x(a));
  return w;
}

SequenceRecipe detLaminate(const GridPtr& g) {
  SequenceRecipe r;
  r.kind = SequenceRecipe::Kind::LaminateOscillation;
  r.grid = g;
  r.degrees = {1, 1};
  r.base = FormTuple::zero(2, {1, 1});
  r.base[0].setCoeff(tupleToMask({1}, 2), 1.0);
  r.base[1].setCoeff(tupleToMask({2}, 2), 1.0);
  r.direction = Eigen::Vector2d(1, 0);
  r.profiles = {ExteriorForm::scalar(2, 1.0), ExteriorForm::scalar(2, 1.0)};
  r.amplitude = 1.0;
  return r;
}

IntegrandSpec detPairing() {
  ExteriorForm vol(2, 2);
  vol.setCoeff(tupleToMask({1, 2}, 2), 1.0);
  return IntegrandSpec::quasiaffine(2, {1, 1}, 0.0, {{MultiIndex{{1, 1}}, vol}});
}

SequenceRecipe sineExactFamily(const GridPtr& g, double amplitude) {
  // exact 1-forms oscillating along the first axis; weak limit zero
  SequenceRecipe r;
  r.kind = SequenceRecipe::Kind::ClosedNonconvergent;
  r.grid = g;
  r.degrees = {1};
  r.base = FormTuple::zero(2, {1});
  r.oscillationAxis = 1;
  r.closedPotentialForm = ExteriorForm::scalar(2, 1.0);
  r.amplitude = amplitude;
  return r;
}

}  // namespace

TEST_CASE("laminate families: averages, degenerate amplitude, nyquist guard") {
  auto g = makeGrid(2, 32);
  auto recipe = detLaminate(g);
  const auto limit = generateLimit(recipe);
  const auto member = generate(recipe, 4);

  // the nu-average of the derivative reproduces the constant limit to O(h)
  for (int i = 0; i < 2; ++i) {
    const double hn = std::pow(g->h(), 2);
    ExteriorForm avg(2, 1), expect = recipe.base[i];
    for (std::int64_t c = 0; c < g->cellCount(2); ++c)
      avg = avg + hn * reconstructAtCenter(member.derivatives[i], c);
    CHECK((avg.coeffs() - expect.coeffs()).lpNorm<Eigen::Infinity>() <= 5 * g->h());
  }

  auto still = recipe;
  still.amplitude = 0.0;
  const auto quiet = generate(still, 3);
  CHECK((quiet.potentials[0].values - limit.potentials[0].values).lpNorm<Eigen::Infinity>() <=
        1e-12);

  CHECK_THROWS_AS(generate(recipe, 8), Error);   // 8 >= 32/4
  CHECK_NOTHROW(generate(recipe, 7));
  CHECK_THROWS_AS(generate(recipe, 0), Error);
}

TEST_CASE("closed families oscillate without converging strongly") {
  auto g = makeGrid(2, 32);
  const auto recipe = sineExactFamily(g, 1.0);
  const auto limit = generateLimit(recipe);
  for (int nu : {2, 4}) {
    const auto member = generate(recipe, nu);
    // exactness is inherited from the discrete complex
    CHECK(coboundary(member.derivatives[0]).values.lpNorm<Eigen::Infinity>() <= 1e-12);
    Cochain diff(g, 1, member.derivatives[0].values - limit.derivatives[0].values);
    const double excess = std::pow(lpNorm(diff, 2.0), 2.0);
    CHECK(excess == doctest::Approx(0.5).epsilon(0.05));  // mean of the squared profile
  }
}

TEST_CASE("boundary layer families concentrate near the boundary") {
  auto g = makeGrid(2, 16);
  SequenceRecipe r;
  r.kind = SequenceRecipe::Kind::BoundaryLayer;
  r.grid = g;
  r.degrees = {1};
  r.base = FormTuple::zero(2, {1});
  r.base[0].setCoeff(tupleToMask({1}, 2), 1.0);
  r.layerWidthBase = 0.5;
  // as the layer thins, the member converges to the base potential
  const auto limit = generateLimit(r);
  std::vector<double> errs;
  for (int nu : {1, 2, 3}) {
    const auto member = generate(r, nu);
    Cochain diff(g, 0, member.potentials[0].values - limit.potentials[0].values);
    errs.push_back(lpNorm(diff, 2.0));
  }
  CHECK(errs[0] > errs[1]);
  CHECK(errs[1] > errs[2]);
}

TEST_CASE("affine wedge-power pairings pass the dichotomy, squared norms fail it") {
  auto g = makeGrid(2, 32);
  const auto recipe = detLaminate(g);

  const auto pos = weakContinuityExperiment(recipe, detPairing(), weightPoly, {1, 2, 4});
  CHECK(pos.converges);
  CHECK(std::abs(pos.values.back() - pos.target) <=
        std::abs(pos.values.front() - pos.target) / 2.0 + 1e-10);

  const auto constant = IntegrandSpec::quasiaffine(2, {1, 1}, 2.5, {});
  const auto flat = weakContinuityExperiment(recipe, constant, weightPoly, {1, 2, 4});
  CHECK(flat.converges);
  CHECK(std::abs(flat.values.back() - flat.target) <= 1e-10);

  const auto sq = IntegrandSpec::normPower(2, {1}, {1.0}, {2.0});
  const auto osc = sineExactFamily(g, 1.0);
  const auto neg = weakContinuityExperiment(osc, sq, weightPoly, {2, 4});
  CHECK_FALSE(neg.converges);
  // the stalled gap is half the squared amplitude times the weight mass
  double psiMass = 0.0;
  const double hn = std::pow(g->h(), 2);
  for (std::int64_t c = 0; c < g->cellCount(2); ++c) psiMass += weightPoly(g->cellCenter(c)) * hn;
  CHECK(neg.extrapolated - neg.target == doctest::Approx(0.5 * psiMass).epsilon(0.1));
}

TEST_CASE("the semicontinuity drop measures half the oscillation energy") {
  auto g = makeGrid(2, 32);
  const auto rep = semicontinuityCounterexample(2.0, sineExactFamily(g, 1.0), {2, 4});
  CHECK(rep.delta == doctest::Approx(0.25).epsilon(0.1));

  const auto quiet = semicontinuityCounterexample(2.0, sineExactFamily(g, 0.0), {2, 4});
  CHECK(std::abs(quiet.delta) <= 1e-10);

  // quadratic amplitude scaling on a log-log fit
  std::vector<double> amps{0.25, 0.5, 1.0};
  std::vector<double> deltas;
  for (double a : amps)
    deltas.push_back(semicontinuityCounterexample(2.0, sineExactFamily(g, a), {2, 4}).delta);
  const double slope = std::log(deltas[2] / deltas[0]) / std::log(amps[2] / amps[0]);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));

  // no such family exists over 0-forms
  SequenceRecipe bad = sineExactFamily(g, 1.0);
  bad.degrees = {0};
  CHECK_THROWS_AS(semicontinuityCounterexample(2.0, bad, {2, 4}), Error);
}

TEST_CASE("wedge powers of the family stay bounded in the product norm") {
  auto g = makeGrid(2, 32);
  const auto recipe = detLaminate(g);
  // theta with 1/theta = 1/2 + 1/2 = 1
  const auto norms = wedgePowerThetaNorms(recipe, MultiIndex{{1, 1}}, 1.0, {1, 2, 4});
  const double lo = *std::min_element(norms.begin(), norms.end());
  const double hi = *std::max_element(norms.begin(), norms.end());
  CHECK(lo > 0.0);
  CHECK(hi <= 2.0 * lo);
}

TEST_CASE("telescopic calibration freezes a constant that holds on held-out pairs") {
  auto g = makeGrid(2, 16);
  Rng rng(59);
  ExponentVector p;
  p.p = {Exponent(2), Exponent(2)};
  const MultiIndex alpha{{1, 1}};
  const Cochain psi = sampleForm(g, 2, [](const Eigen::VectorXd& x) {
    double b = 1.0;
    for (int a = 0; a < 2; ++a) b *= std::sin(M_PI * x(a)) * std::sin(M_PI * x(a));
    return ExteriorForm(b * ExteriorForm::basis(2, {1, 2}));
  });
  const auto drawPair = [&](Rng& r) {
    SequenceRecipe a;
    a.kind = SequenceRecipe::Kind::LaminateOscillation;
    a.grid = g;
    a.degrees = {1, 1};
    a.base = r.tuple(2, {1, 1});
    a.direction = Eigen::Vector2d(1, r.below(2) ? 1 : 0);
    a.profiles = {ExteriorForm::scalar(2, r.uniform(-1, 1)),
                  ExteriorForm::scalar(2, r.uniform(-1, 1))};
    a.amplitude = r.uniform(0.2, 1.0);
    SequenceRecipe b = a;
    b.base = r.tuple(2, {1, 1});
    b.amplitude = r.uniform(0.2, 1.0);
    const int nu = 1 + static_cast<int>(r.below(3));
    return std::pair{generate(a, nu).potentials, generate(b, nu).potentials};
  };
  Rng trainRng = rng.split();
  const auto cal = calibrateTelescopic(
      [&](int) {
        auto [xi, zeta] = drawPair(trainRng);
        return telescopicCheck(xi, zeta, alpha, psi, p);
      },
      20);
  CHECK(cal.constant > 0.0);
  Rng testRng = rng.split();
  for (int i = 0; i < 20; ++i) {
    auto [xi, zeta] = drawPair(testRng);
    const auto s = telescopicCheck(xi, zeta, alpha, psi, p);
    CHECK(s.lhs <= cal.constant * s.rhs + 1e-12);
  }
}
