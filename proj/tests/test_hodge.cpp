#include <doctest.h>

#include "formlab/hodge.hpp"
#include "formlab/rng.hpp"

using namespace formlab;

namespace {

Cochain randomCochain(const GridPtr& g, int k, Rng& rng) {
  Cochain w(g, k);
  for (std::int64_t i = 0; i < w.values.size(); ++i) w.values(i) = rng.uniform(-1, 1);
  return w;
}

double relNorm(const Cochain& w, double scale) {
  return std::sqrt(massInner(w, w)) / (scale > 0 ? scale : 1.0);
}

}  // namespace

TEST_CASE("conjugate gradients solves a small SPD system") {
  Eigen::MatrixXd a(3, 3);
  a << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  Eigen::VectorXd b(3);
  b << 1, -2, 0.5;
  auto res = conjugateGradient([&](const Eigen::VectorXd& x) { return (a * x).eval(); }, b);
  CHECK((a * res.x - b).norm() <= 1e-10);
}

TEST_CASE("decomposing an exact cochain leaves no coexact or harmonic part") {
  Rng rng(3);
  auto g = makeGrid(2, 8);
  for (int k = 1; k <= 2; ++k) {
    for (auto bc : {BoundaryCondition::Free, BoundaryCondition::TangentialZero}) {
      Cochain alpha0 = randomCochain(g, k - 1, rng);
      if (bc == BoundaryCondition::TangentialZero)
        alpha0.values = g->tangentialInteriorMask(k - 1).cwiseProduct(alpha0.values);
      const Cochain w = coboundary(alpha0);
      const auto split = hodgeDecompose(w, bc);
      const double in = std::sqrt(massInner(w, w));
      CHECK(relNorm(split.coexact, in) <= 1e-9);
      CHECK(relNorm(split.harmonic, in) <= 1e-9);
    }
  }
}

TEST_CASE("decomposing zero gives zero") {
  auto g = makeGrid(2, 4);
  const auto split = hodgeDecompose(Cochain(g, 1), BoundaryCondition::Free);
  CHECK(split.exact.values.norm() == 0.0);
  CHECK(split.coexact.values.norm() == 0.0);
  CHECK(split.harmonic.values.norm() == 0.0);
}

TEST_CASE("split parts are mutually mass-orthogonal and reproduce the input") {
  Rng rng(5);
  for (int n = 2; n <= 3; ++n) {
    auto g = makeGrid(n, (n == 2) ? 16 : 8);
    for (int k = 1; k < n; ++k) {
      const Cochain w = randomCochain(g, k, rng);
      const auto split = hodgeDecompose(w, BoundaryCondition::Free);
      const double wn = massInner(w, w);
      Cochain sum(g, k, split.exact.values + split.coexact.values + split.harmonic.values);
      CHECK((sum.values - w.values).lpNorm<Eigen::Infinity>() <= 1e-12);
      CHECK(std::abs(massInner(split.exact, split.coexact)) <= 1e-9 * wn);
      CHECK(std::abs(massInner(split.exact, split.harmonic)) <= 1e-9 * wn);
      CHECK(std::abs(massInner(split.coexact, split.harmonic)) <= 1e-9 * wn);
      CHECK(split.relResidual <= 1e-9);
    }
  }
}

TEST_CASE("harmonic fields with zero tangential trace are trivial below top degree") {
  Rng rng(7);
  for (int n = 2; n <= 3; ++n) {
    auto g = makeGrid(n, 8);
    for (int k = 1; k <= n - 1; ++k) {
      Cochain w = randomCochain(g, k, rng);
      w.values = g->tangentialInteriorMask(k).cwiseProduct(w.values);
      const auto split = hodgeDecompose(w, BoundaryCondition::TangentialZero);
      CHECK(relNorm(split.harmonic, std::sqrt(massInner(w, w))) <= 1e-8);
    }
  }
}

TEST_CASE("top-degree constants are harmonic in the tangential-zero complex") {
  auto g = makeGrid(2, 8);
  const Cochain w = sampleForm(g, 2, [](const Eigen::VectorXd&) { return volumeForm<double>(2); });
  const auto split = hodgeDecompose(w, BoundaryCondition::TangentialZero);
  CHECK(relNorm(split.harmonic, std::sqrt(massInner(w, w))) > 0.9);
}

TEST_CASE("coexact extraction: closed and constant inputs, round trips") {
  Rng rng(11);
  auto g = makeGrid(2, 8);

  // closed input: a coboundary
  const Cochain closed = coboundary(randomCochain(g, 0, rng));
  auto repClosed = coexactPart(closed, BoundaryCondition::Free);
  CHECK(relNorm(repClosed.coexact, std::sqrt(massInner(closed, closed))) <= 1e-9);

  // constant forms are closed
  ExteriorForm c(2, 1);
  c.setCoeff(tupleToMask({1}, 2), 0.4);
  c.setCoeff(tupleToMask({2}, 2), -1.1);
  const Cochain constant = sampleForm(g, 1, [&](const Eigen::VectorXd&) { return c; });
  auto repConst = coexactPart(constant, BoundaryCondition::Free);
  CHECK(relNorm(repConst.coexact, std::sqrt(massInner(constant, constant))) <= 1e-9);

  // a codifferential image comes back unchanged
  const Cochain beta0 = randomCochain(g, 2, rng);
  const Cochain w = codifferential(beta0, BoundaryCondition::Free);
  auto rep = coexactPart(w, BoundaryCondition::Free);
  Cochain diff(g, 1, rep.coexact.values - w.values);
  CHECK(relNorm(diff, std::sqrt(massInner(w, w))) <= 1e-9);
}

TEST_CASE("coexact stability ratio stays bounded under refinement") {
  // |coexact|_{W^{1,p}} / |dw|_{L^p} measured across resolutions
  const FormField field = [](const Eigen::VectorXd& x) {
    ExteriorForm f(2, 1);
    f.setCoeff(tupleToMask({1}, 2), std::sin(2 * M_PI * x(1)) + 0.3 * x(0));
    f.setCoeff(tupleToMask({2}, 2), std::cos(M_PI * x(0)) * x(1));
    return f;
  };
  std::vector<double> ratios;
  for (int res : {8, 16, 32}) {
    auto g = makeGrid(2, res);
    auto rep = coexactPart(sampleForm(g, 1, field), BoundaryCondition::Free);
    ratios.push_back(rep.stabilityRatio);
  }
  for (double r : ratios) CHECK(r > 0.0);
  CHECK(ratios[2] <= 2.0 * ratios[0]);
  CHECK(ratios[0] <= 2.0 * ratios[2]);
}
