#include <doctest.h>

#include "formlab/integrand.hpp"
#include "formlab/rng.hpp"

using namespace formlab;

namespace {

IntegrandSpec randomQuasiaffine(int n, std::vector<int> degrees, Rng& rng) {
  std::vector<std::pair<MultiIndex, ExteriorForm>> terms;
  for (const auto& mi : enumerateMultiIndices(n, degrees, 1, n))
    terms.emplace_back(mi, rng.form(n, mi.weight(degrees)));
  return IntegrandSpec::quasiaffine(n, degrees, rng.uniform(-1, 1), std::move(terms));
}

}  // namespace

TEST_CASE("integrand evaluation on the named cases") {
  const IntegrandSpec constant = IntegrandSpec::quasiaffine(2, {1, 1}, 3.0, {});
  Rng rng(3);
  CHECK(constant(rng.tuple(2, {1, 1})) == 3.0);

  ExteriorForm det(2, 2);
  det.setCoeff(tupleToMask({1, 2}, 2), 1.0);
  const IntegrandSpec detPairing =
      IntegrandSpec::quasiaffine(2, {1, 1}, 0.0, {{MultiIndex{{1, 1}}, det}});
  FormTuple id = FormTuple::zero(2, {1, 1});
  id[0].setCoeff(tupleToMask({1}, 2), 1.0);
  id[1].setCoeff(tupleToMask({2}, 2), 1.0);
  CHECK(detPairing(id) == 1.0);

  const IntegrandSpec np = IntegrandSpec::normPower(2, {1, 1}, {1.0, 2.0}, {2.0, 3.0});
  CHECK(np(FormTuple::zero(2, {1, 1})) == 0.0);

  CHECK_THROWS_AS(np(rng.tuple(2, {1, 2})), Error);
}

TEST_CASE("composite integrands validate convexity at construction") {
  const auto tau = wedgeComponentCount(2, {1, 1});
  Eigen::MatrixXd good = Eigen::MatrixXd::Identity(tau, tau);
  CHECK_NOTHROW(ConvexFunction::quadratic(good, Eigen::VectorXd::Zero(tau), 0.0));
  Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(tau, tau);
  CHECK_THROWS_AS(ConvexFunction::quadratic(bad, Eigen::VectorXd::Zero(tau), 0.0), Error);
}

TEST_CASE("analytic gradients match finite differences") {
  Rng rng(17);
  const int n = 3;
  const std::vector<int> degrees{1, 2};
  std::vector<IntegrandSpec> specs;
  specs.push_back(randomQuasiaffine(n, degrees, rng));
  specs.push_back(IntegrandSpec::normPower(n, degrees, {0.7, 1.3}, {2.0, 4.0}));
  {
    const auto tau = wedgeComponentCount(n, degrees);
    Eigen::MatrixXd a(tau, tau);
    for (Eigen::Index i = 0; i < tau; ++i)
      for (Eigen::Index j = 0; j < tau; ++j) a(i, j) = rng.uniform(-1, 1);
    Eigen::VectorXd b(tau);
    for (Eigen::Index i = 0; i < tau; ++i) b(i) = rng.uniform(-1, 1);
    specs.push_back(IntegrandSpec::polyconvex(
        n, degrees, ConvexFunction::quadratic(a * a.transpose(), b, 0.3)));
  }
  const double step = 1e-6;
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 10; ++trial) {
      const FormTuple xi = rng.tuple(n, degrees);
      const FormTuple grad = spec.gradient(xi);
      for (int i = 0; i < spec.m(); ++i) {
        for (int c = 0; c < xi[i].dim(); ++c) {
          FormTuple up = xi, down = xi;
          up[i].coeffs()(c) += step;
          down[i].coeffs()(c) -= step;
          const double fd = (spec(up) - spec(down)) / (2 * step);
          CHECK(grad[i].coeffs()(c) == doctest::Approx(fd).epsilon(1e-5));
        }
      }
    }
  }
}

TEST_CASE("max-of-affine composites evaluate and expose subgradients") {
  const auto tau = wedgeComponentCount(2, {1, 1});
  Eigen::MatrixXd rows(2, tau);
  rows.setZero();
  rows(0, 0) = 1.0;
  rows(1, 0) = -1.0;
  Eigen::VectorXd offs(2);
  offs << 0.0, 0.5;
  const auto f = ConvexFunction::maxOfAffine(rows, offs);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(tau);
  y(0) = 2.0;
  CHECK(f(y) == 2.0);
  CHECK(f.subgradient(y)(0) == 1.0);
  y(0) = -2.0;
  CHECK(f(y) == 2.5);
  CHECK(f.subgradient(y)(0) == -1.0);
}
