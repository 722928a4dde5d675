#include <doctest.h>

#include <algorithm>

#include "formlab/multiindex.hpp"
#include "formlab/rng.hpp"

using namespace formlab;

namespace {

// Randomized oracle: declare a power trivial only if it vanishes on many
// random tuples. A single nonzero sample certifies nontriviality.
bool nontrivialOracle(int n, const std::vector<int>& degrees, const MultiIndex& mi, Rng& rng,
                      int samples = 50) {
  if (mi.weight(degrees) > n) return false;
  for (int s = 0; s < samples; ++s) {
    const auto xi = rng.tuple(n, degrees);
    if (!wedgePower(xi, mi).isZero(1e-9)) return true;
  }
  return false;
}

// Brute-force r x r minor of an m x n matrix, rows/cols as 1-based tuples.
double minorOracle(const Eigen::MatrixXd& x, const std::vector<int>& rows,
                   const std::vector<int>& cols) {
  const int r = static_cast<int>(rows.size());
  Eigen::MatrixXd sub(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) sub(i, j) = x(rows[i] - 1, cols[j] - 1);
  if (r == 1) return sub(0, 0);
  if (r == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  return sub(0, 0) * (sub(1, 1) * sub(2, 2) - sub(1, 2) * sub(2, 1)) -
         sub(0, 1) * (sub(1, 0) * sub(2, 2) - sub(1, 2) * sub(2, 0)) +
         sub(0, 2) * (sub(1, 0) * sub(2, 1) - sub(1, 1) * sub(2, 0));
}

FormTuple rowsAsOneForms(const Eigen::MatrixXd& x) {
  std::vector<ExteriorForm> forms;
  for (int i = 0; i < x.rows(); ++i) {
    ExteriorForm f(static_cast<int>(x.cols()), 1);
    f.coeffs() = x.row(i).transpose();
    forms.push_back(f);
  }
  return FormTuple(std::move(forms));
}

}  // namespace

TEST_CASE("nontriviality closed form on the named cases") {
  CHECK_FALSE(isNontrivial(3, {1}, MultiIndex{{2}}));
  CHECK(isNontrivial(4, {2}, MultiIndex{{2}}));
  CHECK_FALSE(isNontrivial(3, {2, 2}, MultiIndex{{1, 1}}));

  // The symplectic sample realizes the even-degree square.
  auto xi = FormTuple::zero(4, {2});
  xi[0].setCoeff(tupleToMask({1, 2}, 4), 1.0);
  xi[0].setCoeff(tupleToMask({3, 4}, 4), 1.0);
  CHECK_FALSE(wedgePower(xi, MultiIndex{{2}}).isZero(1e-12));
}

TEST_CASE("nontriviality rule matches the randomized oracle for n <= 5, m <= 3") {
  Rng rng(101);
  for (int n = 2; n <= 5; ++n) {
    for (int m = 1; m <= 3; ++m) {
      std::vector<int> degrees(m, 1);
      // iterate all degree vectors with entries in [1, n]
      while (true) {
        std::vector<int> caps(m);
        for (int i = 0; i < m; ++i) caps[i] = n / degrees[i];
        std::vector<int> alpha(m, 0);
        while (true) {
          MultiIndex mi{alpha};
          bool inRange = true;
          for (int i = 0; i < m; ++i) inRange = inRange && alpha[i] <= caps[i];
          if (inRange) {
            CHECK(isNontrivial(n, degrees, mi) == nontrivialOracle(n, degrees, mi, rng));
          }
          int j = 0;
          for (; j < m; ++j) {
            if (++alpha[j] <= caps[j]) break;
            alpha[j] = 0;
          }
          if (j == m) break;
        }
        int j = 0;
        for (; j < m; ++j) {
          if (++degrees[j] <= n) break;
          degrees[j] = 1;
        }
        if (j == m) break;
      }
    }
  }
}

TEST_CASE("enumeration canonical order and named examples") {
  auto got = enumerateMultiIndices(2, {1, 1}, 1, 2);
  REQUIRE(got.size() == 3);
  CHECK(got[0].alpha == std::vector<int>{1, 0});
  CHECK(got[1].alpha == std::vector<int>{0, 1});
  CHECK(got[2].alpha == std::vector<int>{1, 1});

  auto single = enumerateMultiIndices(2, {2}, 1, 2);
  REQUIRE(single.size() == 1);
  CHECK(single[0].alpha == std::vector<int>{1});

  // order-2 group for three 2-forms in n = 8: squares and cross products,
  // ordered (2,0,0), (1,1,0), (1,0,1), (0,2,0), (0,1,1), (0,0,2).
  auto all = enumerateMultiIndices(8, {2, 2, 2}, 1, 8);
  std::vector<std::vector<int>> orderTwo;
  for (const auto& mi : all)
    if (mi.order() == 2) orderTwo.push_back(mi.alpha);
  const std::vector<std::vector<int>> expected = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                                  {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  CHECK(orderTwo == expected);

  // alpha = 0 appears only when the weight range includes zero.
  auto withZero = enumerateMultiIndices(2, {1, 1}, 0, 2);
  CHECK(withZero.size() == 4);
  CHECK(withZero[0].alpha == std::vector<int>{0, 0});
}

TEST_CASE("maxWedgeOrder on the named cases") {
  CHECK(maxWedgeOrder(3, {1}) == 1);
  CHECK(maxWedgeOrder(7, {1}) == 1);
  CHECK(maxWedgeOrder(4, {2}) == 2);
  CHECK(maxWedgeOrder(4, {1, 1, 1, 1}) == 4);
}

TEST_CASE("wedgeComponentCount on the named cases") {
  CHECK(wedgeComponentCount(2, {1, 1}) == 5);
  CHECK(wedgeComponentCount(3, {3}) == 1);
  CHECK(wedgeComponentCount(4, {2}) == 7);
  // classical count C(m+n, n) - 1 for all-ones degree vectors
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 5; ++n)
      CHECK(wedgeComponentCount(n, std::vector<int>(m, 1)) == binomial(m + n, n) - 1);
}

TEST_CASE("wedge power vector reproduces determinants for 1-forms") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  auto tv = wedgePowerVector(rowsAsOneForms(id));
  REQUIRE(tv.entries.size() == 3);
  CHECK(tv.componentCount == 5);
  CHECK(tv.entries[0].second.coeff(tupleToMask({1}, 2)) == 1.0);
  CHECK(tv.entries[1].second.coeff(tupleToMask({2}, 2)) == 1.0);
  CHECK(tv.entries[2].second.coeff(tupleToMask({1, 2}, 2)) == 1.0);

  auto zero = FormTuple::zero(2, {1, 1});
  for (const auto& [mi, form] : wedgePowerVector(zero).entries) CHECK(form.isZero());

  Rng rng(13);
  Eigen::MatrixXd x(2, 2);
  x << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
  auto tv2 = wedgePowerVector(rowsAsOneForms(x));
  const double det = x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0);
  CHECK(tv2.entries[2].second.coeff(tupleToMask({1, 2}, 2)) == doctest::Approx(det));
}

TEST_CASE("wedge powers of 1-form tuples equal all matrix minors exactly") {
  Rng rng(17);
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      Eigen::MatrixXd x(m, n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = static_cast<double>(rng.below(11)) - 5.0;
      const auto tv = wedgePowerVector(rowsAsOneForms(x));
      for (const auto& [mi, form] : tv.entries) {
        std::vector<int> rows;
        for (int i = 0; i < m; ++i)
          if (mi.alpha[i]) rows.push_back(i + 1);
        for (Mask cmask : maskTable(n, mi.weight(std::vector<int>(m, 1))).masks) {
          // integer-valued data: both routes are exact
          CHECK(form.coeff(cmask) == minorOracle(x, rows, maskToTuple(cmask)));
        }
      }
    }
  }
}

TEST_CASE("wedge powers are multiplicative up to the degree-reordering sign") {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(3));
    std::vector<int> degrees(m);
    for (int i = 0; i < m; ++i) degrees[i] = 1 + static_cast<int>(rng.below(n));
    const auto alphas = enumerateMultiIndices(n, degrees, 1, n);
    if (alphas.empty()) continue;
    const auto& alpha = alphas[rng.below(alphas.size())];
    // random componentwise split alpha = beta + gamma
    MultiIndex beta{std::vector<int>(m, 0)}, gamma{std::vector<int>(m, 0)};
    for (int i = 0; i < m; ++i) {
      beta.alpha[i] = static_cast<int>(rng.below(alpha.alpha[i] + 1));
      gamma.alpha[i] = alpha.alpha[i] - beta.alpha[i];
    }
    const auto xi = rng.tuple(n, degrees);
    const auto full = wedgePower(xi, alpha);
    const auto split = wedge(wedgePower(xi, beta), wedgePower(xi, gamma));
    int exponent = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) exponent += degrees[i] * gamma.alpha[i] * degrees[j] * beta.alpha[j];
    const double sign = (exponent % 2 == 0) ? 1.0 : -1.0;
    CHECK((full.coeffs() - sign * split.coeffs()).lpNorm<Eigen::Infinity>() <=
          1e-11 * (1.0 + full.coeffs().lpNorm<Eigen::Infinity>()));
  }
}
