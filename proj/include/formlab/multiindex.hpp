#pragma once

#include <algorithm>
#include <vector>

#include "formlab/exterior.hpp"

namespace formlab {

/// A wedge-power multiindex alpha for a degree vector k: the i-th factor is
/// wedged alpha_i times.
struct MultiIndex {
  std::vector<int> alpha;

  int order() const {  // |alpha|
    int s = 0;
    for (int a : alpha) s += a;
    return s;
  }
  int weight(const std::vector<int>& degrees) const {  // |k alpha|
    int s = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) s += degrees[i] * alpha[i];
    return s;
  }
  bool operator==(const MultiIndex& o) const { return alpha == o.alpha; }
};

/// Canonical order: ascending |alpha|, then descending lexicographic, so the
/// order-2 group for m = 3 reads (2,0,0), (1,1,0), (1,0,1), (0,2,0), ...
inline bool canonicalLess(const MultiIndex& a, const MultiIndex& b) {
  const int sa = a.order(), sb = b.order();
  if (sa != sb) return sa < sb;
  return std::lexicographical_compare(b.alpha.begin(), b.alpha.end(), a.alpha.begin(),
                                      a.alpha.end());
}

/// True iff xi^alpha is not identically zero over xi in Lambda^k. A power is
/// realizable exactly when the total degree fits in n and no odd-degree factor
/// is repeated (odd forms square to zero); disjoint coordinate blocks realize
/// every admissible pattern.
inline bool isNontrivial(int n, const std::vector<int>& degrees, const MultiIndex& mi) {
  require(mi.alpha.size() == degrees.size(), ErrorCode::InvalidArgument,
          "multiindex length does not match degree vector");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    require(degrees[i] >= 1 && degrees[i] <= n, ErrorCode::InvalidArgument,
            "factor degree out of range");
    require(mi.alpha[i] >= 0 && mi.alpha[i] <= n / degrees[i], ErrorCode::InvalidArgument,
            "multiindex entry out of range");
    if ((degrees[i] % 2) == 1 && mi.alpha[i] > 1) return false;
  }
  return mi.weight(degrees) <= n;
}

/// All nontrivial alpha with |k alpha| inside [minWeight, maxWeight], in
/// canonical order. alpha = 0 appears only when 0 lies in the range.
inline std::vector<MultiIndex> enumerateMultiIndices(int n, const std::vector<int>& degrees,
                                                     int minWeight, int maxWeight) {
  const int m = static_cast<int>(degrees.size());
  std::vector<MultiIndex> out;
  MultiIndex cur;
  cur.alpha.assign(m, 0);
  const auto rec = [&](auto&& self, int i, int weight) -> void {
    if (weight > maxWeight) return;
    if (i == m) {
      if (weight >= minWeight && isNontrivial(n, degrees, cur)) out.push_back(cur);
      return;
    }
    const int cap = ((degrees[i] % 2) == 1) ? 1 : n / degrees[i];
    for (int a = 0; a <= cap; ++a) {
      cur.alpha[i] = a;
      self(self, i + 1, weight + a * degrees[i]);
    }
    cur.alpha[i] = 0;
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end(), canonicalLess);
  return out;
}

/// N(k): the largest |alpha| over nontrivial wedge powers.
inline int maxWedgeOrder(int n, const std::vector<int>& degrees) {
  int best = 0;
  for (const auto& mi : enumerateMultiIndices(n, degrees, 1, n)) best = std::max(best, mi.order());
  return best;
}

/// tau(n, k): total component count of the wedge-power vector, i.e. the sum
/// of C(n, |k alpha|) over nontrivial alpha with |alpha| >= 1.
inline std::int64_t wedgeComponentCount(int n, const std::vector<int>& degrees) {
  std::int64_t total = 0;
  for (const auto& mi : enumerateMultiIndices(n, degrees, 1, n))
    total += binomial(n, mi.weight(degrees));
  return total;
}

/// xi^alpha by repeated exterior products. Enumeration guarantees the degree
/// fits, so the wedge cannot overflow here.
template <typename Scalar>
ExteriorFormT<Scalar> wedgePower(const FormTupleT<Scalar>& xi, const MultiIndex& mi) {
  const int n = xi.n();
  ExteriorFormT<Scalar> acc = ExteriorFormT<Scalar>::scalar(n, Scalar(1));
  for (int i = 0; i < xi.m(); ++i)
    for (int rep = 0; rep < mi.alpha[i]; ++rep) acc = wedge(acc, xi[i]);
  return acc;
}

/// The vector of all nontrivial wedge powers of a tuple, grouped by |alpha|
/// ascending and canonically ordered within groups.
template <typename Scalar>
struct WedgeVectorT {
  std::vector<std::pair<MultiIndex, ExteriorFormT<Scalar>>> entries;
  std::int64_t componentCount = 0;

  /// Flattens all coefficients in canonical order into R^tau.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> flatten() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(componentCount);
    Eigen::Index at = 0;
    for (const auto& [mi, form] : entries) {
      v.segment(at, form.dim()) = form.coeffs();
      at += form.dim();
    }
    return v;
  }
};

using WedgeVector = WedgeVectorT<double>;

template <typename Scalar>
WedgeVectorT<Scalar> wedgePowerVector(const FormTupleT<Scalar>& xi) {
  const int n = xi.n();
  const auto degrees = xi.degrees();
  WedgeVectorT<Scalar> out;
  for (const auto& mi : enumerateMultiIndices(n, degrees, 1, n))
    out.entries.emplace_back(mi, wedgePower(xi, mi));
  out.componentCount = wedgeComponentCount(n, degrees);
  return out;
}

}  // namespace formlab
