#pragma once

#include <cmath>
#include <functional>

#include "formlab/grid.hpp"

namespace formlab {

/// A discrete k-form: one value per k-cell, holding the integral of the form
/// over the cell (so values scale like h^k).
struct Cochain {
  GridPtr grid;
  int degree = 0;
  Eigen::VectorXd values;

  Cochain() = default;
  Cochain(GridPtr g, int k) : grid(std::move(g)), degree(k) {
    values = Eigen::VectorXd::Zero(grid->cellCount(k));
  }
  Cochain(GridPtr g, int k, Eigen::VectorXd v) : grid(std::move(g)), degree(k), values(std::move(v)) {
    require(values.size() == grid->cellCount(k), ErrorCode::GridMismatch,
            "value vector length does not match the cell count");
  }

  static void requireCompatible(const Cochain& a, const Cochain& b) {
    require(a.grid && b.grid && a.grid->n() == b.grid->n() && a.grid->res() == b.grid->res(),
            ErrorCode::GridMismatch, "cochains live on different grids");
  }
};

enum class BoundaryCondition { TangentialZero, Free };

/// Cubical coboundary; linear with integer coefficients, d(d(w)) = 0.
inline Cochain coboundary(const Cochain& w) {
  require(w.degree < w.grid->n(), ErrorCode::TopDegree, "coboundary of a top-degree cochain");
  Cochain out(w.grid, w.degree + 1);
  out.values = w.grid->coboundaryMatrix(w.degree) * w.values;
  return out;
}

/// Adjoint of the coboundary in the diagonal mass inner product. With the
/// tangential-zero condition both the argument and the result are projected
/// onto the subcomplex of cochains vanishing on boundary-tangential cells.
inline Cochain codifferential(const Cochain& w, BoundaryCondition bc) {
  require(w.degree >= 1, ErrorCode::DegreeZero, "codifferential of a 0-cochain");
  const auto& g = *w.grid;
  const int k = w.degree;
  Eigen::VectorXd v = w.values;
  if (bc == BoundaryCondition::TangentialZero)
    v = g.tangentialInteriorMask(k).cwiseProduct(v);
  const Eigen::VectorXd mk = g.massDiagonal(k);
  const Eigen::VectorXd mlo = g.massDiagonal(k - 1);
  Eigen::VectorXd r = g.coboundaryMatrix(k - 1).transpose() * mk.cwiseProduct(v);
  r = r.cwiseQuotient(mlo);
  if (bc == BoundaryCondition::TangentialZero)
    r = g.tangentialInteriorMask(k - 1).cwiseProduct(r);
  return Cochain(w.grid, k - 1, std::move(r));
}

/// Mass inner product <u, v>_M; equals the L^2 pairing of the reconstructed
/// piecewise forms.
inline double massInner(const Cochain& u, const Cochain& v) {
  Cochain::requireCompatible(u, v);
  require(u.degree == v.degree, ErrorCode::DegreeMismatch, "inner product degrees differ");
  return u.values.cwiseProduct(v.values).dot(u.grid->massDiagonal(u.degree));
}

/// L^p norm of the reconstructed form: pointwise coefficients value/h^k
/// weighted by dual cell volumes; p may be infinite.
inline double lpNorm(const Cochain& w, double p) {
  require(p >= 1.0, ErrorCode::BadExponent, "L^p norm needs p >= 1");
  const auto& g = *w.grid;
  const double scale = std::pow(g.h(), w.degree);
  if (std::isinf(p)) return w.values.cwiseAbs().maxCoeff() / scale;
  double acc = 0.0;
  for (std::int64_t i = 0; i < w.values.size(); ++i) {
    const double coeff = std::abs(w.values(i)) / scale;
    acc += std::pow(coeff, p) * g.cellVolume(w.degree, g.cell(w.degree, i));
  }
  return std::pow(acc, 1.0 / p);
}

/// A smooth k-form field given pointwise as a constant form at each x.
using FormField = std::function<ExteriorForm(const Eigen::VectorXd&)>;

/// de Rham map: integrates the field over every k-cell with tensor Gauss
/// quadrature of order 3 per spanned axis.
inline Cochain sampleForm(const GridPtr& grid, int k, const FormField& field) {
  static const double nodes[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const auto& g = *grid;
  const int n = g.n();
  const double h = g.h();
  Cochain out(grid, k);
  std::vector<int> spanned;
  for (std::int64_t i = 0; i < out.values.size(); ++i) {
    const auto cell = g.cell(k, i);
    const Mask axes = g.axes(k, cell.maskIdx);
    spanned = maskToTuple(axes);
    Eigen::VectorXd x(n);
    for (int a = 0; a < n; ++a) x(a) = cell.corner[a] * h;
    double acc = 0.0;
    std::array<int, 4> q{0, 0, 0, 0};
    while (true) {
      double wq = 1.0;
      for (int j = 0; j < k; ++j) {
        const int a = spanned[j] - 1;
        x(a) = (cell.corner[a] + 0.5 + 0.5 * nodes[q[j]]) * h;
        wq *= 0.5 * h * weights[q[j]];
      }
      ExteriorForm value = field(x);
      require(value.n() == n && value.k() == k, ErrorCode::EvalError,
              "sampled field has wrong shape");
      acc += wq * value.coeff(axes);
      if (k == 0) break;
      int j = 0;
      for (; j < k; ++j) {
        if (++q[j] < 3) break;
        q[j] = 0;
      }
      if (j == k) break;
    }
    if (k == 0) acc = field(x).coeffs()(0);
    out.values(i) = acc;
  }
  return out;
}

/// Second-order reconstruction of a k-cochain at the center of an n-cell:
/// each tuple component averages the 2^{n-k} staggered cells around the
/// center and divides by h^k.
inline ExteriorForm reconstructAtCenter(const Cochain& w, std::int64_t topIndex) {
  const auto& g = *w.grid;
  const int n = g.n();
  const int k = w.degree;
  const auto top = g.cell(n, topIndex);
  const double scale = std::pow(g.h(), k);
  ExteriorForm out(n, k);
  const auto& masks = maskTable(n, k).masks;
  for (std::size_t mi = 0; mi < masks.size(); ++mi) {
    const Mask axes = masks[mi];
    const auto normals = maskToTuple(((Mask(1) << n) - 1) & ~axes);
    double acc = 0.0;
    const int copies = 1 << (n - k);
    for (int t = 0; t < copies; ++t) {
      CubicalGrid::Cell c{static_cast<int>(mi), top.corner};
      for (int j = 0; j < n - k; ++j)
        if (t & (1 << j)) c.corner[normals[j] - 1] += 1;
      acc += w.values(g.index(k, c));
    }
    out.coeffs()(static_cast<int>(mi)) = acc / (copies * scale);
  }
  return out;
}

/// Cubical cup product (front face for u, back face for v, shuffle signs).
/// Satisfies the Leibniz rule d(u ~ v) = du ~ v + (-1)^p u ~ dv exactly,
/// which is what makes discrete integration by parts on products exact.
inline Cochain cup(const Cochain& u, const Cochain& v) {
  Cochain::requireCompatible(u, v);
  const auto& g = *u.grid;
  const int n = g.n();
  const int p = u.degree, q = v.degree;
  require(p + q <= n, ErrorCode::DegreeOverflow, "cup product degree exceeds n");
  Cochain out(u.grid, p + q);
  const auto& outMasks = maskTable(n, p + q).masks;
  const auto& uRank = maskTable(n, p).rank;
  const auto& vRank = maskTable(n, q).rank;
  for (std::int64_t i = 0; i < out.values.size(); ++i) {
    const auto cell = g.cell(p + q, i);
    const Mask axes = outMasks[cell.maskIdx];
    double acc = 0.0;
    // iterate subsets P of the spanned axes with |P| = p
    for (Mask sub = axes;; sub = (sub - 1) & axes) {
      if (maskDegree(sub) == p) {
        const Mask rest = axes & ~sub;
        CubicalGrid::Cell front{uRank[sub], cell.corner};
        CubicalGrid::Cell back{vRank[rest], cell.corner};
        for (Mask bits = sub; bits;) {
          const int ax = __builtin_ctz(bits);
          bits &= bits - 1;
          back.corner[ax] += 1;
        }
        acc += mergeSign(sub, rest) * u.values(g.index(p, front)) * v.values(g.index(q, back));
      }
      if (sub == 0) break;
    }
    out.values(i) = acc;
  }
  return out;
}

/// Pointwise evaluation of a closed-form scalar at every n-cell center.
inline Eigen::VectorXd centerValues(const CubicalGrid& g,
                                    const std::function<double(const Eigen::VectorXd&)>& f) {
  Eigen::VectorXd out(g.cellCount(g.n()));
  for (std::int64_t i = 0; i < out.size(); ++i) out(i) = f(g.cellCenter(i));
  return out;
}

/// An m-tuple of cochains on one grid (the discrete counterpart of a tuple
/// of forms; degrees may differ per factor).
struct CochainTuple {
  std::vector<Cochain> parts;

  CochainTuple() = default;
  explicit CochainTuple(std::vector<Cochain> ps) : parts(std::move(ps)) {
    for (std::size_t i = 1; i < parts.size(); ++i) Cochain::requireCompatible(parts[0], parts[i]);
  }

  static CochainTuple zero(const GridPtr& grid, const std::vector<int>& degrees) {
    std::vector<Cochain> ps;
    ps.reserve(degrees.size());
    for (int k : degrees) ps.emplace_back(grid, k);
    return CochainTuple(std::move(ps));
  }

  int m() const { return static_cast<int>(parts.size()); }
  const GridPtr& grid() const { return parts.at(0).grid; }
  std::vector<int> degrees() const {
    std::vector<int> ks;
    for (const auto& p : parts) ks.push_back(p.degree);
    return ks;
  }
  const Cochain& operator[](int i) const { return parts[i]; }
  Cochain& operator[](int i) { return parts[i]; }
};

inline CochainTuple coboundary(const CochainTuple& t) {
  std::vector<Cochain> out;
  out.reserve(t.parts.size());
  for (const auto& p : t.parts) out.push_back(coboundary(p));
  return CochainTuple(std::move(out));
}

/// Reconstructs every factor at the same n-cell center.
inline FormTuple reconstructTupleAtCenter(const CochainTuple& t, std::int64_t topIndex) {
  std::vector<ExteriorForm> forms;
  forms.reserve(t.parts.size());
  for (const auto& p : t.parts) forms.push_back(reconstructAtCenter(p, topIndex));
  return FormTuple(std::move(forms));
}

}  // namespace formlab
