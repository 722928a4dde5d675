#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <memory>
#include <vector>

#include "formlab/exterior.hpp"

namespace formlab {

/// Tensor-product cubical complex on the unit box (0,1)^n, 2 <= n <= 4.
/// A k-cell is an axis subset A (the directions it spans) plus a corner
/// multi-index: spanning coordinates run over [0, res) cells, normal
/// coordinates over [0, res] grid planes.
class CubicalGrid {
 public:
  CubicalGrid(int n, int res) : n_(n), res_(res), h_(1.0 / res) {
    require(n >= 2 && n <= 4, ErrorCode::DimensionMismatch, "grid dimension must be 2, 3 or 4");
    static constexpr int caps[5] = {0, 0, 64, 24, 8};
    require(res >= 2 && res <= caps[n], ErrorCode::InvalidArgument,
            "grid resolution outside the supported range");
    for (int k = 0; k <= n_; ++k) {
      const auto& masks = maskTable(n_, k).masks;
      Degree d;
      d.offsets.resize(masks.size() + 1, 0);
      for (std::size_t mi = 0; mi < masks.size(); ++mi) {
        std::int64_t cells = 1;
        for (int a = 0; a < n_; ++a) cells *= axisSize(masks[mi], a);
        d.offsets[mi + 1] = d.offsets[mi] + cells;
      }
      degrees_[k] = std::move(d);
    }
  }

  int n() const { return n_; }
  int res() const { return res_; }
  double h() const { return h_; }

  std::int64_t cellCount(int k) const {
    checkDegree(k);
    return degrees_[k].offsets.back();
  }

  struct Cell {
    int maskIdx;                // position in maskTable(n, k).masks
    std::array<int, 4> corner;  // per-axis coordinate
  };

  std::int64_t index(int k, const Cell& cell) const {
    const Mask axes = maskTable(n_, k).masks[cell.maskIdx];
    std::int64_t at = 0;
    for (int a = 0; a < n_; ++a) at = at * axisSize(axes, a) + cell.corner[a];
    return degrees_[k].offsets[cell.maskIdx] + at;
  }

  Cell cell(int k, std::int64_t index) const {
    const auto& offsets = degrees_[k].offsets;
    int mi = 0;
    while (offsets[mi + 1] <= index) ++mi;
    std::int64_t rest = index - offsets[mi];
    const Mask axes = maskTable(n_, k).masks[mi];
    Cell c{mi, {0, 0, 0, 0}};
    for (int a = n_ - 1; a >= 0; --a) {
      const int size = axisSize(axes, a);
      c.corner[a] = static_cast<int>(rest % size);
      rest /= size;
    }
    return c;
  }

  Mask axes(int k, int maskIdx) const { return maskTable(n_, k).masks[maskIdx]; }

  /// Dual volume of a k-cell: h per spanned axis, h per interior grid plane
  /// and h/2 on the two boundary planes.
  double cellVolume(int k, const Cell& cell) const {
    const Mask a = axes(k, cell.maskIdx);
    double vol = 1.0;
    for (int ax = 0; ax < n_; ++ax) {
      if (a & (Mask(1) << ax)) {
        vol *= h_;
      } else {
        vol *= (cell.corner[ax] == 0 || cell.corner[ax] == res_) ? 0.5 * h_ : h_;
      }
    }
    return vol;
  }

  /// Diagonal mass entry: cellVolume / h^{2k}, so <u, v>_M matches the L^2
  /// pairing of the reconstructed piecewise forms.
  Eigen::VectorXd massDiagonal(int k) const {
    Eigen::VectorXd m(cellCount(k));
    for (std::int64_t i = 0; i < m.size(); ++i)
      m(i) = cellVolume(k, cell(k, i)) / std::pow(h_, 2 * k);
    return m;
  }

  /// True iff the cell is contained in the boundary: some normal coordinate
  /// sits on an outer grid plane.
  bool isBoundaryTangential(int k, const Cell& cell) const {
    const Mask a = axes(k, cell.maskIdx);
    for (int ax = 0; ax < n_; ++ax)
      if (!(a & (Mask(1) << ax)) && (cell.corner[ax] == 0 || cell.corner[ax] == res_)) return true;
    return false;
  }

  /// True iff the closed cell intersects the boundary.
  bool touchesBoundary(int k, const Cell& cell) const {
    const Mask a = axes(k, cell.maskIdx);
    for (int ax = 0; ax < n_; ++ax) {
      if (a & (Mask(1) << ax)) {
        if (cell.corner[ax] == 0 || cell.corner[ax] + 1 == res_) return true;
      } else {
        if (cell.corner[ax] == 0 || cell.corner[ax] == res_) return true;
      }
    }
    return false;
  }

  /// 0/1 vector, 1 on cells NOT contained in the boundary. Multiplying by it
  /// imposes the vanishing-tangential-part condition.
  Eigen::VectorXd tangentialInteriorMask(int k) const {
    Eigen::VectorXd mask(cellCount(k));
    for (std::int64_t i = 0; i < mask.size(); ++i)
      mask(i) = isBoundaryTangential(k, cell(k, i)) ? 0.0 : 1.0;
    return mask;
  }

  /// 0/1 vector, 1 on cells whose closure avoids the boundary entirely.
  Eigen::VectorXd strictInteriorMask(int k) const {
    Eigen::VectorXd mask(cellCount(k));
    for (std::int64_t i = 0; i < mask.size(); ++i)
      mask(i) = touchesBoundary(k, cell(k, i)) ? 0.0 : 1.0;
    return mask;
  }

  /// Coboundary matrix from k-cochains to (k+1)-cochains: for each (k+1)-cell
  /// and each j-th spanned axis, the top face enters with (-1)^j and the
  /// bottom face with -(-1)^j.
  Eigen::SparseMatrix<double> coboundaryMatrix(int k) const {
    require(k >= 0 && k < n_, ErrorCode::TopDegree, "coboundary needs degree below n");
    const auto& hiMasks = maskTable(n_, k + 1).masks;
    const auto& loRank = maskTable(n_, k).rank;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * (k + 1) * cellCount(k + 1));
    for (std::int64_t i = 0; i < cellCount(k + 1); ++i) {
      const Cell hi = cell(k + 1, i);
      const Mask axesHi = hiMasks[hi.maskIdx];
      int j = 0;
      for (Mask rest = axesHi; rest; ++j) {
        const int ax = __builtin_ctz(rest);
        rest &= rest - 1;
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        Cell lo = hi;
        lo.maskIdx = loRank[axesHi & ~(Mask(1) << ax)];
        const std::int64_t bottom = index(k, lo);
        lo.corner[ax] += 1;
        const std::int64_t top = index(k, lo);
        trips.emplace_back(i, top, sign);
        trips.emplace_back(i, bottom, -sign);
      }
    }
    Eigen::SparseMatrix<double> d(cellCount(k + 1), cellCount(k));
    d.setFromTriplets(trips.begin(), trips.end());
    return d;
  }

  /// Center of an n-cell identified by its row-major corner index.
  Eigen::VectorXd cellCenter(std::int64_t topIndex) const {
    const Cell c = cell(n_, topIndex);
    Eigen::VectorXd x(n_);
    for (int a = 0; a < n_; ++a) x(a) = (c.corner[a] + 0.5) * h_;
    return x;
  }

 private:
  void checkDegree(int k) const {
    require(k >= 0 && k <= n_, ErrorCode::BadDegree, "cell degree out of range");
  }
  int axisSize(Mask axes, int a) const { return (axes & (Mask(1) << a)) ? res_ : res_ + 1; }

  struct Degree {
    std::vector<std::int64_t> offsets;
  };

  int n_;
  int res_;
  double h_;
  std::array<Degree, 5> degrees_;
};

using GridPtr = std::shared_ptr<const CubicalGrid>;

inline GridPtr makeGrid(int n, int res) { return std::make_shared<CubicalGrid>(n, res); }

}  // namespace formlab
