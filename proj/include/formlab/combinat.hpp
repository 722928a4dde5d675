#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "formlab/error.hpp"

namespace formlab {

inline constexpr int kMaxAmbientDim = 8;

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// Index tuples are stored as bitmasks over axes 0..n-1; bit order is the
/// increasing-tuple order.
using Mask = std::uint32_t;

inline int maskDegree(Mask m) { return __builtin_popcount(m); }

/// Sign of merging two disjoint increasing tuples: (-1)^{#inversions} with
/// inversions counted between the concatenation (I, J) and the sorted union.
inline int mergeSign(Mask i, Mask j) {
  int inv = 0;
  for (Mask rest = j; rest;) {
    const int b = __builtin_ctz(rest);
    rest &= rest - 1;
    inv += __builtin_popcount(i >> (b + 1));
  }
  return (inv & 1) ? -1 : 1;
}

/// All degree-k masks over n axes in increasing-tuple (lexicographic) order,
/// plus the inverse map mask -> position.
struct MaskTable {
  std::vector<Mask> masks;
  std::array<int, 1u << kMaxAmbientDim> rank;
};

inline const MaskTable& maskTable(int n, int k) {
  require(n >= 0 && n <= kMaxAmbientDim, ErrorCode::DimensionMismatch,
          "ambient dimension must be in [0, 8]");
  require(k >= 0 && k <= n, ErrorCode::DegreeOverflow, "degree must be in [0, n]");
  static std::array<std::array<MaskTable, kMaxAmbientDim + 1>, kMaxAmbientDim + 1> cache = [] {
    std::array<std::array<MaskTable, kMaxAmbientDim + 1>, kMaxAmbientDim + 1> all{};
    for (int nn = 0; nn <= kMaxAmbientDim; ++nn) {
      for (int kk = 0; kk <= nn; ++kk) {
        MaskTable& t = all[nn][kk];
        t.rank.fill(-1);
        for (Mask m = 0; m < (1u << nn); ++m) {
          if (maskDegree(m) == kk) {
            t.rank[m] = static_cast<int>(t.masks.size());
            t.masks.push_back(m);
          }
        }
      }
    }
    return all;
  }();
  return cache[n][k];
}

/// 1-based increasing tuple for a mask, e.g. 0b101 -> {1, 3}.
inline std::vector<int> maskToTuple(Mask m) {
  std::vector<int> t;
  for (Mask rest = m; rest;) {
    const int b = __builtin_ctz(rest);
    rest &= rest - 1;
    t.push_back(b + 1);
  }
  return t;
}

inline Mask tupleToMask(const std::vector<int>& tuple, int n) {
  Mask m = 0;
  int prev = 0;
  for (int a : tuple) {
    require(a >= 1 && a <= n, ErrorCode::InvalidArgument, "tuple entry out of range");
    require(a > prev, ErrorCode::InvalidArgument, "tuple entries must increase");
    prev = a;
    m |= Mask(1) << (a - 1);
  }
  return m;
}

}  // namespace formlab
