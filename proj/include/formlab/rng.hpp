#pragma once

#include <cstdint>

#include "formlab/exterior.hpp"

namespace formlab {

/// Deterministic splittable generator (xorshift-star core). Identical output
/// for identical seeds on every platform, independent of the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  /// Independent stream derived from this one; advancing either does not
  /// affect the other.
  Rng split() { return Rng(next() ^ 0xbf58476d1ce4e5b9ULL); }

  ExteriorForm form(int n, int k, double lo = -1.0, double hi = 1.0) {
    ExteriorForm f(n, k);
    for (int i = 0; i < f.dim(); ++i) f.coeffs()(i) = uniform(lo, hi);
    return f;
  }

  FormTuple tuple(int n, const std::vector<int>& degrees, double lo = -1.0, double hi = 1.0) {
    FormTuple t = FormTuple::zero(n, degrees);
    for (auto& f : t.forms) f = form(n, f.k(), lo, hi);
    return t;
  }

 private:
  std::uint64_t state_;
};

}  // namespace formlab
