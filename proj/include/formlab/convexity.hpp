#pragma once

#include <string>

#include "formlab/cochain.hpp"
#include "formlab/integrand.hpp"
#include "formlab/rng.hpp"

namespace formlab {

/// Seeded sampling policy shared by the convexity probes: coefficients are
/// uniform on [-1, 1] and a fixed share of samples is rescaled by 1e3 to
/// probe the growth regime.
struct SamplerConfig {
  std::uint64_t seed = 1;
  int samples = 1000;
  double rescaleShare = 0.1;
  double rescaleFactor = 1e3;
};

/// Outcome of a sampling-based convexity probe. Verdicts certify only
/// "passes at tolerance over N seeded samples"; for polynomial integrands
/// the projection onto the wedge-power basis gives the exact certificate.
struct ConvexityReport {
  bool passes = false;
  double worstViolation = 0.0;
  double tolerance = 0.0;
  int samplesUsed = 0;
  std::string witness;
};

namespace detail {

struct LineProbe {
  FormTuple base;
  FormTuple direction;  // a ^ beta_i per factor
  double directionNormSq = 0.0;
};

inline LineProbe drawLineProbe(const IntegrandSpec& spec, Rng& rng, double rescale) {
  LineProbe probe;
  probe.base = rng.tuple(spec.n(), spec.degrees());
  const ExteriorForm a = rng.form(spec.n(), 1);
  std::vector<ExteriorForm> dirs;
  for (int i = 0; i < spec.m(); ++i) {
    const ExteriorForm beta = rng.form(spec.n(), spec.degrees()[i] - 1);
    dirs.push_back(wedge(a, beta));
  }
  probe.direction = FormTuple(std::move(dirs));
  if (rescale != 1.0) {
    for (auto& f : probe.base.forms) f = rescale * f;
    for (auto& f : probe.direction.forms) f = rescale * f;
  }
  probe.directionNormSq = probe.direction.squaredNorm();
  return probe;
}

inline FormTuple shifted(const LineProbe& probe, double t) {
  FormTuple out = probe.base;
  for (int i = 0; i < out.m(); ++i) out[i] = out[i] + t * probe.direction[i];
  return out;
}

/// Worst normalized second-difference defect along sampled exterior lines.
/// signMode +1 flags negative curvature (convexity), 0 flags any curvature
/// (affinity).
inline ConvexityReport secondDifferenceScan(const IntegrandSpec& spec,
                                            const SamplerConfig& cfg, bool affinity) {
  constexpr double kStep = 1e-3;
  constexpr int kGridPoints = 21;
  ConvexityReport rep;
  rep.tolerance = 1e-9;
  Rng rng(cfg.seed);
  for (int s = 0; s < cfg.samples; ++s) {
    const bool rescale = rng.uniform01() < cfg.rescaleShare;
    const auto probe = drawLineProbe(spec, rng, rescale ? cfg.rescaleFactor : 1.0);
    for (int gi = 0; gi < kGridPoints; ++gi) {
      const double t = -1.0 + 2.0 * gi / (kGridPoints - 1);
      const double gm = spec(shifted(probe, t - kStep));
      const double g0 = spec(shifted(probe, t));
      const double gp = spec(shifted(probe, t + kStep));
      const double second = gp - 2.0 * g0 + gm;
      const double scale = 1.0 + std::abs(g0) + probe.directionNormSq;
      const double violation = (affinity ? std::abs(second) : -second) / scale;
      if (violation > rep.worstViolation) {
        rep.worstViolation = violation;
        rep.witness = "sample " + std::to_string(s) + ", t = " + std::to_string(t);
      }
    }
  }
  rep.samplesUsed = cfg.samples;
  rep.passes = rep.worstViolation <= rep.tolerance;
  return rep;
}

}  // namespace detail

/// Convexity of t -> f(xi + t a^beta) over sampled lines, certified through
/// nonnegative second differences.
inline ConvexityReport testExtOneConvexity(const IntegrandSpec& spec,
                                           const SamplerConfig& cfg = {}) {
  return detail::secondDifferenceScan(spec, cfg, /*affinity=*/false);
}

/// Affinity along the same lines: second differences vanish to tolerance.
inline ConvexityReport testExtOneAffinity(const IntegrandSpec& spec,
                                          const SamplerConfig& cfg = {}) {
  return detail::secondDifferenceScan(spec, cfg, /*affinity=*/true);
}

/// The scalar basis functions xi -> (xi^alpha)_I spanning the affine class:
/// the constant plus one entry per wedge-power component; length 1 + tau.
struct QuasiaffineBasis {
  int n = 0;
  std::vector<int> degrees;
  /// (alpha, component mask) pairs; the leading entry is the constant.
  std::vector<std::pair<MultiIndex, Mask>> functions;

  Eigen::Index size() const { return static_cast<Eigen::Index>(functions.size()); }

  Eigen::VectorXd evaluate(const FormTuple& xi) const {
    Eigen::VectorXd row(size());
    row(0) = 1.0;
    Eigen::Index at = 1;
    MultiIndex last;
    ExteriorForm power;
    for (std::size_t i = 1; i < functions.size(); ++i) {
      const auto& [mi, mask] = functions[i];
      if (!(mi == last)) {
        power = wedgePower(xi, mi);
        last = mi;
      }
      row(at++) = power.coeff(mask);
    }
    return row;
  }
};

inline QuasiaffineBasis quasiaffineBasis(int n, const std::vector<int>& degrees) {
  QuasiaffineBasis basis;
  basis.n = n;
  basis.degrees = degrees;
  basis.functions.emplace_back(MultiIndex{std::vector<int>(degrees.size(), 0)}, Mask(0));
  for (const auto& mi : enumerateMultiIndices(n, degrees, 1, n))
    for (Mask mask : maskTable(n, mi.weight(degrees)).masks) basis.functions.emplace_back(mi, mask);
  return basis;
}

/// Least-squares projection of an integrand onto the wedge-power basis.
/// For polynomial integrands of wedge-power type the residual is an exact
/// affinity certificate; recovered coefficients round-trip to 1e-8.
struct ProjectionResult {
  double c0 = 0.0;
  std::vector<std::pair<MultiIndex, ExteriorForm>> coefficients;
  double residual = 0.0;
};

inline ProjectionResult projectQuasiaffine(const IntegrandSpec& spec, int sampleCount,
                                           std::uint64_t seed) {
  const auto basis = quasiaffineBasis(spec.n(), spec.degrees());
  require(sampleCount >= 2 * basis.size(), ErrorCode::InvalidArgument,
          "projection needs at least twice as many samples as basis functions");
  Rng rng(seed);
  Eigen::MatrixXd design(sampleCount, basis.size());
  Eigen::VectorXd target(sampleCount);
  for (int s = 0; s < sampleCount; ++s) {
    const FormTuple xi = rng.tuple(spec.n(), spec.degrees());
    design.row(s) = basis.evaluate(xi).transpose();
    target(s) = spec(xi);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < basis.size())
    fail(ErrorCode::IllConditioned, "sample Gram matrix is rank-deficient; raise sample count");
  const Eigen::VectorXd coeff = qr.solve(target);
  ProjectionResult out;
  out.c0 = coeff(0);
  Eigen::Index at = 1;
  MultiIndex current;
  ExteriorForm acc;
  bool open = false;
  for (std::size_t i = 1; i < basis.functions.size(); ++i) {
    const auto& [mi, mask] = basis.functions[i];
    if (!open || !(mi == current)) {
      if (open) out.coefficients.emplace_back(current, acc);
      current = mi;
      acc = ExteriorForm(spec.n(), mi.weight(spec.degrees()));
      open = true;
    }
    acc.setCoeff(mask, coeff(at++));
  }
  if (open) out.coefficients.emplace_back(current, acc);
  out.residual = std::sqrt((design * coeff - target).squaredNorm() / sampleCount);
  return out;
}

/// Supporting-form inequality for composites: with c(xi) read off the
/// (sub)gradient of F at the wedge-power vector of xi, checks
/// f(eta) >= f(xi) + <c(xi); eta^alpha - xi^alpha> over sampled pairs.
inline ConvexityReport polyconvexSupportTest(const IntegrandSpec& spec,
                                             const SamplerConfig& cfg = {}) {
  require(spec.kind() == IntegrandSpec::Kind::PolyconvexComposite, ErrorCode::InvalidArgument,
          "support test applies to polyconvex composites");
  ConvexityReport rep;
  rep.tolerance = 1e-9;
  Rng rng(cfg.seed);
  for (int s = 0; s < cfg.samples; ++s) {
    const bool rescale = rng.uniform01() < cfg.rescaleShare;
    const double factor = rescale ? cfg.rescaleFactor : 1.0;
    FormTuple xi = rng.tuple(spec.n(), spec.degrees());
    FormTuple eta = rng.tuple(spec.n(), spec.degrees());
    for (auto& f : xi.forms) f = factor * f;
    for (auto& f : eta.forms) f = factor * f;
    const auto tvXi = wedgePowerVector(xi).flatten();
    const auto tvEta = wedgePowerVector(eta).flatten();
    const Eigen::VectorXd support = spec.composite().subgradient(tvXi);
    const double lhs = spec(eta);
    const double rhs = spec(xi) + support.dot(tvEta - tvXi);
    const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
    const double violation = (rhs - lhs) / scale;
    if (violation > rep.worstViolation) {
      rep.worstViolation = violation;
      rep.witness = "sample " + std::to_string(s);
    }
  }
  rep.samplesUsed = cfg.samples;
  rep.passes = rep.worstViolation <= rep.tolerance;
  return rep;
}

/// Discrete quasiconvexity probe on the unit box: averages f(xi + d phi)
/// against zero-tangential-trace potentials and reports the minimum gap.
/// A gap below -tolerance certifies failure of quasiconvexity.
struct QuasiconvexityResult {
  ConvexityReport report;
  std::vector<double> gaps;  // one averaged gap per test field
  double minGap = 0.0;
  int witnessField = -1;
};

inline QuasiconvexityResult quasiconvexityInequalityTest(
    const IntegrandSpec& spec, const FormTuple& xi, const std::vector<CochainTuple>& testFields,
    double tolerance) {
  QuasiconvexityResult out;
  out.report.tolerance = tolerance;
  require(!testFields.empty(), ErrorCode::InvalidArgument, "no test fields supplied");
  const double fBase = spec(xi);
  bool first = true;
  for (const auto& phi : testFields) {
    const auto& grid = phi.grid();
    require(grid->n() == spec.n(), ErrorCode::GridMismatch,
            "test field dimension does not match the integrand");
    for (int i = 0; i < phi.m(); ++i) {
      require(phi[i].degree == spec.degrees()[i] - 1, ErrorCode::GridMismatch,
              "test field degree mismatch");
      const Eigen::VectorXd mask = grid->tangentialInteriorMask(phi[i].degree);
      const double trace =
          ((Eigen::VectorXd::Ones(mask.size()) - mask).cwiseProduct(phi[i].values))
              .lpNorm<Eigen::Infinity>();
      require(trace <= 1e-12, ErrorCode::BoundaryTrace,
              "test field has a nonzero tangential boundary trace");
    }
    const CochainTuple dphi = coboundary(phi);
    double acc = 0.0;
    const double hn = std::pow(grid->h(), grid->n());
    for (std::int64_t c = 0; c < grid->cellCount(grid->n()); ++c) {
      FormTuple arg = reconstructTupleAtCenter(dphi, c);
      for (int i = 0; i < arg.m(); ++i) arg[i] = arg[i] + xi[i];
      acc += spec(arg) * hn;
    }
    const double gap = acc - fBase;
    out.gaps.push_back(gap);
    if (first || gap < out.minGap) {
      out.minGap = gap;
      out.witnessField = static_cast<int>(out.gaps.size()) - 1;
      first = false;
    }
  }
  out.report.samplesUsed = static_cast<int>(testFields.size());
  out.report.worstViolation = std::max(0.0, -out.minGap);
  out.report.passes = out.report.worstViolation <= tolerance;
  out.report.witness = "field " + std::to_string(out.witnessField);
  return out;
}

/// Fits the smallest single constant making the product-growth difference
/// bound hold over sampled pairs, and reports its stability under sample
/// doubling. Factors beyond index r are clamped to the box [-boxBound,
/// boxBound] per component. The verdict passes when the estimate is finite
/// and doubling the sample count moves it by at most 25%.
struct LipschitzFit {
  double beta = 0.0;          // fitted constant on the full sample set
  double betaHalf = 0.0;      // fitted constant on the first half
  double stabilityRatio = 1.0;
  ConvexityReport report;
};

inline LipschitzFit pLipschitzCheck(const IntegrandSpec& spec, const std::vector<double>& p,
                                    int r, double boxBound, const SamplerConfig& cfg = {}) {
  require(static_cast<int>(p.size()) == spec.m(), ErrorCode::InvalidArgument,
          "exponent count mismatch");
  require(r >= 0 && r <= spec.m(), ErrorCode::InvalidArgument, "split index out of range");
  Rng rng(cfg.seed);
  LipschitzFit fit;
  const auto draw = [&](double factor) {
    FormTuple t = rng.tuple(spec.n(), spec.degrees());
    for (int i = 0; i < t.m(); ++i) {
      if (i < r) {
        t[i] = factor * t[i];
      } else {
        for (int c = 0; c < t[i].dim(); ++c)
          t[i].coeffs()(c) = std::clamp(t[i].coeffs()(c) * boxBound, -boxBound, boxBound);
      }
    }
    return t;
  };
  for (int s = 0; s < cfg.samples; ++s) {
    const double factor = (rng.uniform01() < cfg.rescaleShare) ? cfg.rescaleFactor : 1.0;
    const FormTuple xi = draw(factor);
    const FormTuple zeta = draw(factor);
    const double lhs = std::abs(spec(xi) - spec(zeta));
    double rhs = 0.0;
    for (int i = 0; i < spec.m(); ++i) {
      double bracket = 1.0;
      for (int j = 0; j < r; ++j) {
        const double e = (i < r) ? p[j] * (p[i] - 1.0) / p[i] : p[j];
        bracket += std::pow(xi[j].norm(), e) + std::pow(zeta[j].norm(), e);
      }
      rhs += bracket * (xi[i] - zeta[i]).norm();
    }
    if (rhs > 0.0) {
      const double ratio = lhs / rhs;
      if (ratio > fit.beta) fit.beta = ratio;
      if (s < cfg.samples / 2 && ratio > fit.betaHalf) fit.betaHalf = ratio;
    }
  }
  fit.stabilityRatio = (fit.betaHalf > 0.0) ? fit.beta / fit.betaHalf : 1.0;
  fit.report.samplesUsed = cfg.samples;
  fit.report.tolerance = 0.25;
  fit.report.worstViolation = std::abs(fit.stabilityRatio - 1.0);
  fit.report.passes = std::isfinite(fit.beta) && fit.stabilityRatio >= 0.8 &&
                      fit.stabilityRatio <= 1.25;
  fit.report.witness = "fitted constant " + std::to_string(fit.beta);
  return fit;
}

}  // namespace formlab
