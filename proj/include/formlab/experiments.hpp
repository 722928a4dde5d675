#pragma once

#include "formlab/convexity.hpp"
#include "formlab/sequences.hpp"
#include "formlab/weakwedge.hpp"

namespace formlab {

/// Per-frequency pairing values with a Richardson limit on the two finest
/// members; the verdict compares the extrapolated value with the target at a
/// relative tolerance.
struct ConvergenceReport {
  std::vector<int> nus;
  std::vector<double> values;
  double target = 0.0;
  double extrapolated = 0.0;
  double gap = 0.0;
  double tolerance = 0.1;
  bool converges = false;
};

namespace detail {

inline void finishReport(ConvergenceReport& rep) {
  require(rep.values.size() >= 2, ErrorCode::InvalidArgument,
          "convergence report needs at least two frequencies");
  const double last = rep.values.back();
  const double prev = rep.values[rep.values.size() - 2];
  rep.extrapolated = 2.0 * last - prev;
  rep.gap = std::abs(rep.extrapolated - rep.target);
  const double firstGap = std::abs(rep.values.front() - rep.target);
  const double scale = std::max({std::abs(rep.target), firstGap, 1e-12});
  rep.converges = rep.gap <= rep.tolerance * scale;
}

}  // namespace detail

/// Weighted average of the integrand over one member of the family.
inline double weightedIntegrandAverage(const IntegrandSpec& spec, const CochainTuple& derivatives,
                                       const std::function<double(const Eigen::VectorXd&)>& weight) {
  const auto& g = *derivatives.grid();
  const double hn = std::pow(g.h(), g.n());
  double acc = 0.0;
  for (std::int64_t c = 0; c < g.cellCount(g.n()); ++c)
    acc += weight(g.cellCenter(c)) * spec(reconstructTupleAtCenter(derivatives, c)) * hn;
  return acc;
}

/// Tracks the pairing nu -> integral of weight * f(d omega_nu) against the
/// value at the weak limit. Affine combinations of wedge powers converge;
/// strictly convex norms on oscillating input stall at a positive gap.
inline ConvergenceReport weakContinuityExperiment(
    const SequenceRecipe& recipe, const IntegrandSpec& spec,
    const std::function<double(const Eigen::VectorXd&)>& weight, const std::vector<int>& nus,
    double tolerance = 0.1) {
  ConvergenceReport rep;
  rep.tolerance = tolerance;
  rep.nus = nus;
  const auto limit = generateLimit(recipe);
  rep.target = weightedIntegrandAverage(spec, limit.derivatives, weight);
  for (int nu : nus) {
    const auto member = generate(recipe, nu);
    rep.values.push_back(weightedIntegrandAverage(spec, member.derivatives, weight));
  }
  detail::finishReport(rep);
  return rep;
}

/// Drop of the functional (1/p) |d w|_p^p - (1/p) |w|_p^p along an exact
/// oscillating family: the measured limit sits strictly below the value at
/// the weak limit, with the shortfall delta.
struct SemicontinuityReport {
  std::vector<int> nus;
  std::vector<double> values;   // I(omega_nu)
  double limitValue = 0.0;      // I at the weak limit
  double delta = 0.0;           // limitValue - lim I(omega_nu)
  double amplitude = 0.0;
};

inline SemicontinuityReport semicontinuityCounterexample(double p, const SequenceRecipe& recipe,
                                                         const std::vector<int>& nus) {
  require(recipe.kind == SequenceRecipe::Kind::ClosedNonconvergent, ErrorCode::InvalidArgument,
          "the counterexample runs on closed-nonconvergent families");
  // the functional argument is the exact form d theta of degree k - 1; the
  // construction needs k >= 2, i.e. factor degree >= 1 in the recipe
  require(recipe.degrees.size() == 1 && recipe.degrees[0] >= 1, ErrorCode::BadDegree,
          "no weakly-but-not-strongly convergent exact family exists at k = 1");
  const auto functional = [p](const CochainTuple& derivatives) {
    const Cochain& w = derivatives[0];
    double value = -std::pow(lpNorm(w, p), p) / p;
    if (w.degree < w.grid->n()) value += std::pow(lpNorm(coboundary(w), p), p) / p;
    return value;
  };
  SemicontinuityReport rep;
  rep.nus = nus;
  rep.amplitude = recipe.amplitude;
  rep.limitValue = functional(generateLimit(recipe).derivatives);
  for (int nu : nus) rep.values.push_back(functional(generate(recipe, nu).derivatives));
  const double last = rep.values.back();
  const double prev = rep.values[rep.values.size() - 2];
  rep.delta = rep.limitValue - (2.0 * last - prev);
  return rep;
}

/// Boundedness of |d omega_nu^alpha|_theta across the family, the
/// integrability that weak convergence of the powers rides on.
inline std::vector<double> wedgePowerThetaNorms(const SequenceRecipe& recipe,
                                                const MultiIndex& alpha, double theta,
                                                const std::vector<int>& nus) {
  std::vector<double> norms;
  for (int nu : nus) {
    const auto member = generate(recipe, nu);
    const Cochain chain = detail::slottedChain(member.derivatives, alpha, -1, -1, nullptr);
    norms.push_back(lpNorm(chain, theta));
  }
  return norms;
}

/// Calibrate-then-freeze harness for the telescopic bound: the constant is
/// the maximal training ratio with a fixed safety margin.
struct TelescopicCalibration {
  double constant = 0.0;
  double worstTraining = 0.0;
};

template <typename PairSource>
TelescopicCalibration calibrateTelescopic(PairSource&& source, int trainingPairs,
                                          double margin = 1.25) {
  TelescopicCalibration cal;
  for (int i = 0; i < trainingPairs; ++i) {
    const TelescopicSample s = source(i);
    cal.worstTraining = std::max(cal.worstTraining, s.ratio());
  }
  cal.constant = margin * cal.worstTraining;
  return cal;
}

}  // namespace formlab
