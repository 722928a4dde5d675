#pragma once

#include "formlab/cochain.hpp"
#include "formlab/multiindex.hpp"

namespace formlab {

/// A family of discrete form tuples indexed by a frequency. Laminate
/// oscillations converge weakly but not strongly in the derivative;
/// closed-nonconvergent families are exact with a non-vanishing oscillation;
/// boundary layers concentrate the base near the boundary.
struct SequenceRecipe {
  enum class Kind { LaminateOscillation, ClosedNonconvergent, BoundaryLayer };

  Kind kind = Kind::LaminateOscillation;
  GridPtr grid;
  std::vector<int> degrees;  // factor degrees k_i of the generated derivatives

  FormTuple base;  // the weak limit of the derivatives (constant forms)

  // laminate oscillation
  Eigen::VectorXd direction;            // a, integer-valued for periodicity
  std::vector<ExteriorForm> profiles;   // beta_i of degree k_i - 1
  double amplitude = 1.0;
  bool zeroTrace = false;  // envelope the oscillating potential by a bump

  // closed-nonconvergent (single factor)
  int oscillationAxis = 1;            // 1-based axis of the phase
  ExteriorForm closedPotentialForm;   // gamma of degree k - 1; the
                                      // oscillating derivative is a ^ gamma

  // boundary layer
  double layerWidthBase = 0.5;  // eps_nu = base / nu
};

struct GeneratedSequence {
  CochainTuple potentials;   // omega_i of degree k_i - 1
  CochainTuple derivatives;  // the discrete coboundaries
};

namespace detail {

/// A potential with constant derivative: sum_I c_I x_{i1} e^{I minus i1}.
inline ExteriorForm linearPotentialAt(const ExteriorForm& constant, const Eigen::VectorXd& x) {
  const int n = constant.n();
  ExteriorForm out(n, constant.k() - 1);
  const auto& masks = maskTable(n, constant.k()).masks;
  for (int i = 0; i < constant.dim(); ++i) {
    const double c = constant.coeffs()(i);
    if (c == 0.0) continue;
    const Mask m = masks[i];
    const int first = __builtin_ctz(m);
    const Mask rest = m & ~(Mask(1) << first);
    out.setCoeff(rest, out.coeff(rest) + c * x(first));
  }
  return out;
}

inline double bump(const Eigen::VectorXd& x) {
  double b = 1.0;
  for (Eigen::Index a = 0; a < x.size(); ++a) b *= std::sin(M_PI * x(a)) * std::sin(M_PI * x(a));
  return b;
}

inline void nyquistGuard(const SequenceRecipe& recipe, int nu) {
  double maxFreq = nu;
  if (recipe.kind == SequenceRecipe::Kind::LaminateOscillation)
    maxFreq = nu * recipe.direction.cwiseAbs().maxCoeff();
  require(maxFreq < recipe.grid->res() / 4.0, ErrorCode::FrequencyVsResolution,
          "oscillation frequency too close to the grid resolution");
}

}  // namespace detail

/// The constant-limit member of the family (the weak limit of generate).
inline GeneratedSequence generateLimit(const SequenceRecipe& recipe) {
  GeneratedSequence out;
  std::vector<Cochain> pots;
  for (std::size_t i = 0; i < recipe.degrees.size(); ++i) {
    const ExteriorForm base = recipe.base.forms.at(i);
    const FormField field = [base](const Eigen::VectorXd& x) {
      return detail::linearPotentialAt(base, x);
    };
    pots.push_back(sampleForm(recipe.grid, recipe.degrees[i] - 1, field));
  }
  out.potentials = CochainTuple(std::move(pots));
  out.derivatives = coboundary(out.potentials);
  return out;
}

inline GeneratedSequence generate(const SequenceRecipe& recipe, int nu) {
  require(nu >= 1, ErrorCode::InvalidArgument, "frequency index must be positive");
  detail::nyquistGuard(recipe, nu);
  const int n = recipe.grid->n();
  GeneratedSequence out;
  std::vector<Cochain> pots;

  switch (recipe.kind) {
    case SequenceRecipe::Kind::LaminateOscillation: {
      require(recipe.direction.size() == n, ErrorCode::InvalidArgument,
              "laminate direction has wrong dimension");
      ExteriorForm a(n, 1);
      a.coeffs() = recipe.direction;
      for (std::size_t i = 0; i < recipe.degrees.size(); ++i) {
        const ExteriorForm base = recipe.base.forms.at(i);
        const ExteriorForm beta = recipe.profiles.at(i);
        const double amp = recipe.amplitude;
        const bool zeroTrace = recipe.zeroTrace;
        const Eigen::VectorXd dir = recipe.direction;
        const FormField field = [=](const Eigen::VectorXd& x) {
          ExteriorForm value = detail::linearPotentialAt(base, x);
          const double phase = 2.0 * M_PI * nu * dir.dot(x);
          double envelope = -amp / (2.0 * M_PI * nu);
          if (zeroTrace) envelope *= detail::bump(x);
          return value + std::cos(phase) * envelope * beta;
        };
        pots.push_back(sampleForm(recipe.grid, recipe.degrees[i] - 1, field));
      }
      break;
    }
    case SequenceRecipe::Kind::ClosedNonconvergent: {
      require(recipe.degrees.size() == 1, ErrorCode::InvalidArgument,
              "closed-nonconvergent families have a single factor");
      require(recipe.degrees[0] >= 1, ErrorCode::BadDegree, "factor degree must be at least 1");
      const ExteriorForm base = recipe.base.forms.at(0);
      const ExteriorForm gamma = recipe.closedPotentialForm;
      const double amp = recipe.amplitude;
      const int axis = recipe.oscillationAxis - 1;
      const FormField field = [=](const Eigen::VectorXd& x) {
        ExteriorForm value = detail::linearPotentialAt(base, x);
        const double phase = 2.0 * M_PI * nu * x(axis);
        return value + (-amp / (2.0 * M_PI * nu)) * std::cos(phase) * gamma;
      };
      pots.push_back(sampleForm(recipe.grid, recipe.degrees[0] - 1, field));
      break;
    }
    case SequenceRecipe::Kind::BoundaryLayer: {
      const double eps = recipe.layerWidthBase / nu;
      for (std::size_t i = 0; i < recipe.degrees.size(); ++i) {
        const ExteriorForm base = recipe.base.forms.at(i);
        const FormField field = [=](const Eigen::VectorXd& x) {
          double dist = 1.0;
          for (int a = 0; a < static_cast<int>(x.size()); ++a)
            dist = std::min({dist, x(a), 1.0 - x(a)});
          const double t = std::clamp(dist / eps, 0.0, 1.0);
          const double ramp = t * t * (3.0 - 2.0 * t);
          return ExteriorForm(ramp * detail::linearPotentialAt(base, x));
        };
        pots.push_back(sampleForm(recipe.grid, recipe.degrees[i] - 1, field));
      }
      break;
    }
  }
  out.potentials = CochainTuple(std::move(pots));
  out.derivatives = coboundary(out.potentials);
  return out;
}

}  // namespace formlab
