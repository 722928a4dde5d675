#pragma once

#include <json.hpp>

#include "formlab/convexity.hpp"
#include "formlab/experiments.hpp"
#include "formlab/exponents.hpp"
#include "formlab/expression.hpp"
#include "formlab/hodge.hpp"
#include "formlab/minimize.hpp"

namespace formlab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// cochains: header plus the flat value array in canonical cell order

inline Json cochainToJson(const Cochain& w) {
  Json j;
  j["n"] = w.grid->n();
  j["k"] = w.degree;
  j["res"] = w.grid->res();
  j["values"] = std::vector<double>(w.values.data(), w.values.data() + w.values.size());
  return j;
}

inline Cochain cochainFromJson(const Json& j) {
  auto grid = makeGrid(j.at("n").get<int>(), j.at("res").get<int>());
  const auto vals = j.at("values").get<std::vector<double>>();
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
  return Cochain(grid, j.at("k").get<int>(), std::move(v));
}

inline GridPtr gridFromJson(const Json& j) {
  return makeGrid(j.at("n").get<int>(), j.at("res").get<int>());
}

// ---------------------------------------------------------------------------
// closed-form k-form fields: one scalar expression per increasing tuple

inline FormField formFieldFromJson(const Json& j, int n, int k) {
  struct Component {
    Mask mask;
    ScalarExpr expr;
  };
  auto comps = std::make_shared<std::vector<Component>>();
  for (const auto& item : j.at("components")) {
    const auto axes = item.at("axes").get<std::vector<int>>();
    require(static_cast<int>(axes.size()) == k, ErrorCode::ParseError,
            "component tuple length does not match the degree");
    comps->push_back({tupleToMask(axes, n), ScalarExpr::parse(item.at("expr").get<std::string>())});
  }
  return [n, k, comps](const Eigen::VectorXd& x) {
    ExteriorForm f(n, k);
    for (const auto& c : *comps) f.setCoeff(c.mask, f.coeff(c.mask) + c.expr(x));
    return f;
  };
}

/// Either an explicit cochain or a sampled closed-form field.
inline Cochain cochainOrFieldFromJson(const Json& j, const GridPtr& grid, int degree) {
  if (j.contains("values")) return cochainFromJson(j);
  const FormField field = formFieldFromJson(j, grid->n(), degree);
  return sampleForm(grid, degree, field);
}

// ---------------------------------------------------------------------------
// integrands

inline Json integrandToJson(const IntegrandSpec& spec) {
  Json j;
  j["n"] = spec.n();
  j["k"] = spec.degrees();
  switch (spec.kind()) {
    case IntegrandSpec::Kind::QuasiaffineCombo: {
      j["variant"] = "quasiaffine";
      j["c0"] = spec.constantTerm();
      Json terms = Json::array();
      for (const auto& [mi, form] : spec.terms()) {
        Json t;
        t["alpha"] = mi.alpha;
        t["form"] = formToString(form);
        terms.push_back(t);
      }
      j["terms"] = terms;
      break;
    }
    case IntegrandSpec::Kind::NormPower:
      j["variant"] = "normpower";
      j["weights"] = spec.weights();
      j["powers"] = spec.powers();
      break;
    case IntegrandSpec::Kind::PolyconvexComposite: {
      j["variant"] = "polyconvex";
      const auto& f = spec.composite();
      Json fj;
      fj["kind"] = (f.kind() == ConvexFunction::Kind::Quadratic) ? "quadratic" : "max-affine";
      std::vector<std::vector<double>> rows(f.matrix().rows(),
                                            std::vector<double>(f.matrix().cols()));
      for (Eigen::Index r = 0; r < f.matrix().rows(); ++r)
        for (Eigen::Index c = 0; c < f.matrix().cols(); ++c) rows[r][c] = f.matrix()(r, c);
      fj["matrix"] = rows;
      fj["vector"] = std::vector<double>(f.vector().data(), f.vector().data() + f.vector().size());
      if (f.kind() == ConvexFunction::Kind::Quadratic) fj["constant"] = f.constant();
      j["F"] = fj;
      break;
    }
    case IntegrandSpec::Kind::Sampled:
      j["variant"] = "sampled";
      break;
  }
  if (spec.growth) {
    j["growth"] = Json{{"coercive", spec.growth->coercive},
                       {"alpha", spec.growth->alpha},
                       {"alpha_lower", spec.growth->alphaLower},
                       {"exponents", spec.growth->exponents}};
  }
  return j;
}

inline IntegrandSpec integrandFromJson(const Json& j) {
  const int n = j.at("n").get<int>();
  const auto degrees = j.at("k").get<std::vector<int>>();
  const std::string variant = j.at("variant").get<std::string>();
  std::optional<IntegrandSpec> spec;
  if (variant == "quasiaffine") {
    std::vector<std::pair<MultiIndex, ExteriorForm>> terms;
    if (j.contains("terms")) {
      for (const auto& t : j.at("terms")) {
        MultiIndex mi{t.at("alpha").get<std::vector<int>>()};
        const ExteriorForm form =
            parseForm(t.at("form").get<std::string>(), n, mi.weight(degrees));
        terms.emplace_back(std::move(mi), form);
      }
    }
    spec = IntegrandSpec::quasiaffine(n, degrees, j.value("c0", 0.0), std::move(terms));
  } else if (variant == "normpower") {
    spec = IntegrandSpec::normPower(n, degrees, j.at("weights").get<std::vector<double>>(),
                                    j.at("powers").get<std::vector<double>>());
  } else if (variant == "polyconvex") {
    const auto& fj = j.at("F");
    const auto rows = fj.at("matrix").get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    const auto bv = fj.at("vector").get<std::vector<double>>();
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(bv.data(), bv.size());
    const std::string kind = fj.at("kind").get<std::string>();
    ConvexFunction f = (kind == "quadratic")
                           ? ConvexFunction::quadratic(m, b, fj.value("constant", 0.0))
                           : ConvexFunction::maxOfAffine(m, b);
    spec = IntegrandSpec::polyconvex(n, degrees, std::move(f));
  } else {
    fail(ErrorCode::ParseError, "unknown integrand variant '" + variant + "'");
  }
  if (j.contains("growth")) {
    GrowthInfo gi;
    const auto& gj = j.at("growth");
    gi.coercive = gj.value("coercive", false);
    gi.alpha = gj.value("alpha", 1.0);
    if (gj.contains("alpha_lower")) gi.alphaLower = gj.at("alpha_lower").get<std::vector<double>>();
    if (gj.contains("exponents")) gi.exponents = gj.at("exponents").get<std::vector<double>>();
    spec->growth = gi;
  }
  return *spec;
}

// ---------------------------------------------------------------------------
// reports

inline Json rationalToJson(const Rational& r) { return Json(r.str()); }

inline Json exponentReportToJson(const ExponentReport& rep) {
  Json j;
  if (rep.thetaInv) j["theta_inv"] = rationalToJson(*rep.thetaInv);
  if (rep.rhoInv) j["rho_inv"] = rationalToJson(*rep.rhoInv);
  if (!rep.mu.empty()) {
    Json mu = Json::array();
    for (const auto& m : rep.mu) mu.push_back(m ? rationalToJson(*m) : Json(nullptr));
    j["mu"] = mu;
  }
  j["flags"] = Json{{"sobolev_admissible", rep.sobolevAdmissible},
                    {"holder_admissible", rep.holderAdmissible},
                    {"associated_pair", rep.associatedPair},
                    {"compact_pair", rep.compactPair},
                    {"very_weak_admissible", rep.veryWeakAdmissible},
                    {"strict_theta", rep.strictTheta},
                    {"sub_unit_theta", rep.subUnitTheta},
                    {"remark_consistent", rep.remarkConsistent}};
  return j;
}

inline Json convexityReportToJson(const ConvexityReport& rep) {
  return Json{{"verdict", rep.passes ? "passes" : "fails"},
              {"worst_violation", rep.worstViolation},
              {"tolerance", rep.tolerance},
              {"samples_used", rep.samplesUsed},
              {"witness", rep.witness}};
}

inline Json convergenceReportToJson(const ConvergenceReport& rep) {
  return Json{{"nus", rep.nus},
              {"values", rep.values},
              {"target", rep.target},
              {"extrapolated", rep.extrapolated},
              {"gap", rep.gap},
              {"tolerance", rep.tolerance},
              {"verdict", rep.converges ? "converges" : "diverges"}};
}

inline Json minimizeReportToJson(const MinimizeReport& rep) {
  Json j;
  j["energy"] = rep.energy;
  j["iterations"] = rep.iterations;
  j["gradient_norm"] = rep.gradientNorm;
  j["gauge_residual"] = rep.gaugeResidual;
  j["boundary_residual"] = rep.boundaryResidual;
  Json mins = Json::array();
  for (const auto& part : rep.minimizer.parts) mins.push_back(cochainToJson(part));
  j["minimizer"] = mins;
  return j;
}

inline Json hodgeSplitToJson(const HodgeSplit& split) {
  Json j;
  j["exact"] = cochainToJson(split.exact);
  j["coexact"] = cochainToJson(split.coexact);
  j["harmonic"] = cochainToJson(split.harmonic);
  j["alpha"] = cochainToJson(split.alpha);
  j["beta"] = cochainToJson(split.beta);
  j["residual"] = split.relResidual;
  return j;
}

}  // namespace formlab
