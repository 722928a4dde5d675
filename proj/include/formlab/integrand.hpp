#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "formlab/multiindex.hpp"

namespace formlab {

/// Declared growth bounds, carried as metadata for coercivity gating and
/// test bookkeeping; never inferred from samples.
struct GrowthInfo {
  double alpha = 1.0;                    // leading constant
  std::vector<double> alphaLower;       // per-factor lower coefficients
  std::vector<double> exponents;        // p_i
  bool coercive = false;
};

/// Convex function on R^tau for the composite integrand: either
/// quadratic-plus-linear with a positive semidefinite matrix, or a maximum
/// of finitely many affine functions.
class ConvexFunction {
 public:
  enum class Kind { Quadratic, MaxAffine };

  static ConvexFunction quadratic(Eigen::MatrixXd q, Eigen::VectorXd b, double c) {
    require(q.rows() == q.cols() && q.rows() == b.size(), ErrorCode::InvalidArgument,
            "quadratic data sizes disagree");
    Eigen::MatrixXd sym = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
    require(es.eigenvalues().minCoeff() >= -1e-10 * scale, ErrorCode::InvalidArgument,
            "quadratic form is not positive semidefinite");
    ConvexFunction f;
    f.kind_ = Kind::Quadratic;
    f.q_ = std::move(sym);
    f.b_ = std::move(b);
    f.c_ = c;
    return f;
  }

  static ConvexFunction maxOfAffine(Eigen::MatrixXd rows, Eigen::VectorXd offsets) {
    require(rows.rows() == offsets.size() && rows.rows() >= 1, ErrorCode::InvalidArgument,
            "max-of-affine data sizes disagree");
    ConvexFunction f;
    f.kind_ = Kind::MaxAffine;
    f.q_ = std::move(rows);
    f.b_ = std::move(offsets);
    return f;
  }

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return kind_ == Kind::Quadratic ? q_.rows() : q_.cols(); }
  const Eigen::MatrixXd& matrix() const { return q_; }
  const Eigen::VectorXd& vector() const { return b_; }
  double constant() const { return c_; }

  double operator()(const Eigen::VectorXd& y) const {
    if (kind_ == Kind::Quadratic) return 0.5 * y.dot(q_ * y) + b_.dot(y) + c_;
    return (q_ * y + b_).maxCoeff();
  }

  /// Gradient for the quadratic variant, a subgradient (any active affine
  /// piece) for the max-of-affine variant.
  Eigen::VectorXd subgradient(const Eigen::VectorXd& y) const {
    if (kind_ == Kind::Quadratic) return q_ * y + b_;
    Eigen::Index which = 0;
    (q_ * y + b_).maxCoeff(&which);
    return q_.row(which).transpose();
  }

 private:
  Kind kind_ = Kind::Quadratic;
  Eigen::MatrixXd q_;  // quadratic matrix, or affine rows
  Eigen::VectorXd b_;
  double c_ = 0.0;
};

/// Symbolic integrand f on tuples of constant forms. Four variants:
/// a linear combination of wedge powers, a convex composite over the
/// wedge-power vector, a sum of factor-norm powers, and an opaque callable.
class IntegrandSpec {
 public:
  enum class Kind { QuasiaffineCombo, PolyconvexComposite, NormPower, Sampled };

  static IntegrandSpec quasiaffine(int n, std::vector<int> degrees, double c0,
                                   std::vector<std::pair<MultiIndex, ExteriorForm>> terms) {
    IntegrandSpec s(Kind::QuasiaffineCombo, n, std::move(degrees));
    s.c0_ = c0;
    for (auto& [mi, form] : terms) {
      require(isNontrivial(s.n_, s.degrees_, mi), ErrorCode::InvalidArgument,
              "quasiaffine term multiindex is trivial");
      require(form.n() == s.n_ && form.k() == mi.weight(s.degrees_), ErrorCode::DegreeMismatch,
              "quasiaffine coefficient form has wrong degree");
    }
    s.terms_ = std::move(terms);
    return s;
  }

  static IntegrandSpec polyconvex(int n, std::vector<int> degrees, ConvexFunction f) {
    IntegrandSpec s(Kind::PolyconvexComposite, n, std::move(degrees));
    require(f.dim() == wedgeComponentCount(s.n_, s.degrees_), ErrorCode::InvalidArgument,
            "composite dimension does not match the wedge-power count");
    s.composite_ = std::move(f);
    return s;
  }

  static IntegrandSpec normPower(int n, std::vector<int> degrees, std::vector<double> weights,
                                 std::vector<double> powers) {
    IntegrandSpec s(Kind::NormPower, n, std::move(degrees));
    require(weights.size() == s.degrees_.size() && powers.size() == s.degrees_.size(),
            ErrorCode::InvalidArgument, "norm-power data sizes disagree");
    for (double p : powers)
      require(p >= 1.0, ErrorCode::BadExponent, "norm-power exponent below 1");
    s.weights_ = std::move(weights);
    s.powers_ = std::move(powers);
    return s;
  }

  static IntegrandSpec sampled(int n, std::vector<int> degrees,
                               std::function<double(const FormTuple&)> fn) {
    IntegrandSpec s(Kind::Sampled, n, std::move(degrees));
    s.fn_ = std::move(fn);
    return s;
  }

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int m() const { return static_cast<int>(degrees_.size()); }
  double constantTerm() const { return c0_; }
  const std::vector<std::pair<MultiIndex, ExteriorForm>>& terms() const { return terms_; }
  const ConvexFunction& composite() const { return *composite_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& powers() const { return powers_; }

  std::optional<GrowthInfo> growth;

  bool hasGradient() const { return kind_ != Kind::Sampled; }

  double operator()(const FormTuple& xi) const {
    require(xi.m() == m() && xi.n() == n_, ErrorCode::DegreeMismatch,
            "integrand argument has wrong shape");
    for (int i = 0; i < m(); ++i)
      require(xi[i].k() == degrees_[i], ErrorCode::DegreeMismatch,
              "integrand argument degree mismatch");
    switch (kind_) {
      case Kind::QuasiaffineCombo: {
        double acc = c0_;
        for (const auto& [mi, form] : terms_) acc += innerProduct(form, wedgePower(xi, mi));
        return acc;
      }
      case Kind::PolyconvexComposite:
        return (*composite_)(wedgePowerVector(xi).flatten());
      case Kind::NormPower: {
        double acc = 0.0;
        for (int i = 0; i < m(); ++i) acc += weights_[i] * std::pow(xi[i].norm(), powers_[i]);
        return acc;
      }
      case Kind::Sampled:
        return fn_(xi);
    }
    return 0.0;
  }

  /// Analytic gradient with respect to each factor. Norm powers need p >= 2
  /// away from the kink at zero; the composite uses its subgradient.
  FormTuple gradient(const FormTuple& xi) const {
    require(hasGradient(), ErrorCode::EvalError, "sampled integrands expose no gradient");
    FormTuple grad = FormTuple::zero(n_, degrees_);
    if (kind_ == Kind::NormPower) {
      for (int i = 0; i < m(); ++i) {
        const double nrm = xi[i].norm();
        if (nrm == 0.0) continue;
        grad[i] = (weights_[i] * powers_[i] * std::pow(nrm, powers_[i] - 2.0)) * xi[i];
      }
      return grad;
    }
    if (kind_ == Kind::QuasiaffineCombo) {
      for (const auto& [mi, form] : terms_) accumulatePowerGradient(xi, mi, form, 1.0, grad);
      return grad;
    }
    // composite: chain rule through the wedge-power vector
    const auto tv = wedgePowerVector(xi);
    const Eigen::VectorXd gy = composite_->subgradient(tv.flatten());
    Eigen::Index at = 0;
    for (const auto& [mi, form] : tv.entries) {
      ExteriorForm weight(n_, form.k());
      weight.coeffs() = gy.segment(at, form.dim());
      at += form.dim();
      accumulatePowerGradient(xi, mi, weight, 1.0, grad);
    }
    return grad;
  }

 private:
  IntegrandSpec(Kind kind, int n, std::vector<int> degrees)
      : kind_(kind), n_(n), degrees_(std::move(degrees)) {
    require(n_ >= 1 && n_ <= kMaxAmbientDim, ErrorCode::DimensionMismatch,
            "integrand ambient dimension out of range");
    for (int k : degrees_)
      require(k >= 1 && k <= n_, ErrorCode::BadDegree, "integrand factor degree out of range");
  }

  /// Adds scale * d/dxi <c, xi^alpha> to grad: the derivative in direction v
  /// of factor i is alpha_i <c, xi_1^{a_1} ^ ... ^ (v ^ xi_i^{a_i - 1}) ^ ...>.
  void accumulatePowerGradient(const FormTuple& xi, const MultiIndex& mi, const ExteriorForm& c,
                               double scale, FormTuple& grad) const {
    for (int i = 0; i < m(); ++i) {
      if (mi.alpha[i] == 0) continue;
      const auto& basisMasks = maskTable(n_, degrees_[i]).masks;
      for (std::size_t bi = 0; bi < basisMasks.size(); ++bi) {
        ExteriorForm acc = ExteriorForm::scalar(n_, 1.0);
        for (int j = 0; j < m(); ++j) {
          int reps = mi.alpha[j];
          if (j == i) {
            ExteriorForm unit(n_, degrees_[i]);
            unit.coeffs()(static_cast<int>(bi)) = 1.0;
            acc = wedge(acc, unit);
            reps -= 1;
          }
          for (int r = 0; r < reps; ++r) acc = wedge(acc, xi[j]);
        }
        grad[i].coeffs()(static_cast<int>(bi)) +=
            scale * mi.alpha[i] * innerProduct(c, acc);
      }
    }
  }

  Kind kind_;
  int n_;
  std::vector<int> degrees_;
  double c0_ = 0.0;
  std::vector<std::pair<MultiIndex, ExteriorForm>> terms_;
  std::optional<ConvexFunction> composite_;
  std::vector<double> weights_;
  std::vector<double> powers_;
  std::function<double(const FormTuple&)> fn_;
};

}  // namespace formlab
