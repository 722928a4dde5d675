#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "formlab/combinat.hpp"
#include "formlab/error.hpp"

namespace formlab {

/// A constant alternating k-form on R^n. Coefficients are stored densely over
/// the increasing-tuple basis of Lambda^k(R^n); a missing tuple is a zero
/// coefficient. Immutable in spirit: operations return new values.
template <typename Scalar>
class ExteriorFormT {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  ExteriorFormT() : n_(0), k_(0), coeffs_(Coeffs::Zero(1)) {}

  ExteriorFormT(int n, int k)
      : n_(n), k_(k), coeffs_(Coeffs::Zero(static_cast<int>(maskTable(n, k).masks.size()))) {
    require(n >= 1 && n <= kMaxAmbientDim, ErrorCode::DimensionMismatch,
            "ambient dimension must be in [1, 8]");
  }

  ExteriorFormT(int n, int k, Coeffs coeffs) : ExteriorFormT(n, k) {
    require(coeffs.size() == coeffs_.size(), ErrorCode::DimensionMismatch,
            "coefficient vector has wrong length");
    coeffs_ = std::move(coeffs);
  }

  static ExteriorFormT scalar(int n, Scalar value) {
    ExteriorFormT f(n, 0);
    f.coeffs_(0) = value;
    return f;
  }

  /// Basis covector e^{i1} ^ ... ^ e^{ik} for a 1-based increasing tuple.
  static ExteriorFormT basis(int n, const std::vector<int>& tuple) {
    ExteriorFormT f(n, static_cast<int>(tuple.size()));
    f.setCoeff(tupleToMask(tuple, n), Scalar(1));
    return f;
  }

  int n() const { return n_; }
  int k() const { return k_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  Scalar coeff(Mask m) const {
    const int r = maskTable(n_, k_).rank[m];
    require(r >= 0, ErrorCode::InvalidArgument, "mask has wrong degree");
    return coeffs_(r);
  }
  void setCoeff(Mask m, Scalar v) {
    const int r = maskTable(n_, k_).rank[m];
    require(r >= 0, ErrorCode::InvalidArgument, "mask has wrong degree");
    coeffs_(r) = v;
  }

  Scalar squaredNorm() const { return coeffs_.squaredNorm(); }
  Scalar norm() const { return std::sqrt(squaredNorm()); }
  bool isZero(Scalar tol = Scalar(0)) const {
    return coeffs_.template lpNorm<Eigen::Infinity>() <= tol;
  }

  ExteriorFormT operator-() const { return ExteriorFormT(n_, k_, -coeffs_); }

  friend ExteriorFormT operator*(Scalar s, const ExteriorFormT& f) {
    return ExteriorFormT(f.n_, f.k_, (s * f.coeffs_).eval());
  }
  friend ExteriorFormT operator*(const ExteriorFormT& f, Scalar s) { return s * f; }

  friend ExteriorFormT operator+(const ExteriorFormT& a, const ExteriorFormT& b) {
    requireSameSpace(a, b);
    return ExteriorFormT(a.n_, a.k_, (a.coeffs_ + b.coeffs_).eval());
  }
  friend ExteriorFormT operator-(const ExteriorFormT& a, const ExteriorFormT& b) {
    requireSameSpace(a, b);
    return ExteriorFormT(a.n_, a.k_, (a.coeffs_ - b.coeffs_).eval());
  }

  static void requireSameSpace(const ExteriorFormT& a, const ExteriorFormT& b) {
    require(a.n_ == b.n_, ErrorCode::DimensionMismatch, "ambient dimensions differ");
    require(a.k_ == b.k_, ErrorCode::DegreeMismatch, "degrees differ");
  }

 private:
  int n_;
  int k_;
  Coeffs coeffs_;
};

using ExteriorForm = ExteriorFormT<double>;

/// Exterior product. Requires a.k + b.k <= n; the overflow case is an error
/// so that enumeration bugs upstream cannot hide behind silent zeros.
template <typename Scalar>
ExteriorFormT<Scalar> wedge(const ExteriorFormT<Scalar>& a, const ExteriorFormT<Scalar>& b) {
  require(a.n() == b.n(), ErrorCode::DimensionMismatch, "wedge: ambient dimensions differ");
  const int n = a.n();
  require(a.k() + b.k() <= n, ErrorCode::DegreeOverflow, "wedge: degree sum exceeds n");
  ExteriorFormT<Scalar> out(n, a.k() + b.k());
  const auto& ta = maskTable(n, a.k()).masks;
  const auto& tb = maskTable(n, b.k()).masks;
  const auto& rank = maskTable(n, a.k() + b.k()).rank;
  for (int ia = 0; ia < static_cast<int>(ta.size()); ++ia) {
    const Scalar ca = a.coeffs()(ia);
    if (ca == Scalar(0)) continue;
    for (int ib = 0; ib < static_cast<int>(tb.size()); ++ib) {
      const Scalar cb = b.coeffs()(ib);
      if (cb == Scalar(0)) continue;
      if (ta[ia] & tb[ib]) continue;
      const Mask m = ta[ia] | tb[ib];
      out.coeffs()(rank[m]) += Scalar(mergeSign(ta[ia], tb[ib])) * ca * cb;
    }
  }
  return out;
}

/// Euclidean Hodge star: degree k -> n - k, *e^I = sign(I, I^c) e^{I^c}.
template <typename Scalar>
ExteriorFormT<Scalar> hodgeStar(const ExteriorFormT<Scalar>& a) {
  const int n = a.n();
  ExteriorFormT<Scalar> out(n, n - a.k());
  const Mask full = (Mask(1) << n) - 1;
  const auto& ta = maskTable(n, a.k()).masks;
  const auto& rank = maskTable(n, n - a.k()).rank;
  for (int ia = 0; ia < static_cast<int>(ta.size()); ++ia) {
    const Mask m = ta[ia];
    const Mask mc = full & ~m;
    out.coeffs()(rank[mc]) += Scalar(mergeSign(m, mc)) * a.coeffs()(ia);
  }
  return out;
}

/// Scalar product of equal-degree forms over the orthonormal tuple basis.
template <typename Scalar>
Scalar innerProduct(const ExteriorFormT<Scalar>& a, const ExteriorFormT<Scalar>& b) {
  ExteriorFormT<Scalar>::requireSameSpace(a, b);
  return a.coeffs().dot(b.coeffs());
}

/// Interior product a _| b, the adjoint of wedging with a:
/// <a ^ c, d> = <c, a _| d> for all c of degree b.k - a.k.
template <typename Scalar>
ExteriorFormT<Scalar> interiorProduct(const ExteriorFormT<Scalar>& a,
                                      const ExteriorFormT<Scalar>& b) {
  require(a.n() == b.n(), ErrorCode::DimensionMismatch,
          "interior product: ambient dimensions differ");
  require(a.k() <= b.k(), ErrorCode::DegreeUnderflow,
          "interior product: first degree exceeds second");
  const int n = a.n();
  ExteriorFormT<Scalar> out(n, b.k() - a.k());
  const auto& ta = maskTable(n, a.k()).masks;
  const auto& tb = maskTable(n, b.k()).masks;
  const auto& rank = maskTable(n, b.k() - a.k()).rank;
  for (int ia = 0; ia < static_cast<int>(ta.size()); ++ia) {
    const Scalar ca = a.coeffs()(ia);
    if (ca == Scalar(0)) continue;
    for (int ib = 0; ib < static_cast<int>(tb.size()); ++ib) {
      const Scalar cb = b.coeffs()(ib);
      if (cb == Scalar(0)) continue;
      if ((ta[ia] & tb[ib]) != ta[ia]) continue;
      const Mask rest = tb[ib] & ~ta[ia];
      out.coeffs()(rank[rest]) += Scalar(mergeSign(ta[ia], rest)) * ca * cb;
    }
  }
  return out;
}

template <typename Scalar>
ExteriorFormT<Scalar> volumeForm(int n) {
  ExteriorFormT<Scalar> v(n, n);
  v.coeffs()(0) = Scalar(1);
  return v;
}

/// An m-tuple of constant forms with a shared ambient dimension; the argument
/// type of every integrand.
template <typename Scalar>
struct FormTupleT {
  std::vector<ExteriorFormT<Scalar>> forms;

  FormTupleT() = default;
  explicit FormTupleT(std::vector<ExteriorFormT<Scalar>> fs) : forms(std::move(fs)) {
    for (std::size_t i = 1; i < forms.size(); ++i) {
      require(forms[i].n() == forms[0].n(), ErrorCode::DimensionMismatch,
              "tuple factors have differing ambient dimensions");
    }
  }

  static FormTupleT zero(int n, const std::vector<int>& degrees) {
    std::vector<ExteriorFormT<Scalar>> fs;
    fs.reserve(degrees.size());
    for (int k : degrees) fs.emplace_back(n, k);
    return FormTupleT(std::move(fs));
  }

  int m() const { return static_cast<int>(forms.size()); }
  int n() const { return forms.empty() ? 0 : forms[0].n(); }
  std::vector<int> degrees() const {
    std::vector<int> ks;
    ks.reserve(forms.size());
    for (const auto& f : forms) ks.push_back(f.k());
    return ks;
  }

  Scalar squaredNorm() const {
    Scalar s(0);
    for (const auto& f : forms) s += f.squaredNorm();
    return s;
  }
  Scalar norm() const { return std::sqrt(squaredNorm()); }

  const ExteriorFormT<Scalar>& operator[](int i) const { return forms[i]; }
  ExteriorFormT<Scalar>& operator[](int i) { return forms[i]; }
};

using FormTuple = FormTupleT<double>;

// ---------------------------------------------------------------------------
// Textual form literals, e.g. "2*e[1,3] - 0.5*e[2,4]" or "3.5" for a 0-form.

inline std::string formToString(const ExteriorForm& f) {
  std::ostringstream os;
  const auto& masks = maskTable(f.n(), f.k()).masks;
  bool first = true;
  for (int i = 0; i < f.dim(); ++i) {
    const double c = f.coeffs()(i);
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    if (f.k() > 0) {
      os << "*e[";
      const auto tuple = maskToTuple(masks[i]);
      for (std::size_t j = 0; j < tuple.size(); ++j) os << (j ? "," : "") << tuple[j];
      os << "]";
    }
  }
  if (first) os << 0.0;
  return os.str();
}

/// Parses a signed sum of terms `c`, `c*e[i,j,...]` or `e[i,...]`. Degree and
/// ambient dimension may be declared (-1 infers them from the literal).
inline ExteriorForm parseForm(const std::string& text, int n = -1, int k = -1) {
  struct Term {
    double coeff;
    std::vector<int> tuple;
  };
  std::vector<Term> terms;
  std::size_t pos = 0;
  const auto skipWs = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skipWs();
  require(pos < text.size(), ErrorCode::ParseError, "empty form literal");
  while (pos < text.size()) {
    skipWs();
    double sign = 1.0;
    while (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -sign;
      ++pos;
      skipWs();
    }
    double coeff = 1.0;
    bool sawCoeff = false;
    if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
      std::size_t used = 0;
      coeff = std::stod(text.substr(pos), &used);
      pos += used;
      sawCoeff = true;
      skipWs();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skipWs();
      }
    }
    Term term;
    term.coeff = sign * coeff;
    if (pos < text.size() && text[pos] == 'e') {
      ++pos;
      skipWs();
      require(pos < text.size() && text[pos] == '[', ErrorCode::ParseError,
              "expected '[' after 'e' in form literal");
      ++pos;
      while (true) {
        skipWs();
        require(pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])),
                ErrorCode::ParseError, "expected axis index in form literal");
        std::size_t used = 0;
        term.tuple.push_back(std::stoi(text.substr(pos), &used));
        pos += used;
        skipWs();
        require(pos < text.size(), ErrorCode::ParseError, "unterminated index list");
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        require(text[pos] == ']', ErrorCode::ParseError, "expected ',' or ']' in index list");
        ++pos;
        break;
      }
    } else {
      require(sawCoeff, ErrorCode::ParseError, "expected coefficient or basis term");
    }
    terms.push_back(std::move(term));
    skipWs();
  }
  int inferredK = k;
  int inferredN = n;
  for (const auto& t : terms) {
    const int tk = static_cast<int>(t.tuple.size());
    if (inferredK < 0) inferredK = tk;
    require(tk == inferredK, ErrorCode::ParseError, "mixed degrees in form literal");
    for (int a : t.tuple) inferredN = std::max(inferredN, a);
  }
  if (inferredK < 0) inferredK = 0;
  if (inferredN <= 0) inferredN = std::max(1, inferredK);
  ExteriorForm out(inferredN, inferredK);
  for (const auto& t : terms) {
    const Mask m = tupleToMask(t.tuple, inferredN);
    out.setCoeff(m, out.coeff(m) + t.coeff);
  }
  return out;
}

}  // namespace formlab
