#pragma once

#include <cstdint>
#include <variant>

#include <Eigen/Dense>

#include "skewdepth/univariate.hpp"

namespace skewdepth {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// ST_d(xi, Omega, gamma, nu). nu = +inf is the skew-normal law.
struct STParams {
  Vector xi;
  Matrix omega;  // dispersion, symmetric positive-definite
  Vector gamma;  // skewness
  double nu = 1.0;

  int dimension() const { return static_cast<int>(xi.size()); }
  /// Throws DomainError naming the offending field.
  void validate() const;

  /// CST_d(gamma, nu): location 0, identity dispersion, skewness gamma e_1.
  static STParams canonical(int d, double gamma, double nu);
};

/// GH_d(mu, Sigma, kappa, lambda, chi, psi).
struct GHParams {
  Vector mu;
  Matrix sigma;  // dispersion, symmetric positive-definite
  Vector kappa;  // skewness
  double lambda = -0.5;
  double chi = 1.0;
  double psi = 1.0;

  int dimension() const { return static_cast<int>(mu.size()); }
  void validate() const;
  Gig mixing() const { return Gig(lambda, chi, psi); }

  /// CGH_d(kappa, lambda, chi, psi).
  static GHParams canonical(int d, double kappa, double lambda, double chi, double psi);
  /// NIG (lambda = -1/2) normalized to chi = psi by the scale invariance
  /// GH(mu, a S, a k, l, chi/a, a psi) = GH(mu, S, k, l, chi, psi).
  static GHParams nig(Vector mu, Matrix sigma, Vector kappa, double chi, double psi);
  /// GH skew-t: lambda = -nu/2, chi = nu, psi = 0.
  static GHParams skew_t(Vector mu, Matrix sigma, Vector kappa, double nu);
};

using MultivariateLaw = std::variant<STParams, GHParams>;

/// Affine map x* = A x + b carrying a law to canonical form, plus the
/// canonical skewness scalar.
struct CanonicalReduction {
  Matrix A;
  Vector b;
  double canonical_skew = 0.0;
  Matrix A_inv;

  Vector to_canonical(const Vector& x) const { return A * x + b; }
  Vector from_canonical(const Vector& x_star) const { return A_inv * (x_star - b); }
};

double st_log_pdf(const STParams& p, const Vector& x);
double st_pdf(const STParams& p, const Vector& x);

/// GH density. Uses the Bessel closed form when chi > 0 and psi > 0 and
/// quadrature over the mixing variable otherwise.
double gh_log_pdf(const GHParams& p, const Vector& x);
double gh_pdf(const GHParams& p, const Vector& x);
/// Density by quadrature over the mixing variable, for every admissible parameter set.
double gh_pdf_mixture(const GHParams& p, const Vector& x);

/// Law of A X + b for a k x d matrix of rank k <= d.
STParams st_linear_form(const STParams& p, const Matrix& A, const Vector& b);
GHParams gh_linear_form(const GHParams& p, const Matrix& A, const Vector& b);

/// Canonical reductions with B the lower Cholesky factor of the dispersion and
/// P the Householder reflection taking e_1 to the required first column.
CanonicalReduction canonicalize_st(const STParams& p);
CanonicalReduction canonicalize_gh(const GHParams& p);

/// Skewness of u'X for X ~ CST_d(gamma, nu) and unit u with first element u1.
double projected_st_skew(double gamma, double u1);

/// u'X for canonical X and unit u. Throws DomainError if |u| differs from 1
/// by more than 1e-12 or the parameters are not canonical.
UnivariateLaw project_st(const STParams& canonical, const Vector& u);
UnivariateLaw project_gh(const GHParams& canonical, const Vector& u);

/// Law of u'X for an arbitrary nonzero u, through the linear-form rules.
UnivariateLaw linear_projection(const MultivariateLaw& law, const Vector& u);

/// Draws (one per row) from the normal mean-variance mixture with W ~ GIG.
Matrix sample_gh(const GHParams& p, std::size_t n, std::uint64_t seed);
/// Draws via the skew-normal representation divided by sqrt(chi2_nu / nu).
Matrix sample_st(const STParams& p, std::size_t n, std::uint64_t seed);
/// GIG draws by ratio-of-uniforms with mode shift (gamma / inverse gamma on the boundaries).
std::vector<double> sample_gig(const Gig& gig, std::size_t n, std::uint64_t seed);

Matrix sample(const MultivariateLaw& law, std::size_t n, std::uint64_t seed);

/// A law together with its canonical reduction. Depth computations work in
/// the canonical frame, where u'X* depends on u only through u_1.
class CanonicalForm {
 public:
  enum class Kind { SkewT, GeneralizedHyperbolic };

  CanonicalForm(const STParams& p);  // NOLINT(google-explicit-constructor)
  CanonicalForm(const GHParams& p);  // NOLINT(google-explicit-constructor)
  CanonicalForm(const MultivariateLaw& law);  // NOLINT(google-explicit-constructor)

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double skew() const { return reduction_.canonical_skew; }
  const CanonicalReduction& reduction() const { return reduction_; }
  const MultivariateLaw& law() const { return law_; }

  /// Shape parameters: nu for ST; (lambda, chi, psi) for GH.
  double nu() const { return nu_; }
  const Gig& mixing() const { return *gig_; }

  /// Law of u'X* for a unit vector whose first element is u1.
  UnivariateLaw projection(double u1) const;

  /// Canonical parameters as a full parameter bundle.
  MultivariateLaw canonical_law() const;

  /// Density of X* at a point given in canonical coordinates.
  double canonical_log_density(const Vector& x_star) const;

  bool has_finite_mean() const;
  /// E(X*); throws ContractError for infinite means.
  Vector canonical_mean() const;

 private:
  void init_st(const STParams& p);
  void init_gh(const GHParams& p);

  MultivariateLaw law_;
  Kind kind_ = Kind::SkewT;
  int dimension_ = 0;
  CanonicalReduction reduction_;
  double nu_ = 0.0;
  std::optional<Gig> gig_;
  double log_t_norm_ = 0.0;  // for ST canonical density
};

}  // namespace skewdepth
