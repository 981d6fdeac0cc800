#pragma once

#include <optional>
#include <string_view>

#include "skewdepth/gig.hpp"

namespace skewdepth {

enum class Family { Normal, StudentT, SN, ST, SC, GH, NIG, GHSkewT, GIG };

std::string_view family_name(Family family);

/// A one-dimensional law from the skew-t or generalized hyperbolic families.
///
/// Skew-t family (Normal, StudentT, SN, ST, SC): location xi, scale^2 omega^2,
/// skewness gamma, degrees of freedom nu (infinite for SN and Normal). The
/// density is 2/omega t(z; nu) T(gamma z sqrt((nu+1)/(nu+z^2)); nu+1) with
/// z = (x - xi)/omega.
///
/// GH family (GH, NIG, GHSkewT): X = mu + W kappa + sigma sqrt(W) Z with
/// W ~ GIG(lambda, chi, psi).
///
/// Laws are immutable values; the factories validate parameters and throw
/// DomainError on violations.
class UnivariateLaw {
 public:
  static UnivariateLaw normal(double mean = 0.0, double variance = 1.0);
  static UnivariateLaw student_t(double location, double scale2, double nu);
  static UnivariateLaw skew_normal(double xi, double omega2, double gamma);
  /// nu = +inf gives SN, nu = 1 gives SC, gamma = 0 gives the symmetric law.
  static UnivariateLaw skew_t(double xi, double omega2, double gamma, double nu);
  static UnivariateLaw skew_cauchy(double xi, double omega2, double gamma);

  static UnivariateLaw gh(double mu, double sigma2, double kappa, double lambda, double chi, double psi);
  /// NIG with the chi = psi convention.
  static UnivariateLaw nig(double mu, double sigma2, double kappa, double psi);
  /// NIG from arbitrary (chi, psi): rescaled to chi = psi, which leaves the law unchanged.
  static UnivariateLaw nig(double mu, double sigma2, double kappa, double chi, double psi);
  /// GH skew-t: lambda = -nu/2, chi = nu, psi = 0.
  static UnivariateLaw gh_skew_t(double mu, double sigma2, double kappa, double nu);

  static UnivariateLaw gig(double lambda, double chi, double psi);

  Family family() const { return family_; }
  bool is_gh_family() const;
  bool is_skew_t_family() const;

  double location() const { return location_; }
  double scale2() const { return scale_ * scale_; }
  double scale() const { return scale_; }
  double skew() const { return skew_; }
  /// Degrees of freedom of skew-t family laws (+inf for SN/Normal).
  double nu() const { return nu_; }
  /// Mixing law for GH-family laws, or the law itself for GIG.
  const Gig& mixing() const { return *mixing_; }

  bool has_finite_mean() const;
  /// Throws ContractError when the mean is infinite.
  double mean() const;

  /// Standardized skew-t constants, shared by pdf and quadrature paths.
  struct SkewTConstants {
    double log_t_norm = 0.0;  // log normalizer of t(.; nu)
    double delta = 0.0;       // gamma / sqrt(1 + gamma^2)
  };
  const SkewTConstants& skew_t_constants() const { return st_; }

 private:
  UnivariateLaw() = default;

  Family family_ = Family::Normal;
  double location_ = 0.0;
  double scale_ = 1.0;
  double skew_ = 0.0;
  double nu_ = 0.0;
  std::optional<Gig> mixing_;
  SkewTConstants st_;
};

double pdf(const UnivariateLaw& law, double x);
double cdf(const UnivariateLaw& law, double x);
/// Survival function 1 - cdf, computed directly in the upper tail.
double sf(const UnivariateLaw& law, double x);

/// Throws DomainError unless 0 < p < 1.
double quantile(const UnivariateLaw& law, double p);
/// Same as quantile(); the hint (e.g. the solution for a neighbouring law)
/// seeds the bracket search.
double quantile(const UnivariateLaw& law, double p, double hint);

/// E((y - Y)^+) and E((Y - y)^+).
struct PartialExpectations {
  double below = 0.0;
  double above = 0.0;
};

/// Throws ContractError for laws with infinite mean.
PartialExpectations partial_expectations(const UnivariateLaw& law, double y);

/// mu(y) = int_{-inf}^y x dF(x).
double lower_partial_moment(const UnivariateLaw& law, double y);

/// Distribution function whose quantiles are the expectiles of the law.
double jones_cdf(const UnivariateLaw& law, double y);

/// theta-expectile: root of theta E(Y-y)^+ = (1-theta) E(Y-y)^-.
double expectile(const UnivariateLaw& law, double theta);
double expectile(const UnivariateLaw& law, double theta, double hint);

/// theta-quantile of jones_cdf, found by plain bisection. Independent route
/// to the expectile used for cross-checks.
double jones_quantile(const UnivariateLaw& law, double theta);

}  // namespace skewdepth
