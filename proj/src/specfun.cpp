#include "skewdepth/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/owens_t.hpp>

#include "skewdepth/errors.hpp"

namespace skewdepth::specfun {

namespace {

using FastPolicy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>,
    boost::math::policies::domain_error<boost::math::policies::throw_on_error>>;

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
// for |mu| <= 1/2, with a series near mu = 0 where the difference cancels.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
  gampl = 1.0 / std::tgamma(1.0 + mu);
  gammi = 1.0 / std::tgamma(1.0 - mu);
  gam2 = 0.5 * (gammi + gampl);
  if (std::abs(mu) < 1e-2) {
    // odd Taylor coefficients of 1/Gamma(1+z)
    const double m2 = mu * mu;
    gam1 = -(0.5772156649015329 +
             m2 * (-0.0420026350340952 + m2 * (-0.0421977345555443 + m2 * 0.0072189432466630)));
  } else {
    gam1 = (gammi - gampl) / (2.0 * mu);
  }
}

// K_mu and K_{mu+1} for |mu| <= 1/2 as (k_mu, k_mu1) * exp(log_scale).
void bessel_k_pair(double mu, double x, double& k_mu, double& k_mu1, double& log_scale) {
  const double mu2 = mu * mu;
  if (x < 2.0) {
    // Temme's series.
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    temme_gammas(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw ConvergenceError("bessel_k: Temme series did not converge");
    k_mu = sum;
    k_mu1 = sum1 * 2.0 / x;
    log_scale = 0.0;
    return;
  }
  // Steed's continued fraction CF2 (Thompson-Barnett), exponentially scaled.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double delh = d;
  double h = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw ConvergenceError("bessel_k: continued fraction did not converge");
  h = a1 * h;
  k_mu = std::sqrt(kPi / (2.0 * x)) / s;
  k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
  log_scale = -x;
}

void check_bessel_args(double order, double x) {
  if (!std::isfinite(order)) throw DomainError("bessel_k: order must be finite");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_k: argument must be positive and finite");
}

}  // namespace

double log_bessel_k(double order, double x) {
  check_bessel_args(order, x);
  const double nu = std::abs(order);
  const int n = static_cast<int>(std::floor(nu + 0.5));
  const double mu = nu - n;
  double k_mu, k_mu1, log_scale;
  bessel_k_pair(mu, x, k_mu, k_mu1, log_scale);
  constexpr double kBig = 1e250;
  const double log_big = std::log(kBig);
  for (int i = 1; i <= n; ++i) {
    const double next = (mu + i) * (2.0 / x) * k_mu1 + k_mu;
    k_mu = k_mu1;
    k_mu1 = next;
    if (k_mu1 > kBig) {
      k_mu /= kBig;
      k_mu1 /= kBig;
      log_scale += log_big;
    }
  }
  return std::log(k_mu) + log_scale;
}

double bessel_k(double order, double x) {
  const double lk = log_bessel_k(order, x);
  if (lk > std::log(std::numeric_limits<double>::max())) {
    throw RangeError("bessel_k: result overflows double precision");
  }
  return std::exp(lk);
}

double bessel_k_scaled(double order, double x) {
  const double lk = log_bessel_k(order, x) + x;
  if (lk > std::log(std::numeric_limits<double>::max())) {
    throw RangeError("bessel_k_scaled: result overflows double precision");
  }
  return std::exp(lk);
}

namespace {
void check_nu(double nu) {
  if (!(nu > 0.0)) throw DomainError("student_t: degrees of freedom must be positive");
}

// P(T > |x|)
double student_t_abs_tail(double x, double nu) {
  const double t2 = x * x;
  if (t2 < nu) {
    return 0.5 * boost::math::ibetac(0.5, 0.5 * nu, t2 / (nu + t2), FastPolicy());
  }
  return 0.5 * boost::math::ibeta(0.5 * nu, 0.5, nu / (nu + t2), FastPolicy());
}
}  // namespace

double student_t_cdf(double x, double nu) {
  check_nu(nu);
  if (std::isnan(x)) throw DomainError("student_t_cdf: NaN argument");
  if (std::isinf(nu)) return normal_cdf(x);
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double tail = student_t_abs_tail(x, nu);
  return x < 0.0 ? tail : 1.0 - tail;
}

double student_t_sf(double x, double nu) { return student_t_cdf(-x, nu); }

double log_student_t_pdf(double x, double nu) {
  check_nu(nu);
  if (std::isinf(nu)) return -0.5 * x * x - 0.5 * std::log(2.0 * kPi);
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * kPi) -
         0.5 * (nu + 1.0) * std::log1p(x * x / nu);
}

double student_t_pdf(double x, double nu) { return std::exp(log_student_t_pdf(x, nu)); }

double student_t_quantile(double p, double nu) {
  check_nu(nu);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("student_t_quantile: probability must lie in (0,1)");
  if (std::isinf(nu)) return normal_quantile(p);
  if (p == 0.5) return 0.0;
  return boost::math::quantile(boost::math::students_t_distribution<double, FastPolicy>(nu), p);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: probability must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double, FastPolicy>(), p);
}

double owens_t(double h, double a) { return boost::math::owens_t(h, a, FastPolicy()); }

}  // namespace skewdepth::specfun
