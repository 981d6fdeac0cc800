#include "skewdepth/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "gh_kernel.hpp"
#include "quadrature.hpp"
#include "skewdepth/errors.hpp"
#include "skewdepth/specfun.hpp"

namespace skewdepth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

void require_finite(double v, const char* what) { require(std::isfinite(v), what); }

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Normal: return "Normal";
    case Family::StudentT: return "StudentT";
    case Family::SN: return "SN";
    case Family::ST: return "ST";
    case Family::SC: return "SC";
    case Family::GH: return "GH";
    case Family::NIG: return "NIG";
    case Family::GHSkewT: return "GHSkewT";
    case Family::GIG: return "GIG";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Factories

UnivariateLaw UnivariateLaw::normal(double mean, double variance) {
  require_finite(mean, "normal: mean must be finite");
  require(variance > 0.0 && std::isfinite(variance), "normal: variance must be positive");
  UnivariateLaw law;
  law.family_ = Family::Normal;
  law.location_ = mean;
  law.scale_ = std::sqrt(variance);
  law.nu_ = kInf;
  return law;
}

UnivariateLaw UnivariateLaw::skew_t(double xi, double omega2, double gamma, double nu) {
  require_finite(xi, "skew_t: location must be finite");
  require(omega2 > 0.0 && std::isfinite(omega2), "skew_t: scale^2 must be positive");
  require_finite(gamma, "skew_t: skewness must be finite");
  require(nu > 0.0, "skew_t: degrees of freedom must be positive");
  UnivariateLaw law;
  law.location_ = xi;
  law.scale_ = std::sqrt(omega2);
  law.skew_ = gamma;
  law.nu_ = nu;
  if (std::isinf(nu)) {
    law.family_ = Family::SN;
  } else if (nu == 1.0) {
    law.family_ = Family::SC;
  } else {
    law.family_ = gamma == 0.0 ? Family::StudentT : Family::ST;
  }
  law.st_.delta = gamma / std::sqrt(1.0 + gamma * gamma);
  if (!std::isinf(nu)) {
    law.st_.log_t_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * kPi);
  }
  return law;
}

UnivariateLaw UnivariateLaw::student_t(double location, double scale2, double nu) {
  if (std::isinf(nu)) return normal(location, scale2);
  return skew_t(location, scale2, 0.0, nu);
}

UnivariateLaw UnivariateLaw::skew_normal(double xi, double omega2, double gamma) {
  return skew_t(xi, omega2, gamma, kInf);
}

UnivariateLaw UnivariateLaw::skew_cauchy(double xi, double omega2, double gamma) {
  return skew_t(xi, omega2, gamma, 1.0);
}

UnivariateLaw UnivariateLaw::gh(double mu, double sigma2, double kappa, double lambda, double chi, double psi) {
  require_finite(mu, "gh: location must be finite");
  require(sigma2 > 0.0 && std::isfinite(sigma2), "gh: scale^2 must be positive");
  require_finite(kappa, "gh: skewness must be finite");
  UnivariateLaw law;
  law.family_ = Family::GH;
  law.location_ = mu;
  law.scale_ = std::sqrt(sigma2);
  law.skew_ = kappa;
  law.mixing_.emplace(lambda, chi, psi);
  if (lambda == -0.5 && chi == psi) {
    law.family_ = Family::NIG;
  } else if (psi == 0.0 && chi == -2.0 * lambda) {
    law.family_ = Family::GHSkewT;
    law.nu_ = chi;
  }
  return law;
}

UnivariateLaw UnivariateLaw::nig(double mu, double sigma2, double kappa, double psi) {
  require(psi > 0.0, "nig: psi must be positive");
  return gh(mu, sigma2, kappa, -0.5, psi, psi);
}

UnivariateLaw UnivariateLaw::nig(double mu, double sigma2, double kappa, double chi, double psi) {
  require(chi > 0.0 && psi > 0.0, "nig: chi and psi must be positive");
  // GH(mu, a S, a k, l, chi/a, a psi) is the same law; a = sqrt(chi/psi) gives chi = psi.
  const double a = std::sqrt(chi / psi);
  const double common = std::sqrt(chi * psi);
  return gh(mu, a * sigma2, a * kappa, -0.5, common, common);
}

UnivariateLaw UnivariateLaw::gh_skew_t(double mu, double sigma2, double kappa, double nu) {
  require(nu > 0.0 && std::isfinite(nu), "gh_skew_t: nu must be positive and finite");
  return gh(mu, sigma2, kappa, -0.5 * nu, nu, 0.0);
}

UnivariateLaw UnivariateLaw::gig(double lambda, double chi, double psi) {
  UnivariateLaw law;
  law.family_ = Family::GIG;
  law.mixing_.emplace(lambda, chi, psi);
  law.location_ = 0.0;
  law.scale_ = 1.0;
  return law;
}

bool UnivariateLaw::is_gh_family() const {
  return family_ == Family::GH || family_ == Family::NIG || family_ == Family::GHSkewT;
}

bool UnivariateLaw::is_skew_t_family() const {
  return family_ == Family::Normal || family_ == Family::StudentT || family_ == Family::SN ||
         family_ == Family::ST || family_ == Family::SC;
}

bool UnivariateLaw::has_finite_mean() const {
  if (family_ == Family::GIG) return std::isfinite(mixing_->moment(1.0));
  if (is_gh_family()) {
    // E(X) = mu + kappa E(W) needs E(W) < inf; without skewness only E(sqrt W) matters.
    return skew_ != 0.0 ? std::isfinite(mixing_->moment(1.0)) : std::isfinite(mixing_->moment(0.5));
  }
  return nu_ > 1.0;
}

namespace {

// Mean of the standardized skew-t law.
double skew_t_std_mean(double delta, double nu) {
  if (std::isinf(nu)) return delta * kSqrt2OverPi;
  return delta * std::sqrt(nu / kPi) * std::exp(std::lgamma(0.5 * (nu - 1.0)) - std::lgamma(0.5 * nu));
}

}  // namespace

double UnivariateLaw::mean() const {
  if (!has_finite_mean()) {
    throw ContractError(std::string("expectile undefined: ") + std::string(family_name(family_)) +
                        " law has infinite mean");
  }
  if (family_ == Family::GIG) return mixing_->moment(1.0);
  if (is_gh_family()) return skew_ == 0.0 ? location_ : location_ + skew_ * mixing_->moment(1.0);
  return location_ + scale_ * skew_t_std_mean(st_.delta, nu_);
}

// ---------------------------------------------------------------------------
// Standardized skew-t family helpers (location 0, scale 1).

namespace {

struct SkewTStd {
  double gamma;
  double nu;
  double delta;
  double log_t_norm;

  bool normal_tail() const { return std::isinf(nu); }

  double pdf(double z) const {
    if (normal_tail()) return 2.0 * specfun::normal_pdf(z) * specfun::normal_cdf(gamma * z);
    const double base = std::exp(log_t_norm - 0.5 * (nu + 1.0) * std::log1p(z * z / nu));
    if (gamma == 0.0) return base;
    const double arg = gamma * z * std::sqrt((nu + 1.0) / (nu + z * z));
    return 2.0 * base * specfun::student_t_cdf(arg, nu + 1.0);
  }

  // Skew-Cauchy closed forms.
  double sc_cdf(double z) const {
    const double r = 1.0 / std::sqrt(1.0 + z * z);
    if (z == 0.0) return std::acos(delta) / kPi;
    if (z < 0.0) return (std::atan(-1.0 / z) - std::asin(delta * r)) / kPi;
    return 1.0 - (std::atan(1.0 / z) + std::asin(delta * r)) / kPi;
  }
  double sc_sf(double z) const {
    const double r = 1.0 / std::sqrt(1.0 + z * z);
    if (z == 0.0) return 1.0 - std::acos(delta) / kPi;
    if (z > 0.0) return (std::atan(1.0 / z) + std::asin(delta * r)) / kPi;
    return 1.0 - (std::atan(-1.0 / z) - std::asin(delta * r)) / kPi;
  }
  double sc_quantile(double p) const {
    const double theta = (p - 0.5) * kPi;
    return (delta + std::sin(theta)) / std::cos(theta);
  }

  // Integral of the density over an angular range: z = sqrt(nu) tan(theta).
  double angular_mass(double theta_lo, double theta_hi) const {
    const double k = 2.0 * std::exp(log_t_norm) * std::sqrt(nu);
    const double c = gamma * std::sqrt(nu + 1.0);
    auto f = [&](double th) {
      return k * std::pow(std::cos(th), nu - 1.0) * specfun::student_t_cdf(c * std::sin(th), nu + 1.0);
    };
    if (nu >= 1.0) return detail::integrate_gk(f, theta_lo, theta_hi);
    return detail::integrate_ts(f, theta_lo, theta_hi);
  }

  double cdf(double z) const {
    if (normal_tail()) {
      if (gamma == 0.0) return specfun::normal_cdf(z);
      return std::clamp(specfun::normal_cdf(z) - 2.0 * specfun::owens_t(z, gamma), 0.0, 1.0);
    }
    if (nu == 1.0) return sc_cdf(z);
    if (gamma == 0.0) return specfun::student_t_cdf(z, nu);
    if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
    const double th = std::atan(z / std::sqrt(nu));
    if (z <= 0.0) return std::clamp(angular_mass(-0.5 * kPi, th), 0.0, 1.0);
    return std::clamp(1.0 - angular_mass(th, 0.5 * kPi), 0.0, 1.0);
  }

  double sf(double z) const {
    if (normal_tail()) {
      if (gamma == 0.0) return specfun::normal_sf(z);
      return std::clamp(specfun::normal_sf(z) + 2.0 * specfun::owens_t(z, gamma), 0.0, 1.0);
    }
    if (nu == 1.0) return sc_sf(z);
    if (gamma == 0.0) return specfun::student_t_sf(z, nu);
    if (std::isinf(z)) return z > 0 ? 0.0 : 1.0;
    const double th = std::atan(z / std::sqrt(nu));
    if (z >= 0.0) return std::clamp(angular_mass(th, 0.5 * kPi), 0.0, 1.0);
    return std::clamp(1.0 - angular_mass(-0.5 * kPi, th), 0.0, 1.0);
  }

  double mean() const { return skew_t_std_mean(delta, nu); }

  // E((Z - z)^+) computed directly.
  double above(double z) const {
    if (normal_tail()) {
      const double s = std::sqrt(1.0 + gamma * gamma);
      return delta * kSqrt2OverPi * specfun::normal_sf(s * z) - z * sf(z) + pdf(z);
    }
    if (gamma == 0.0) return (nu + z * z) / (nu - 1.0) * pdf(z) - z * sf(z);
    const double k = 2.0 * std::exp(log_t_norm) * std::sqrt(nu);
    const double c = gamma * std::sqrt(nu + 1.0);
    const double rn = std::sqrt(nu);
    auto f = [&](double th) {
      const double co = std::cos(th);
      const double si = std::sin(th);
      return k * (rn * si * std::pow(co, nu - 2.0) - z * std::pow(co, nu - 1.0)) *
             specfun::student_t_cdf(c * si, nu + 1.0);
    };
    const double th = std::atan(z / rn);
    if (nu >= 3.0) return detail::integrate_gk(f, th, 0.5 * kPi);
    return detail::integrate_ts(f, th, 0.5 * kPi);
  }

  // E((z - Z)^+) computed directly.
  double below(double z) const {
    if (normal_tail()) {
      const double s = std::sqrt(1.0 + gamma * gamma);
      return z * cdf(z) + pdf(z) - delta * kSqrt2OverPi * specfun::normal_cdf(s * z);
    }
    if (gamma == 0.0) return (nu + z * z) / (nu - 1.0) * pdf(z) + z * cdf(z);
    const double k = 2.0 * std::exp(log_t_norm) * std::sqrt(nu);
    const double c = gamma * std::sqrt(nu + 1.0);
    const double rn = std::sqrt(nu);
    auto f = [&](double th) {
      const double co = std::cos(th);
      const double si = std::sin(th);
      return k * (z * std::pow(co, nu - 1.0) - rn * si * std::pow(co, nu - 2.0)) *
             specfun::student_t_cdf(c * si, nu + 1.0);
    };
    const double th = std::atan(z / rn);
    if (nu >= 3.0) return detail::integrate_gk(f, -0.5 * kPi, th);
    return detail::integrate_ts(f, -0.5 * kPi, th);
  }
};

SkewTStd standardized(const UnivariateLaw& law) {
  const auto& c = law.skew_t_constants();
  return SkewTStd{law.skew(), law.nu(), c.delta, c.log_t_norm};
}

// ---------------------------------------------------------------------------
// GH family through the normal mean-variance mixture over W ~ GIG.

struct GhMixture {
  double mu;
  double sigma;
  double kappa;
  const Gig* gig;

  // Integration range in t = log w; open-ended where the weight has a power tail.
  double t_lo(bool heavy) const { return heavy && gig->chi() == 0.0 ? -kInf : gig->log_lower(); }
  double t_hi(bool heavy) const { return heavy && gig->psi() == 0.0 ? kInf : gig->log_upper(); }

  template <class G>
  double integrate(G&& g, bool heavy) const {
    return detail::integrate_gk(
        [&](double t) {
          const double w = std::exp(t);
          const double lw = gig->log_weight(t);
          // The weight underflows long before w does; both ends contribute nothing.
          if (lw < -745.0 || !(w > 0.0 && w < kInf)) return 0.0;
          return g(w) * std::exp(lw);
        },
        t_lo(heavy), t_hi(heavy));
  }

  double cdf(double x) const {
    return integrate([&](double w) { return specfun::normal_cdf((x - mu - w * kappa) / (sigma * std::sqrt(w))); },
                     false);
  }
  double sf(double x) const {
    return integrate([&](double w) { return specfun::normal_sf((x - mu - w * kappa) / (sigma * std::sqrt(w))); },
                     false);
  }
  double pdf(double x) const {
    const double z = (x - mu) / sigma;
    const double q = z * z;
    const double lin = z * kappa / sigma;
    const double kq = kappa * kappa / (sigma * sigma);
    const double log_det = 2.0 * std::log(sigma);
    if (gig->chi() > 0.0 && gig->psi() > 0.0) {
      return std::exp(detail::gh_log_density_closed(1, q, lin, kq, log_det, *gig));
    }
    return std::exp(detail::gh_log_density_mixture(1, q, lin, kq, log_det, *gig));
  }
  // E((y - X)^+)
  double below(double y) const {
    return integrate(
        [&](double w) {
          const double s = sigma * std::sqrt(w);
          const double d = y - mu - w * kappa;
          return d * specfun::normal_cdf(d / s) + s * specfun::normal_pdf(d / s);
        },
        true);
  }
  // E((X - y)^+)
  double above(double y) const {
    return integrate(
        [&](double w) {
          const double s = sigma * std::sqrt(w);
          const double d = mu + w * kappa - y;
          return d * specfun::normal_cdf(d / s) + s * specfun::normal_pdf(d / s);
        },
        true);
  }
};

GhMixture mixture(const UnivariateLaw& law) {
  return GhMixture{law.location(), law.scale(), law.skew(), &law.mixing()};
}

// GIG family in t = log w.
struct GigLaw {
  const Gig* gig;
  template <class G>
  double integrate(G&& g, double lo, double hi) const {
    return detail::integrate_gk(
        [&](double t) {
          const double lw = gig->log_weight(t);
          if (lw < -745.0) return 0.0;
          return g(std::exp(t)) * std::exp(lw);
        },
        lo, hi);
  }
  double lo() const { return gig->chi() == 0.0 ? -kInf : gig->log_lower(); }
  double hi() const { return gig->psi() == 0.0 ? kInf : gig->log_upper(); }
  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    const double t = std::log(x);
    return std::clamp(integrate([](double) { return 1.0; }, lo(), std::min(t, hi())), 0.0, 1.0);
  }
  double sf(double x) const {
    if (x <= 0.0) return 1.0;
    const double t = std::log(x);
    return std::clamp(integrate([](double) { return 1.0; }, std::max(t, lo()), hi()), 0.0, 1.0);
  }
  double below(double y) const {
    if (y <= 0.0) return 0.0;
    return integrate([&](double w) { return y - w; }, lo(), std::min(std::log(y), hi()));
  }
  double above(double y) const {
    if (y <= 0.0) return gig->moment(1.0) - y;
    return integrate([&](double w) { return w - y; }, std::max(std::log(y), lo()), hi());
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Public operations

double pdf(const UnivariateLaw& law, double x) {
  if (std::isnan(x)) throw DomainError("pdf: NaN argument");
  if (law.family() == Family::GIG) return law.mixing().pdf(x);
  if (law.is_gh_family()) return mixture(law).pdf(x);
  const double z = (x - law.location()) / law.scale();
  return standardized(law).pdf(z) / law.scale();
}

double cdf(const UnivariateLaw& law, double x) {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  if (law.family() == Family::GIG) return GigLaw{&law.mixing()}.cdf(x);
  if (law.is_gh_family()) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return std::clamp(mixture(law).cdf(x), 0.0, 1.0);
  }
  return standardized(law).cdf((x - law.location()) / law.scale());
}

double sf(const UnivariateLaw& law, double x) {
  if (std::isnan(x)) throw DomainError("sf: NaN argument");
  if (law.family() == Family::GIG) return GigLaw{&law.mixing()}.sf(x);
  if (law.is_gh_family()) {
    if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
    return std::clamp(mixture(law).sf(x), 0.0, 1.0);
  }
  return standardized(law).sf((x - law.location()) / law.scale());
}

namespace {

// Solve r(x) = 0 for increasing r by bracketed Newton with bisection fallback.
template <class R, class D>
double bracketed_newton(R&& residual, D&& derivative, double x0, double step, double lower_limit) {
  double x = x0;
  double r = residual(x);
  if (r == 0.0) return x;
  double lo, hi, r_lo, r_hi;
  if (r < 0.0) {
    lo = x;
    r_lo = r;
    for (int i = 0;; ++i) {
      hi = x + step;
      r_hi = residual(hi);
      if (r_hi >= 0.0) break;
      lo = hi;
      r_lo = r_hi;
      x = hi;
      step *= 2.0;
      if (i > 200) throw ConvergenceError("quantile: failed to bracket root");
    }
  } else {
    hi = x;
    r_hi = r;
    for (int i = 0;; ++i) {
      lo = x - step;
      if (lo <= lower_limit) lo = 0.5 * (x + lower_limit);
      r_lo = residual(lo);
      if (r_lo <= 0.0) break;
      hi = lo;
      r_hi = r_lo;
      x = lo;
      step *= 2.0;
      if (i > 200) throw ConvergenceError("quantile: failed to bracket root");
    }
  }
  if (r_lo == 0.0) return lo;
  if (r_hi == 0.0) return hi;
  // Start from the end with the smaller residual.
  x = std::abs(r_lo) < std::abs(r_hi) ? lo : hi;
  r = std::abs(r_lo) < std::abs(r_hi) ? r_lo : r_hi;
  double prev_width = hi - lo;
  for (int it = 0; it < 200; ++it) {
    const double d = derivative(x);
    double next = (d > 0.0 && std::isfinite(d)) ? x - r / d : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double moved = std::abs(next - x);
    x = next;
    r = residual(x);
    if (r == 0.0) return x;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double tol = 1e-13 * (1.0 + std::abs(x));
    if (moved <= tol || hi - lo <= tol) return x;
    // Force a bisection step when Newton stalls.
    if (hi - lo > 0.5 * prev_width && it % 3 == 2) {
      x = 0.5 * (lo + hi);
      r = residual(x);
      if (r == 0.0) return x;
      if (r < 0.0) {
        lo = x;
      } else {
        hi = x;
      }
    }
    prev_width = hi - lo;
  }
  return x;
}

double initial_scale(const UnivariateLaw& law) {
  if (law.family() == Family::GIG) {
    return std::exp(law.mixing().log_mode());
  }
  if (law.is_gh_family()) {
    const double w = std::exp(law.mixing().log_mode());
    return law.scale() * std::sqrt(w) + std::abs(law.skew()) * w;
  }
  return law.scale();
}

}  // namespace

double quantile(const UnivariateLaw& law, double p, double hint) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: probability must lie in (0,1)");
  if (law.family() == Family::SC) {
    return law.location() + law.scale() * standardized(law).sc_quantile(p);
  }
  if ((law.family() == Family::StudentT || law.family() == Family::Normal) ||
      (law.family() == Family::SN && law.skew() == 0.0)) {
    return law.location() + law.scale() * specfun::student_t_quantile(p, law.nu());
  }
  const bool lower = p <= 0.5;
  auto residual = [&](double x) { return lower ? cdf(law, x) - p : (1.0 - p) - sf(law, x); };
  auto derivative = [&](double x) { return pdf(law, x); };
  const double lower_limit = law.family() == Family::GIG ? 0.0 : -kInf;
  if (law.family() == Family::GIG && !(hint > 0.0)) hint = std::exp(law.mixing().log_mode());
  return bracketed_newton(residual, derivative, hint, initial_scale(law), lower_limit);
}

double quantile(const UnivariateLaw& law, double p) {
  double hint = law.location();
  if (law.family() == Family::GIG) {
    hint = std::exp(law.mixing().log_mode());
  } else if (law.is_gh_family()) {
    hint = law.location() + law.skew() * std::exp(law.mixing().log_mode());
  }
  return quantile(law, p, hint);
}

PartialExpectations partial_expectations(const UnivariateLaw& law, double y) {
  if (std::isnan(y)) throw DomainError("partial_expectations: NaN argument");
  const double m = law.mean();  // throws ContractError for infinite mean
  PartialExpectations out;
  // Integrate the tail that is small and recover the other from above - below = E(Y) - y.
  if (law.family() == Family::GIG) {
    const GigLaw g{&law.mixing()};
    if (y <= m) {
      out.below = g.below(y);
      out.above = out.below + m - y;
    } else {
      out.above = g.above(y);
      out.below = out.above - (m - y);
    }
  } else if (law.is_gh_family()) {
    const GhMixture g = mixture(law);
    if (y <= m) {
      out.below = g.below(y);
      out.above = out.below + m - y;
    } else {
      out.above = g.above(y);
      out.below = out.above - (m - y);
    }
  } else {
    const SkewTStd s = standardized(law);
    const double z = (y - law.location()) / law.scale();
    const double zm = s.mean();
    if (z <= zm) {
      out.below = s.below(z);
      out.above = out.below + zm - z;
    } else {
      out.above = s.above(z);
      out.below = out.above - (zm - z);
    }
    out.below *= law.scale();
    out.above *= law.scale();
  }
  out.below = std::max(out.below, 0.0);
  out.above = std::max(out.above, 0.0);
  return out;
}

double lower_partial_moment(const UnivariateLaw& law, double y) {
  const PartialExpectations pe = partial_expectations(law, y);
  return y * cdf(law, y) - pe.below;
}

double jones_cdf(const UnivariateLaw& law, double y) {
  const PartialExpectations pe = partial_expectations(law, y);
  const double total = pe.below + pe.above;
  if (!(total > 0.0)) return y < law.mean() ? 0.0 : 1.0;
  return pe.below / total;
}

namespace {

double expectile_scale(const UnivariateLaw& law) {
  return initial_scale(law);
}

}  // namespace

double expectile(const UnivariateLaw& law, double theta, double hint) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("expectile: theta must lie in (0,1)");
  const double m = law.mean();
  if (theta == 0.5) return m;
  // g(y) = theta E(Y-y)^+ - (1-theta) E(Y-y)^-, continuous and strictly decreasing.
  auto g = [&](double y) {
    const PartialExpectations pe = partial_expectations(law, y);
    return theta * pe.above - (1.0 - theta) * pe.below;
  };
  if (!std::isfinite(hint)) hint = m;
  double a = hint;
  double ga = g(a);
  if (ga == 0.0) return a;
  double step = expectile_scale(law);
  double b = a;
  double gb = ga;
  const double dir = ga > 0.0 ? 1.0 : -1.0;
  for (int i = 0; i < 400; ++i) {
    b = a + dir * step;
    if (law.family() == Family::GIG && b <= 0.0) b = 0.5 * a;
    gb = g(b);
    if ((gb > 0.0) != (ga > 0.0) || gb == 0.0) break;
    a = b;
    ga = gb;
    step *= 2.0;
  }
  if (gb == 0.0) return b;
  if ((gb > 0.0) == (ga > 0.0)) throw ConvergenceError("expectile: failed to bracket root");
  double lo = std::min(a, b);
  double hi = std::max(a, b);
  double g_lo = lo == a ? ga : gb;
  double g_hi = hi == a ? ga : gb;
  boost::uintmax_t max_iter = 200;
  const auto tol = [](double l, double h) { return h - l <= 1e-14 * (1.0 + std::abs(l) + std::abs(h)); };
  const auto root = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, tol, max_iter);
  return 0.5 * (root.first + root.second);
}

double expectile(const UnivariateLaw& law, double theta) { return expectile(law, theta, law.mean()); }

double jones_quantile(const UnivariateLaw& law, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("jones_quantile: theta must lie in (0,1)");
  const double m = law.mean();
  double step = expectile_scale(law);
  double lo = m;
  double hi = m;
  if (theta > 0.5) {
    while (jones_cdf(law, hi) < theta) {
      lo = hi;
      hi += step;
      step *= 2.0;
    }
  } else {
    while (jones_cdf(law, lo) > theta) {
      hi = lo;
      lo -= step;
      if (law.family() == Family::GIG && lo <= 0.0) lo = 0.5 * hi;
      step *= 2.0;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (jones_cdf(law, mid) < theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace skewdepth
