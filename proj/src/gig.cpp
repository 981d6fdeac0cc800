#include "skewdepth/gig.hpp"

#include <cmath>
#include <limits>

#include "skewdepth/errors.hpp"
#include "skewdepth/specfun.hpp"

namespace skewdepth {

namespace {
constexpr double kWindowDrop = 46.0;  // e^-46 ~ 1e-20
}

Gig::Gig(double lambda, double chi, double psi) : lambda_(lambda), chi_(chi), psi_(psi) {
  if (!std::isfinite(lambda) || !std::isfinite(chi) || !std::isfinite(psi)) {
    throw DomainError("GIG: parameters must be finite");
  }
  if (chi < 0.0 || psi < 0.0) throw DomainError("GIG: chi and psi must be nonnegative");
  if (lambda < 0.0 && !(chi > 0.0)) throw DomainError("GIG: lambda < 0 requires chi > 0");
  if (lambda == 0.0 && !(chi > 0.0 && psi > 0.0)) {
    throw DomainError("GIG: lambda = 0 requires chi > 0 and psi > 0");
  }
  if (lambda > 0.0 && !(psi > 0.0)) throw DomainError("GIG: lambda > 0 requires psi > 0");

  if (chi > 0.0 && psi > 0.0) {
    const double omega = std::sqrt(chi * psi);
    log_norm_ = 0.5 * lambda * std::log(psi / chi) - std::log(2.0) - specfun::log_bessel_k(lambda, omega);
  } else if (psi == 0.0) {
    // inverse gamma with shape -lambda and scale chi/2
    log_norm_ = -lambda * std::log(0.5 * chi) - std::lgamma(-lambda);
  } else {
    // gamma with shape lambda and rate psi/2
    log_norm_ = lambda * std::log(0.5 * psi) - std::lgamma(lambda);
  }

  const double t_mode = log_mode();
  const double peak = log_weight(t_mode);
  double step = 0.25;
  log_lo_ = t_mode - step;
  while (log_weight(log_lo_) > peak - kWindowDrop) {
    step *= 1.5;
    log_lo_ = t_mode - step;
  }
  step = 0.25;
  log_hi_ = t_mode + step;
  while (log_weight(log_hi_) > peak - kWindowDrop) {
    step *= 1.5;
    log_hi_ = t_mode + step;
  }
}

double Gig::log_pdf(double w) const {
  if (!(w > 0.0)) return -std::numeric_limits<double>::infinity();
  const double lw = std::log(w);
  return log_norm_ + (lambda_ - 1.0) * lw - 0.5 * (chi_ / w + psi_ * w);
}

double Gig::pdf(double w) const { return std::exp(log_pdf(w)); }

double Gig::log_weight(double t) const {
  // Zero chi or psi drops its term; 0 * exp(+-inf) would be NaN at the open ends.
  double v = log_norm_ + lambda_ * t;
  if (chi_ > 0.0) v -= 0.5 * chi_ * std::exp(-t);
  if (psi_ > 0.0) v -= 0.5 * psi_ * std::exp(t);
  return v;
}

double Gig::log_mode() const {
  double w;
  if (psi_ == 0.0) {
    w = chi_ / (-2.0 * lambda_);
  } else if (chi_ == 0.0) {
    w = 2.0 * lambda_ / psi_;
  } else {
    const double root = std::sqrt(lambda_ * lambda_ + chi_ * psi_);
    w = lambda_ >= 0.0 ? (lambda_ + root) / psi_ : chi_ / (root - lambda_);
  }
  return std::log(w);
}

double Gig::moment(double r) const {
  if (r == 0.0) return 1.0;
  if (chi_ > 0.0 && psi_ > 0.0) {
    const double omega = std::sqrt(chi_ * psi_);
    return std::pow(chi_ / psi_, 0.5 * r) *
           std::exp(specfun::log_bessel_k(lambda_ + r, omega) - specfun::log_bessel_k(lambda_, omega));
  }
  if (psi_ == 0.0) {
    const double shape = -lambda_;
    if (shape - r <= 0.0) return std::numeric_limits<double>::infinity();
    return std::exp(r * std::log(0.5 * chi_) + std::lgamma(shape - r) - std::lgamma(shape));
  }
  const double shape = lambda_;
  if (shape + r <= 0.0) return std::numeric_limits<double>::infinity();
  return std::exp(r * std::log(2.0 / psi_) + std::lgamma(shape + r) - std::lgamma(shape));
}

}  // namespace skewdepth
