#pragma once

// GH density in terms of the scalars it depends on:
//   q   = (x-mu)' Sigma^-1 (x-mu)
//   lin = (x-mu)' Sigma^-1 kappa
//   kq  = kappa' Sigma^-1 kappa
//   log_det = log |Sigma|

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skewdepth/gig.hpp"
#include "skewdepth/specfun.hpp"
#include "quadrature.hpp"

namespace skewdepth::detail {

/// Closed form (Bessel) log density; requires chi > 0 and psi > 0.
inline double gh_log_density_closed(int d, double q, double lin, double kq, double log_det, const Gig& gig) {
  const double lambda = gig.lambda();
  const double chi = gig.chi();
  const double psi = gig.psi();
  const double half_d = 0.5 * d;
  const double arg = std::sqrt((chi + q) * (psi + kq));
  const double log_c = -0.5 * lambda * std::log(chi * psi) + lambda * std::log(psi) +
                       (half_d - lambda) * std::log(psi + kq) - half_d * std::log(2.0 * std::numbers::pi) -
                       0.5 * log_det - specfun::log_bessel_k(lambda, std::sqrt(chi * psi));
  return log_c + specfun::log_bessel_k(lambda - half_d, arg) + lin - (half_d - lambda) * std::log(arg);
}

/// Closed form on the psi = 0 boundary (inverse gamma mixing); requires chi > 0.
inline double gh_log_density_inverse_gamma(int d, double q, double lin, double kq, double log_det, const Gig& gig) {
  const double lambda = gig.lambda();
  const double chi = gig.chi();
  const double p = lambda - 0.5 * d;
  const double a = chi + q;
  const double log_c = -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * log_det - lambda * std::log(0.5 * chi) -
                       std::lgamma(-lambda);
  if (kq == 0.0) return log_c + std::lgamma(-p) + p * std::log(0.5 * a) + lin;
  return log_c + std::log(2.0) + 0.5 * p * std::log(a / kq) + specfun::log_bessel_k(p, std::sqrt(a * kq)) + lin;
}

/// Log of the normal-mixture integrand at t = log w:
///   log[ N_d(x; mu + w kappa, w Sigma) * w * gig(w) ].
inline double gh_log_mixture_integrand(int d, double q, double lin, double kq, double log_det, const Gig& gig,
                                       double t) {
  const double w = std::exp(t);
  const double quad = q / w - 2.0 * lin + w * kq;
  return -0.5 * d * (std::log(2.0 * std::numbers::pi) + t) - 0.5 * log_det - 0.5 * quad + gig.log_weight(t);
}


/// Log density by quadrature over the GIG mixing variable; valid for every
/// admissible (lambda, chi, psi), including the psi = 0 boundary.
inline double gh_log_density_mixture(int d, double q, double lin, double kq, double log_det, const Gig& gig) {
  const double a = 0.5 * (kq + gig.psi());
  const double c = 0.5 * (q + gig.chi());
  const double b = gig.lambda() - 0.5 * d;
  // The integrand is log-concave in t with stationary point solving a w^2 - b w - c = 0.
  double w_star;
  if (a > 0.0) {
    const double root = std::sqrt(b * b + 4.0 * a * c);
    w_star = b >= 0.0 ? (b + root) / (2.0 * a) : (2.0 * c) / (root - b);
  } else {
    w_star = c / (-b);
  }
  const double t_star = std::log(std::max(w_star, 1e-300));
  auto h = [&](double t) { return gh_log_mixture_integrand(d, q, lin, kq, log_det, gig, t); };
  const double peak = h(t_star);
  constexpr double kDrop = 46.0;
  double step = 0.25;
  double lo = t_star - step;
  while (h(lo) > peak - kDrop) {
    step *= 1.5;
    lo = t_star - step;
  }
  step = 0.25;
  double hi = t_star + step;
  while (h(hi) > peak - kDrop) {
    step *= 1.5;
    hi = t_star + step;
  }
  const double integral = integrate_gk([&](double t) { return std::exp(h(t) - peak); }, lo, hi, 1e-10);
  return peak + std::log(integral);
}

}  // namespace skewdepth::detail
