#pragma once

// Scalar special functions used by the distribution code.

namespace skewdepth::specfun {

/// Modified Bessel function of the second kind K_order(x), x > 0.
/// Throws DomainError for x <= 0 and RangeError when the value overflows.
double bessel_k(double order, double x);

/// log K_order(x). Finite for every x > 0, so it is the form to use inside
/// densities where K under- or overflows.
double log_bessel_k(double order, double x);

/// exp(x) * K_order(x).
double bessel_k_scaled(double order, double x);

/// Student t distribution function with nu degrees of freedom. nu may be
/// +infinity (standard normal).
double student_t_cdf(double x, double nu);

/// Upper tail 1 - student_t_cdf(x, nu), accurate in the far right tail.
double student_t_sf(double x, double nu);

double student_t_pdf(double x, double nu);
double log_student_t_pdf(double x, double nu);

/// Inverse of student_t_cdf. Throws DomainError unless 0 < p < 1.
double student_t_quantile(double p, double nu);

double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double p);

/// Owen's T function T(h, a).
double owens_t(double h, double a);

}  // namespace skewdepth::specfun
