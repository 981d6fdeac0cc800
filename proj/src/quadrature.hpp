#pragma once

// Thin wrappers over Boost.Math quadrature with the tolerances used across
// the library.

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace skewdepth::detail {

inline constexpr double kQuadTol = 1e-12;

/// Adaptive Gauss-Kronrod (15/31) on [a, b]; either end may be infinite.
template <class F>
double integrate_gk(F&& f, double a, double b, double tol = kQuadTol) {
  if (a == b) return 0.0;
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &error);
}

/// Tanh-sinh on a finite interval; tolerates integrable endpoint singularities.
template <class F>
double integrate_ts(F&& f, double a, double b, double tol = kQuadTol) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  return integrator.integrate(
      [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : 0.0;
      },
      a, b, tol, &error, &l1);
}

}  // namespace skewdepth::detail
