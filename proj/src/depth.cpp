#include "skewdepth/depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "directional.hpp"
#include "skewdepth/errors.hpp"

namespace skewdepth {

namespace {

constexpr double kPi = std::numbers::pi;

detail::TermValue hd_term(const UnivariateLaw& law, double a) {
  const double lower = cdf(law, a);
  if (lower <= 0.5) return {lower, false};
  return {std::min(lower, sf(law, a)), true};
}

double hd_level(const UnivariateLaw& law, double theta, double hint) {
  return std::isnan(hint) ? quantile(law, theta) : quantile(law, theta, hint);
}

void require_unit(const Vector& u, int d) {
  if (u.size() != d) throw DomainError("direction dimension does not match the law");
  if (std::abs(u.norm() - 1.0) > 1e-12) throw DomainError("direction must have unit norm");
}

Vector axis_point(int d, double t) {
  Vector x = Vector::Zero(d);
  x(0) = t;
  return x;
}

struct CanonicalMedian {
  double t;
  double depth;
  bool multiple;
  bool converged;
};

CanonicalMedian median_canonical(const CanonicalForm& law, const DepthOptions& options) {
  const UnivariateLaw first = law.projection(1.0);
  if (law.dimension() == 1) {
    return {quantile(first, 0.5), 0.5, false, true};
  }
  bool converged = true;
  auto f = [&](double t) {
    const DepthResult r = hd_canonical(law, axis_point(law.dimension(), t), options);
    converged = converged && r.converged;
    return r.depth;
  };
  // Depth at t is at most min(F_1(t), 1 - F_1(t)), so the maximizer sits well inside this bracket.
  const auto best = detail::axis_maximize(f, quantile(first, 0.1), quantile(first, 0.9));
  return {best.t, best.value, best.flat, converged && best.converged};
}

}  // namespace

bool Ellipsoid::contains(const Vector& x) const {
  const Vector diff = x - center;
  if (degenerate) return diff.norm() <= 1e-12;
  return diff.dot(shape * diff) <= 1.0;
}

bool ContourPolyline::contains(const Vector& x) const {
  if (empty || x.size() != 2) return false;
  const auto n = vertices.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Vector2d a = vertices.row(k).transpose();
    const Eigen::Vector2d b = vertices.row((k + 1) % n).transpose();
    const double cross = (b.x() - a.x()) * (x(1) - a.y()) - (b.y() - a.y()) * (x(0) - a.x());
    if (cross < 0.0) return false;
  }
  return true;
}

double half_space_prob(const MultivariateLaw& law, const Vector& x, const Vector& u) {
  const int d = std::visit([](const auto& p) { return p.dimension(); }, law);
  require_unit(u, d);
  if (x.size() != d) throw DomainError("point dimension does not match the law");
  return cdf(linear_projection(law, u), u.dot(x));
}

DepthResult hd(const CanonicalForm& law, const Vector& x, const DepthOptions& options) {
  return detail::depth_original(law, x, hd_term, options);
}

DepthResult hd_canonical(const CanonicalForm& law, const Vector& x_star, const DepthOptions& options) {
  return detail::depth_canonical(law, x_star, hd_term, options);
}

ContourPolyline hd_contour(const CanonicalForm& law, double alpha, const ContourOptions& options) {
  if (law.dimension() != 2) throw DomainError("hd_contour: law must be bivariate");
  detail::require_alpha(alpha, true);
  const CanonicalMedian med = median_canonical(law, options.depth);
  return detail::trace_contour(law, alpha, med.t, med.depth, hd_term, hd_level, options);
}

Ellipsoid sc_contour_exact(const STParams& law, double alpha) {
  law.validate();
  if (law.nu != 1.0) throw DomainError("sc_contour_exact: law is not skew-Cauchy (nu must be 1)");
  detail::require_alpha(alpha, true);
  const CanonicalReduction red = canonicalize_st(law);
  const double g = red.canonical_skew;
  const double angle = (0.5 - alpha) * kPi;
  const double s = g / std::sqrt(1.0 + g * g) / std::cos(angle);
  const double t = std::tan(angle);
  Ellipsoid e;
  e.center = red.from_canonical(axis_point(law.dimension(), s));
  if (t == 0.0) {
    e.degenerate = true;
    return e;
  }
  e.shape = red.A.transpose() * red.A / (t * t);
  return e;
}

MedianResult half_space_median(const CanonicalForm& law, const DepthOptions& options) {
  const CanonicalMedian med = median_canonical(law, options);
  MedianResult out;
  out.point = law.reduction().from_canonical(axis_point(law.dimension(), med.t));
  out.depth = med.depth;
  out.multiple = med.multiple;
  out.converged = med.converged;
  return out;
}

double d1(const CanonicalForm& law, const DepthOptions& options) {
  const CanonicalMedian med = median_canonical(law, options);
  if (!med.converged) throw ConvergenceError("d1: depth search did not converge");
  return std::max(0.0, 0.5 - med.depth);
}

Vector canonical_componentwise_median(const CanonicalForm& law) {
  return axis_point(law.dimension(), quantile(law.projection(1.0), 0.5));
}

double d2(const CanonicalForm& law, const DepthOptions& options) {
  const DepthResult r = hd_canonical(law, canonical_componentwise_median(law), options);
  if (!r.converged) throw ConvergenceError("d2: depth search did not converge");
  return std::max(0.0, 0.5 - r.depth);
}

namespace {

// Nelder-Mead maximization used on hyperplanes of dimension two and more.
std::pair<Vector, bool> nelder_mead_max(const std::function<double(const Vector&)>& f, const Vector& start,
                                        double step, int max_iter) {
  const int n = static_cast<int>(start.size());
  std::vector<Vector> pts(n + 1, start);
  std::vector<double> val(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1](i) += step;
  for (int i = 0; i <= n; ++i) val[i] = -f(pts[i]);
  std::vector<int> order(n + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
    const int best = order[0];
    const int worst = order[n];
    const int second = order[n - 1];
    double size = 0.0;
    for (int i = 0; i <= n; ++i) size = std::max(size, (pts[i] - pts[best]).norm());
    if (val[worst] - val[best] < 1e-12 && size < 1e-8) return {pts[best], true};
    Vector centroid = Vector::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= n;
    const Vector refl = centroid + (centroid - pts[worst]);
    const double fr = -f(refl);
    if (fr < val[best]) {
      const Vector expd = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = -f(expd);
      if (fe < fr) {
        pts[worst] = expd;
        val[worst] = fe;
      } else {
        pts[worst] = refl;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = refl;
      val[worst] = fr;
      continue;
    }
    const Vector contr = centroid + 0.5 * (pts[worst] - centroid);
    const double fc = -f(contr);
    if (fc < val[worst]) {
      pts[worst] = contr;
      val[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      val[i] = -f(pts[i]);
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (val[i] < val[best]) best = i;
  }
  return {pts[best], false};
}

}  // namespace

StressResult reverse_stress(const CanonicalForm& law, const Vector& w, double l0, const DepthOptions& options) {
  const int d = law.dimension();
  if (w.size() != d) throw DomainError("reverse_stress: weight dimension does not match the law");
  if (!w.allFinite() || w.norm() == 0.0) throw DomainError("reverse_stress: weights must be finite and nonzero");
  if (!std::isfinite(l0)) throw DomainError("reverse_stress: threshold must be finite");

  const auto& red = law.reduction();
  const CanonicalMedian med = median_canonical(law, options);
  const Vector med_star = axis_point(d, med.t);
  const Vector median = red.from_canonical(med_star);
  StressResult out;
  if (w.dot(median) >= l0) {
    out.point = median;
    out.depth = med.depth;
    out.median_in_ruin_set = true;
    out.converged = med.converged;
    return out;
  }

  // w'x >= l0  <=>  w*'x* >= l0 + w*'b  with  w* = A^-T w.
  Vector ws = red.A_inv.transpose() * w;
  double ls = l0 + ws.dot(red.b);
  const double norm = ws.norm();
  ws /= norm;
  ls /= norm;
  const Vector base = ls * ws;

  bool converged = med.converged;
  auto depth_at = [&](const Vector& x_star) {
    const DepthResult r = hd_canonical(law, x_star, options);
    converged = converged && r.converged;
    return r.depth;
  };

  Vector best_star;
  if (d == 1) {
    best_star = base;
  } else {
    // Orthonormal basis of the hyperplane directions from a QR factorization of w*.
    const Matrix q = Eigen::HouseholderQR<Matrix>(ws).householderQ() * Matrix::Identity(d, d);
    const Matrix basis = q.rightCols(d - 1);
    const Vector start = basis.transpose() * (med_star - base);
    auto on_plane = [&](const Vector& c) { return Vector(base + basis * c); };
    if (d == 2) {
      auto f = [&](double t) { return depth_at(on_plane(Vector::Constant(1, t))); };
      // Depth is quasiconcave along the line: walk uphill to bracket the maximum.
      const double t0 = start(0);
      double h = 0.5;
      const double f0 = f(t0);
      const double dir = f(t0 + 1e-3) >= f(t0 - 1e-3) ? 1.0 : -1.0;
      double prev = t0;
      double cur = t0 + dir * h;
      double fprev = f0;
      double fcur = f(cur);
      while (fcur > fprev) {
        prev = cur;
        fprev = fcur;
        h *= 2.0;
        cur = prev + dir * h;
        fcur = f(cur);
        if (h > 1e8) throw ConvergenceError("reverse_stress: depth does not decay along the hyperplane");
      }
      const double back = prev - dir * h;
      const auto best = detail::axis_maximize(f, std::min(back, cur), std::max(back, cur));
      converged = converged && best.converged;
      best_star = on_plane(Vector::Constant(1, best.t));
    } else {
      auto [c, ok] = nelder_mead_max([&](const Vector& c) { return depth_at(on_plane(c)); }, start, 0.5, 2000);
      converged = converged && ok;
      best_star = on_plane(c);
    }
  }
  out.point = red.from_canonical(best_star);
  out.depth = hd_canonical(law, best_star, options).depth;
  out.converged = converged;
  return out;
}

}  // namespace skewdepth
