#include "skewdepth/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "directional.hpp"
#include "skewdepth/errors.hpp"

namespace skewdepth {

CanonicalEllipsoid canonical_ellipsoid_approx(const CanonicalForm& law, double alpha) {
  detail::require_alpha(alpha, false);
  const int d = law.dimension();
  CanonicalEllipsoid e{Vector::Zero(d), Vector::Zero(d)};
  const UnivariateLaw first = law.projection(1.0);
  const double a = quantile(first, alpha);
  const double b = quantile(first, 1.0 - alpha);
  e.center(0) = 0.5 * (a + b);
  e.half_axes(0) = 0.5 * std::abs(a - b);
  if (d > 1) {
    // Remaining canonical components share one symmetric law.
    const UnivariateLaw other = law.projection(0.0);
    const double hi = quantile(other, 1.0 - alpha);
    const double lo = quantile(other, alpha);
    for (int i = 1; i < d; ++i) e.half_axes(i) = 0.5 * std::abs(hi - lo);
  }
  return e;
}

Ellipsoid ellipsoid_approx(const CanonicalForm& law, double alpha) {
  const CanonicalEllipsoid ce = canonical_ellipsoid_approx(law, alpha);
  const auto& red = law.reduction();
  Ellipsoid e;
  e.center = red.from_canonical(ce.center);
  const Vector dinv = ce.half_axes.cwiseInverse().cwiseAbs2();
  e.shape = red.A.transpose() * dinv.asDiagonal() * red.A;
  e.shape = 0.5 * (e.shape + e.shape.transpose()).eval();
  return e;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Star-shaped polygon around an anchor, with vertices sorted by angle.
class PolarPolygon {
 public:
  PolarPolygon(const Matrix& vertices, double ax, double ay) : ax_(ax), ay_(ay) {
    const auto n = vertices.rows();
    pts_.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      const double dx = vertices(k, 0) - ax;
      const double dy = vertices(k, 1) - ay;
      double ang = std::atan2(dy, dx);
      if (ang < 0.0) ang += kTwoPi;
      pts_.push_back({ang, dx, dy});
    }
    std::sort(pts_.begin(), pts_.end(), [](const P& a, const P& b) { return a.ang < b.ang; });
  }

  bool contains(double x, double y) const {
    const double dx = x - ax_;
    const double dy = y - ay_;
    double ang = std::atan2(dy, dx);
    if (ang < 0.0) ang += kTwoPi;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), ang, [](double a, const P& p) { return a < p.ang; });
    const P& b = it == pts_.end() ? pts_.front() : *it;
    const P& a = it == pts_.begin() ? pts_.back() : *(it - 1);
    // Inside iff the point is on the anchor side of edge a -> b.
    const double cross = (b.x - a.x) * (dy - a.y) - (b.y - a.y) * (dx - a.x);
    return cross >= 0.0;
  }

  void bounds(double& x0, double& x1, double& y0, double& y1) const {
    for (const P& p : pts_) {
      x0 = std::min(x0, ax_ + p.x);
      x1 = std::max(x1, ax_ + p.x);
      y0 = std::min(y0, ay_ + p.y);
      y1 = std::max(y1, ay_ + p.y);
    }
  }

 private:
  struct P {
    double ang, x, y;
  };
  double ax_, ay_;
  std::vector<P> pts_;
};

struct Masses {
  double m1, m2;
};

// Cells whose corners agree on both memberships use the midpoint; cells cut by
// either boundary are split into kSub x kSub subcells.
constexpr int kSub = 8;

Masses grid_masses(const CanonicalForm& law, const PolarPolygon& poly, const CanonicalEllipsoid& ell,
                   const GridSpec& g) {
  const int n = g.resolution;
  const double hx = (g.x_max - g.x_min) / n;
  const double hy = (g.y_max - g.y_min) / n;
  const double cx = ell.center(0);
  const double rx = ell.half_axes(0);
  const double ry = ell.half_axes(1);
  auto state = [&](double x, double y) {
    const double ex = (x - cx) / rx;
    const double ey = y / ry;
    return (ex * ex + ey * ey <= 1.0 ? 1 : 0) | (poly.contains(x, y) ? 2 : 0);
  };
  Vector pt(2);
  auto mass = [&](double x, double y, int st, double& r1, double& r2, double w) {
    if (st == 0 || st == 3) return;
    pt << x, y;
    (st == 2 ? r1 : r2) += w * std::exp(law.canonical_log_density(pt));
  };
  std::vector<int> lower(n + 1);
  std::vector<int> upper(n + 1);
  for (int i = 0; i <= n; ++i) lower[i] = state(g.x_min + i * hx, g.y_min);
  double m1 = 0.0;
  double m2 = 0.0;
  // Rows are summed separately and then combined, keeping the reduction order fixed.
  for (int j = 0; j < n; ++j) {
    const double y0 = g.y_min + j * hy;
    for (int i = 0; i <= n; ++i) upper[i] = state(g.x_min + i * hx, y0 + hy);
    double r1 = 0.0;
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x0 = g.x_min + i * hx;
      const int c = lower[i];
      if (lower[i + 1] == c && upper[i] == c && upper[i + 1] == c) {
        mass(x0 + 0.5 * hx, y0 + 0.5 * hy, state(x0 + 0.5 * hx, y0 + 0.5 * hy), r1, r2, 1.0);
        continue;
      }
      const double sx = hx / kSub;
      const double sy = hy / kSub;
      for (int b = 0; b < kSub; ++b) {
        for (int a = 0; a < kSub; ++a) {
          const double x = x0 + (a + 0.5) * sx;
          const double y = y0 + (b + 0.5) * sy;
          mass(x, y, state(x, y), r1, r2, 1.0 / (kSub * kSub));
        }
      }
    }
    m1 += r1;
    m2 += r2;
    std::swap(lower, upper);
  }
  return {m1 * g.cell_area, m2 * g.cell_area};
}

}  // namespace

MisclassReport misclassification(const CanonicalForm& law, double alpha, const MisclassOptions& options) {
  if (law.dimension() != 2) throw DomainError("misclassification: law must be bivariate");
  detail::require_alpha(alpha, false);
  if (options.grid < 10) throw DomainError("misclassification: grid resolution must be at least 10");

  ContourOptions copt;
  copt.n_vertices = std::max(options.n_vertices, 720);
  copt.directions = options.directions;
  copt.depth = options.depth;
  const ContourPolyline contour = hd_contour(law, alpha, copt);
  if (contour.empty) throw DomainError("misclassification: depth set is empty at this alpha");
  const CanonicalEllipsoid ell = canonical_ellipsoid_approx(law, alpha);

  const Vector anchor = law.reduction().to_canonical(contour.anchor);
  const PolarPolygon poly(contour.canonical_vertices, anchor(0), 0.0);

  // Grid box: bounding box of both sets, padded by 5% of its extent.
  double x0 = ell.center(0) - ell.half_axes(0);
  double x1 = ell.center(0) + ell.half_axes(0);
  double y0 = -ell.half_axes(1);
  double y1 = ell.half_axes(1);
  poly.bounds(x0, x1, y0, y1);
  const double padx = 0.05 * (x1 - x0);
  const double pady = 0.05 * (y1 - y0);
  const double ymax = std::max(std::abs(y0), std::abs(y1)) + pady;

  auto spec = [&](int n) {
    GridSpec g;
    g.resolution = n;
    g.x_min = x0 - padx;
    g.x_max = x1 + padx;
    g.y_min = -ymax;
    g.y_max = ymax;
    g.cell_area = (g.x_max - g.x_min) * (g.y_max - g.y_min) / (static_cast<double>(n) * n);
    return g;
  };

  MisclassReport rep;
  rep.alpha = alpha;
  rep.grid = spec(options.grid);
  const Masses base = grid_masses(law, poly, ell, rep.grid);
  rep.p_false_negative = std::clamp(base.m1, 0.0, 1.0);
  rep.p_false_positive = std::clamp(base.m2, 0.0, 1.0);
  if (options.refinement_check) {
    const Masses finer = grid_masses(law, poly, ell, spec(2 * options.grid));
    rep.refinement_checked = true;
    rep.refinement_change = std::max(std::abs(finer.m1 - base.m1), std::abs(finer.m2 - base.m2));
    rep.refinement_stable = rep.refinement_change < options.refinement_tolerance;
  }
  return rep;
}

CanonicalForm sweep_law(SweepFamily family, double skew, double shape) {
  switch (family) {
    case SweepFamily::ST: return CanonicalForm(STParams::canonical(2, skew, shape));
    case SweepFamily::GHSkewT: {
      if (!(shape > 0.0 && std::isfinite(shape))) throw DomainError("sweep: nu must be positive and finite");
      return CanonicalForm(GHParams::canonical(2, skew, -0.5 * shape, shape, 0.0));
    }
    case SweepFamily::NIG: {
      if (!(shape > 0.0)) throw DomainError("sweep: psi must be positive");
      return CanonicalForm(GHParams::canonical(2, skew, -0.5, shape, shape));
    }
  }
  throw DomainError("sweep: unknown family");
}

std::vector<SweepRow> d2_sweep(SweepFamily family, const std::vector<double>& skews,
                               const std::vector<double>& shapes, const DepthOptions& options) {
  std::vector<SweepRow> rows;
  rows.reserve(skews.size() * shapes.size());
  for (double s : skews) {
    for (double sh : shapes) rows.push_back({s, sh, d2(sweep_law(family, s, sh), options)});
  }
  return rows;
}

}  // namespace skewdepth
