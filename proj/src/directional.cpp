#include "directional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "skewdepth/errors.hpp"

namespace skewdepth::detail {

namespace {

constexpr double kPi = std::numbers::pi;

struct Sample {
  double phi;
  TermValue term;
};

}  // namespace

void require_alpha(double alpha, bool allow_half) {
  const bool ok = alpha > 0.0 && (allow_half ? alpha <= 0.5 : alpha < 0.5);
  if (!ok) throw DomainError(allow_half ? "alpha must lie in (0, 0.5]" : "alpha must lie in (0, 0.5)");
}

// In the canonical frame u'X* depends on u only through u_1 = cos(phi). For a
// point (x1, rest) the smallest probability among directions with that u_1 is
// attained at u = (cos phi, -sin phi rest/|rest|), so the infimum over the
// sphere is a search over phi in [0, pi].
DepthResult depth_canonical(const CanonicalForm& law, const Vector& x_star, const Term& term,
                            const DepthOptions& options) {
  const int d = law.dimension();
  if (x_star.size() != d) throw DomainError("depth: point dimension does not match the law");
  if (!x_star.allFinite()) throw DomainError("depth: point must be finite");
  DepthResult result;
  result.direction = Vector::Zero(d);

  if (d == 1) {
    const TermValue tv = term(law.projection(1.0), x_star(0));
    result.depth = tv.value;
    result.direction(0) = tv.upper ? -1.0 : 1.0;
    result.evaluations = 1;
    return result;
  }

  const double x1 = x_star(0);
  const double r = x_star.tail(d - 1).norm();
  Vector e_rest = Vector::Zero(d - 1);
  if (r > 0.0) {
    e_rest = x_star.tail(d - 1) / r;
  } else {
    e_rest(0) = 1.0;
  }

  int evaluations = 0;
  auto eval = [&](double phi) {
    ++evaluations;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return term(law.projection(c), x1 * c - r * s);
  };

  const int n0 = std::max(options.grid, 4);
  std::vector<Sample> grid;
  grid.reserve(static_cast<std::size_t>(n0) + 1);
  for (int i = 0; i <= n0; ++i) {
    const double phi = kPi * i / n0;
    grid.push_back({phi, eval(phi)});
  }

  Sample best = *std::min_element(grid.begin(), grid.end(),
                                  [](const Sample& a, const Sample& b) { return a.term.value < b.term.value; });

  auto finish = [&](const Sample& s, bool converged) {
    result.depth = std::max(0.0, s.term.value);
    result.converged = converged;
    Vector u(d);
    u(0) = std::cos(s.phi);
    u.tail(d - 1) = -std::sin(s.phi) * e_rest;
    result.direction = s.term.upper ? Vector(-u) : u;
    result.evaluations = evaluations;
    return result;
  };

  if (best.term.value < options.zero_cutoff) {
    best.term.value = 0.0;
    return finish(best, true);
  }

  // Brent refinement around the smallest local minima of the current grid.
  auto refine = [&](const std::vector<Sample>& g) {
    std::vector<std::size_t> minima;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const bool left = i == 0 || g[i].term.value <= g[i - 1].term.value;
      const bool right = i + 1 == g.size() || g[i].term.value <= g[i + 1].term.value;
      if (left && right) minima.push_back(i);
    }
    std::sort(minima.begin(), minima.end(),
              [&](std::size_t a, std::size_t b) { return g[a].term.value < g[b].term.value; });
    if (minima.size() > 3) minima.resize(3);
    Sample out = *std::min_element(g.begin(), g.end(),
                                   [](const Sample& a, const Sample& b) { return a.term.value < b.term.value; });
    for (std::size_t i : minima) {
      const double lo = g[i == 0 ? 0 : i - 1].phi;
      const double hi = g[i + 1 == g.size() ? i : i + 1].phi;
      std::uintmax_t iters = 80;
      const auto br = boost::math::tools::brent_find_minima([&](double phi) { return eval(phi).value; }, lo, hi, 30,
                                                            iters);
      if (br.second < out.term.value) out = {br.first, eval(br.first)};
    }
    return out;
  };

  best = refine(grid);
  for (int phase = 1; phase < options.max_phases; ++phase) {
    const int n = static_cast<int>(grid.size()) - 1;
    std::vector<Sample> finer;
    finer.reserve(2 * grid.size());
    for (int i = 0; i < n; ++i) {
      finer.push_back(grid[i]);
      const double phi = 0.5 * (grid[i].phi + grid[i + 1].phi);
      finer.push_back({phi, eval(phi)});
    }
    finer.push_back(grid.back());
    grid.swap(finer);
    Sample next = refine(grid);
    if (next.term.value > best.term.value) next = best;
    const double change = best.term.value - next.term.value;
    best = next;
    if (change < options.tolerance) return finish(best, true);
  }
  return finish(best, false);
}

DepthResult depth_original(const CanonicalForm& law, const Vector& x, const Term& term, const DepthOptions& options) {
  if (x.size() != law.dimension()) throw DomainError("depth: point dimension does not match the law");
  DepthResult res = depth_canonical(law, law.reduction().to_canonical(x), term, options);
  // {y* : u'y* <= u'x*} is {y : (A'u)'y <= (A'u)'x} in original coordinates.
  const Vector n = law.reduction().A.transpose() * res.direction;
  res.direction = n / n.norm();
  return res;
}

AxisMaximum axis_maximize(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  const auto br = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, lo, hi, 40, iters);
  AxisMaximum out{br.first, -br.second, false, iters < 200 && std::isfinite(br.second)};

  // A flat top shows up as equal values a small step to either side.
  const double width = hi - lo;
  const double h = 1e-4 * width;
  constexpr double kFlat = 1e-10;
  if (f(out.t - h) < out.value - kFlat || f(out.t + h) < out.value - kFlat) return out;

  auto edge = [&](double sign) {
    double inside = out.t;
    double step = h;
    double outside = out.t + sign * step;
    while (f(outside) >= out.value - kFlat) {
      inside = outside;
      step *= 2.0;
      outside = out.t + sign * step;
      if (std::abs(outside - out.t) > width) return outside;
    }
    for (int i = 0; i < 60 && std::abs(outside - inside) > 1e-9 * width; ++i) {
      const double mid = 0.5 * (inside + outside);
      (f(mid) >= out.value - kFlat ? inside : outside) = mid;
    }
    return inside;
  };
  const double left = edge(-1.0);
  const double right = edge(1.0);
  if (right - left > 2.0 * h) {
    out.flat = true;
    out.t = 0.5 * (left + right);
    out.value = f(out.t);
  }
  return out;
}

ContourPolyline trace_contour(const CanonicalForm& law, double alpha, double anchor_t, double anchor_depth,
                              const Term& term, const Level& level, const ContourOptions& options) {
  if (law.dimension() != 2) throw DomainError("contour: law must be bivariate");
  require_alpha(alpha, true);
  if (options.n_vertices < 8) throw DomainError("contour: at least 8 vertices are required");
  if (options.directions < 16) throw DomainError("contour: at least 16 directions are required");

  const auto& red = law.reduction();
  ContourPolyline poly;
  poly.alpha = alpha;
  poly.frame_A = red.A;
  poly.frame_b = red.b;
  Vector anchor_star(2);
  anchor_star << anchor_t, 0.0;
  poly.anchor = red.from_canonical(anchor_star);
  if (alpha > anchor_depth + 1e-12) {
    poly.empty = true;
    poly.vertices.resize(0, 2);
    poly.canonical_vertices.resize(0, 2);
    return poly;
  }

  const int n = options.n_vertices;
  const int upper = n / 2;  // rays 0..upper cover angles in [0, pi]
  std::vector<double> radius(static_cast<std::size_t>(upper) + 1);

  if (options.method == ContourMethod::Envelope) {
    const int m = options.directions;
    std::vector<double> cs(m + 1), sn(m + 1), slack(m + 1);
    double hint = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j <= m; ++j) {
      const double th = kPi * j / m;
      cs[j] = std::cos(th);
      sn[j] = std::sin(th);
      const double lvl = level(law.projection(cs[j]), 1.0 - alpha, hint);
      hint = lvl;
      slack[j] = std::max(0.0, lvl - cs[j] * anchor_t);
    }
    // Mirror symmetry: direction (c, -s) carries the same level as (c, s).
    for (int k = 0; k <= upper; ++k) {
      const double psi = 2.0 * kPi * k / n;
      const double vc = std::cos(psi);
      const double vs = std::sin(psi);
      double r = std::numeric_limits<double>::infinity();
      for (int j = 0; j <= m; ++j) {
        const double base = cs[j] * vc;
        const double side = sn[j] * vs;
        const double d1 = base + side;
        const double d2 = base - side;
        if (d1 > 1e-14) r = std::min(r, slack[j] / d1);
        if (d2 > 1e-14) r = std::min(r, slack[j] / d2);
      }
      radius[k] = r;
    }
  } else {
    for (int k = 0; k <= upper; ++k) {
      const double psi = 2.0 * kPi * k / n;
      Vector v(2);
      v << std::cos(psi), std::sin(psi);
      auto depth_at = [&](double t) { return depth_canonical(law, anchor_star + t * v, term, options.depth).depth; };
      double lo = 0.0;
      double hi = 1.0;
      while (depth_at(hi) >= alpha) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw ConvergenceError("contour: depth set appears unbounded");
      }
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double dm = depth_at(mid);
        (dm >= alpha ? lo : hi) = mid;
        if (hi - lo <= 1e-9 * std::max(1.0, hi) && std::abs(dm - alpha) <= options.tolerance) break;
      }
      radius[k] = 0.5 * (lo + hi);
    }
  }

  poly.canonical_vertices.resize(n, 2);
  for (int k = 0; k < n; ++k) {
    const bool mirrored = k > upper;
    const int src = mirrored ? n - k : k;
    const double psi = 2.0 * kPi * src / n;
    const double r = radius[src];
    poly.canonical_vertices(k, 0) = anchor_t + r * std::cos(psi);
    poly.canonical_vertices(k, 1) = (mirrored ? -1.0 : 1.0) * r * std::sin(psi);
  }
  if (red.A_inv.determinant() < 0.0) {
    poly.canonical_vertices = poly.canonical_vertices.colwise().reverse().eval();
  }
  poly.vertices.resize(n, 2);
  for (int k = 0; k < n; ++k) {
    poly.vertices.row(k) = red.from_canonical(poly.canonical_vertices.row(k).transpose()).transpose();
  }
  return poly;
}

}  // namespace skewdepth::detail
