#pragma once

#include "skewdepth/multivariate.hpp"

namespace skewdepth {

/// Direction search settings shared by hd and ed. The search runs over the
/// angle phi in [0, pi] of the canonical frame: a grid seed of `grid`
/// intervals, Brent refinement of the best local minima, then restarts on a
/// grid twice as fine until the objective changes by less than `tolerance`.
struct DepthOptions {
  int grid = 64;
  int max_phases = 5;
  double tolerance = 1e-7;
  /// Directional probabilities below this are treated as depth 0 without refinement.
  double zero_cutoff = 1e-12;
};

struct DepthResult {
  double depth = 0.0;
  bool converged = true;
  /// Unit normal (original coordinates) of a minimizing half-space {y : u'y <= u'x}.
  Vector direction;
  int evaluations = 0;
};

/// {x : (x - center)' shape (x - center) <= 1}. A degenerate ellipsoid is the
/// single point `center` and carries an empty shape matrix.
struct Ellipsoid {
  Vector center;
  Matrix shape;
  bool degenerate = false;

  bool contains(const Vector& x) const;
};

/// Closed convex polygon approximating the boundary of a depth set in the plane.
struct ContourPolyline {
  double alpha = 0.0;
  /// The depth set is empty (alpha exceeds the maximal depth).
  bool empty = false;
  /// n x 2, counter-clockwise, original coordinates.
  Matrix vertices;
  /// Same vertices, same order, in the canonical frame x* = A x + b.
  Matrix canonical_vertices;
  Matrix frame_A;
  Vector frame_b;
  /// Interior anchor point (original coordinates).
  Vector anchor;

  /// Point-in-convex-polygon test in original coordinates.
  bool contains(const Vector& x) const;
};

enum class ContourMethod {
  /// Boundary of the intersection of the half-planes u'x <= q(u) over a dense
  /// set of directions, read off along each ray from the anchor.
  Envelope,
  /// Bisection on depth(anchor + t v) = alpha along each ray.
  RadialBisection,
};

struct ContourOptions {
  int n_vertices = 360;
  /// Directions in [0, pi] used by the envelope method.
  int directions = 4096;
  ContourMethod method = ContourMethod::Envelope;
  /// Radial bisection stops once |depth - alpha| is below this.
  double tolerance = 1e-4;
  DepthOptions depth;
};

struct MedianResult {
  Vector point;
  double depth = 0.0;
  /// The depth is flat along the axis over more than the search tolerance;
  /// `point` is then the midpoint of the flat stretch.
  bool multiple = false;
  bool converged = true;
};

struct StressResult {
  Vector point;
  double depth = 0.0;
  /// The half-space median already lies in the ruin set.
  bool median_in_ruin_set = false;
  bool converged = true;
};

/// P(u'X <= u'x) for unit u (tolerance 1e-12 on the norm).
double half_space_prob(const MultivariateLaw& law, const Vector& x, const Vector& u);

/// Half-space depth, computed in the canonical frame.
DepthResult hd(const CanonicalForm& law, const Vector& x, const DepthOptions& options = {});
/// Half-space depth of a point given in canonical coordinates.
DepthResult hd_canonical(const CanonicalForm& law, const Vector& x_star, const DepthOptions& options = {});

/// Boundary of Q_alpha for a bivariate law, traced around the half-space median.
ContourPolyline hd_contour(const CanonicalForm& law, double alpha, const ContourOptions& options = {});

/// Exact depth set of a skew-Cauchy law: a ball in the canonical frame, mapped back.
Ellipsoid sc_contour_exact(const STParams& law, double alpha);

/// Maximizer of hd, searched along the canonical first axis.
MedianResult half_space_median(const CanonicalForm& law, const DepthOptions& options = {});

/// 1/2 minus the depth at the half-space median.
double d1(const CanonicalForm& law, const DepthOptions& options = {});
/// 1/2 minus the depth at the canonical component-wise median.
double d2(const CanonicalForm& law, const DepthOptions& options = {});
/// Canonical component-wise median (first coordinate the median of X*_1, others 0).
Vector canonical_componentwise_median(const CanonicalForm& law);

/// Deepest point of the ruin set {x : w'x >= l0}.
StressResult reverse_stress(const CanonicalForm& law, const Vector& w, double l0, const DepthOptions& options = {});

}  // namespace skewdepth
