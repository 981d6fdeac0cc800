#pragma once

#include <vector>

#include "skewdepth/depth.hpp"

namespace skewdepth {

/// Axis-aligned ellipsoid of the canonical frame:
/// sum_i (x*_i - center_i)^2 / half_axes_i^2 <= 1.
struct CanonicalEllipsoid {
  Vector center;
  Vector half_axes;
};

/// Per-component alpha and (1 - alpha) quantiles of the canonical law.
CanonicalEllipsoid canonical_ellipsoid_approx(const CanonicalForm& law, double alpha);

/// Ellipsoidal approximation of Q_alpha in original coordinates: center
/// A^-1 (c - b), shape A' D A with D = diag(half_axes^-2).
Ellipsoid ellipsoid_approx(const CanonicalForm& law, double alpha);

struct GridSpec {
  int resolution = 0;  // cells per axis
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double cell_area = 0.0;
};

struct MisclassOptions {
  int grid = 600;
  /// Contour resolution; raised to at least 720.
  int n_vertices = 720;
  int directions = 4096;
  /// Repeat at twice the resolution and flag changes above the tolerance.
  bool refinement_check = true;
  double refinement_tolerance = 1e-3;
  DepthOptions depth;
};

struct MisclassReport {
  double alpha = 0.0;
  double p_false_negative = 0.0;  // mass of Q_alpha minus the ellipsoid
  double p_false_positive = 0.0;  // mass of the ellipsoid minus Q_alpha
  /// Grid in the canonical frame.
  GridSpec grid;
  bool refinement_checked = false;
  bool refinement_stable = true;
  double refinement_change = 0.0;
};

/// Misclassification masses of the ellipsoidal approximation of Q_alpha for
/// a bivariate law, by cell-sum quadrature on a regular grid of the
/// canonical frame.
MisclassReport misclassification(const CanonicalForm& law, double alpha, const MisclassOptions& options = {});

enum class SweepFamily { ST, GHSkewT, NIG };

struct SweepRow {
  double skew = 0.0;
  double shape = 0.0;  // nu for ST and GH skew-t, psi for NIG
  double d2 = 0.0;
};

/// d2 of the bivariate canonical law of the family for every (skew, shape) pair.
std::vector<SweepRow> d2_sweep(SweepFamily family, const std::vector<double>& skews,
                               const std::vector<double>& shapes, const DepthOptions& options = {});

/// Canonical bivariate law of a sweep family.
CanonicalForm sweep_law(SweepFamily family, double skew, double shape);

}  // namespace skewdepth
