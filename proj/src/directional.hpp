#pragma once

// Machinery shared by half-space depth and expectile depth. Both are
// infima over directions of a one-dimensional probability of the projected
// law, and both depth sets are intersections of half-planes u'x <= L(u).

#include <functional>

#include "skewdepth/depth.hpp"
#include "skewdepth/multivariate.hpp"

namespace skewdepth::detail {

struct TermValue {
  double value;  // min of lower and upper probability, in [0, 1/2]
  bool upper;    // the upper probability is the smaller one
};

/// Probability of {Y <= a} and {Y >= a} under the projected law Y.
using Term = std::function<TermValue(const UnivariateLaw&, double)>;

/// Level L(u) of the half-plane u'x <= L(u) at probability theta; the hint is
/// the level of a neighbouring direction.
using Level = std::function<double(const UnivariateLaw&, double theta, double hint)>;

/// Depth of a point with canonical coordinates x_star under the given term.
DepthResult depth_canonical(const CanonicalForm& law, const Vector& x_star, const Term& term,
                            const DepthOptions& options);

/// Same for a point in original coordinates; the direction is mapped back.
DepthResult depth_original(const CanonicalForm& law, const Vector& x, const Term& term, const DepthOptions& options);

/// Maximizer of f over [lo, hi] for a quasiconcave f, with flat-top detection.
struct AxisMaximum {
  double t;
  double value;
  bool flat;
  bool converged;
};
AxisMaximum axis_maximize(const std::function<double(double)>& f, double lo, double hi);

/// Contour of {depth >= alpha} for a bivariate law around the anchor
/// (t, 0) of the canonical frame.
ContourPolyline trace_contour(const CanonicalForm& law, double alpha, double anchor_t, double anchor_depth,
                              const Term& term, const Level& level, const ContourOptions& options);

void require_alpha(double alpha, bool allow_half);

}  // namespace skewdepth::detail
