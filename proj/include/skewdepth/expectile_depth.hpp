#pragma once

#include "skewdepth/depth.hpp"

namespace skewdepth {

/// Jones-transform probability of the half-space {y : u'y <= u'x}: the
/// distribution function whose quantiles are expectiles, evaluated for the
/// projected law u'X at u'x. Requires a finite mean (ContractError otherwise).
double tilde_half_space_prob(const MultivariateLaw& law, const Vector& x, const Vector& u);

/// Closed form of the Jones transform of CSN_1(gamma) at y:
///   p(y) / (2 p(y) + delta sqrt(2/pi) - y),
///   p(y) = y F(y) + f(y) - delta sqrt(2/pi) Phi(sqrt(1 + gamma^2) y).
double csn_tilde_cdf(double gamma, double y);

/// Expectile depth, computed in the canonical frame with the same direction
/// search as hd.
DepthResult ed(const CanonicalForm& law, const Vector& x, const DepthOptions& options = {});
DepthResult ed_canonical(const CanonicalForm& law, const Vector& x_star, const DepthOptions& options = {});

/// Maximizer of ed, searched along the canonical first axis.
MedianResult ed_maximizer(const CanonicalForm& law, const DepthOptions& options = {});

/// Boundary of E_alpha for a bivariate law, traced around the ed maximizer.
ContourPolyline ed_contour(const CanonicalForm& law, double alpha, const ContourOptions& options = {});

/// theta-expectile of u'X for any nonzero u (positively homogeneous in u).
double expectile_support_value(const MultivariateLaw& law, const Vector& u, double theta);

}  // namespace skewdepth
