#include "skewdepth/expectile_depth.hpp"

#include <cmath>
#include <numbers>

#include "directional.hpp"
#include "skewdepth/errors.hpp"
#include "skewdepth/specfun.hpp"

namespace skewdepth {

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

void require_finite_mean(const CanonicalForm& law) {
  if (!law.has_finite_mean()) throw ContractError("expectile undefined: law has infinite mean");
}

bool is_standard_sn(const UnivariateLaw& law) {
  return (law.family() == Family::SN || law.family() == Family::Normal) && law.location() == 0.0 &&
         law.scale2() == 1.0;
}

// Lower and upper Jones probabilities share the partial expectations.
detail::TermValue ed_term(const UnivariateLaw& law, double a) {
  if (is_standard_sn(law)) {
    const double lower = csn_tilde_cdf(law.skew(), a);
    if (lower <= 0.5) return {lower, false};
    return {1.0 - lower, true};
  }
  const PartialExpectations pe = partial_expectations(law, a);
  const double total = pe.below + pe.above;
  if (!(total > 0.0)) return {0.0, false};
  if (pe.below <= pe.above) return {pe.below / total, false};
  return {pe.above / total, true};
}

double ed_level(const UnivariateLaw& law, double theta, double hint) {
  return std::isnan(hint) ? expectile(law, theta) : expectile(law, theta, hint);
}

}  // namespace

double csn_tilde_cdf(double gamma, double y) {
  const double delta = gamma / std::sqrt(1.0 + gamma * gamma);
  const double m = delta * kSqrt2OverPi;
  const double f = 2.0 * specfun::normal_pdf(y) * specfun::normal_cdf(gamma * y);
  // F(y) = Phi(y) - 2 T(y, gamma).
  const double F = specfun::normal_cdf(y) - 2.0 * specfun::owens_t(y, gamma);
  const double p = y * F + f - m * specfun::normal_cdf(std::sqrt(1.0 + gamma * gamma) * y);
  return p / (2.0 * p + m - y);
}

double tilde_half_space_prob(const MultivariateLaw& law, const Vector& x, const Vector& u) {
  const int d = std::visit([](const auto& p) { return p.dimension(); }, law);
  if (u.size() != d || x.size() != d) throw DomainError("tilde_half_space_prob: dimension mismatch");
  if (std::abs(u.norm() - 1.0) > 1e-12) throw DomainError("tilde_half_space_prob: direction must have unit norm");
  return jones_cdf(linear_projection(law, u), u.dot(x));
}

DepthResult ed(const CanonicalForm& law, const Vector& x, const DepthOptions& options) {
  require_finite_mean(law);
  return detail::depth_original(law, x, ed_term, options);
}

DepthResult ed_canonical(const CanonicalForm& law, const Vector& x_star, const DepthOptions& options) {
  require_finite_mean(law);
  return detail::depth_canonical(law, x_star, ed_term, options);
}

namespace {

struct AxisResult {
  double t;
  double depth;
  bool flat;
  bool converged;
};

AxisResult ed_axis_max(const CanonicalForm& law, const DepthOptions& options) {
  require_finite_mean(law);
  const UnivariateLaw first = law.projection(1.0);
  if (law.dimension() == 1) return {expectile(first, 0.5), 0.5, false, true};
  bool converged = true;
  auto f = [&](double t) {
    Vector x = Vector::Zero(law.dimension());
    x(0) = t;
    const DepthResult r = ed_canonical(law, x, options);
    converged = converged && r.converged;
    return r.depth;
  };
  const auto best = detail::axis_maximize(f, expectile(first, 0.1), expectile(first, 0.9));
  return {best.t, best.value, best.flat, converged && best.converged};
}

}  // namespace

MedianResult ed_maximizer(const CanonicalForm& law, const DepthOptions& options) {
  const AxisResult a = ed_axis_max(law, options);
  Vector x = Vector::Zero(law.dimension());
  x(0) = a.t;
  MedianResult out;
  out.point = law.reduction().from_canonical(x);
  out.depth = a.depth;
  out.multiple = a.flat;
  out.converged = a.converged;
  return out;
}

ContourPolyline ed_contour(const CanonicalForm& law, double alpha, const ContourOptions& options) {
  if (law.dimension() != 2) throw DomainError("ed_contour: law must be bivariate");
  detail::require_alpha(alpha, true);
  const AxisResult a = ed_axis_max(law, options.depth);
  return detail::trace_contour(law, alpha, a.t, a.depth, ed_term, ed_level, options);
}

double expectile_support_value(const MultivariateLaw& law, const Vector& u, double theta) {
  const int d = std::visit([](const auto& p) { return p.dimension(); }, law);
  if (u.size() != d || !u.allFinite() || u.norm() == 0.0) {
    throw DomainError("expectile_support_value: direction must be a finite nonzero vector of the law's dimension");
  }
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("expectile_support_value: theta must lie in (0, 1)");
  // e_theta(k u) = k e_theta(u) for k > 0: evaluate on the unit vector and rescale.
  const double k = u.norm();
  const UnivariateLaw y = linear_projection(law, u / k);
  if (!y.has_finite_mean()) throw ContractError("expectile undefined: law has infinite mean");
  return k * expectile(y, theta);
}

}  // namespace skewdepth
