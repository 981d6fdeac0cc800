#include "skewdepth/multivariate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "gh_kernel.hpp"
#include "skewdepth/errors.hpp"
#include "skewdepth/specfun.hpp"

namespace skewdepth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void check_vector(const Vector& v, int d, const std::string& field) {
  require(v.size() == d, field + ": expected " + std::to_string(d) + " elements, got " + std::to_string(v.size()));
  require(v.allFinite(), field + ": entries must be finite");
}

Eigen::LLT<Matrix> check_dispersion(const Matrix& m, int d, const std::string& field) {
  require(m.rows() == d && m.cols() == d, field + ": expected a " + std::to_string(d) + "x" + std::to_string(d) +
                                              " matrix");
  require(m.allFinite(), field + ": entries must be finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, field + ": matrix is not symmetric");
  Eigen::LLT<Matrix> llt(m);
  require(llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0,
          field + ": matrix is not positive-definite");
  return llt;
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// Orthogonal P with P e_1 = p for a unit vector p (Householder reflection).
Matrix householder_completion(const Vector& p) {
  const int d = static_cast<int>(p.size());
  Matrix P = Matrix::Identity(d, d);
  Vector v = p;
  v(0) -= 1.0;
  const double vv = v.squaredNorm();
  if (vv < 1e-30) return P;
  P -= (2.0 / vv) * v * v.transpose();
  return P;
}

// log(2 T(a; k)), k = +inf for the normal case.
double log_twice_t_cdf(double a, double k) {
  if (std::isinf(k)) return std::log(2.0 * specfun::normal_cdf(a));
  return std::log(2.0 * specfun::student_t_cdf(a, k));
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter bundles

void STParams::validate() const {
  const int d = dimension();
  require(d >= 1, "location: dimension must be at least 1");
  check_vector(xi, d, "location");
  check_dispersion(omega, d, "dispersion");
  check_vector(gamma, d, "skewness");
  require(nu > 0.0 && !std::isnan(nu), "shape.nu: degrees of freedom must be positive");
}

STParams STParams::canonical(int d, double gamma, double nu) {
  require(d >= 1, "canonical: dimension must be at least 1");
  STParams p{Vector::Zero(d), Matrix::Identity(d, d), Vector::Zero(d), nu};
  p.gamma(0) = gamma;
  p.validate();
  return p;
}

void GHParams::validate() const {
  const int d = dimension();
  require(d >= 1, "location: dimension must be at least 1");
  check_vector(mu, d, "location");
  check_dispersion(sigma, d, "dispersion");
  check_vector(kappa, d, "skewness");
  try {
    Gig(lambda, chi, psi);
  } catch (const DomainError& e) {
    throw DomainError(std::string("shape: ") + e.what());
  }
}

GHParams GHParams::canonical(int d, double kappa, double lambda, double chi, double psi) {
  require(d >= 1, "canonical: dimension must be at least 1");
  GHParams p{Vector::Zero(d), Matrix::Identity(d, d), Vector::Zero(d), lambda, chi, psi};
  p.kappa(0) = kappa;
  p.validate();
  return p;
}

GHParams GHParams::nig(Vector mu, Matrix sigma, Vector kappa, double chi, double psi) {
  require(chi > 0.0 && psi > 0.0, "shape: NIG requires chi > 0 and psi > 0");
  const double a = std::sqrt(chi / psi);
  const double common = std::sqrt(chi * psi);
  GHParams p{std::move(mu), a * sigma, a * kappa, -0.5, common, common};
  p.validate();
  return p;
}

GHParams GHParams::skew_t(Vector mu, Matrix sigma, Vector kappa, double nu) {
  require(nu > 0.0 && std::isfinite(nu), "shape.nu: degrees of freedom must be positive and finite");
  GHParams p{std::move(mu), std::move(sigma), std::move(kappa), -0.5 * nu, nu, 0.0};
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Densities

double st_log_pdf(const STParams& p, const Vector& x) {
  const int d = p.dimension();
  require(x.size() == d, "st_pdf: point dimension does not match the law");
  const auto llt = check_dispersion(p.omega, d, "dispersion");
  const Vector diff = x - p.xi;
  const double q = llt.matrixL().solve(diff).squaredNorm();
  const Vector omega_inv = p.omega.diagonal().cwiseSqrt().cwiseInverse();
  const double lin = p.gamma.dot(omega_inv.cwiseProduct(diff));
  const double half_logdet = 0.5 * log_det(llt);
  if (std::isinf(p.nu)) {
    return -0.5 * d * std::log(2.0 * kPi) - half_logdet - 0.5 * q + log_twice_t_cdf(lin, kInf);
  }
  const double nu = p.nu;
  const double log_t = std::lgamma(0.5 * (nu + d)) - std::lgamma(0.5 * nu) - 0.5 * d * std::log(nu * kPi) -
                       half_logdet - 0.5 * (nu + d) * std::log1p(q / nu);
  return log_t + log_twice_t_cdf(lin * std::sqrt((nu + d) / (q + nu)), nu + d);
}

double st_pdf(const STParams& p, const Vector& x) { return std::exp(st_log_pdf(p, x)); }

namespace {

struct GhScalars {
  double q, lin, kq, log_det;
};

GhScalars gh_scalars(const GHParams& p, const Vector& x) {
  const int d = p.dimension();
  require(x.size() == d, "gh_pdf: point dimension does not match the law");
  const auto llt = check_dispersion(p.sigma, d, "dispersion");
  const Vector diff = x - p.mu;
  const Vector si_kappa = llt.solve(p.kappa);
  return {llt.matrixL().solve(diff).squaredNorm(), diff.dot(si_kappa), p.kappa.dot(si_kappa), log_det(llt)};
}

}  // namespace

double gh_log_pdf(const GHParams& p, const Vector& x) {
  const auto s = gh_scalars(p, x);
  const Gig gig = p.mixing();
  if (p.chi > 0.0 && p.psi > 0.0) {
    return detail::gh_log_density_closed(p.dimension(), s.q, s.lin, s.kq, s.log_det, gig);
  }
  return detail::gh_log_density_mixture(p.dimension(), s.q, s.lin, s.kq, s.log_det, gig);
}

double gh_pdf(const GHParams& p, const Vector& x) { return std::exp(gh_log_pdf(p, x)); }

double gh_pdf_mixture(const GHParams& p, const Vector& x) {
  const auto s = gh_scalars(p, x);
  return std::exp(detail::gh_log_density_mixture(p.dimension(), s.q, s.lin, s.kq, s.log_det, p.mixing()));
}

// ---------------------------------------------------------------------------
// Linear forms

namespace {

void check_linear_map(const Matrix& A, const Vector& b, int d) {
  require(A.cols() == d, "linear form: A must have " + std::to_string(d) + " columns");
  require(A.rows() >= 1 && A.rows() <= d, "linear form: A must have between 1 and d rows");
  require(b.size() == A.rows(), "linear form: b must have one entry per row of A");
  require(A.allFinite() && b.allFinite(), "linear form: entries must be finite");
  Eigen::FullPivLU<Matrix> lu(A);
  require(lu.rank() == A.rows(), "linear form: A is rank deficient");
}

}  // namespace

STParams st_linear_form(const STParams& p, const Matrix& A, const Vector& b) {
  p.validate();
  check_linear_map(A, b, p.dimension());
  const Vector omega_inv = p.omega.diagonal().cwiseSqrt().cwiseInverse();
  const Matrix omega_y = A * p.omega * A.transpose();
  const Matrix omega_y_sym = 0.5 * (omega_y + omega_y.transpose());
  const Vector w_y = omega_y_sym.diagonal().cwiseSqrt();
  const Matrix C = omega_inv.asDiagonal() * p.omega * A.transpose();
  const Matrix bar = omega_inv.asDiagonal() * p.omega * omega_inv.asDiagonal();
  Eigen::LLT<Matrix> llt(omega_y_sym);
  require(llt.info() == Eigen::Success, "linear form: A Omega A' is not positive-definite");
  const Matrix proj = C * llt.solve(C.transpose());
  const double excess = p.gamma.dot((bar - proj) * p.gamma);
  const double denom = std::sqrt(1.0 + std::max(0.0, excess));
  const Vector gamma_y = w_y.asDiagonal() * llt.solve(C.transpose() * p.gamma) / denom;
  return STParams{A * p.xi + b, omega_y_sym, gamma_y, p.nu};
}

GHParams gh_linear_form(const GHParams& p, const Matrix& A, const Vector& b) {
  p.validate();
  check_linear_map(A, b, p.dimension());
  const Matrix s = A * p.sigma * A.transpose();
  return GHParams{A * p.mu + b, 0.5 * (s + s.transpose()), A * p.kappa, p.lambda, p.chi, p.psi};
}

// ---------------------------------------------------------------------------
// Canonical reductions

namespace {

CanonicalReduction reduction_from(const Matrix& B, const Vector& first_column, double skew, const Vector& location) {
  const int d = static_cast<int>(B.rows());
  const Matrix P = skew > 0.0 ? householder_completion(first_column) : Matrix::Identity(d, d);
  CanonicalReduction r;
  const Matrix B_inv = B.triangularView<Eigen::Lower>().solve(Matrix::Identity(d, d));
  r.A = P.transpose() * B_inv;
  r.b = -r.A * location;
  r.canonical_skew = skew;
  r.A_inv = B * P;
  return r;
}

}  // namespace

CanonicalReduction canonicalize_st(const STParams& p) {
  p.validate();
  const Matrix B = Eigen::LLT<Matrix>(p.omega).matrixL();
  const Vector omega_inv = p.omega.diagonal().cwiseSqrt().cwiseInverse();
  const Matrix bar = omega_inv.asDiagonal() * p.omega * omega_inv.asDiagonal();
  const double skew = std::sqrt(std::max(0.0, p.gamma.dot(bar * p.gamma)));
  Vector p1 = Vector::Unit(p.dimension(), 0);
  if (skew > 0.0) p1 = B.transpose() * omega_inv.cwiseProduct(p.gamma) / skew;
  return reduction_from(B, p1.normalized(), skew, p.xi);
}

CanonicalReduction canonicalize_gh(const GHParams& p) {
  p.validate();
  const Eigen::LLT<Matrix> llt(p.sigma);
  const Matrix B = llt.matrixL();
  const Vector z = B.triangularView<Eigen::Lower>().solve(p.kappa);
  const double skew = z.norm();
  Vector p1 = Vector::Unit(p.dimension(), 0);
  if (skew > 0.0) p1 = z / skew;
  return reduction_from(B, p1, skew, p.mu);
}

// ---------------------------------------------------------------------------
// Projections

double projected_st_skew(double gamma, double u1) {
  const double rest = std::max(0.0, 1.0 - u1 * u1);
  return u1 * gamma / std::sqrt(1.0 + gamma * gamma * rest);
}

namespace {

double unit_first(const Vector& u, int d) {
  require(u.size() == d, "projection: direction dimension does not match the law");
  require(std::abs(u.norm() - 1.0) <= 1e-12, "projection: direction must have unit norm");
  return u(0);
}

void require_canonical(const Vector& loc, const Matrix& disp, const Vector& skew) {
  const int d = static_cast<int>(loc.size());
  require(loc.cwiseAbs().maxCoeff() <= 1e-12, "projection: law is not canonical (location)");
  require((disp - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12,
          "projection: law is not canonical (dispersion)");
  require(d == 1 || skew.tail(d - 1).cwiseAbs().maxCoeff() <= 1e-12, "projection: law is not canonical (skewness)");
}

}  // namespace

UnivariateLaw project_st(const STParams& canonical, const Vector& u) {
  canonical.validate();
  require_canonical(canonical.xi, canonical.omega, canonical.gamma);
  const double u1 = unit_first(u, canonical.dimension());
  return UnivariateLaw::skew_t(0.0, 1.0, projected_st_skew(canonical.gamma(0), u1), canonical.nu);
}

UnivariateLaw project_gh(const GHParams& canonical, const Vector& u) {
  canonical.validate();
  require_canonical(canonical.mu, canonical.sigma, canonical.kappa);
  const double u1 = unit_first(u, canonical.dimension());
  return UnivariateLaw::gh(0.0, 1.0, u1 * canonical.kappa(0), canonical.lambda, canonical.chi, canonical.psi);
}

UnivariateLaw linear_projection(const MultivariateLaw& law, const Vector& u) {
  if (const auto* st = std::get_if<STParams>(&law)) {
    const STParams y = st_linear_form(*st, u.transpose(), Vector::Zero(1));
    return UnivariateLaw::skew_t(y.xi(0), y.omega(0, 0), y.gamma(0), y.nu);
  }
  const auto& gh = std::get<GHParams>(law);
  const GHParams y = gh_linear_form(gh, u.transpose(), Vector::Zero(1));
  return UnivariateLaw::gh(y.mu(0), y.sigma(0, 0), y.kappa(0), y.lambda, y.chi, y.psi);
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

using Engine = std::mt19937_64;

// Ratio-of-uniforms with mode shift for h(y) = y^(l-1) exp(-w/2 (y + 1/y)), l >= 0.
class GigRou {
 public:
  GigRou(double l, double w) : l_(l), w_(w) {
    mode_ = ((l - 1.0) + std::sqrt((l - 1.0) * (l - 1.0) + w * w)) / w;
    // Extremes of (y - m) sqrt(h(y)/h(m)) on each side of the mode, searched in s = log|y - m|.
    auto side = [this](double sign, double s_hi) {
      auto neg = [this, sign](double s) {
        const double y = mode_ + sign * std::exp(s);
        const double v = s + 0.5 * log_ratio(y);
        return std::isfinite(v) ? -v : 1e300;
      };
      const auto r = boost::math::tools::brent_find_minima(neg, -60.0, s_hi, 52);
      return std::exp(-r.second);
    };
    v_plus_ = side(1.0, 60.0) * (1.0 + 1e-9);
    v_minus_ = -side(-1.0, std::log(mode_)) * (1.0 + 1e-9);
  }

  double operator()(Engine& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
      const double u = 1.0 - unit(rng);  // (0, 1]
      const double v = v_minus_ + (v_plus_ - v_minus_) * unit(rng);
      const double y = v / u + mode_;
      if (y <= 0.0) continue;
      if (2.0 * std::log(u) <= log_ratio(y)) return y;
    }
  }

 private:
  double log_ratio(double y) const {
    if (y <= 0.0) return -kInf;
    return (l_ - 1.0) * std::log(y / mode_) - 0.5 * w_ * (y + 1.0 / y - mode_ - 1.0 / mode_);
  }

  double l_, w_;
  double mode_ = 1.0;
  double v_plus_ = 0.0;
  double v_minus_ = 0.0;
};

class GigSampler {
 public:
  explicit GigSampler(const Gig& g) : lambda_(g.lambda()), chi_(g.chi()), psi_(g.psi()) {
    if (psi_ == 0.0) {
      gamma_.emplace(-lambda_, 1.0);
    } else if (chi_ == 0.0) {
      gamma_.emplace(lambda_, 1.0);
    } else {
      const double w = std::sqrt(chi_ * psi_);
      eta_ = std::sqrt(chi_ / psi_);
      rou_.emplace(std::abs(lambda_), w);
    }
  }

  double operator()(Engine& rng) {
    if (psi_ == 0.0) return 0.5 * chi_ / (*gamma_)(rng);
    if (chi_ == 0.0) return 2.0 * (*gamma_)(rng) / psi_;
    const double y = (*rou_)(rng);
    return eta_ * (lambda_ < 0.0 ? 1.0 / y : y);
  }

 private:
  double lambda_, chi_, psi_;
  double eta_ = 1.0;
  std::optional<std::gamma_distribution<double>> gamma_;
  std::optional<GigRou> rou_;
};

}  // namespace

std::vector<double> sample_gig(const Gig& gig, std::size_t n, std::uint64_t seed) {
  Engine rng(seed);
  GigSampler draw(gig);
  std::vector<double> out(n);
  for (auto& w : out) w = draw(rng);
  return out;
}

Matrix sample_gh(const GHParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  const int d = p.dimension();
  const Matrix L = Eigen::LLT<Matrix>(p.sigma).matrixL();
  Engine rng(seed);
  GigSampler draw_w(p.mixing());
  std::normal_distribution<double> normal;
  Matrix out(static_cast<Eigen::Index>(n), d);
  Vector z(d);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double w = draw_w(rng);
    for (int j = 0; j < d; ++j) z(j) = normal(rng);
    out.row(i) = (p.mu + w * p.kappa + std::sqrt(w) * (L * z)).transpose();
  }
  return out;
}

Matrix sample_st(const STParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  const int d = p.dimension();
  const Vector omega = p.omega.diagonal().cwiseSqrt();
  const Matrix bar = omega.cwiseInverse().asDiagonal() * p.omega * omega.cwiseInverse().asDiagonal();
  const Vector bar_gamma = bar * p.gamma;
  const Vector delta = bar_gamma / std::sqrt(1.0 + p.gamma.dot(bar_gamma));
  const Matrix resid = bar - delta * delta.transpose();
  const Matrix L = Eigen::LLT<Matrix>(0.5 * (resid + resid.transpose())).matrixL();
  Engine rng(seed);
  std::normal_distribution<double> normal;
  std::optional<std::chi_squared_distribution<double>> chi2;
  if (!std::isinf(p.nu)) chi2.emplace(p.nu);
  Matrix out(static_cast<Eigen::Index>(n), d);
  Vector z(d);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double u0 = std::abs(normal(rng));
    for (int j = 0; j < d; ++j) z(j) = normal(rng);
    Vector sn = delta * u0 + L * z;
    if (chi2) sn /= std::sqrt((*chi2)(rng) / p.nu);
    out.row(i) = (p.xi + omega.cwiseProduct(sn)).transpose();
  }
  return out;
}

Matrix sample(const MultivariateLaw& law, std::size_t n, std::uint64_t seed) {
  if (const auto* st = std::get_if<STParams>(&law)) return sample_st(*st, n, seed);
  return sample_gh(std::get<GHParams>(law), n, seed);
}

// ---------------------------------------------------------------------------
// CanonicalForm

CanonicalForm::CanonicalForm(const STParams& p) : law_(p) { init_st(p); }
CanonicalForm::CanonicalForm(const GHParams& p) : law_(p) { init_gh(p); }
CanonicalForm::CanonicalForm(const MultivariateLaw& law) : law_(law) {
  if (const auto* st = std::get_if<STParams>(&law)) {
    init_st(*st);
  } else {
    init_gh(std::get<GHParams>(law));
  }
}

void CanonicalForm::init_st(const STParams& p) {
  kind_ = Kind::SkewT;
  dimension_ = p.dimension();
  reduction_ = canonicalize_st(p);
  nu_ = p.nu;
  if (!std::isinf(nu_)) {
    const double d = dimension_;
    log_t_norm_ = std::lgamma(0.5 * (nu_ + d)) - std::lgamma(0.5 * nu_) - 0.5 * d * std::log(nu_ * kPi);
  } else {
    log_t_norm_ = -0.5 * dimension_ * std::log(2.0 * kPi);
  }
}

void CanonicalForm::init_gh(const GHParams& p) {
  kind_ = Kind::GeneralizedHyperbolic;
  dimension_ = p.dimension();
  reduction_ = canonicalize_gh(p);
  gig_.emplace(p.lambda, p.chi, p.psi);
}

UnivariateLaw CanonicalForm::projection(double u1) const {
  u1 = std::clamp(u1, -1.0, 1.0);
  if (kind_ == Kind::SkewT) return UnivariateLaw::skew_t(0.0, 1.0, projected_st_skew(skew(), u1), nu_);
  return UnivariateLaw::gh(0.0, 1.0, u1 * skew(), gig_->lambda(), gig_->chi(), gig_->psi());
}

MultivariateLaw CanonicalForm::canonical_law() const {
  if (kind_ == Kind::SkewT) return STParams::canonical(dimension_, skew(), nu_);
  return GHParams::canonical(dimension_, skew(), gig_->lambda(), gig_->chi(), gig_->psi());
}

double CanonicalForm::canonical_log_density(const Vector& x) const {
  const double q = x.squaredNorm();
  const double lin = skew() * x(0);
  const int d = dimension_;
  if (kind_ == Kind::SkewT) {
    if (std::isinf(nu_)) return log_t_norm_ - 0.5 * q + log_twice_t_cdf(lin, kInf);
    return log_t_norm_ - 0.5 * (nu_ + d) * std::log1p(q / nu_) +
           log_twice_t_cdf(lin * std::sqrt((nu_ + d) / (q + nu_)), nu_ + d);
  }
  const double kq = skew() * skew();
  if (gig_->chi() > 0.0 && gig_->psi() > 0.0) return detail::gh_log_density_closed(d, q, lin, kq, 0.0, *gig_);
  if (gig_->psi() == 0.0) return detail::gh_log_density_inverse_gamma(d, q, lin, kq, 0.0, *gig_);
  return detail::gh_log_density_mixture(d, q, lin, kq, 0.0, *gig_);
}

bool CanonicalForm::has_finite_mean() const {
  if (kind_ == Kind::SkewT) return nu_ > 1.0;
  return skew() != 0.0 ? std::isfinite(gig_->moment(1.0)) : std::isfinite(gig_->moment(0.5));
}

Vector CanonicalForm::canonical_mean() const {
  Vector m = Vector::Zero(dimension_);
  m(0) = projection(1.0).mean();
  return m;
}

}  // namespace skewdepth
