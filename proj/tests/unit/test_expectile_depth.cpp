#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "skewdepth/errors.hpp"
#include "skewdepth/expectile_depth.hpp"
#include "skewdepth/specfun.hpp"

using namespace skewdepth;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

STParams normal2() { return STParams{Vector::Zero(2), Matrix::Identity(2, 2), Vector::Zero(2), kInf}; }

// Jones probability by direct quadrature of the two partial moments.
double jones_by_quadrature(const UnivariateLaw& law, double y) {
  const double below = oracle::gk([&](double x) { return (y - x) * pdf(law, x); }, -kInf, y);
  const double above = oracle::gk([&](double x) { return (x - y) * pdf(law, x); }, y, kInf);
  return below / (below + above);
}

}  // namespace

TEST_CASE("skew-normal Jones closed form") {
  for (double g : {-4.0, 0.0, 0.5, 3.0, 20.0}) {
    const UnivariateLaw sn = UnivariateLaw::skew_normal(0.0, 1.0, g);
    for (double y : {-3.0, -0.7, 0.0, 0.4, 1.3, 3.5}) {
      CAPTURE(g);
      CAPTURE(y);
      CHECK(std::abs(csn_tilde_cdf(g, y) - jones_by_quadrature(sn, y)) < 1e-8);
    }
  }
}

TEST_CASE("tilde half-space probability") {
  const STParams csn = STParams::canonical(2, 3.0, kInf);
  const double generic = tilde_half_space_prob(csn, vec({0.4, 0.0}), vec({1.0, 0.0}));
  CHECK(std::abs(generic - csn_tilde_cdf(3.0, 0.4)) < 1e-8);
  CHECK(std::abs(generic - jones_by_quadrature(UnivariateLaw::skew_normal(0.0, 1.0, 3.0), 0.4)) < 1e-8);
  // Second canonical direction carries no skewness.
  CHECK(tilde_half_space_prob(csn, vec({0.0, 0.8}), vec({0.0, 1.0})) ==
        doctest::Approx(jones_cdf(UnivariateLaw::normal(), 0.8)).epsilon(1e-12));
  CHECK(tilde_half_space_prob(normal2(), Vector::Zero(2), vec({0.6, -0.8})) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(tilde_half_space_prob(STParams::canonical(2, 3.0, 1.0), Vector::Zero(2), vec({1.0, 0.0})), ContractError);
}

TEST_CASE("ed of the bivariate normal") {
  const CanonicalForm n(normal2());
  CHECK(ed(n, Vector::Zero(2)).depth == doctest::Approx(0.5).epsilon(1e-12));
  for (double r : {0.3, 1.0, 2.5}) {
    const DepthResult d = ed(n, vec({r, 0.0}));
    CHECK(d.depth == doctest::Approx(jones_cdf(UnivariateLaw::normal(), -r)).epsilon(1e-9));
  }
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int k = 0; k < 8; ++k) {
    const Vector x = vec({z(rng), z(rng)});
    CHECK(std::abs(ed(n, x).depth - oracle::ed_direction_grid(n.law(), x, 10000)) < 1e-6);
  }
}

TEST_CASE("ed of skewed laws") {
  const std::vector<MultivariateLaw> laws{STParams::canonical(2, 3.0, kInf), STParams::canonical(2, 3.0, 5.0),
                                          STParams{vec({1.0, 0.0}), mat2(2.0, 0.7, 0.7, 1.0), vec({-2.0, 4.0}), 3.0},
                                          GHParams::canonical(2, 3.0, -0.5, 0.1, 0.1)};
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  for (const auto& law : laws) {
    const CanonicalForm cf(law);
    // The 0.5-expectile of every projection is its mean.
    const Vector mean = cf.reduction().from_canonical(cf.canonical_mean());
    CHECK(ed(cf, mean).depth == doctest::Approx(0.5).epsilon(1e-9));
    const MedianResult m = ed_maximizer(cf);
    CHECK((m.point - mean).norm() < 1e-6 * std::max(1.0, mean.norm()));
    for (int k = 0; k < 5; ++k) {
      const Vector x = cf.reduction().from_canonical(vec({z(rng), z(rng)}));
      const double got = ed(cf, x).depth;
      CHECK(got <= 0.5);
      const double grid = oracle::ed_direction_grid(law, x, 20000);
      CHECK(got <= grid + 1e-9);
      CHECK(grid - got < 1e-5);
    }
  }
  CHECK_THROWS_AS(ed(CanonicalForm(STParams::canonical(2, 3.0, 1.0)), Vector::Zero(2)), ContractError);
  CHECK_THROWS_AS(ed(CanonicalForm(GHParams::canonical(2, 1.0, -1.0, 2.0, 0.0)), Vector::Zero(2)), ContractError);
}

TEST_CASE("ed affine invariance and sign-flip symmetry") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  for (const auto& law : {MultivariateLaw(STParams::canonical(3, 4.0, 4.0)), MultivariateLaw(GHParams::canonical(3, 2.0, 1.0, 0.5, 1.5))}) {
    const CanonicalForm cf(law);
    for (int k = 0; k < 3; ++k) {
      Matrix A(3, 3);
      do {
        for (int i = 0; i < 9; ++i) A(i / 3, i % 3) = z(rng);
      } while (std::abs(A.determinant()) < 0.3);
      const Vector b = vec({z(rng), z(rng), z(rng)});
      const Vector x = vec({z(rng), z(rng), z(rng)});
      const MultivariateLaw moved = std::holds_alternative<STParams>(law)
                                        ? MultivariateLaw(st_linear_form(std::get<STParams>(law), A, b))
                                        : MultivariateLaw(gh_linear_form(std::get<GHParams>(law), A, b));
      CHECK(std::abs(ed(CanonicalForm(moved), A * x + b).depth - ed(cf, x).depth) < 1e-6);
      const double base = ed_canonical(cf, x).depth;
      CHECK(std::abs(ed_canonical(cf, vec({x(0), x(1), -x(2)})).depth - base) < 1e-9);
    }
  }
}

TEST_CASE("ed contours") {
  SUBCASE("normal circles") {
    const CanonicalForm n(normal2());
    const UnivariateLaw z = UnivariateLaw::normal();
    std::vector<double> radii;
    for (double a : {0.1, 0.2, 0.3}) {
      const ContourPolyline c = ed_contour(n, a);
      REQUIRE(!c.empty);
      const double r = expectile(z, 1.0 - a);
      for (Eigen::Index k = 0; k < c.vertices.rows(); ++k) CHECK(std::abs(c.vertices.row(k).norm() - r) < 1e-4 * r);
      radii.push_back(c.vertices.row(0).norm());
    }
    CHECK(radii[0] / radii[1] == doctest::Approx(expectile(z, 0.9) / expectile(z, 0.8)).epsilon(1e-4));
  }
  SUBCASE("elliptical law: expectile and half-space sets in identical proportions") {
    const GHParams g{vec({1.0, -1.0}), mat2(3.0, 1.2, 1.2, 1.0), Vector::Zero(2), -0.5, 1.0, 1.0};
    const CanonicalForm cf(g);
    const Matrix sinv = g.sigma.inverse();
    for (double a : {0.1, 0.25}) {
      const ContourPolyline e = ed_contour(cf, a);
      const ContourPolyline q = hd_contour(cf, a);
      auto maha = [&](const ContourPolyline& c, Eigen::Index k) {
        const Vector d = c.vertices.row(k).transpose() - g.mu;
        return std::sqrt(d.dot(sinv * d));
      };
      const double re = maha(e, 0);
      const double rq = maha(q, 0);
      for (Eigen::Index k = 0; k < e.vertices.rows(); ++k) CHECK(std::abs(maha(e, k) / re - 1.0) < 1e-3);
      for (Eigen::Index k = 0; k < q.vertices.rows(); ++k) CHECK(std::abs(maha(q, k) / rq - 1.0) < 1e-3);
      const UnivariateLaw y = project_gh(std::get<GHParams>(cf.canonical_law()), vec({0.0, 1.0}));
      CHECK(re / rq == doctest::Approx(expectile(y, 1.0 - a) / quantile(y, 1.0 - a)).epsilon(1e-3));
    }
  }
  SUBCASE("skew-normal nesting and vertex depths") {
    const STParams p{vec({-2.0, 1.0}), mat2(2.5, 0.25, 0.25, 0.25), vec({-std::sqrt(5.0), 2.0 * std::sqrt(2.0)}), kInf};
    const CanonicalForm cf(p);
    const ContourPolyline c1 = ed_contour(cf, 0.1);
    const ContourPolyline c2 = ed_contour(cf, 0.2);
    const ContourPolyline c3 = ed_contour(cf, 0.3);
    for (Eigen::Index k = 0; k < c3.vertices.rows(); ++k) CHECK(c2.contains(c3.vertices.row(k).transpose()));
    for (Eigen::Index k = 0; k < c2.vertices.rows(); ++k) CHECK(c1.contains(c2.vertices.row(k).transpose()));
    for (Eigen::Index k = 0; k < c2.vertices.rows(); k += 20) {
      CHECK(std::abs(ed(cf, c2.vertices.row(k).transpose()).depth - 0.2) < 1e-4);
    }
  }
  CHECK_THROWS_AS(ed_contour(CanonicalForm(STParams::canonical(2, 3.0, 1.0)), 0.2), ContractError);
}

TEST_CASE("expectile support values") {
  const STParams p{vec({1.0, -1.0}), mat2(2.0, 0.4, 0.4, 0.5), vec({2.0, -1.0}), 4.0};
  const CanonicalForm cf(p);
  const Vector mean = cf.reduction().from_canonical(cf.canonical_mean());
  const Vector u = vec({0.3, -1.7});
  CHECK(expectile_support_value(p, u, 0.5) == doctest::Approx(u.dot(mean)).epsilon(1e-9));
  CHECK(std::abs(expectile_support_value(p, 2.0 * u, 0.8) - 2.0 * expectile_support_value(p, u, 0.8)) < 1e-10);
  CHECK_THROWS_AS(expectile_support_value(STParams::canonical(2, 1.0, 1.0), u, 0.8), ContractError);
  CHECK_THROWS_AS(expectile_support_value(p, Vector::Zero(2), 0.8), DomainError);
  CHECK_THROWS_AS(expectile_support_value(p, u, 1.0), DomainError);

  double prev = -kInf;
  for (double th : {0.55, 0.7, 0.9, 0.99}) {
    const double v = expectile_support_value(p, u, th);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("expectile subadditivity") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> z;
  for (const auto& law : {MultivariateLaw(STParams::canonical(2, 3.0, kInf)), MultivariateLaw(STParams::canonical(2, 3.0, 5.0)),
                          MultivariateLaw(GHParams::canonical(2, 3.0, -0.5, 0.1, 0.1))}) {
    double worst = -kInf;
    for (int k = 0; k < 200; ++k) {
      const Vector u1 = vec({z(rng), z(rng)});
      const Vector u2 = vec({z(rng), z(rng)});
      const double lhs = expectile_support_value(law, u1 + u2, 0.75);
      const double rhs = expectile_support_value(law, u1, 0.75) + expectile_support_value(law, u2, 0.75);
      worst = std::max(worst, lhs - rhs);
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("expectile attainment on the contour") {
  const CanonicalForm n(normal2());
  const double a = 0.2;
  const ContourPolyline c = ed_contour(n, a);
  for (double th : {0.0, 0.7, 2.0, 4.0}) {
    const Vector u = vec({std::cos(th), std::sin(th)});
    const double sup = (c.vertices * u).maxCoeff();
    CHECK(std::abs(sup - expectile_support_value(n.law(), u, 1.0 - a)) < 1e-3);
  }
}
