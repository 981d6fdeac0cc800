#include <cmath>
#include <numbers>

#include "doctest.h"
#include "skewdepth/approx.hpp"
#include "skewdepth/errors.hpp"

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

}  // namespace

TEST_CASE("ellipsoid of an elliptical law") {
  const GHParams g{vec({1.0, -2.0}), mat2(3.0, 1.2, 1.2, 1.0), Vector::Zero(2), -0.5, 1.0, 1.0};
  const Ellipsoid e = ellipsoid_approx(CanonicalForm(g), 0.1);
  CHECK((e.center - g.mu).norm() < 1e-9);
  const Matrix ratio = e.shape.cwiseQuotient(g.sigma.inverse());
  CHECK(ratio.maxCoeff() - ratio.minCoeff() < 1e-9 * ratio.maxCoeff());

  const CanonicalEllipsoid ce = canonical_ellipsoid_approx(CanonicalForm(STParams::canonical(3, 0.0, 4.0)), 0.1);
  CHECK(ce.center.norm() < 1e-12);
  CHECK(ce.half_axes(0) == doctest::Approx(ce.half_axes(2)).epsilon(1e-12));
}

TEST_CASE("skew-Cauchy ellipsoid is the exact depth set") {
  for (const STParams& p : {STParams::canonical(2, 3.0, 1.0), STParams{vec({1.0, -2.0}), mat2(4.0, 1.0, 1.0, 2.0), vec({1.5, -0.5}), 1.0},
                            STParams{Vector::Zero(3), Matrix::Identity(3, 3), vec({0.0, 2.0, 1.0}), 1.0}}) {
    for (double a : {0.05, 0.2, 0.35}) {
      const Ellipsoid approx = ellipsoid_approx(CanonicalForm(p), a);
      const Ellipsoid exact = sc_contour_exact(p, a);
      CHECK((approx.center - exact.center).norm() < 1e-9);
      CHECK((approx.shape - exact.shape).cwiseAbs().maxCoeff() < 1e-9 * exact.shape.cwiseAbs().maxCoeff());
    }
  }
  CHECK_THROWS_AS(ellipsoid_approx(CanonicalForm(STParams::canonical(2, 3.0, 1.0)), 0.5), DomainError);
}

TEST_CASE("skew-Cauchy misclassification vanishes") {
  MisclassOptions opt;
  opt.grid = 400;
  const MisclassReport r = misclassification(CanonicalForm(STParams::canonical(2, 3.0, 1.0)), 0.1, opt);
  CHECK(r.p_false_negative < 1e-4);
  CHECK(r.p_false_positive < 1e-4);
  CHECK(r.refinement_checked);
  CHECK(r.refinement_stable);
  CHECK(r.grid.resolution == 400);
  CHECK(r.grid.x_min < r.grid.x_max);
  CHECK(r.grid.cell_area > 0.0);
}

TEST_CASE("misclassification of skew-normal laws") {
  MisclassOptions opt;
  opt.refinement_check = false;
  double prev1 = -1.0;
  double prev2 = -1.0;
  for (double g : {1.0, 2.0, 5.0, 10.0}) {
    CAPTURE(g);
    const MisclassReport r = misclassification(CanonicalForm(STParams::canonical(2, g, kInf)), 0.05, opt);
    CHECK(r.p_false_negative >= prev1 - 1e-4);
    CHECK(r.p_false_positive >= prev2 - 1e-4);
    prev1 = r.p_false_negative;
    prev2 = r.p_false_positive;
    if (g == 10.0) {
      CHECK(std::abs(r.p_false_negative - 0.035) < 0.005);
      CHECK(std::abs(r.p_false_positive - 0.010) < 0.005);
    }
  }
}

TEST_CASE("misclassification is affine invariant") {
  const STParams p{vec({-2.0, 1.0}), mat2(2.5, 0.25, 0.25, 0.25), vec({-std::sqrt(5.0), 2.0 * std::sqrt(2.0)}), kInf};
  MisclassOptions opt;
  opt.refinement_check = false;
  const MisclassReport a = misclassification(CanonicalForm(p), 0.1, opt);
  const MisclassReport b = misclassification(CanonicalForm(STParams::canonical(2, 3.0, kInf)), 0.1, opt);
  CHECK(std::abs(a.p_false_negative - b.p_false_negative) < 1e-6);
  CHECK(std::abs(a.p_false_positive - b.p_false_positive) < 1e-6);
}

TEST_CASE("misclassification errors") {
  CHECK_THROWS_AS(misclassification(CanonicalForm(STParams::canonical(3, 1.0, 5.0)), 0.1), DomainError);
  CHECK_THROWS_AS(misclassification(CanonicalForm(STParams::canonical(2, 1.0, 5.0)), 0.5), DomainError);
  MisclassOptions opt;
  opt.grid = 5;
  CHECK_THROWS_AS(misclassification(CanonicalForm(STParams::canonical(2, 1.0, 5.0)), 0.1, opt), DomainError);
}

TEST_CASE("d2 sweeps") {
  SUBCASE("ST family") {
    const auto rows = d2_sweep(SweepFamily::ST, {2.0, 10.0}, {1.0, 1.5, 5.0, 50.0});
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].d2 < 1e-6);
    CHECK(rows[4].d2 < 1e-6);
    // Along nu, d2 increases from the skew-Cauchy end.
    for (int base : {0, 4}) {
      for (int k = 1; k < 4; ++k) CHECK(rows[base + k].d2 >= rows[base + k - 1].d2 - 1e-9);
    }
    CHECK(rows[4].skew == 10.0);
    CHECK(rows[4].shape == 1.0);
  }
  SUBCASE("plateau for large skewness and nu") {
    const auto rows = d2_sweep(SweepFamily::ST, {50.0}, {1e6});
    CHECK(std::abs(rows[0].d2 - 0.035) < 0.003);
  }
  SUBCASE("NIG and GH skew-t families decay with the shape") {
    for (SweepFamily f : {SweepFamily::NIG, SweepFamily::GHSkewT}) {
      const std::vector<double> shapes = f == SweepFamily::NIG ? std::vector<double>{0.1, 1.0, 10.0, 100.0}
                                                               : std::vector<double>{3.0, 10.0, 50.0, 500.0};
      const auto rows = d2_sweep(f, {5.0}, shapes);
      for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].d2 < rows[k - 1].d2);
      CHECK(rows.back().d2 < 0.25 * rows.front().d2);
    }
  }
  CHECK_THROWS_AS(sweep_law(SweepFamily::NIG, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(sweep_law(SweepFamily::GHSkewT, 1.0, kInf), DomainError);
}
