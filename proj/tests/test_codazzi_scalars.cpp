#include <gtest/gtest.h>

#include <cmath>

#include "qlag/codazzi_scalars.hpp"

using namespace qlag;

namespace {

std::vector<double> sample(Interval d, int n) {
  std::vector<double> s;
  for (int k = 0; k < n; ++k) s.push_back(d.lo + d.length() * (k + 0.5) / n);
  return s;
}

// Off-centre circle of radius r in the (1, j)-plane: planar, unit speed, not through the origin.
QuatCurve offset_circle(double r = 0.4, double offset = 0.9) {
  return custom_curve(
      "offset circle", [=](double s) { return Quaternion{offset} + r * quat_exp(Structure::J, s / r); }, {-1, 1},
      [=](double s) { return kQuatJ * quat_exp(Structure::J, s / r); },
      [=](double s) { return (-1.0 / r) * quat_exp(Structure::J, s / r); });
}

}  // namespace

TEST(CodazziScalars, PseudoSphereVanishes) {
  for (double b : {0.25, 0.5, 1.0}) {
    const Extensor ext = build_extensor(pseudo_sphere_curve(b), unit_sphere_immersion(3));
    for (const Point& leaf : {ext.base.map.chart.center(), Point{0.4, -0.7}}) {
      const auto rows = codazzi_scalar_check(ext, sample(ext.curve.domain, 9), leaf);
      for (const auto& cs : rows) {
        EXPECT_LT(cs.max_residual(), 1e-6) << "b=" << b << " s=" << cs.s;
        EXPECT_NEAR(cs.lambda[0], 2.0 * cs.mu[0], 1e-12);
        EXPECT_NEAR(cs.lambda[1] * cs.mu[2] - cs.lambda[2] * cs.mu[1], 0.0, 1e-14);
        EXPECT_NEAR(cs.f, -b * std::tan(b * cs.s), 1e-6);
        // lambda_J - 2 mu_J = 0 and the mu-weighted denominator is zero as well.
        EXPECT_FALSE(cs.f_single.has_value());
        EXPECT_FALSE(cs.f_weighted.has_value());
      }
    }
  }
}

TEST(CodazziScalars, LineExtensorIsZero) {
  const Extensor ext = build_extensor(line_curve(1.0), unit_sphere_immersion(3));
  for (const auto& cs : codazzi_scalar_check(ext, sample(ext.curve.domain, 5))) {
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(cs.lambda[i], 0.0, 1e-12);
      EXPECT_NEAR(cs.mu[i], 0.0, 1e-12);
    }
    EXPECT_LT(cs.max_residual(), 1e-6);
  }
}

TEST(CodazziScalars, PlanarOffCentreCurve) {
  const Extensor ext = build_extensor(offset_circle(), unit_sphere_immersion(3));
  const auto s = sample(ext.curve.domain, 7);
  const auto rows = codazzi_scalar_check(ext, s, Point{0.3, 0.5});
  for (const auto& cs : rows) EXPECT_LT(cs.max_residual(), 1e-3);
  for (double sv : s) EXPECT_LT(codazzi_residual(ext.map, Point{sv, 0.3, 0.5}), 1e-3);
}

TEST(CodazziScalars, EstimatorsAgreeWithConnectionScalar) {
  for (std::size_t n : {2u, 3u, 4u}) {
    const Extensor ext = build_extensor(helix_curve(), unit_sphere_immersion(n));
    for (const auto& cs : codazzi_scalar_check(ext, sample(ext.curve.domain, 7))) {
      EXPECT_LT(cs.max_residual(), 1e-5);
      ASSERT_TRUE(cs.f_weighted.has_value());
      EXPECT_NEAR(*cs.f_weighted, cs.f, 1e-5);
      if (cs.f_single) {
        EXPECT_NEAR(*cs.f_single, cs.f, 1e-4);
      }
      // f = |F|'/|F| for extensors of the unit sphere.
      const double h = 1e-5;
      const double log_der =
          (std::log(ext.curve(cs.s + h).norm()) - std::log(ext.curve(cs.s - h).norm())) / (2.0 * h);
      EXPECT_NEAR(cs.f, log_der, 1e-6);
    }
  }
}

TEST(CodazziScalars, CrossTermIsNeeded) {
  // On the helix the cross product of lambda and mu is non-zero; dropping it breaks the first equation.
  const Extensor ext = build_extensor(helix_curve(), unit_sphere_immersion(3));
  double worst_without = 0.0;
  for (const auto& cs : codazzi_scalar_check(ext, sample(ext.curve.domain, 7))) {
    for (std::size_t i = 0; i < 3; ++i)
      worst_without = std::max(worst_without, std::abs(cs.e1_mu[i] - (cs.lambda[i] - 2.0 * cs.mu[i]) * cs.f));
  }
  EXPECT_GT(worst_without, 1e-2);
}

TEST(CodazziScalars, EstimatorFormulas) {
  const std::array<double, 3> l{1.0, 3.0, -1.0}, m{0.5, 1.0, 0.25}, e1{0.1, 0.2, 0.3};
  // (0.2 - (-1)(0.5) + 1 * 0.25) / (3 - 2)
  EXPECT_NEAR(*f_single_estimator(l, m, e1), 0.95, 1e-15);
  const double num = 0.5 * 0.1 + 1.0 * 0.2 + 0.25 * 0.3;
  const double den = 0.5 * 0.0 + 1.0 * 1.0 + 0.25 * (-1.5);
  EXPECT_NEAR(*f_weighted_estimator(l, m, e1), num / den, 1e-15);
  EXPECT_FALSE(f_single_estimator({2, 2, 0}, {1, 1, 0}, e1).has_value());
}

TEST(CodazziScalars, RequiresSphereExtensor) {
  const Extensor ext = build_extensor(circle_curve(), line_base({1.0, 0.0}));
  try {
    (void)codazzi_scalar_check(ext, {0.0});
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotExtensor);
  }
}
