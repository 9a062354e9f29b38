#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qlag/families.hpp"
#include "qlag/immersion.hpp"
#include "qlag/random.hpp"
#include "qlag/warped.hpp"

using namespace qlag;

namespace {

ImmersionMap affine_map() {
  ImmersionMap m;
  m.chart = Chart({{-1, 1}, {-1, 1}});
  m.ambient_dim = 2;
  m.rule = [](std::span<const double> p) {
    return HVector{Quaternion{1.0 + 2.0 * p[0], p[1], -p[0], 0.5}, Quaternion{0.0, 0.0, 3.0 * p[1] - p[0], 1.0}};
  };
  return m;
}

ImmersionMap curve_map(std::function<HVector(double)> f, Interval dom = {-2, 2}) {
  ImmersionMap m;
  m.chart = Chart({dom});
  m.ambient_dim = f(dom.mid()).size();
  m.rule = [f](std::span<const double> p) { return f(p[0]); };
  return m;
}

// Round S^2 in R^3 in the (u2, u3) chart, as a map into H^3.
ImmersionMap round_sphere() { return unit_sphere_immersion(3).map; }

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

}  // namespace

TEST(Jet, AffineMapHasNoSecondDerivative) {
  const ImmersionJet j = jet(affine_map(), Point{0.2, -0.3});
  for (const auto& row : j.d2)
    for (const auto& v : row) EXPECT_LE(v.max_abs(), 1e-9);
  EXPECT_LE((j.d1[0] - HVector{Quaternion{2, 0, -1, 0}, Quaternion{0, 0, -1, 0}}).max_abs(), 1e-9);
}

TEST(Jet, QuadraticSecondDerivative) {
  const auto m = curve_map([](double t) { return HVector{Quaternion{t * t}, Quaternion{}}; });
  const ImmersionJet j = jet(m, Point{0.4});
  EXPECT_LE((j.d2[0][0] - HVector{Quaternion{2.0}, Quaternion{}}).max_abs(), 1e-6);
}

TEST(Jet, PseudoSphereTangentAtOrigin) {
  const Extensor ext = build_extensor(pseudo_sphere_curve(0.5), unit_sphere_immersion(2));
  const ImmersionJet j = jet(ext.map, Point{0.0, 0.0});
  // F'(0) = e^0 = 1 and the sphere point at u = 0 is (1, 0).
  EXPECT_LE((j.d1[0] - HVector{kQuatOne, Quaternion{}}).max_abs(), 1e-8);
}

TEST(Jet, StencilConvergesAtSecondOrder) {
  const auto m = curve_map([](double t) { return HVector{Quaternion{std::sin(t)}}; });
  const double t = 0.7;
  auto d2_error = [&](double h) { return std::abs(jet(m, Point{t}, h).d2[0][0][0].w + std::sin(t)); };
  auto d1_error = [&](double h) { return std::abs(jet(m, Point{t}, h).d1[0][0].w - std::cos(t)); };
  for (double h : {4e-2, 2e-2, 1e-2}) {
    EXPECT_NEAR(d2_error(h) / d2_error(h / 2), 4.0, 0.1) << "h = " << h;
    EXPECT_NEAR(d1_error(h) / d1_error(h / 2), 4.0, 0.1) << "h = " << h;
  }
  // Leading truncation term h^2 f''''/12.
  EXPECT_NEAR(d2_error(1e-2), 1e-4 * std::sin(t) / 12.0, 1e-8);
}

TEST(Jet, RejectsPointsOutsideChartAndBadSteps) {
  const auto m = affine_map();
  try {
    (void)jet(m, Point{0.99999, 0.0}, 1e-3);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfBounds);
  }
  EXPECT_THROW((void)jet(m, Point{0.0}, 1e-4), GeometryError);
  EXPECT_THROW((void)jet(m, Point{0.0, 0.0}, 0.0), GeometryError);
}

TEST(Jet, WrongAmbientDimensionIsReported) {
  auto m = affine_map();
  m.ambient_dim = 3;
  EXPECT_THROW((void)jet(m, Point{0.0, 0.0}), GeometryError);
}

TEST(InducedMetric, UnitSpeedCurve) {
  const auto m = curve_map([](double t) { return HVector{quat_exp(Structure::J, t)}; });
  const MetricData md = induced_metric(jet(m, Point{0.3}));
  EXPECT_NEAR(md.g(0, 0), 1.0, 1e-8);
}

TEST(InducedMetric, UnitCircle) {
  const ImmersionMap circle = unit_sphere_immersion(2).map;
  for (double u : {-1.0, 0.0, 0.8}) EXPECT_NEAR(induced_metric(jet(circle, Point{u})).g(0, 0), 1.0, 1e-8);
}

TEST(InducedMetric, PseudoSphereIsWarped) {
  for (double b : {0.25, 0.5, 1.0}) {
    const Extensor ext = build_extensor(pseudo_sphere_curve(b), unit_sphere_immersion(3));
    const WarpedModel model =
        make_warped_model(cos_warp(b, 1.0 / b), b, 3, ext.map.chart.bounds()[0]);
    for (const auto& p : chart_grid(ext.map.chart, 5)) {
      const Matrix g = induced_metric(jet(ext.map, p)).g;
      EXPECT_LE((g - warped_metric(model, p)).cwiseAbs().maxCoeff(), 1e-7);
    }
  }
}

TEST(InducedMetric, DegenerateMapIsRejected) {
  ImmersionMap m;
  m.chart = Chart({{-1, 1}, {-1, 1}});
  m.ambient_dim = 1;
  m.rule = [](std::span<const double> p) { return HVector{Quaternion{p[0] + p[1]}}; };
  try {
    (void)induced_metric(jet(m, Point{0.0, 0.0}));
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_TRUE(e.code() == ErrorCode::NonImmersion || e.code() == ErrorCode::SingularMetric);
  }
}

TEST(Christoffel, FlatChartVanishes) {
  const MetricData md = christoffel(affine_map(), Point{0.1, 0.2});
  for (const auto& g : md.christoffel) EXPECT_LE(g.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Christoffel, WarpedCosineRadialTerm) {
  const double mu = 0.5;
  const MetricField field = [mu](std::span<const double> p) {
    Matrix g = Matrix::Identity(2, 2);
    g(1, 1) = std::cos(mu * p[0]) * std::cos(mu * p[0]);
    return g;
  };
  for (double s : {-1.0, 0.0, 0.6}) {
    const auto gamma = christoffel_from_metric(field, Point{s, 0.2}, kNestedStep);
    // -omega omega' with omega = cos(mu s)
    EXPECT_NEAR(gamma[0](1, 1), mu * std::cos(mu * s) * std::sin(mu * s), 1e-5);
    EXPECT_NEAR(gamma[1](0, 1), -mu * std::tan(mu * s), 1e-5);
  }
}

TEST(Christoffel, RoundSphere) {
  for (const Point& p : {Point{0.3, -0.2}, Point{-0.9, 1.1}}) {
    const MetricData md = christoffel(round_sphere(), p);
    EXPECT_NEAR(md.christoffel[0](1, 1), std::sin(p[0]) * std::cos(p[0]), 1e-6);
    EXPECT_NEAR(md.christoffel[1](0, 1), -std::tan(p[0]), 1e-6);
    EXPECT_NEAR(md.christoffel[0](0, 0), 0.0, 1e-6);
  }
}

TEST(Christoffel, MetricCompatibility) {
  const Extensor ext = build_extensor(helix_curve(), unit_sphere_immersion(3));
  const auto field = induced_metric_field(ext.map);
  for (const auto& p : chart_grid(ext.map.chart, 3)) {
    const MetricData md = christoffel(ext.map, p);
    const std::size_t m = md.dim();
    for (std::size_t c = 0; c < m; ++c) {
      const Matrix dg =
          (field(detail::shifted(p, c, 1e-4)) - field(detail::shifted(p, c, -1e-4))) / 2e-4;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          double conn = 0.0;
          for (std::size_t d = 0; d < m; ++d)
            conn += md.christoffel[d](c, a) * md.g(d, b) + md.christoffel[d](c, b) * md.g(a, d);
          EXPECT_LE(std::abs(dg(a, b) - conn), 1e-5);
        }
    }
  }
}

TEST(SecondFundamentalForm, AffineImmersionIsTotallyGeodesic) {
  const PointGeometry pg = analyze_point(affine_map(), Point{0.3, 0.1});
  for (const auto& row : pg.sff.h)
    for (const auto& v : row) EXPECT_LE(v.norm(), 1e-6);
}

TEST(SecondFundamentalForm, LineExtensorIsTotallyGeodesic) {
  const Extensor ext = build_extensor(line_curve(1.0), unit_sphere_immersion(3));
  for (const auto& p : chart_grid(ext.map.chart, 4)) {
    const PointGeometry pg = analyze_point(ext.map, p);
    for (const auto& row : pg.sff.h)
      for (const auto& v : row) ASSERT_LE(v.norm(), 1e-6);
  }
}

TEST(SecondFundamentalForm, SymmetricAndNormal) {
  const Extensor ext = build_extensor(helix_curve(), unit_sphere_immersion(3));
  for (const auto& p : chart_grid(ext.map.chart, 4)) {
    const PointGeometry pg = analyze_point(ext.map, p);
    const std::size_t m = pg.sff.dim();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        EXPECT_LE((pg.sff(a, b) - pg.sff(b, a)).norm(), 1e-6);
        for (std::size_t c = 0; c < m; ++c)
          EXPECT_LE(std::abs(inner(pg.sff(a, b), pg.jet.d1[c])), 1e-6 * std::max(1.0, pg.sff(a, b).norm()));
      }
  }
}

TEST(SecondFundamentalForm, CircleCurvatureVector) {
  // A unit circle x = cos t, y = sin t has h = -position.
  const auto m = curve_map([](double t) { return HVector{Quaternion{std::cos(t)}, Quaternion{std::sin(t)}}; });
  const PointGeometry pg = analyze_point(m, Point{0.4});
  EXPECT_LE((pg.sff(0, 0) + pg.jet.position).norm(), 1e-7);
}

TEST(MeanCurvature, TotallyGeodesicIsZero) {
  const PointGeometry pg = analyze_point(affine_map(), Point{0.0, 0.0});
  EXPECT_LE(mean_curvature(pg.sff, pg.metric).norm(), 1e-6);
}

TEST(MeanCurvature, PseudoSphereNorm) {
  for (double b : {0.25, 0.5, 1.0})
    for (std::size_t n : {2u, 3u, 4u}) {
      const Extensor ext = build_extensor(pseudo_sphere_curve(b), unit_sphere_immersion(n));
      const Point p = ext.map.chart.center();
      const PointGeometry pg = analyze_point(ext.map, p);
      const double expected = b * static_cast<double>(n + 1) / static_cast<double>(n);
      EXPECT_NEAR(mean_curvature(pg.sff, pg.metric).norm(), expected, 1e-5) << "b=" << b << " n=" << n;
    }
}

TEST(MeanCurvature, CircleExtensor) {
  const Extensor ext = build_extensor(circle_curve(), unit_sphere_immersion(2));
  const PointGeometry pg = analyze_point(ext.map, Point{0.2, -0.3});
  EXPECT_NEAR(mean_curvature(pg.sff, pg.metric).norm(), 1.0, 1e-5);
}

TEST(ShapeOperator, ZeroNormalGivesZero) {
  const Extensor ext = build_extensor(pseudo_sphere_curve(0.5), unit_sphere_immersion(3));
  const PointGeometry pg = analyze_point(ext.map, Point{0.1, 0.2, 0.3});
  const Frame f = make_frame(pg.jet);
  EXPECT_EQ(shape_operator(pg.sff, f, HVector::zero(3)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ShapeOperator, RejectsTangentArgument) {
  const Extensor ext = build_extensor(pseudo_sphere_curve(0.5), unit_sphere_immersion(3));
  const PointGeometry pg = analyze_point(ext.map, Point{0.1, 0.2, 0.3});
  const Frame f = make_frame(pg.jet);
  try {
    (void)shape_operator(pg.sff, f, f.e[0]);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormal);
  }
}

TEST(ShapeOperator, PseudoSphereHasTwoEigenvalues) {
  const double b = 0.5;
  const Extensor ext = build_extensor(pseudo_sphere_curve(b), unit_sphere_immersion(3));
  const PointGeometry pg = analyze_point(ext.map, Point{0.4, -0.2, 0.5});
  const Frame f = make_frame(pg.jet, pg.jet.d1[0]);
  const HVector mean = mean_curvature(pg.sff, pg.metric);
  Eigen::SelfAdjointEigenSolver<Matrix> es(shape_operator(pg.sff, f, mean));
  const double g = (2.0 * b + 2.0 * b) / 3.0;
  // mu gamma twice, lambda gamma once
  EXPECT_NEAR(es.eigenvalues()(0), b * g, 1e-5);
  EXPECT_NEAR(es.eigenvalues()(1), b * g, 1e-5);
  EXPECT_NEAR(es.eigenvalues()(2), 2.0 * b * g, 1e-5);
}

TEST(SectionalCurvature, FlatImmersion) {
  const PointGeometry pg = analyze_point(affine_map(), Point{0.0, 0.0});
  EXPECT_NEAR(sectional_curvature(pg.sff, pg.metric.g, vec({1, 0}), vec({0, 1})), 0.0, 1e-9);
}

TEST(SectionalCurvature, PseudoSphereRandomPlanes) {
  const double b = 0.5;
  const Extensor ext = build_extensor(pseudo_sphere_curve(b), unit_sphere_immersion(3));
  Rng rng(3);
  const auto pts = chart_grid(ext.map.chart, 6);
  for (int t = 0; t < 50; ++t) {
    const Point& p = pts[static_cast<std::size_t>(rng.uniform() * static_cast<double>(pts.size()))];
    const PointGeometry pg = analyze_point(ext.map, p);
    const Vector x = vec({rng.normal(), rng.normal(), rng.normal()});
    const Vector y = vec({rng.normal(), rng.normal(), rng.normal()});
    EXPECT_NEAR(sectional_curvature(pg.sff, pg.metric.g, x, y), b * b, 1e-4);
  }
}

TEST(SectionalCurvature, DegeneratePlaneIsRejected) {
  const PointGeometry pg = analyze_point(affine_map(), Point{0.0, 0.0});
  EXPECT_THROW((void)sectional_curvature(pg.sff, pg.metric.g, vec({1, 2}), vec({2, 4})), GeometryError);
}

TEST(SectionalCurvature, FrameAndCoordinateFormsAgree) {
  const Extensor ext = build_extensor(helix_curve(), unit_sphere_immersion(3));
  const PointGeometry pg = analyze_point(ext.map, Point{0.2, 0.3, -0.4});
  const Frame f = make_frame(pg.jet);
  const double coord = sectional_curvature(pg.sff, pg.metric.g, vec({1, 0, 0}), vec({0, 1, 0}));
  EXPECT_NEAR(sectional_curvature(pg.sff, f, pg.jet.d1[0], pg.jet.d1[1]), coord, 1e-9);
}

TEST(IntrinsicCurvature, RoundSphereIsOne) {
  for (const Point& p : {Point{0.0, 0.0}, Point{0.8, -0.5}})
    EXPECT_NEAR(intrinsic_riemann(round_sphere(), p).sectional(vec({1, 0}), vec({0, 1})), 1.0, 1e-5);
}

TEST(IntrinsicCurvature, MatchesGaussOnHelixExtensor) {
  const Extensor ext = build_extensor(helix_curve(), unit_sphere_immersion(3));
  Rng rng(8);
  for (const auto& p : chart_grid(ext.map.chart, 3)) {
    const PointGeometry pg = analyze_point(ext.map, p);
    const RiemannTensor r = intrinsic_riemann(ext.map, p);
    const Vector x = vec({rng.normal(), rng.normal(), rng.normal()});
    const Vector y = vec({rng.normal(), rng.normal(), rng.normal()});
    EXPECT_NEAR(r.sectional(x, y), sectional_curvature(pg.sff, pg.metric.g, x, y), 1e-3);
  }
}

TEST(Codazzi, FlatPlane) { EXPECT_LE(codazzi_residual(affine_map(), Point{0.1, -0.1}), 1e-6); }

TEST(Codazzi, ExtensorFamilies) {
  for (const QuatCurve& c : {pseudo_sphere_curve(0.5), circle_curve(Structure::K), line_curve(1.0), helix_curve()}) {
    const Extensor ext = build_extensor(c, unit_sphere_immersion(3));
    for (const auto& p : chart_grid(ext.map.chart, 3)) EXPECT_LE(codazzi_residual(ext.map, p), 1e-3) << c.label;
  }
}

TEST(SpaceForm, ZeroCurvature) {
  const HVector x{Quaternion{1, 2, 0, 0}}, y{Quaternion{0, 1, 1, 0}}, z{Quaternion{0, 0, 1, 3}};
  EXPECT_EQ(spaceform_curvature(0.0, x, y, z).max_abs(), 0.0);
}

TEST(SpaceForm, TotallyRealTriple) {
  // Real vectors are mutually totally real: <phi a, b> = 0 for real a, b.
  const HVector x = real_hvector({1, 0, 0}), y = real_hvector({0, 1, 0}), z = real_hvector({0.6, 0.8, 0});
  const double c = 0.7;
  const HVector expected = c * (inner(y, z) * x - inner(x, z) * y);
  EXPECT_LE((spaceform_curvature(c, x, y, z) - expected).max_abs(), 1e-14);
}

TEST(SpaceForm, GeneralTermByTerm) {
  Rng rng(21);
  auto rnd = [&] {
    HVector v(2);
    for (std::size_t a = 0; a < 2; ++a) v[a] = Quaternion{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    return v;
  };
  const HVector x = rnd(), z = rnd();
  for (const HVector& y : {rnd(), x}) {
    const HVector ix = left_mul(kQuatI, x), jx = left_mul(kQuatJ, x), kx = left_mul(kQuatK, x);
    const HVector iy = left_mul(kQuatI, y), jy = left_mul(kQuatJ, y), ky = left_mul(kQuatK, y);
    const HVector iz = left_mul(kQuatI, z), jz = left_mul(kQuatJ, z), kz = left_mul(kQuatK, z);
    HVector e = inner(y, z) * x - inner(x, z) * y;
    e += inner(iy, z) * ix - inner(ix, z) * iy + 2.0 * inner(x, iy) * iz;
    e += inner(jy, z) * jx - inner(jx, z) * jy + 2.0 * inner(x, jy) * jz;
    e += inner(ky, z) * kx - inner(kx, z) * ky + 2.0 * inner(x, ky) * kz;
    EXPECT_LE((spaceform_curvature(1.3, x, y, z) - 1.3 * e).max_abs(), 1e-12);
  }
  // R(X, X) = 0
  EXPECT_LE(spaceform_curvature(1.0, x, x, z).max_abs(), 1e-12);
}

TEST(Chart, GridIsCellCentred) {
  const Chart c({{0, 1}, {-2, 2}});
  const auto pts = chart_grid(c, 4);
  ASSERT_EQ(pts.size(), 16u);
  EXPECT_DOUBLE_EQ(pts.front()[0], 0.125);
  EXPECT_DOUBLE_EQ(pts.front()[1], -1.5);
  EXPECT_DOUBLE_EQ(pts.back()[0], 0.875);
  EXPECT_THROW(Chart({{1, 0}}), GeometryError);
  EXPECT_THROW((void)chart_grid(c, 0), GeometryError);
}
