#pragma once

// Quaternion curves, real base immersions, and the extensor F (x) G
// together with the tests specific to extensors.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qlag/error.hpp"
#include "qlag/immersion.hpp"
#include "qlag/lagrangian.hpp"
#include "qlag/quaternion.hpp"

namespace qlag {

/// Distance kept from coordinate singularities (zeros of cos u_k, |F| and omega).
inline constexpr double kSingularMargin = 0.1;

enum class CurveKind { PseudoSphere, Circle, Line, Custom };

inline const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::PseudoSphere: return "pseudo_sphere";
    case CurveKind::Circle: return "circle";
    case CurveKind::Line: return "line";
    case CurveKind::Custom: return "custom";
  }
  return "?";
}

using QuatFn = std::function<Quaternion(double)>;

struct QuatCurve {
  CurveKind kind = CurveKind::Custom;
  std::string label;
  QuatFn value;
  /// Closed-form derivatives; empty means central differences.
  QuatFn first;
  QuatFn second;
  Interval domain{-1.0, 1.0};
  double fd_step = kJetStep;

  Quaternion operator()(double s) const { return value(s); }

  Quaternion derivative(double s) const {
    if (first) return first(s);
    return (value(s + fd_step) - value(s - fd_step)) / (2.0 * fd_step);
  }

  Quaternion second_derivative(double s) const {
    if (second) return second(s);
    return (value(s + fd_step) - 2.0 * value(s) + value(s - fd_step)) / (fd_step * fd_step);
  }

  /// Whether F'' vanishes identically (the curve is a straight line).
  bool is_straight() const { return kind == CurveKind::Line; }
};

/// F(s) = (e^{2bsi} + 1) / (2bi), unit speed, |F| = cos(bs) / b.
inline QuatCurve pseudo_sphere_curve(double b) {
  if (!(b > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "pseudo-sphere needs b > 0");
  QuatCurve c;
  c.kind = CurveKind::PseudoSphere;
  c.label = "pseudo_sphere(b=" + std::to_string(b) + ")";
  const Quaternion denom_inv = quat_inverse(2.0 * b * kQuatI);
  c.value = [b, denom_inv](double s) { return (quat_exp(Structure::I, 2.0 * b * s) + kQuatOne) * denom_inv; };
  c.first = [b](double s) { return quat_exp(Structure::I, 2.0 * b * s); };
  c.second = [b](double s) { return 2.0 * b * kQuatI * quat_exp(Structure::I, 2.0 * b * s); };
  const double reach = (std::numbers::pi / 2.0 - kSingularMargin) / b;
  c.domain = {-reach, reach};
  return c;
}

/// Unit circle cos s + u sin s in the plane spanned by 1 and the unit u of `plane`.
inline QuatCurve circle_curve(Structure plane = Structure::I) {
  QuatCurve c;
  c.kind = CurveKind::Circle;
  c.label = std::string("circle(") + to_string(plane) + ")";
  c.value = [plane](double s) { return quat_exp(plane, s); };
  c.first = [plane](double s) { return unit_of(plane) * quat_exp(plane, s); };
  c.second = [plane](double s) { return -quat_exp(plane, s); };
  c.domain = {-1.0, 1.0};
  return c;
}

/// F(s) = (s + a) c with c normalised to a unit quaternion.
inline QuatCurve line_curve(double a = 1.0, Quaternion dir = kQuatOne) {
  const double nd = dir.norm();
  if (nd < 1e-12) throw GeometryError(ErrorCode::InvalidArgument, "line direction must be nonzero");
  const Quaternion c = dir / nd;
  QuatCurve q;
  q.kind = CurveKind::Line;
  q.label = "line(a=" + std::to_string(a) + ")";
  q.value = [a, c](double s) { return (s + a) * c; };
  q.first = [c](double) { return c; };
  q.second = [](double) { return Quaternion{}; };
  // Keep |F| = |s + a| away from zero.
  q.domain = {-a + 0.5 * std::abs(a), -a + 1.5 * std::abs(a)};
  if (a == 0.0) q.domain = {0.5, 1.5};
  return q;
}

inline QuatCurve custom_curve(std::string label, QuatFn value, Interval domain, QuatFn first = {},
                              QuatFn second = {}) {
  QuatCurve c;
  c.kind = CurveKind::Custom;
  c.label = std::move(label);
  c.value = std::move(value);
  c.first = std::move(first);
  c.second = std::move(second);
  c.domain = domain;
  return c;
}

/// F = a + b i + c j + d k from real coefficient functions; derivatives by central differences.
inline QuatCurve curve_from_components(std::string label, std::function<double(double)> a,
                                       std::function<double(double)> b, std::function<double(double)> c,
                                       std::function<double(double)> d, Interval domain) {
  return custom_curve(std::move(label),
                      [a, b, c, d](double s) { return Quaternion{a(s), b(s), c(s), d(s)}; }, domain);
}

/// A non-planar unit-speed helix r cos(ws) + i r sin(ws) + j v s + k offset, v = sqrt(1 - r^2 w^2).
inline QuatCurve helix_curve(double r = 0.6, double w = 1.0, double offset = 0.8) {
  if (!(r * w < 1.0)) throw GeometryError(ErrorCode::InvalidArgument, "helix needs r w < 1 for unit speed");
  const double v = std::sqrt(1.0 - r * r * w * w);
  return custom_curve(
      "helix(r=" + std::to_string(r) + ",w=" + std::to_string(w) + ")",
      [=](double s) { return Quaternion{r * std::cos(w * s), r * std::sin(w * s), v * s, offset}; }, Interval{-1.0, 1.0},
      [=](double s) { return Quaternion{-r * w * std::sin(w * s), r * w * std::cos(w * s), v, 0.0}; },
      [=](double s) { return Quaternion{-r * w * w * std::cos(w * s), -r * w * w * std::sin(w * s), 0.0, 0.0}; });
}

/// A real immersion G into E^m, stored as an H^m-valued map with zero imaginary parts.
struct BaseImmersion {
  std::string label;
  ImmersionMap map;
  /// G lies on the unit sphere of E^m centred at the origin.
  bool unit_spherical = false;

  std::size_t target_dim() const { return map.ambient_dim; }
  std::vector<double> real_point(std::span<const double> p) const {
    const HVector v = map(p);
    std::vector<double> out(v.size());
    for (std::size_t a = 0; a < v.size(); ++a) out[a] = v[a].w;
    return out;
  }
};

inline BaseImmersion real_base(std::string label, Chart chart, std::size_t m,
                               std::function<std::vector<double>(std::span<const double>)> g,
                               bool unit_spherical = false) {
  BaseImmersion b;
  b.label = std::move(label);
  b.unit_spherical = unit_spherical;
  b.map.chart = std::move(chart);
  b.map.ambient_dim = m;
  b.map.rule = [g = std::move(g), m](std::span<const double> p) {
    const auto xs = g(p);
    if (xs.size() != m) throw GeometryError(ErrorCode::DimensionMismatch, "base immersion returned wrong dimension");
    return real_hvector(xs);
  };
  return b;
}

namespace detail {

/// (cos u_2 G_{n-1}(u_3..u_n), sin u_2), starting from (cos u, sin u).
inline std::vector<double> sphere_point(std::span<const double> u) {
  if (u.size() == 1) return {std::cos(u[0]), std::sin(u[0])};
  auto rest = sphere_point(u.subspan(1));
  const double c = std::cos(u[0]);
  for (auto& x : rest) x *= c;
  rest.push_back(std::sin(u[0]));
  return rest;
}

}  // namespace detail

/// The inclusion of S^{n-1} in E^n in spherical coordinates (u_2, ..., u_n),
/// with metric du_2^2 + cos^2 u_2 du_3^2 + ... .
inline BaseImmersion unit_sphere_immersion(std::size_t n) {
  if (n < 2) throw GeometryError(ErrorCode::InvalidArgument, "unit sphere immersion needs n >= 2");
  const double reach = std::numbers::pi / 2.0 - kSingularMargin;
  std::vector<Interval> bounds(n - 1, Interval{-reach, reach});
  std::vector<std::string> labels;
  for (std::size_t k = 2; k <= n; ++k) labels.push_back("u" + std::to_string(k));
  return real_base("unit_sphere(n=" + std::to_string(n) + ")", Chart(bounds, labels), n,
                   [](std::span<const double> u) { return detail::sphere_point(u); }, true);
}

/// G(t) = t d, a line through the origin of E^m.
inline BaseImmersion line_base(std::vector<double> direction, Interval t = {0.5, 1.5}) {
  double nd = 0.0;
  for (double x : direction) nd += x * x;
  nd = std::sqrt(nd);
  if (nd < 1e-12) throw GeometryError(ErrorCode::InvalidArgument, "line direction must be nonzero");
  for (auto& x : direction) x /= nd;
  const std::size_t m = direction.size();
  return real_base("line_base", Chart({t}, {"t"}), m, [direction](std::span<const double> p) {
    std::vector<double> out(direction);
    for (auto& x : out) x *= p[0];
    return out;
  });
}

struct Extensor {
  QuatCurve curve;
  BaseImmersion base;
  /// Chart (s, base coordinates...), values in H^m.
  ImmersionMap map;
};

/// (F (x) G)(s, p): component a equals F(s) G_a(p).
inline Extensor build_extensor_on(const QuatCurve& f, const BaseImmersion& g, Interval s_domain) {
  Extensor e;
  e.curve = f;
  e.base = g;
  e.map.chart = Chart({s_domain}, {"s"}).product(g.map.chart);
  e.map.ambient_dim = g.target_dim();
  e.map.rule = [fv = f.value, gm = g.map](std::span<const double> p) {
    const Quaternion fs = fv(p[0]);
    const HVector gp = gm(p.subspan(1));
    HVector out(gp.size());
    for (std::size_t a = 0; a < gp.size(); ++a) out[a] = gp[a].w * fs;
    return out;
  };
  return e;
}

inline Extensor build_extensor(const QuatCurve& f, const BaseImmersion& g) {
  return build_extensor_on(f, g, f.domain);
}

struct CurveCoefficients {
  /// lambda_phi = <F'', phi F'>
  std::array<double, 3> lambda{};
  /// mu_phi = <(F/|F|)', phi F/|F|>
  std::array<double, 3> mu{};
};

inline CurveCoefficients curve_coefficients(const QuatCurve& f, double s) {
  const Quaternion F = f(s);
  const double nf = F.norm();
  if (nf <= 1e-8) throw GeometryError(ErrorCode::InvalidArgument, "curve passes through the origin");
  const Quaternion d1 = f.derivative(s);
  const Quaternion d2 = f.second_derivative(s);
  const Quaternion u = F / nf;
  const Quaternion du = d1 / nf - (quat_dot(F, d1) / (nf * nf * nf)) * F;
  CurveCoefficients c;
  for (Structure st : kStructures) {
    const Quaternion phi = unit_of(st);
    c.lambda[slot_of(st)] = quat_dot(d2, phi * d1);
    c.mu[slot_of(st)] = quat_dot(du, phi * u);
  }
  return c;
}

/// Numerical h of F (x) iota at one chart point, in the frame with e_1 along +d/ds.
struct ExtensorPointProfile {
  PointGeometry geometry;
  Frame frame;
  SffTensor frame_sff;
  HUmbilicalProfile profile;
};

inline ExtensorPointProfile extensor_point_profile(const ImmersionMap& map, std::span<const double> p,
                                                   double jet_step = kJetStep) {
  ExtensorPointProfile out;
  out.geometry = analyze_point(map, p, jet_step);
  out.frame = make_frame(out.geometry.jet, out.geometry.jet.d1[0]);
  out.frame_sff = sff_in_frame(out.geometry.sff, out.frame);
  out.profile = extract_profile(out.frame_sff, out.frame);
  return out;
}

struct ProfileMatchReport {
  double max_discrepancy = 0.0;
  double max_pattern_residual = 0.0;
  std::size_t points = 0;
};

/// Compares the profile read off the numerical h of F (x) iota with curve_coefficients.
inline ProfileMatchReport extensor_profile_match(const QuatCurve& f, std::size_t n, const std::vector<Point>& grid) {
  const Extensor ext = build_extensor(f, unit_sphere_immersion(n));
  ProfileMatchReport r;
  for (const auto& p : grid) {
    const auto pp = extensor_point_profile(ext.map, p);
    const CurveCoefficients cc = curve_coefficients(f, p[0]);
    for (std::size_t i = 0; i < 3; ++i) {
      r.max_discrepancy = std::max(r.max_discrepancy, std::abs(pp.profile.lambda[i] - cc.lambda[i]));
      r.max_discrepancy = std::max(r.max_discrepancy, std::abs(pp.profile.mu[i] - cc.mu[i]));
    }
    r.max_pattern_residual = std::max(r.max_pattern_residual, pp.profile.pattern_residual);
    ++r.points;
  }
  return r;
}

inline ProfileMatchReport extensor_profile_match(const QuatCurve& f, std::size_t n, int per_coord = 17) {
  const Extensor ext = build_extensor(f, unit_sphere_immersion(n));
  return extensor_profile_match(f, n, chart_grid(ext.map.chart, per_coord));
}

struct TotallyRealReport {
  /// max |G| - min |G| over the base grid.
  double spherical_residual = 0.0;
  /// max over phi, s of |Re(phi F conj(F'))|.
  double real_part_residual = 0.0;
  /// The three ODE residuals in the components a, b, c, d of F.
  std::array<double, 3> ode_residuals{};
  /// max over grid of |Re(phi F conj F') <G(p), Y>| for Y among the coordinate tangents of G.
  double pointwise_residual = 0.0;
  bool spherical = false;
  bool real_branch = false;
  bool totally_real = false;
};

inline TotallyRealReport totally_real_test(const QuatCurve& f, const BaseImmersion& g, const std::vector<double>& s_grid,
                                           const std::vector<Point>& p_grid, double tol = 1e-8) {
  TotallyRealReport r;
  double gmin = 1e300, gmax = 0.0;
  double max_radial = 0.0;  // max |<G, d_a G>|
  for (const auto& p : p_grid) {
    const auto gp = g.real_point(p);
    double n2 = 0.0;
    for (double x : gp) n2 += x * x;
    gmin = std::min(gmin, std::sqrt(n2));
    gmax = std::max(gmax, std::sqrt(n2));
    const auto dg = first_derivatives(g.map, p);
    const HVector gv = real_hvector(gp);
    for (const auto& t : dg) max_radial = std::max(max_radial, std::abs(inner(gv, t)));
  }
  r.spherical_residual = p_grid.empty() ? 0.0 : gmax - gmin;

  for (double s : s_grid) {
    const Quaternion F = f(s);
    const Quaternion dF = f.derivative(s);
    const Quaternion q = F * quat_conj(dF);
    for (Structure st : kStructures)
      r.real_part_residual = std::max(r.real_part_residual, std::abs((unit_of(st) * q).real()));
    const double a = F.w, b = F.x, c = F.y, d = F.z;
    const double da = dF.w, db = dF.x, dc = dF.y, dd = dF.z;
    const std::array<double, 3> ode{a * db - da * b + c * dd - dc * d, a * dc - da * c + db * d - b * dd,
                                    a * dd - da * d + b * dc - db * c};
    for (std::size_t k = 0; k < 3; ++k) r.ode_residuals[k] = std::max(r.ode_residuals[k], std::abs(ode[k]));
  }
  r.pointwise_residual = r.real_part_residual * max_radial;
  r.spherical = r.spherical_residual <= tol;
  r.real_branch = r.real_part_residual <= tol;
  r.totally_real = r.spherical || r.real_branch;
  return r;
}

struct IsometryReport {
  bool f_isometric = false;
  bool g_isometric = false;
  /// max | |d_s (F (x) G)| - 1 |
  double f_residual = 0.0;
  /// max entry of |metric of p -> F(s) G(p)  -  metric of G|
  double g_residual = 0.0;
};

inline IsometryReport isometric_tests(const QuatCurve& f, const BaseImmersion& g, const std::vector<Point>& grid,
                                      double tol = 1e-6) {
  const Extensor ext = build_extensor(f, g);
  IsometryReport r;
  for (const auto& p : grid) {
    const auto d1 = first_derivatives(ext.map, p);
    r.f_residual = std::max(r.f_residual, std::abs(d1[0].norm() - 1.0));
    const auto gd1 = first_derivatives(g.map, std::span<const double>(p).subspan(1));
    for (std::size_t a = 0; a < gd1.size(); ++a)
      for (std::size_t b = 0; b < gd1.size(); ++b)
        r.g_residual = std::max(r.g_residual, std::abs(inner(d1[a + 1], d1[b + 1]) - inner(gd1[a], gd1[b])));
  }
  r.f_isometric = r.f_residual <= tol;
  r.g_isometric = r.g_residual <= tol;
  return r;
}

struct TotallyGeodesicReport {
  bool totally_geodesic = false;
  /// max |h(e_i, e_j)| in an orthonormal frame.
  double max_h = 0.0;
  /// max |<F'', F''> <xi, G(p)>| over unit normals xi of G.
  double eq3_max = 0.0;
  /// max |<F'', F> <xi, h_G(Y, Z)>|.
  double eq4_max = 0.0;
};

namespace detail {

/// Orthonormal basis of the normal space of a real immersion in E^m.
inline std::vector<HVector> real_normals(const std::vector<HVector>& tangents, std::size_t m) {
  std::vector<HVector> basis;
  for (const auto& t : tangents) {
    HVector r = t;
    for (const auto& e : basis) r.add_scaled(-inner(r, e), e);
    basis.push_back((1.0 / r.norm()) * r);
  }
  const std::size_t k = basis.size();
  for (std::size_t a = 0; a < m && basis.size() < m; ++a) {
    HVector r = HVector::zero(m);
    r[a] = Quaternion{1.0};
    for (const auto& e : basis) r.add_scaled(-inner(r, e), e);
    if (r.norm() > 1e-6) basis.push_back((1.0 / r.norm()) * r);
  }
  return {basis.begin() + static_cast<std::ptrdiff_t>(k), basis.end()};
}

}  // namespace detail

inline TotallyGeodesicReport totally_geodesic_test(const Extensor& ext, const std::vector<Point>& grid,
                                                   double tol = 1e-6) {
  TotallyGeodesicReport r;
  for (const auto& p : grid) {
    const PointGeometry pg = analyze_point(ext.map, p);
    const Frame fr = make_frame(pg.jet);
    const SffTensor fs = sff_in_frame(pg.sff, fr);
    for (std::size_t a = 0; a < fs.dim(); ++a)
      for (std::size_t b = 0; b < fs.dim(); ++b) r.max_h = std::max(r.max_h, fs(a, b).norm());

    const std::span<const double> q = std::span<const double>(p).subspan(1);
    const PointGeometry gg = analyze_point(ext.base.map, q);
    const auto normals = detail::real_normals(gg.jet.d1, ext.base.target_dim());
    const Quaternion F = ext.curve(p[0]);
    const Quaternion d2 = ext.curve.second_derivative(p[0]);
    for (const auto& xi : normals) {
      r.eq3_max = std::max(r.eq3_max, std::abs(d2.norm2() * inner(xi, gg.jet.position)));
      for (std::size_t a = 0; a < gg.sff.dim(); ++a)
        for (std::size_t b = 0; b < gg.sff.dim(); ++b)
          r.eq4_max = std::max(r.eq4_max, std::abs(quat_dot(d2, F) * inner(xi, gg.sff(a, b))));
    }
  }
  r.totally_geodesic = r.max_h <= tol;
  return r;
}

}  // namespace qlag
