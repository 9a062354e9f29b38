#pragma once

// The warped product I x_omega S^{n-1} with metric
//   ds^2 + omega(s)^2 (du_2^2 + cos^2 u_2 du_3^2 + ... + cos^2 u_2 ... cos^2 u_{n-1} du_n^2).
// Coordinate index 0 is s; index k >= 1 is u_{k+1}.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qlag/error.hpp"
#include "qlag/families.hpp"
#include "qlag/immersion.hpp"

namespace qlag {

using RealFn = std::function<double(double)>;

struct WarpingFunction {
  std::string label;
  RealFn value;
  /// Closed-form derivatives; empty means central differences.
  RealFn first;
  RealFn second;
  double fd_step = kJetStep;

  double operator()(double s) const { return value(s); }
  double d1(double s) const {
    if (first) return first(s);
    return (value(s + fd_step) - value(s - fd_step)) / (2.0 * fd_step);
  }
  double d2(double s) const {
    if (second) return second(s);
    return (value(s + fd_step) - 2.0 * value(s) + value(s - fd_step)) / (fd_step * fd_step);
  }
  /// f = omega' / omega
  double log_derivative(double s) const { return d1(s) / value(s); }
  /// f' = omega''/omega - f^2
  double log_derivative_prime(double s) const {
    const double f = log_derivative(s);
    return d2(s) / value(s) - f * f;
  }
};

/// scale * cos(rate s)
inline WarpingFunction cos_warp(double rate, double scale = 1.0) {
  return {"cos(" + std::to_string(rate) + "s)*" + std::to_string(scale),
          [=](double s) { return scale * std::cos(rate * s); },
          [=](double s) { return -scale * rate * std::sin(rate * s); },
          [=](double s) { return -scale * rate * rate * std::cos(rate * s); }};
}

/// e^{rate s}
inline WarpingFunction exp_warp(double rate) {
  return {"exp(" + std::to_string(rate) + "s)", [=](double s) { return std::exp(rate * s); },
          [=](double s) { return rate * std::exp(rate * s); },
          [=](double s) { return rate * rate * std::exp(rate * s); }};
}

inline WarpingFunction cosh_warp() {
  return {"cosh(s)", [](double s) { return std::cosh(s); }, [](double s) { return std::sinh(s); },
          [](double s) { return std::cosh(s); }};
}

inline WarpingFunction constant_warp(double c = 1.0) {
  return {"const(" + std::to_string(c) + ")", [c](double) { return c; }, [](double) { return 0.0; },
          [](double) { return 0.0; }};
}

/// A user warping function, differentiated numerically.
inline WarpingFunction custom_warp(std::string label, RealFn value) {
  return {std::move(label), std::move(value), {}, {}};
}

struct WarpedModel {
  WarpingFunction omega;
  double mu_bar = 0.0;
  std::size_t n = 0;
  Chart chart;
};

/// Interval of s on which cos(rate s) stays away from zero.
inline Interval cos_warp_domain(double rate) {
  if (rate <= 0.0) return {-1.0, 1.0};
  const double reach = (std::numbers::pi / 2.0 - kSingularMargin) / rate;
  return {-reach, reach};
}

inline WarpedModel make_warped_model(WarpingFunction omega, double mu_bar, std::size_t n, Interval s_domain) {
  if (n < 2) throw GeometryError(ErrorCode::InvalidArgument, "warped product needs n >= 2");
  if (mu_bar < 0.0) throw GeometryError(ErrorCode::InvalidArgument, "mu_bar must be non-negative");
  const double reach = std::numbers::pi / 2.0 - kSingularMargin;
  std::vector<Interval> bounds{s_domain};
  std::vector<std::string> labels{"s"};
  for (std::size_t k = 2; k <= n; ++k) {
    bounds.push_back({-reach, reach});
    labels.push_back("u" + std::to_string(k));
  }
  return {std::move(omega), mu_bar, n, Chart(bounds, labels)};
}

namespace detail {

inline void check_warped_point(const WarpedModel& model, std::span<const double> p) {
  if (p.size() != model.n)
    throw GeometryError(ErrorCode::DimensionMismatch, "warped point needs " + std::to_string(model.n) + " coordinates");
  if (!(model.omega(p[0]) > 1e-8)) throw GeometryError(ErrorCode::ChartSingularity, "omega vanishes");
  for (std::size_t k = 1; k + 1 < p.size(); ++k)
    if (std::abs(std::cos(p[k])) < 1e-8) throw GeometryError(ErrorCode::ChartSingularity, "cos u_k vanishes");
}

/// prod_{lo <= l < hi} cos^2 of leaf coordinate l (empty product = 1).
inline double cos2_product(std::span<const double> p, std::size_t lo, std::size_t hi) {
  double acc = 1.0;
  for (std::size_t l = lo; l < hi; ++l) acc *= std::cos(p[l]) * std::cos(p[l]);
  return acc;
}

}  // namespace detail

inline Matrix warped_metric(const WarpedModel& model, std::span<const double> p) {
  detail::check_warped_point(model, p);
  const auto n = static_cast<Eigen::Index>(model.n);
  Matrix g = Matrix::Zero(n, n);
  g(0, 0) = 1.0;
  const double w = model.omega(p[0]);
  for (Eigen::Index j = 1; j < n; ++j) g(j, j) = w * w * detail::cos2_product(p, 1, static_cast<std::size_t>(j));
  return g;
}

inline MetricField warped_metric_field(const WarpedModel& model) {
  return [model](std::span<const double> p) { return warped_metric(model, p); };
}

/// Levi-Civita connection of the warped metric in closed form; gamma[c](a, b) = Gamma^c_ab.
inline std::vector<Matrix> warped_christoffel_closed(const WarpedModel& model, std::span<const double> p) {
  detail::check_warped_point(model, p);
  const std::size_t n = model.n;
  const auto ni = static_cast<Eigen::Index>(n);
  std::vector<Matrix> gamma(n, Matrix::Zero(ni, ni));
  const double w = model.omega(p[0]);
  const double dw = model.omega.d1(p[0]);
  // nabla_s d_s = 0; nabla_s d_uk = (omega'/omega) d_uk
  for (std::size_t k = 1; k < n; ++k) gamma[k](0, k) = gamma[k](k, 0) = dw / w;
  // nabla_ui d_uj = -tan u_i d_uj, i < j
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) gamma[j](i, j) = gamma[j](j, i) = -std::tan(p[i]);
  // nabla_uj d_uj = -omega omega' cos^2 u_2...cos^2 u_{j-1} d_s + sum_{k<j} sin(2u_k)/2 cos^2 u_{k+1}...cos^2 u_{j-1} d_uk
  for (std::size_t j = 1; j < n; ++j) {
    gamma[0](j, j) = -w * dw * detail::cos2_product(p, 1, j);
    for (std::size_t k = 1; k < j; ++k) gamma[k](j, j) = 0.5 * std::sin(2.0 * p[k]) * detail::cos2_product(p, k + 1, j);
  }
  return gamma;
}

struct WarpingOdePoint {
  double s = 0.0;
  double f = 0.0;
  /// |f^2 + f' + mu_bar^2|
  double residual = 0.0;
};

inline std::vector<WarpingOdePoint> warping_ode_check(const WarpingFunction& omega, double mu_bar,
                                                      const std::vector<double>& s_grid) {
  std::vector<WarpingOdePoint> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    if (!(omega(s) > 1e-8)) throw GeometryError(ErrorCode::ChartSingularity, "omega vanishes at s = " + std::to_string(s));
    const double f = omega.log_derivative(s);
    out.push_back({s, f, std::abs(f * f + omega.log_derivative_prime(s) + mu_bar * mu_bar)});
  }
  return out;
}

struct LeafCurvaturePoint {
  double s = 0.0;
  /// |(1/omega^2 - f^2) - (-omega''/omega)|
  double first = 0.0;
  /// |-omega''/omega - mu_bar^2|
  double second = 0.0;
};

inline std::vector<LeafCurvaturePoint> leaf_curvature_check(const WarpingFunction& omega, double mu_bar,
                                                            const std::vector<double>& s_grid) {
  std::vector<LeafCurvaturePoint> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    const double w = omega(s);
    if (!(w > 1e-8)) throw GeometryError(ErrorCode::ChartSingularity, "omega vanishes at s = " + std::to_string(s));
    const double f = omega.log_derivative(s);
    const double radial = -omega.d2(s) / w;
    out.push_back({s, std::abs(1.0 / (w * w) - f * f - radial), std::abs(radial - mu_bar * mu_bar)});
  }
  return out;
}

template <typename T, typename Proj>
double max_of(const std::vector<T>& xs, Proj proj) {
  double m = 0.0;
  for (const auto& x : xs) m = std::max(m, proj(x));
  return m;
}

/// max over grid and leaf pairs of |<nabla_X Y, e_1> + f <X, Y>| for an
/// immersion whose chart has unit-speed s-lines (index 0) orthogonal to the leaves.
inline double spherical_distribution_check(const ImmersionMap& map, const RealFn& f, const std::vector<Point>& grid) {
  double worst = 0.0;
  for (const auto& p : grid) {
    const ImmersionJet j = jet(map, p);
    const double speed = j.d1[0].norm();
    if (std::abs(speed - 1.0) > 1e-6)
      throw GeometryError(ErrorCode::InvalidArgument, "chart not adapted: s-lines are not unit speed");
    const HVector e1 = (1.0 / speed) * j.d1[0];
    for (std::size_t a = 1; a < j.dim(); ++a)
      if (std::abs(inner(e1, j.d1[a])) > 1e-6 * j.d1[a].norm())
        throw GeometryError(ErrorCode::InvalidArgument, "chart not adapted: s-lines are not orthogonal to leaves");
    const double fs = f(p[0]);
    for (std::size_t a = 1; a < j.dim(); ++a)
      for (std::size_t b = 1; b < j.dim(); ++b)
        worst = std::max(worst, std::abs(inner(j.d2[a][b], e1) + fs * inner(j.d1[a], j.d1[b])));
  }
  return worst;
}

/// Same relation for the warped model itself, through the closed-form connection.
inline double spherical_distribution_check(const WarpedModel& model, const RealFn& f, const std::vector<Point>& grid) {
  double worst = 0.0;
  for (const auto& p : grid) {
    const auto gamma = warped_christoffel_closed(model, p);
    const Matrix g = warped_metric(model, p);
    const double fs = f(p[0]);
    for (std::size_t a = 1; a < model.n; ++a)
      for (std::size_t b = 1; b < model.n; ++b)
        worst = std::max(worst, std::abs(gamma[0](a, b) * g(0, 0) + fs * g(a, b)));
  }
  return worst;
}

/// Intrinsic sectional curvatures of the coordinate planes (d_u2, d_u3) and (d_s, d_u2).
struct WarpedCurvatures {
  double leaf_plane = 0.0;
  double radial_plane = 0.0;
};

inline WarpedCurvatures warped_sectional_curvatures(const WarpedModel& model, std::span<const double> p,
                                                    const CurvatureSteps& steps = {}) {
  const RiemannTensor r = riemann_from_metric(warped_metric_field(model), p, steps);
  const auto n = static_cast<Eigen::Index>(model.n);
  auto unit = [n](Eigen::Index k) {
    Vector v = Vector::Zero(n);
    v(k) = 1.0;
    return v;
  };
  WarpedCurvatures k;
  k.radial_plane = r.sectional(unit(0), unit(1));
  k.leaf_plane = model.n >= 3 ? r.sectional(unit(1), unit(2)) : 0.0;
  return k;
}

}  // namespace qlag
