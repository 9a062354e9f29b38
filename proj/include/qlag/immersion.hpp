#pragma once

// Parametric immersions into H^n: finite-difference jets, induced metric,
// Levi-Civita connection, second fundamental form and the curvature
// quantities built from them.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlag/error.hpp"
#include "qlag/quaternion.hpp"

namespace qlag {

using Point = std::vector<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Step for first and second partials of an immersion.
inline constexpr double kJetStep = 1e-4;
/// Outer step for derivatives of derived fields (metric, h).
inline constexpr double kNestedStep = 1e-4;
/// Inner jet step used under a nested difference, where round-off in d2 is amplified.
inline constexpr double kNestedJetStep = 1e-3;
/// Gram-Schmidt remainders below this norm mean the tangents are dependent.
inline constexpr double kRankTolerance = 1e-10;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<Interval> bounds, std::vector<std::string> labels = {})
      : bounds_(std::move(bounds)), labels_(std::move(labels)) {
    if (bounds_.empty())
      throw GeometryError(ErrorCode::InvalidArgument, "chart needs at least one coordinate");
    for (const auto& b : bounds_)
      if (!(b.hi > b.lo))
        throw GeometryError(ErrorCode::InvalidArgument, "chart interval has non-positive length");
    if (labels_.empty())
      for (std::size_t a = 0; a < bounds_.size(); ++a) labels_.push_back("x" + std::to_string(a + 1));
    if (labels_.size() != bounds_.size())
      throw GeometryError(ErrorCode::DimensionMismatch, "chart labels do not match bounds");
  }

  std::size_t dim() const { return bounds_.size(); }
  const std::vector<Interval>& bounds() const { return bounds_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool contains(std::span<const double> p, double pad = 0.0) const {
    if (p.size() != dim()) return false;
    for (std::size_t a = 0; a < dim(); ++a)
      if (p[a] < bounds_[a].lo + pad || p[a] > bounds_[a].hi - pad) return false;
    return true;
  }

  Point center() const {
    Point c;
    for (const auto& b : bounds_) c.push_back(b.mid());
    return c;
  }

  /// Chart formed by this chart's coordinates followed by `other`'s.
  Chart product(const Chart& other) const {
    auto b = bounds_;
    auto l = labels_;
    b.insert(b.end(), other.bounds_.begin(), other.bounds_.end());
    l.insert(l.end(), other.labels_.begin(), other.labels_.end());
    return Chart(std::move(b), std::move(l));
  }

 private:
  std::vector<Interval> bounds_;
  std::vector<std::string> labels_;
};

/// Cell-centred tensor grid with `per_coord` nodes along every coordinate.
inline std::vector<Point> chart_grid(const Chart& chart, int per_coord) {
  if (per_coord < 1) throw GeometryError(ErrorCode::InvalidArgument, "grid needs >= 1 node per coordinate");
  const std::size_t m = chart.dim();
  std::size_t total = 1;
  for (std::size_t a = 0; a < m; ++a) total *= static_cast<std::size_t>(per_coord);
  std::vector<Point> pts;
  pts.reserve(total);
  std::vector<int> idx(m, 0);
  for (std::size_t n = 0; n < total; ++n) {
    Point p(m);
    for (std::size_t a = 0; a < m; ++a) {
      const auto& b = chart.bounds()[a];
      p[a] = b.lo + b.length() * (idx[a] + 0.5) / per_coord;
    }
    pts.push_back(std::move(p));
    for (std::size_t a = m; a-- > 0;) {
      if (++idx[a] < per_coord) break;
      idx[a] = 0;
    }
  }
  return pts;
}

struct ImmersionMap {
  Chart chart;
  std::size_t ambient_dim = 0;
  std::function<HVector(std::span<const double>)> rule;

  std::size_t dim() const { return chart.dim(); }

  HVector operator()(std::span<const double> p) const {
    HVector v = rule(p);
    if (v.size() != ambient_dim)
      throw GeometryError(ErrorCode::DimensionMismatch, "immersion rule returned wrong ambient dimension");
    return v;
  }
};

struct ImmersionJet {
  Point point;
  HVector position;
  std::vector<HVector> d1;
  std::vector<std::vector<HVector>> d2;

  std::size_t dim() const { return d1.size(); }
};

namespace detail {

inline Point shifted(std::span<const double> p, std::size_t a, double da) {
  Point q(p.begin(), p.end());
  q[a] += da;
  return q;
}

inline Point shifted(std::span<const double> p, std::size_t a, double da, std::size_t b, double db) {
  Point q(p.begin(), p.end());
  q[a] += da;
  q[b] += db;
  return q;
}

/// Fourth-order central difference of f at t = 0.
template <typename Fn>
auto central_diff4(Fn&& f, double h) {
  using Value = decltype(f(0.0));
  const Value near = f(h) - f(-h);
  const Value far = f(2.0 * h) - f(-2.0 * h);
  return Value((8.0 * near - far) / (12.0 * h));
}

inline void check_point(const Chart& chart, std::span<const double> p, double pad) {
  if (p.size() != chart.dim())
    throw GeometryError(ErrorCode::DimensionMismatch, "point has " + std::to_string(p.size()) +
                                                          " coordinates, chart has " +
                                                          std::to_string(chart.dim()));
  if (!chart.contains(p, pad))
    throw GeometryError(ErrorCode::OutOfBounds, "stencil of half-width " + std::to_string(pad) +
                                                    " leaves the chart");
}

inline void check_step(double step) {
  if (!(step > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "finite-difference step must be positive");
}

/// Gram-Schmidt remainder norms of `vs` in order; throws on rank deficiency.
inline void require_independent(const std::vector<HVector>& vs) {
  std::vector<HVector> basis;
  for (std::size_t a = 0; a < vs.size(); ++a) {
    HVector r = vs[a];
    for (const auto& e : basis) r.add_scaled(-inner(r, e), e);
    const double nr = r.norm();
    if (nr < kRankTolerance)
      throw GeometryError(ErrorCode::NonImmersion, "tangent " + std::to_string(a) + " is dependent");
    basis.push_back((1.0 / nr) * r);
  }
}

}  // namespace detail

/// Central first partials only.
inline std::vector<HVector> first_derivatives(const ImmersionMap& map, std::span<const double> p,
                                              double step = kJetStep) {
  detail::check_step(step);
  detail::check_point(map.chart, p, step);
  std::vector<HVector> d1;
  d1.reserve(map.dim());
  for (std::size_t a = 0; a < map.dim(); ++a) {
    HVector fp = map(detail::shifted(p, a, step));
    fp -= map(detail::shifted(p, a, -step));
    d1.push_back((0.5 / step) * fp);
  }
  return d1;
}

/// Position, first and second partials by central differences.
inline ImmersionJet jet(const ImmersionMap& map, std::span<const double> p, double step = kJetStep) {
  detail::check_step(step);
  detail::check_point(map.chart, p, step);
  const std::size_t m = map.dim();
  ImmersionJet j;
  j.point.assign(p.begin(), p.end());
  j.position = map(p);
  j.d1.resize(m);
  j.d2.assign(m, std::vector<HVector>(m));

  const double h2 = step * step;
  for (std::size_t a = 0; a < m; ++a) {
    const HVector fp = map(detail::shifted(p, a, step));
    const HVector fm = map(detail::shifted(p, a, -step));
    j.d1[a] = (0.5 / step) * (fp - fm);
    HVector dd = fp + fm;
    dd.add_scaled(-2.0, j.position);
    j.d2[a][a] = (1.0 / h2) * dd;
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      HVector mixed = map(detail::shifted(p, a, step, b, step));
      mixed -= map(detail::shifted(p, a, step, b, -step));
      mixed -= map(detail::shifted(p, a, -step, b, step));
      mixed += map(detail::shifted(p, a, -step, b, -step));
      mixed *= 0.25 / h2;
      // The four-point stencil is symmetric in (a, b), so both slots share it.
      j.d2[a][b] = mixed;
      j.d2[b][a] = std::move(mixed);
    }
  }
  detail::require_independent(j.d1);
  return j;
}

struct MetricData {
  Matrix g;
  Matrix ginv;
  /// christoffel[c](a, b) = Gamma^c_ab.
  std::vector<Matrix> christoffel;

  std::size_t dim() const { return static_cast<std::size_t>(g.rows()); }
  bool has_christoffel() const { return !christoffel.empty(); }
};

inline Matrix gram_matrix(const std::vector<HVector>& vs) {
  const auto m = static_cast<Eigen::Index>(vs.size());
  Matrix g(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a; b < m; ++b) g(a, b) = g(b, a) = inner(vs[a], vs[b]);
  return g;
}

inline Matrix invert_metric(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() <= 1e-14 * std::max(top, 1e-300))
    throw GeometryError(ErrorCode::SingularMetric, "metric is not positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

inline MetricData induced_metric(const ImmersionJet& j) {
  MetricData md;
  md.g = gram_matrix(j.d1);
  md.ginv = invert_metric(md.g);
  return md;
}

using MetricField = std::function<Matrix(std::span<const double>)>;

/// Metric field of an immersion from first differences at `step`.
inline MetricField induced_metric_field(const ImmersionMap& map, double step = kJetStep) {
  return [map, step](std::span<const double> p) { return gram_matrix(first_derivatives(map, p, step)); };
}

/// Gamma^c_ab = 1/2 g^{cd} (d_a g_db + d_b g_da - d_d g_ab), dg by central differences.
inline std::vector<Matrix> christoffel_from_metric(const MetricField& field, std::span<const double> p,
                                                   double step, const Matrix& ginv) {
  detail::check_step(step);
  const std::size_t m = p.size();
  std::vector<Matrix> dg(m);
  for (std::size_t c = 0; c < m; ++c)
    dg[c] = detail::central_diff4([&](double t) { return field(detail::shifted(p, c, t)); }, step);

  std::vector<Matrix> gamma(m, Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        double acc = 0.0;
        for (std::size_t d = 0; d < m; ++d)
          acc += ginv(c, d) * (dg[a](d, b) + dg[b](d, a) - dg[d](a, b));
        gamma[c](a, b) = 0.5 * acc;
      }
  return gamma;
}

inline std::vector<Matrix> christoffel_from_metric(const MetricField& field, std::span<const double> p,
                                                   double step) {
  return christoffel_from_metric(field, p, step, invert_metric(field(p)));
}

/// Induced metric plus Levi-Civita Christoffels at p.
inline MetricData christoffel(const ImmersionMap& map, std::span<const double> p, double step = kNestedStep,
                              double jet_step = kJetStep) {
  detail::check_step(step);
  detail::check_point(map.chart, p, 2.0 * step + jet_step);
  const auto field = induced_metric_field(map, jet_step);
  MetricData md;
  md.g = field(p);
  md.ginv = invert_metric(md.g);
  md.christoffel = christoffel_from_metric(field, p, step, md.ginv);
  return md;
}

enum class Basis { Coordinate, Frame };

struct SffTensor {
  std::vector<std::vector<HVector>> h;
  Basis basis = Basis::Coordinate;
  /// Largest tangential part removed by the normal projection, relative to 1 + |h|.
  double tangential_residual = 0.0;

  std::size_t dim() const { return h.size(); }
  const HVector& operator()(std::size_t a, std::size_t b) const { return h[a][b]; }
};

/// Tangential part of v relative to the coordinate tangents.
inline HVector tangential_part(const HVector& v, const std::vector<HVector>& d1, const Matrix& ginv) {
  const std::size_t m = d1.size();
  Vector proj(static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < m; ++a) proj(a) = inner(v, d1[a]);
  const Vector coeff = ginv * proj;
  HVector t = HVector::zero(v.size());
  for (std::size_t a = 0; a < m; ++a) t.add_scaled(coeff(a), d1[a]);
  return t;
}

inline HVector normal_part(const HVector& v, const std::vector<HVector>& d1, const Matrix& ginv) {
  return v - tangential_part(v, d1, ginv);
}

/// h_ab = d2_ab - Gamma^c_ab d1_c, followed by projection onto the normal space.
inline SffTensor second_fundamental_form(const ImmersionJet& j, const MetricData& md) {
  if (!md.has_christoffel())
    throw GeometryError(ErrorCode::InvalidArgument, "second fundamental form needs Christoffel symbols");
  const std::size_t m = j.dim();
  if (md.dim() != m) throw GeometryError(ErrorCode::DimensionMismatch, "metric and jet disagree on dimension");
  SffTensor s;
  s.h.assign(m, std::vector<HVector>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      HVector v = j.d2[a][b];
      for (std::size_t c = 0; c < m; ++c) v.add_scaled(-md.christoffel[c](a, b), j.d1[c]);
      const HVector t = tangential_part(v, j.d1, md.ginv);
      v -= t;
      s.tangential_residual = std::max(s.tangential_residual, t.norm() / (1.0 + v.norm()));
      s.h[a][b] = v;
      s.h[b][a] = std::move(v);
    }
  return s;
}

/// Everything about an immersion at one point that the checks need.
struct PointGeometry {
  ImmersionJet jet;
  MetricData metric;
  SffTensor sff;
};

inline PointGeometry analyze_point(const ImmersionMap& map, std::span<const double> p,
                                   double jet_step = kJetStep, double christoffel_step = kNestedStep) {
  PointGeometry pg;
  pg.jet = jet(map, p, jet_step);
  pg.metric = christoffel(map, p, christoffel_step, jet_step);
  pg.sff = second_fundamental_form(pg.jet, pg.metric);
  return pg;
}

struct Frame {
  std::vector<HVector> e;
  /// coeffs(i, a): e_i = sum_a coeffs(i, a) d1_a.
  Matrix coeffs;

  std::size_t dim() const { return e.size(); }
};

/// Orthonormal tangent frame by Gram-Schmidt on d1. With `first`, that
/// direction is projected to the tangent space and used as e_1, and the
/// coordinate tangents are added in order of largest remainder.
inline Frame make_frame(const ImmersionJet& j, const std::optional<HVector>& first = std::nullopt) {
  const std::size_t m = j.dim();
  const Matrix ginv = invert_metric(gram_matrix(j.d1));
  std::vector<HVector> basis;
  std::vector<bool> used(m, false);

  auto remainder = [&basis](const HVector& v) {
    HVector r = v;
    for (const auto& e : basis) r.add_scaled(-inner(r, e), e);
    return r;
  };

  if (first) {
    const HVector t = tangential_part(*first, j.d1, ginv);
    const double off = (*first - t).norm();
    if (off > 1e-6 * std::max(1.0, first->norm()))
      throw GeometryError(ErrorCode::InvalidArgument, "distinguished direction is not tangent");
    const double nt = t.norm();
    if (nt < kRankTolerance) throw GeometryError(ErrorCode::NonImmersion, "distinguished direction vanishes");
    basis.push_back((1.0 / nt) * t);
    while (basis.size() < m) {
      std::size_t best = m;
      double best_norm = -1.0;
      HVector best_r;
      for (std::size_t a = 0; a < m; ++a) {
        if (used[a]) continue;
        HVector r = remainder(j.d1[a]);
        const double nr = r.norm() / j.d1[a].norm();
        if (nr > best_norm) {
          best_norm = nr;
          best = a;
          best_r = std::move(r);
        }
      }
      used[best] = true;
      const double nr = best_r.norm();
      if (nr < kRankTolerance) throw GeometryError(ErrorCode::NonImmersion, "frame completion degenerated");
      basis.push_back((1.0 / nr) * best_r);
    }
  } else {
    for (std::size_t a = 0; a < m; ++a) {
      HVector r = remainder(j.d1[a]);
      const double nr = r.norm();
      if (nr < kRankTolerance) throw GeometryError(ErrorCode::NonImmersion, "tangent " + std::to_string(a) + " is dependent");
      basis.push_back((1.0 / nr) * r);
    }
  }

  Frame f;
  f.e = std::move(basis);
  f.coeffs.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    Vector proj(static_cast<Eigen::Index>(m));
    for (std::size_t a = 0; a < m; ++a) proj(a) = inner(f.e[i], j.d1[a]);
    f.coeffs.row(static_cast<Eigen::Index>(i)) = (ginv * proj).transpose();
  }
  return f;
}

/// Re-expresses a coordinate-basis h in an orthonormal frame.
inline SffTensor sff_in_frame(const SffTensor& s, const Frame& f) {
  if (s.basis == Basis::Frame) return s;
  const std::size_t m = s.dim();
  SffTensor out;
  out.basis = Basis::Frame;
  out.tangential_residual = s.tangential_residual;
  out.h.assign(m, std::vector<HVector>(m));
  const std::size_t n = s.h[0][0].size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i; k < m; ++k) {
      HVector v = HVector::zero(n);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) v.add_scaled(f.coeffs(i, a) * f.coeffs(k, b), s.h[a][b]);
      out.h[i][k] = v;
      out.h[k][i] = std::move(v);
    }
  return out;
}

/// H = (1/m) g^{ab} h_ab; for a frame-basis tensor the metric is the identity.
inline HVector mean_curvature(const SffTensor& s, const MetricData& md) {
  const std::size_t m = s.dim();
  HVector acc = HVector::zero(s.h[0][0].size());
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double w = s.basis == Basis::Frame ? (a == b ? 1.0 : 0.0) : md.ginv(a, b);
      if (w != 0.0) acc.add_scaled(w, s.h[a][b]);
    }
  return (1.0 / static_cast<double>(m)) * acc;
}

inline HVector mean_curvature(const SffTensor& frame_sff) {
  if (frame_sff.basis != Basis::Frame)
    throw GeometryError(ErrorCode::InvalidArgument, "metric required for a coordinate-basis tensor");
  return mean_curvature(frame_sff, MetricData{});
}

/// A_zeta in the frame: A(i, j) = <h(e_i, e_j), zeta>.
inline Matrix shape_operator(const SffTensor& s, const Frame& f, const HVector& zeta) {
  const SffTensor fs = sff_in_frame(s, f);
  const std::size_t m = f.dim();
  const double scale = std::max(1.0, zeta.norm());
  for (const auto& e : f.e)
    if (std::abs(inner(e, zeta)) > 1e-6 * scale)
      throw GeometryError(ErrorCode::NotNormal, "shape operator direction has a tangential component");
  Matrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i; k < m; ++k) a(i, k) = a(k, i) = inner(fs.h[i][k], zeta);
  return a;
}

/// h(X, Y) for component vectors X, Y in the tensor's basis.
inline HVector sff_apply(const SffTensor& s, const Vector& x, const Vector& y) {
  const std::size_t m = s.dim();
  HVector acc = HVector::zero(s.h[0][0].size());
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double w = x(a) * y(b);
      if (w != 0.0) acc.add_scaled(w, s.h[a][b]);
    }
  return acc;
}

/// Sectional curvature from the Gauss equation in flat ambient space.
/// X, Y are components in the tensor's basis; `g` is ignored for frame tensors.
inline double sectional_curvature(const SffTensor& s, const Matrix& g, const Vector& x, const Vector& y) {
  const Matrix metric = s.basis == Basis::Frame
                            ? Matrix::Identity(static_cast<Eigen::Index>(s.dim()), static_cast<Eigen::Index>(s.dim()))
                            : g;
  const double xx = x.dot(metric * x);
  const double yy = y.dot(metric * y);
  const double xy = x.dot(metric * y);
  const double area2 = xx * yy - xy * xy;
  if (area2 <= 1e-12 * xx * yy || area2 <= 0.0)
    throw GeometryError(ErrorCode::DegeneratePlane, "tangent vectors are (nearly) dependent");
  const HVector hxx = sff_apply(s, x, x);
  const HVector hyy = sff_apply(s, y, y);
  const HVector hxy = sff_apply(s, x, y);
  return (inner(hxx, hyy) - inner(hxy, hxy)) / area2;
}

/// Same, for ambient tangent vectors expressed through a frame.
inline double sectional_curvature(const SffTensor& s, const Frame& f, const HVector& x, const HVector& y) {
  const SffTensor fs = sff_in_frame(s, f);
  const auto m = static_cast<Eigen::Index>(f.dim());
  Vector cx(m), cy(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    cx(i) = inner(x, f.e[i]);
    cy(i) = inner(y, f.e[i]);
  }
  return sectional_curvature(fs, Matrix::Identity(m, m), cx, cy);
}

/// Intrinsic curvature from finite differences of a metric field.
struct CurvatureSteps {
  double christoffel = 1e-3;
  double riemann = 1e-3;
};

struct RiemannTensor {
  std::size_t m = 0;
  Matrix g;
  /// up[(e * m + c) * m * m + a * m + b] = R^e_{cab}, R(d_a, d_b) d_c = R^e_{cab} d_e.
  std::vector<double> up;

  double upper(std::size_t e, std::size_t c, std::size_t a, std::size_t b) const {
    return up[((e * m + c) * m + a) * m + b];
  }
  /// g(R(X, Y) Y, X) / (|X|^2 |Y|^2 - <X, Y>^2).
  double sectional(const Vector& x, const Vector& y) const {
    double num = 0.0;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c) {
          double r = 0.0;
          for (std::size_t d = 0; d < m; ++d) {
            double re = 0.0;
            for (std::size_t e = 0; e < m; ++e) re += upper(e, c, a, b) * g(e, d);
            r += re * x(d);
          }
          num += x(a) * y(b) * y(c) * r;
        }
    const double xx = x.dot(g * x), yy = y.dot(g * y), xy = x.dot(g * y);
    const double area2 = xx * yy - xy * xy;
    if (area2 <= 1e-12 * xx * yy)
      throw GeometryError(ErrorCode::DegeneratePlane, "tangent vectors are (nearly) dependent");
    return num / area2;
  }
};

inline RiemannTensor riemann_from_metric(const MetricField& field, std::span<const double> p,
                                         const CurvatureSteps& steps = {}) {
  detail::check_step(steps.riemann);
  const std::size_t m = p.size();
  const auto gamma_at = [&](std::span<const double> q) { return christoffel_from_metric(field, q, steps.christoffel); };
  const auto gamma = gamma_at(p);
  std::vector<std::vector<Matrix>> dgamma(m);  // dgamma[a][e](b, c) = d_a Gamma^e_bc
  for (std::size_t a = 0; a < m; ++a) {
    const double h = steps.riemann;
    const auto gp2 = gamma_at(detail::shifted(p, a, 2.0 * h));
    const auto gp1 = gamma_at(detail::shifted(p, a, h));
    const auto gm1 = gamma_at(detail::shifted(p, a, -h));
    const auto gm2 = gamma_at(detail::shifted(p, a, -2.0 * h));
    dgamma[a].resize(m);
    for (std::size_t e = 0; e < m; ++e)
      dgamma[a][e] = (8.0 * (gp1[e] - gm1[e]) - (gp2[e] - gm2[e])) / (12.0 * h);
  }
  RiemannTensor r;
  r.m = m;
  r.g = field(p);
  r.up.assign(m * m * m * m, 0.0);
  for (std::size_t e = 0; e < m; ++e)
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          double v = dgamma[a][e](b, c) - dgamma[b][e](a, c);
          for (std::size_t f = 0; f < m; ++f) v += gamma[e](a, f) * gamma[f](b, c) - gamma[e](b, f) * gamma[f](a, c);
          r.up[((e * m + c) * m + a) * m + b] = v;
        }
  return r;
}

/// Intrinsic Riemann tensor of an immersion's induced metric.
inline RiemannTensor intrinsic_riemann(const ImmersionMap& map, std::span<const double> p,
                                       const CurvatureSteps& steps = {}, double jet_step = kJetStep) {
  detail::check_point(map.chart, p, 2.0 * (steps.riemann + steps.christoffel) + jet_step);
  return riemann_from_metric(induced_metric_field(map, jet_step), p, steps);
}

/// Second fundamental form in coordinates, as a field evaluated at an arbitrary point.
inline SffTensor sff_at(const ImmersionMap& map, std::span<const double> p, double jet_step,
                        double christoffel_step = kNestedStep) {
  return analyze_point(map, p, jet_step, christoffel_step).sff;
}

/// max_{a,b,c} |(nabla h)(a, b, c) - (nabla h)(b, a, c)| with
/// (nabla h)(a, b, c) = nor(d_a h_bc) - h(nabla_a d_b, d_c) - h(d_b, nabla_a d_c).
inline double codazzi_residual(const ImmersionMap& map, std::span<const double> p, double step = kNestedStep,
                               double jet_step = kNestedJetStep) {
  detail::check_step(step);
  detail::check_point(map.chart, p, step + jet_step + 2.0 * kNestedStep);
  const std::size_t m = map.dim();
  const PointGeometry pg = analyze_point(map, p, jet_step);
  std::vector<std::vector<std::vector<HVector>>> dh(m);
  for (std::size_t a = 0; a < m; ++a) {
    const SffTensor hp = sff_at(map, detail::shifted(p, a, step), jet_step);
    const SffTensor hm = sff_at(map, detail::shifted(p, a, -step), jet_step);
    dh[a].assign(m, std::vector<HVector>(m));
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        const HVector raw = (0.5 / step) * (hp.h[b][c] - hm.h[b][c]);
        dh[a][b][c] = normal_part(raw, pg.jet.d1, pg.metric.ginv);
      }
  }
  const auto& gamma = pg.metric.christoffel;
  const auto& h = pg.sff.h;
  auto nabla_h = [&](std::size_t a, std::size_t b, std::size_t c) {
    HVector v = dh[a][b][c];
    for (std::size_t d = 0; d < m; ++d) {
      v.add_scaled(-gamma[d](a, b), h[d][c]);
      v.add_scaled(-gamma[d](a, c), h[b][d]);
    }
    return v;
  };
  double worst = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        worst = std::max(worst, (nabla_h(a, b, c) - nabla_h(b, a, c)).norm());
  return worst;
}

/// Curvature tensor of the quaternion space form of quaternion sectional curvature 4c.
inline HVector spaceform_curvature(double c, const HVector& x, const HVector& y, const HVector& z) {
  x.require_same(y);
  x.require_same(z);
  HVector r = inner(y, z) * x;
  r.add_scaled(-inner(x, z), y);
  for (Structure s : kStructures) {
    const HVector sx = apply_structure(s, x);
    const HVector sy = apply_structure(s, y);
    const HVector sz = apply_structure(s, z);
    r.add_scaled(inner(sy, z), sx);
    r.add_scaled(-inner(sx, z), sy);
    r.add_scaled(2.0 * inner(x, sy), sz);
  }
  return c * r;
}

}  // namespace qlag
