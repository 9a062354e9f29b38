#pragma once

// Batch verification: named families, check suites over a chart grid,
// and the report they produce.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qlag/codazzi_scalars.hpp"
#include "qlag/error.hpp"
#include "qlag/families.hpp"
#include "qlag/immersion.hpp"
#include "qlag/lagrangian.hpp"
#include "qlag/random.hpp"
#include "qlag/warped.hpp"

namespace qlag {

struct FamilySpec {
  std::string name;
  /// key=value parameters as given; defaults are filled in by make_family.
  std::map<std::string, std::string> params;
};

struct GridSpec {
  int per_coord = 17;
  double step = kJetStep;
};

enum class ToleranceClass { Algebra, FirstOrder, SecondOrder, Nested };

struct Tolerances {
  double algebra = 1e-12;
  double first_order = 1e-6;
  double second_order = 1e-4;
  double nested = 1e-3;
  /// Per-check overrides by check name.
  std::map<std::string, double> overrides;

  double of(ToleranceClass c) const {
    switch (c) {
      case ToleranceClass::Algebra: return algebra;
      case ToleranceClass::FirstOrder: return first_order;
      case ToleranceClass::SecondOrder: return second_order;
      case ToleranceClass::Nested: return nested;
    }
    return nested;
  }

  /// Sets a class ("algebra", "first_order", "second_order", "nested") or a single check.
  void set(const std::string& name, double value) {
    if (name == "algebra") algebra = value;
    else if (name == "first_order") first_order = value;
    else if (name == "second_order") second_order = value;
    else if (name == "nested") nested = value;
    else overrides[name] = value;
  }
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ProfileRow {
  Point point;
  std::array<double, 3> lambda{};
  std::array<double, 3> mu{};
  std::array<double, 3> gamma{};
  /// Gauss-equation sectional curvature of the plane (e_1, e_2).
  double curvature = 0.0;
};

struct ProfileSummary {
  std::vector<ProfileRow> rows;
  std::array<double, 3> lambda_min{}, lambda_max{};
  std::array<double, 3> mu_min{}, mu_max{};
  std::array<double, 3> gamma_min{}, gamma_max{};
};

struct VerificationReport {
  std::string family;
  std::vector<std::pair<std::string, std::string>> family_params;
  std::string suite;
  GridSpec grid;
  std::size_t grid_points = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  ProfileSummary profiles;
  double wall_ms = 0.0;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

enum class FamilyKind { SphereExtensor, LineBaseExtensor, WarpedModel };

struct Family {
  std::string name;
  FamilyKind kind = FamilyKind::SphereExtensor;
  std::vector<std::pair<std::string, std::string>> params;
  std::optional<Extensor> extensor;
  std::optional<WarpedModel> warped;
  /// Sphere extensors of constant sectional curvature, where the warping ODE applies.
  bool constant_curvature = false;
  std::optional<double> curvature_value;
  std::optional<double> mu_bar;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lagrangian", "humbilical", "totally_real", "totally_geodesic",
                                              "warped", "gauss_codazzi", "all"};
  return names;
}

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"pseudo_sphere", "circle_extensor", "line_extensor", "helix_extensor",
                                              "line_base_extensor", "warped_cos", "warped_exp"};
  return names;
}

namespace detail {

class ParamReader {
 public:
  explicit ParamReader(const FamilySpec& spec) : spec_(spec) {}

  double number(const std::string& key, double fallback) {
    double v = fallback;
    if (auto it = spec_.params.find(key); it != spec_.params.end()) {
      std::size_t used = 0;
      try {
        v = std::stod(it->second, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != it->second.size())
        throw GeometryError(ErrorCode::InvalidArgument, "parameter " + key + "='" + it->second + "' is not a number");
    }
    record(key, format(v));
    return v;
  }

  std::size_t integer(const std::string& key, std::size_t fallback) {
    const double v = number(key, static_cast<double>(fallback));
    if (v < 1 || std::floor(v) != v)
      throw GeometryError(ErrorCode::InvalidArgument, "parameter " + key + " must be a positive integer");
    used_.back().second = std::to_string(static_cast<std::size_t>(v));
    return static_cast<std::size_t>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    std::string v = fallback;
    if (auto it = spec_.params.find(key); it != spec_.params.end()) v = it->second;
    record(key, v);
    return v;
  }

  std::vector<std::pair<std::string, std::string>> finish() {
    for (const auto& [k, v] : spec_.params) {
      const bool known = std::any_of(used_.begin(), used_.end(), [&](const auto& kv) { return kv.first == k; });
      if (!known) throw GeometryError(ErrorCode::InvalidArgument, "family " + spec_.name + " has no parameter '" + k + "'");
    }
    return used_;
  }

  static std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }

 private:
  void record(const std::string& key, std::string value) { used_.emplace_back(key, std::move(value)); }

  const FamilySpec& spec_;
  std::vector<std::pair<std::string, std::string>> used_;
};

}  // namespace detail

inline Family make_family(const FamilySpec& spec) {
  detail::ParamReader in(spec);
  Family fam;
  fam.name = spec.name;
  if (spec.name == "pseudo_sphere") {
    const double b = in.number("b", 0.5);
    const std::size_t n = in.integer("n", 3);
    fam.extensor = build_extensor(pseudo_sphere_curve(b), unit_sphere_immersion(n));
    fam.constant_curvature = true;
    fam.curvature_value = b * b;
    fam.mu_bar = b;
  } else if (spec.name == "circle_extensor") {
    const std::size_t n = in.integer("n", 2);
    const Structure plane = structure_from_string(in.text("plane", "I"));
    fam.extensor = build_extensor(circle_curve(plane), unit_sphere_immersion(n));
  } else if (spec.name == "line_extensor") {
    const std::size_t n = in.integer("n", 3);
    const double a = in.number("a", 1.0);
    fam.extensor = build_extensor(line_curve(a), unit_sphere_immersion(n));
    fam.constant_curvature = true;
    fam.curvature_value = 0.0;
    fam.mu_bar = 0.0;
  } else if (spec.name == "helix_extensor") {
    const std::size_t n = in.integer("n", 3);
    const double r = in.number("r", 0.6);
    const double w = in.number("w", 1.0);
    const double off = in.number("offset", 0.8);
    fam.extensor = build_extensor(helix_curve(r, w, off), unit_sphere_immersion(n));
  } else if (spec.name == "line_base_extensor") {
    fam.kind = FamilyKind::LineBaseExtensor;
    const Structure plane = structure_from_string(in.text("plane", "I"));
    fam.extensor = build_extensor(circle_curve(plane), line_base({1.0, 0.0}));
  } else if (spec.name == "warped_cos") {
    fam.kind = FamilyKind::WarpedModel;
    const double mu = in.number("mu", 0.5);
    if (!(mu > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "warped_cos needs mu > 0");
    const std::size_t n = in.integer("n", 3);
    // scale = 1/mu is the normalisation for which 1/omega^2 - f^2 = mu^2.
    const double scale = in.number("scale", 1.0 / mu);
    fam.warped = make_warped_model(cos_warp(mu, scale), mu, n, cos_warp_domain(mu));
    fam.mu_bar = mu;
  } else if (spec.name == "warped_exp") {
    fam.kind = FamilyKind::WarpedModel;
    const double rate = in.number("rate", 0.2);
    const std::size_t n = in.integer("n", 3);
    fam.warped = make_warped_model(exp_warp(rate), 0.0, n, Interval{-1.0, 1.0});
  } else {
    throw GeometryError(ErrorCode::UnknownFamily, "'" + spec.name + "'");
  }
  fam.params = in.finish();
  return fam;
}

/// Runs body(i) for i in [0, count) on worker threads; results must be written per index.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Points whose smallest active |gamma_i| is below this are skipped by the
/// reconstruction check; the formula divides by gamma_i.
inline constexpr double kReconstructGammaMin = 1e-2;

namespace detail {

class SuiteRunner {
 public:
  SuiteRunner(const Family& fam, const GridSpec& grid, const Tolerances& tol, std::uint64_t seed,
              VerificationReport& report)
      : fam_(fam), grid_(grid), tol_(tol), rng_(seed), report_(report) {}

  void add(const std::string& name, double residual, ToleranceClass cls) {
    double t = tol_.of(cls);
    if (auto it = tol_.overrides.find(name); it != tol_.overrides.end()) t = it->second;
    add_with(name, residual, t);
  }

  void add(const std::string& name, double residual, double default_tol) {
    double t = default_tol;
    if (auto it = tol_.overrides.find(name); it != tol_.overrides.end()) t = it->second;
    add_with(name, residual, t);
  }

  const std::vector<Point>& grid() {
    if (grid_points_.empty()) {
      const Chart& c = fam_.extensor ? fam_.extensor->map.chart : fam_.warped->chart;
      grid_points_ = chart_grid(c, grid_.per_coord);
      report_.grid_points = grid_points_.size();
    }
    return grid_points_;
  }

  /// At most `per_coord` nodes per coordinate, for the nested-difference checks.
  std::vector<Point> coarse_grid(int per_coord) {
    const Chart& c = fam_.extensor ? fam_.extensor->map.chart : fam_.warped->chart;
    return chart_grid(c, std::min(per_coord, grid_.per_coord));
  }

  std::vector<double> s_grid() {
    const Chart& c = fam_.extensor ? fam_.extensor->map.chart : fam_.warped->chart;
    std::vector<double> s;
    const Interval b = c.bounds()[0];
    for (int k = 0; k < grid_.per_coord; ++k) s.push_back(b.lo + b.length() * (k + 0.5) / grid_.per_coord);
    return s;
  }

  void lagrangian();
  void humbilical();
  void totally_real();
  void totally_geodesic();
  void warped();
  void gauss_codazzi();

 private:
  void add_with(const std::string& name, double residual, double t) {
    report_.checks.push_back({name, residual, t, std::isfinite(residual) && residual <= t});
  }

  bool sphere_extensor() const { return fam_.kind == FamilyKind::SphereExtensor; }
  const Extensor& ext() const { return *fam_.extensor; }
  std::size_t dim() const { return ext().map.dim(); }

  const Family& fam_;
  GridSpec grid_;
  const Tolerances& tol_;
  Rng rng_;
  VerificationReport& report_;
  std::vector<Point> grid_points_;
};

inline double tol_or(const Tolerances& t, const std::string& name, double fallback) {
  auto it = t.overrides.find(name);
  return it == t.overrides.end() ? fallback : it->second;
}

inline void SuiteRunner::lagrangian() {
  const auto& pts = grid();
  std::vector<double> lag(pts.size()), cubic(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const auto pp = extensor_point_profile(ext().map, pts[i], grid_.step);
    lag[i] = is_lagrangian(pp.geometry.jet).residual;
    cubic[i] = cubic_symmetry_check(pp.frame_sff, pp.frame);
  });
  add("lagrangian_residual", *std::max_element(lag.begin(), lag.end()), ToleranceClass::FirstOrder);
  add("cubic_symmetry", *std::max_element(cubic.begin(), cubic.end()), 1e-5);
}

inline void SuiteRunner::humbilical() {
  const auto& pts = grid();
  const std::size_t n = dim();
  struct PointResult {
    HUmbilicalProfile profile;
    double coeff_gap = 0.0;
    double reconstruct = 0.0;
    bool reconstruct_applicable = true;
    double min_active_gamma = 0.0;
    double eigen = 0.0;
    double direction = 0.0;
    double curvature = 0.0;
  };
  std::vector<PointResult> res(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    PointResult& r = res[i];
    const auto pp = extensor_point_profile(ext().map, pts[i], grid_.step);
    r.profile = pp.profile;
    const CurveCoefficients cc = curve_coefficients(ext().curve, pts[i][0]);
    for (std::size_t k = 0; k < 3; ++k)
      r.coeff_gap = std::max({r.coeff_gap, std::abs(cc.lambda[k] - r.profile.lambda[k]), std::abs(cc.mu[k] - r.profile.mu[k])});
    const HVector mean = mean_curvature(pp.frame_sff);
    r.min_active_gamma = 1e300;
    for (std::size_t k = 0; k < 3; ++k)
      if (std::abs(r.profile.gamma[k]) > kGammaFloor || std::abs(r.profile.lambda[k]) > kGammaFloor ||
          std::abs(r.profile.mu[k]) > kGammaFloor)
        r.min_active_gamma = std::min(r.min_active_gamma, std::abs(r.profile.gamma[k]));
    for (std::size_t a = 0; a < n && r.reconstruct_applicable; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const auto h = reconstruct_h(r.profile, mean, pp.frame.e[a], pp.frame.e[b]);
        if (!h) {
          r.reconstruct_applicable = false;
          break;
        }
        r.reconstruct = std::max(r.reconstruct, (*h - pp.frame_sff(a, b)).norm());
      }
    r.eigen = eigencheck_AH(pp.frame_sff, pp.frame, mean, r.profile).value_residual;
    if (mean.norm() > 1e-6) {
      const HVector e1 = distinguished_direction(mean, pp.frame);
      r.direction = 1.0 - std::abs(inner(e1, pp.frame.e[0]));
    }
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n)), y = x;
    x(0) = 1.0;
    y(1) = 1.0;
    r.curvature = sectional_curvature(pp.frame_sff, Matrix(), x, y);
  });

  double pattern = 0.0, gap = 0.0, recon = 0.0, eig = 0.0, dir = 0.0, gcons = 0.0;
  bool applicable = true;
  auto& prof = report_.profiles;
  prof.rows.clear();
  for (std::size_t k = 0; k < 3; ++k) {
    prof.lambda_min[k] = prof.mu_min[k] = prof.gamma_min[k] = 1e300;
    prof.lambda_max[k] = prof.mu_max[k] = prof.gamma_max[k] = -1e300;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& r = res[i];
    pattern = std::max(pattern, r.profile.pattern_residual);
    gap = std::max(gap, r.coeff_gap);
    if (r.min_active_gamma >= kReconstructGammaMin) recon = std::max(recon, r.reconstruct);
    applicable = applicable && r.reconstruct_applicable;
    eig = std::max(eig, r.eigen);
    dir = std::max(dir, r.direction);
    gcons = std::max(gcons, r.profile.gamma_consistency());
    prof.rows.push_back({pts[i], r.profile.lambda, r.profile.mu, r.profile.gamma, r.curvature});
    for (std::size_t k = 0; k < 3; ++k) {
      prof.lambda_min[k] = std::min(prof.lambda_min[k], r.profile.lambda[k]);
      prof.lambda_max[k] = std::max(prof.lambda_max[k], r.profile.lambda[k]);
      prof.mu_min[k] = std::min(prof.mu_min[k], r.profile.mu[k]);
      prof.mu_max[k] = std::max(prof.mu_max[k], r.profile.mu[k]);
      prof.gamma_min[k] = std::min(prof.gamma_min[k], r.profile.gamma[k]);
      prof.gamma_max[k] = std::max(prof.gamma_max[k], r.profile.gamma[k]);
    }
  }
  add("pattern_residual", pattern, 1e-5);
  add("gamma_consistency", gcons, ToleranceClass::Algebra);
  add("profile_vs_curve_coefficients", gap, ToleranceClass::SecondOrder);
  if (applicable) add("reconstruct_h", recon, 1e-5);
  add("eigen_AH_two_values", eig, 1e-5);
  add("distinguished_direction", dir, ToleranceClass::FirstOrder);
}

inline void SuiteRunner::totally_real() {
  const Chart& base_chart = ext().base.map.chart;
  const auto p_grid = chart_grid(base_chart, grid_.per_coord);
  const auto s = s_grid();
  const TotallyRealReport tr = totally_real_test(ext().curve, ext().base, s, p_grid);
  // The extensor is totally real iff G is spherical or F = c f(s).
  add("totally_real_criterion", tr.pointwise_residual, ToleranceClass::FirstOrder);
  const double ode = std::max({tr.ode_residuals[0], tr.ode_residuals[1], tr.ode_residuals[2]});
  add("ode_vs_real_part", std::abs(ode - tr.real_part_residual), ToleranceClass::Algebra);

  const auto& pts = coarse_grid(9);
  const IsometryReport iso = isometric_tests(ext().curve, ext().base, pts);
  if (ext().base.unit_spherical) add("f_isometric", iso.f_residual, ToleranceClass::FirstOrder);
  // G-isometric exactly when |F| = 1 on the sampled s.
  double unit_gap = 0.0;
  for (double sv : s) unit_gap = std::max(unit_gap, std::abs(ext().curve(sv).norm() - 1.0));
  const bool predicted = unit_gap <= 1e-9;
  add("g_isometric_matches_unit_F", predicted == iso.g_isometric ? 0.0 : 1.0, 0.0);
}

inline void SuiteRunner::totally_geodesic() {
  const auto& pts = fam_.kind == FamilyKind::LineBaseExtensor ? grid() : coarse_grid(9);
  const TotallyGeodesicReport tg = totally_geodesic_test(ext(), pts);
  const double tol = tol_or(tol_, "max_abs_h", tol_.first_order);
  // Totally geodesic: straight F over the sphere, or n = 2 with a line base.
  const bool predicted = ext().curve.is_straight() || fam_.kind == FamilyKind::LineBaseExtensor;
  if (predicted) {
    add("max_abs_h", tg.max_h, tol);
  } else {
    add("not_totally_geodesic", tg.max_h <= tol ? 1.0 : 0.0, 0.0);
  }
}

inline void SuiteRunner::warped() {
  if (fam_.kind == FamilyKind::WarpedModel) {
    const WarpedModel& model = *fam_.warped;
    const auto pts = coarse_grid(9);
    const auto field = warped_metric_field(model);
    std::vector<double> gap(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      const auto closed = warped_christoffel_closed(model, pts[i]);
      const auto numeric = christoffel_from_metric(field, pts[i], kNestedStep);
      for (std::size_t c = 0; c < closed.size(); ++c)
        gap[i] = std::max(gap[i], (closed[c] - numeric[c]).cwiseAbs().maxCoeff());
    });
    add("christoffel_closed_vs_numeric", *std::max_element(gap.begin(), gap.end()), 1e-5);
    const auto s = s_grid();
    const auto& omega = model.omega;
    add("spherical_distribution", spherical_distribution_check(model, [&omega](double v) { return omega.log_derivative(v); }, pts),
        ToleranceClass::FirstOrder);
    if (fam_.name == "warped_cos") {
      const auto ode = warping_ode_check(model.omega, model.mu_bar, s);
      add("warping_ode", max_of(ode, [](const auto& p) { return p.residual; }), 1e-8);
      const auto leaf = leaf_curvature_check(model.omega, model.mu_bar, s);
      add("leaf_curvature_radial", max_of(leaf, [](const auto& p) { return p.second; }), 1e-6);
      add("leaf_curvature_tangential", max_of(leaf, [](const auto& p) { return p.first; }), 1e-6);
    }
    return;
  }

  // Sphere extensor: the induced metric is warped with omega = |F(s)|.
  const QuatCurve& curve = ext().curve;
  WarpingFunction omega = custom_warp("|F|", [curve](double s) { return curve(s).norm(); });
  omega.fd_step = 1e-3;
  const std::size_t n = dim();
  WarpedModel model = make_warped_model(omega, fam_.mu_bar.value_or(0.0), n, ext().map.chart.bounds()[0]);
  const auto pts = coarse_grid(9);
  std::vector<double> gmetric(pts.size()), gchr(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const MetricData md = christoffel(ext().map, pts[i]);
    gmetric[i] = (md.g - warped_metric(model, pts[i])).cwiseAbs().maxCoeff();
    const auto closed = warped_christoffel_closed(model, pts[i]);
    for (std::size_t c = 0; c < n; ++c) gchr[i] = std::max(gchr[i], (closed[c] - md.christoffel[c]).cwiseAbs().maxCoeff());
  });
  add("metric_vs_warped_model", *std::max_element(gmetric.begin(), gmetric.end()), ToleranceClass::FirstOrder);
  add("christoffel_vs_warped_closed", *std::max_element(gchr.begin(), gchr.end()), ToleranceClass::SecondOrder);
  add("spherical_distribution",
      spherical_distribution_check(ext().map, [omega](double s) { return omega.log_derivative(s); }, pts),
      ToleranceClass::SecondOrder);
  if (fam_.constant_curvature) {
    const auto s = s_grid();
    const auto ode = warping_ode_check(omega, *fam_.mu_bar, s);
    add("warping_ode", max_of(ode, [](const auto& p) { return p.residual; }), ToleranceClass::SecondOrder);
    const auto leaf = leaf_curvature_check(omega, *fam_.mu_bar, s);
    add("leaf_curvature_radial", max_of(leaf, [](const auto& p) { return p.second; }), ToleranceClass::SecondOrder);
    add("leaf_curvature_tangential", max_of(leaf, [](const auto& p) { return p.first; }), ToleranceClass::SecondOrder);
  }
  if (n >= 2) {
    const auto cs = codazzi_scalar_check(ext(), s_grid());
    add("codazzi_scalar_system", max_of(cs, [](const CodazziScalars& c) { return c.max_residual(); }),
        ToleranceClass::Nested);
  }
}

inline void SuiteRunner::gauss_codazzi() {
  const std::size_t n = dim();
  const auto pts = coarse_grid(5);
  std::vector<double> codz(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { codz[i] = codazzi_residual(ext().map, pts[i]); });
  add("codazzi_residual", *std::max_element(codz.begin(), codz.end()), ToleranceClass::Nested);
  if (n < 2) return;

  // Random planes at random grid points, drawn sequentially so the seed fixes them.
  const auto& all = grid();
  constexpr std::size_t kPlanes = 100;
  struct Probe {
    std::size_t point;
    Vector x, y;
  };
  std::vector<Probe> probes;
  for (std::size_t k = 0; k < kPlanes; ++k) {
    Probe pr;
    pr.point = static_cast<std::size_t>(rng_.uniform() * static_cast<double>(all.size())) % all.size();
    pr.x.resize(static_cast<Eigen::Index>(n));
    pr.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
      pr.x(a) = rng_.normal();
      pr.y(a) = rng_.normal();
    }
    probes.push_back(std::move(pr));
  }
  std::vector<double> gauss_vs_intrinsic(kPlanes), constant_gap(kPlanes);
  parallel_for(kPlanes, [&](std::size_t k) {
    const Point& p = all[probes[k].point];
    const PointGeometry pg = analyze_point(ext().map, p, grid_.step);
    const double kg = sectional_curvature(pg.sff, pg.metric.g, probes[k].x, probes[k].y);
    const RiemannTensor r = intrinsic_riemann(ext().map, p);
    gauss_vs_intrinsic[k] = std::abs(kg - r.sectional(probes[k].x, probes[k].y));
    if (fam_.curvature_value) constant_gap[k] = std::abs(kg - *fam_.curvature_value);
  });
  add("gauss_vs_intrinsic_curvature", *std::max_element(gauss_vs_intrinsic.begin(), gauss_vs_intrinsic.end()),
      ToleranceClass::Nested);
  if (fam_.curvature_value)
    add("constant_sectional_curvature", *std::max_element(constant_gap.begin(), constant_gap.end()),
        ToleranceClass::Nested);
}

}  // namespace detail

inline VerificationReport run_suite(const FamilySpec& spec, const std::string& suite, const GridSpec& grid = {},
                                    const Tolerances& tol = {}, std::uint64_t seed = 1, bool timing = false) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw GeometryError(ErrorCode::UnknownSuite, "'" + suite + "'");
  if (grid.per_coord < 1) throw GeometryError(ErrorCode::InvalidArgument, "grid must have at least one node");
  const auto start = std::chrono::steady_clock::now();
  const Family fam = make_family(spec);

  VerificationReport report;
  report.family = fam.name;
  report.family_params = fam.params;
  report.suite = suite;
  report.grid = grid;
  report.seed = seed;
  detail::SuiteRunner run(fam, grid, tol, seed, report);

  const bool all = suite == "all";
  auto not_applicable = [&](const std::string& s) {
    throw GeometryError(ErrorCode::InvalidArgument, "suite " + s + " does not apply to family " + fam.name);
  };
  switch (fam.kind) {
    case FamilyKind::SphereExtensor:
      if (all || suite == "lagrangian") run.lagrangian();
      if (all || suite == "humbilical") run.humbilical();
      if (all || suite == "totally_real") run.totally_real();
      if (all || suite == "totally_geodesic") run.totally_geodesic();
      if (all || suite == "warped") run.warped();
      if (all || suite == "gauss_codazzi") run.gauss_codazzi();
      break;
    case FamilyKind::LineBaseExtensor:
      if (all || suite == "totally_geodesic") run.totally_geodesic();
      else if (suite == "gauss_codazzi") run.gauss_codazzi();
      else if (suite == "totally_real") run.totally_real();
      else not_applicable(suite);
      if (all) run.gauss_codazzi();
      break;
    case FamilyKind::WarpedModel:
      if (all || suite == "warped") run.warped();
      else not_applicable(suite);
      break;
  }
  if (timing)
    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace qlag
