#pragma once

// Lagrangian and H-umbilical tests on top of a computed second fundamental form.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "qlag/error.hpp"
#include "qlag/immersion.hpp"
#include "qlag/quaternion.hpp"

namespace qlag {

struct LagrangianResult {
  bool lagrangian = false;
  double residual = 0.0;
};

/// max |<phi d_a, d_b>| over phi in {I, J, K} and all coordinate tangents.
inline LagrangianResult is_lagrangian(const ImmersionJet& j, double tol = 1e-6) {
  const std::size_t m = j.dim();
  if (m != j.position.size())
    throw GeometryError(ErrorCode::NotLagrangianDimension,
                        std::to_string(m) + "-dimensional immersion into H^" + std::to_string(j.position.size()));
  double worst = 0.0;
  for (Structure s : kStructures)
    for (std::size_t a = 0; a < m; ++a) {
      const HVector sa = apply_structure(s, j.d1[a]);
      for (std::size_t b = 0; b < m; ++b) worst = std::max(worst, std::abs(inner(sa, j.d1[b])));
    }
  return {worst <= tol, worst};
}

inline HVector frame_tangential(const HVector& v, const Frame& f) {
  HVector t = HVector::zero(v.size());
  for (const auto& e : f.e) t.add_scaled(inner(v, e), e);
  return t;
}

/// Collinearity tolerance in distinguished_direction, relative to |H|.
inline constexpr double kCollinearTol = 1e-4;

/// The unit tangent e_1 with H in span{I e_1, J e_1, K e_1}, from the
/// tangential parts of -I H, -J H, -K H. Sign follows the largest of them.
inline HVector distinguished_direction(const HVector& mean, const Frame& f) {
  const double hn = mean.norm();
  if (hn < 1e-12) throw GeometryError(ErrorCode::MinimalPoint, "mean curvature vanishes");
  for (const auto& e : f.e)
    if (std::abs(inner(e, mean)) > 1e-6 * std::max(1.0, hn))
      throw GeometryError(ErrorCode::NotNormal, "mean curvature has a tangential component");

  std::vector<HVector> candidates;
  for (Structure s : kStructures) {
    HVector t = -frame_tangential(apply_structure(s, mean), f);
    if (t.norm() >= 1e-8 * hn) candidates.push_back(std::move(t));
  }
  if (candidates.empty())
    throw GeometryError(ErrorCode::NotHUmbilical, "H has no component along phi(TM)");

  const auto largest = std::max_element(candidates.begin(), candidates.end(),
                                        [](const HVector& a, const HVector& b) { return a.norm() < b.norm(); });
  const HVector dir = (1.0 / largest->norm()) * *largest;
  for (const auto& c : candidates) {
    const double off_axis = (c - inner(c, dir) * dir).norm();
    if (off_axis > kCollinearTol * hn)
      throw GeometryError(ErrorCode::NotHUmbilical, "tangential parts of -IH, -JH, -KH are not parallel");
  }
  return dir;
}

struct HUmbilicalProfile {
  std::array<double, 3> lambda{};
  std::array<double, 3> mu{};
  std::array<double, 3> gamma{};
  HVector e1;
  std::size_t n = 0;
  double pattern_residual = 0.0;

  bool valid(double tol = 1e-5) const { return pattern_residual <= tol; }

  static double gamma_of(double lambda, double mu, std::size_t n) {
    return (lambda + (static_cast<double>(n) - 1.0) * mu) / static_cast<double>(n);
  }

  /// Recomputes gamma from lambda and mu; returns the largest discrepancy with the stored values.
  double gamma_consistency() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(gamma[i] - gamma_of(lambda[i], mu[i], n)));
    return worst;
  }

  std::optional<double> alpha(std::size_t i) const {
    if (std::abs(gamma[i]) <= 1e-8) return std::nullopt;
    return (lambda[i] - 3.0 * mu[i]) / (gamma[i] * gamma[i] * gamma[i]);
  }
  std::optional<double> beta(std::size_t i) const {
    if (std::abs(gamma[i]) <= 1e-8) return std::nullopt;
    return mu[i] / gamma[i];
  }

  /// Two eigenvalues of A_H: sum lambda_i gamma_i and sum mu_i gamma_i (i = 1..3).
  double lambda_eigenvalue() const { return lambda[0] * gamma[0] + lambda[1] * gamma[1] + lambda[2] * gamma[2]; }
  double mu_eigenvalue() const { return mu[0] * gamma[0] + mu[1] * gamma[1] + mu[2] * gamma[2]; }

  double mu_bar() const { return std::sqrt(mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2]); }

  HVector mean_curvature() const {
    HVector h = HVector::zero(e1.size());
    for (Structure s : kStructures) h.add_scaled(gamma[slot_of(s)], apply_structure(s, e1));
    return h;
  }
};

/// Reads lambda_i, mu_i off a frame-basis h whose first frame vector is e_1,
/// and measures how far h is from the six-scalar pattern.
inline HUmbilicalProfile extract_profile(const SffTensor& sff, const Frame& f) {
  if (sff.basis != Basis::Frame) throw GeometryError(ErrorCode::InvalidArgument, "profile needs a frame-basis h");
  const std::size_t n = f.dim();
  if (n < 2) throw GeometryError(ErrorCode::InvalidArgument, "profile needs dimension >= 2");
  HUmbilicalProfile p;
  p.n = n;
  p.e1 = f.e[0];
  std::array<HVector, 3> phi_e1;
  for (Structure s : kStructures) phi_e1[slot_of(s)] = apply_structure(s, p.e1);

  for (std::size_t i = 0; i < 3; ++i) {
    p.lambda[i] = inner(sff(0, 0), phi_e1[i]);
    double acc = 0.0;
    for (std::size_t j = 1; j < n; ++j) acc += inner(sff(j, j), phi_e1[i]);
    p.mu[i] = acc / static_cast<double>(n - 1);
    p.gamma[i] = HUmbilicalProfile::gamma_of(p.lambda[i], p.mu[i], n);
  }

  auto pattern = [&](const std::array<double, 3>& c, std::size_t frame_index) {
    HVector v = HVector::zero(p.e1.size());
    for (Structure s : kStructures) v.add_scaled(c[slot_of(s)], apply_structure(s, f.e[frame_index]));
    return v;
  };

  double worst = (sff(0, 0) - pattern(p.lambda, 0)).norm();
  const HVector mu_e1 = pattern(p.mu, 0);
  for (std::size_t j = 1; j < n; ++j) {
    worst = std::max(worst, (sff(j, j) - mu_e1).norm());
    worst = std::max(worst, (sff(0, j) - pattern(p.mu, j)).norm());
    for (std::size_t k = j + 1; k < n; ++k) worst = std::max(worst, sff(j, k).norm());
  }
  p.pattern_residual = worst;
  return p;
}

/// Structure slots whose gamma is this small are treated as vanishing.
inline constexpr double kGammaFloor = 1e-8;

/// Evaluates h(X, Y) from the alpha/beta formula in terms of H.
/// A slot with gamma_i ~ 0 but lambda_i = mu_i = 0 contributes nothing; any
/// other vanishing gamma_i makes the formula inapplicable (nullopt).
inline std::optional<HVector> reconstruct_h(const HUmbilicalProfile& prof, const HVector& mean, const HVector& x,
                                            const HVector& y) {
  HVector out = HVector::zero(x.size());
  for (Structure s : kStructures) {
    const std::size_t i = slot_of(s);
    const double g = prof.gamma[i];
    if (std::abs(g) <= kGammaFloor) {
      if (std::abs(prof.lambda[i]) <= kGammaFloor && std::abs(prof.mu[i]) <= kGammaFloor) continue;
      return std::nullopt;
    }
    const double alpha = *prof.alpha(i);
    const double beta = *prof.beta(i);
    const HVector hi = g * apply_structure(s, prof.e1);
    const HVector sx = apply_structure(s, x);
    const HVector sy = apply_structure(s, y);
    const double sxh = inner(sx, mean);
    const double syh = inner(sy, mean);
    out.add_scaled(alpha * sxh * syh, hi);
    out.add_scaled(beta * inner(x, y), hi);
    out.add_scaled(beta * syh, sx);
    out.add_scaled(beta * sxh, sy);
  }
  return out;
}

struct EigenCluster {
  double value = 0.0;
  std::size_t multiplicity = 0;
  double spread = 0.0;
};

struct EigenReport {
  std::vector<double> eigenvalues;
  std::vector<EigenCluster> clusters;
  double expected_lambda = 0.0;
  double expected_mu = 0.0;
  bool minimal = false;
  /// Largest deviation of the cluster values from the expected pair.
  double value_residual = 0.0;
  bool ok = false;
};

/// Sorts and splits at the largest gap; clusters are accepted when their
/// internal spread is below tol (1 + |values|).
inline std::vector<EigenCluster> cluster_eigenvalues(std::vector<double> ev, double tol = 1e-5) {
  std::sort(ev.begin(), ev.end());
  std::vector<EigenCluster> out;
  if (ev.empty()) return out;
  double scale = 0.0;
  for (double v : ev) scale = std::max(scale, std::abs(v));
  const double thresh = tol * (1.0 + scale);

  auto make = [](const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    EigenCluster c;
    c.multiplicity = hi - lo;
    double sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) sum += v[k];
    c.value = sum / static_cast<double>(c.multiplicity);
    c.spread = v[hi - 1] - v[lo];
    return c;
  };

  if (ev.back() - ev.front() <= thresh) return {make(ev, 0, ev.size())};
  std::size_t cut = 1;
  double gap = -1.0;
  for (std::size_t k = 1; k < ev.size(); ++k)
    if (ev[k] - ev[k - 1] > gap) {
      gap = ev[k] - ev[k - 1];
      cut = k;
    }
  const EigenCluster lo = make(ev, 0, cut);
  const EigenCluster hi = make(ev, cut, ev.size());
  if (lo.spread <= thresh && hi.spread <= thresh) return {lo, hi};
  // More than two groups: report every value as its own cluster.
  for (std::size_t k = 0; k < ev.size(); ++k) out.push_back(make(ev, k, k + 1));
  return out;
}

/// Eigenstructure of A_H against the two values predicted by the profile.
inline EigenReport eigencheck_AH(const SffTensor& sff, const Frame& f, const HVector& mean,
                                 const HUmbilicalProfile& prof, double tol = 1e-5) {
  EigenReport r;
  r.expected_lambda = prof.lambda_eigenvalue();
  r.expected_mu = prof.mu_eigenvalue();
  const std::size_t n = f.dim();
  if (mean.norm() < 1e-12) {
    r.minimal = true;
    r.eigenvalues.assign(n, 0.0);
    r.clusters = {EigenCluster{0.0, n, 0.0}};
    r.value_residual = std::max(std::abs(r.expected_lambda), std::abs(r.expected_mu));
    r.ok = r.value_residual <= tol;
    return r;
  }
  const Matrix a = shape_operator(sff, f, mean);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) r.eigenvalues.push_back(es.eigenvalues()(k));
  r.clusters = cluster_eigenvalues(r.eigenvalues, tol);
  const double scale = 1.0 + std::max(std::abs(r.expected_lambda), std::abs(r.expected_mu));

  if (r.clusters.size() == 1) {
    r.value_residual = std::max(std::abs(r.clusters[0].value - r.expected_lambda),
                                std::abs(r.clusters[0].value - r.expected_mu));
  } else if (r.clusters.size() == 2) {
    // The simple eigenvalue should be lambda; with n = 2 both are simple, so try both labelings.
    auto cost = [&](const EigenCluster& simple, const EigenCluster& multi) {
      if (simple.multiplicity != 1 || multi.multiplicity != n - 1) return 1e300;
      return std::max(std::abs(simple.value - r.expected_lambda), std::abs(multi.value - r.expected_mu));
    };
    r.value_residual = std::min(cost(r.clusters[0], r.clusters[1]), cost(r.clusters[1], r.clusters[0]));
  } else {
    r.value_residual = 1e300;
  }
  r.ok = r.clusters.size() <= 2 && r.value_residual <= tol * scale;
  return r;
}

/// max |<h(e_a, e_b), phi e_c> - <h(e_c, e_b), phi e_a>| over phi and frame triples.
inline double cubic_symmetry_check(const SffTensor& sff, const Frame& f) {
  const SffTensor fs = sff_in_frame(sff, f);
  const std::size_t n = f.dim();
  double worst = 0.0;
  for (Structure s : kStructures) {
    std::vector<HVector> pe;
    for (const auto& e : f.e) pe.push_back(apply_structure(s, e));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          worst = std::max(worst, std::abs(inner(fs(a, b), pe[c]) - inner(fs(c, b), pe[a])));
  }
  return worst;
}

}  // namespace qlag
