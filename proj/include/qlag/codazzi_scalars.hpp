#pragma once

// The scalar Codazzi system along the distinguished direction for
// extensors of the unit hypersphere. With e_1 = d/ds and e_j the
// normalised leaf coordinate fields:
//   e_1(mu_i) = (lambda_i - 2 mu_i) f + (lambda x mu)_i,   f = omega_1^j(e_j)
//   e_j(lambda_i) = (lambda_i - 2 mu_i) omega_1^j(e_1)
//   (lambda_i - 2 mu_i) omega_1^k(e_j) = 0,  k != j
//   e_j(mu_i) = 3 mu_i omega_1^j(e_1)
//   mu_i omega_1^k(e_1) = 0

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "qlag/error.hpp"
#include "qlag/families.hpp"
#include "qlag/immersion.hpp"
#include "qlag/lagrangian.hpp"

namespace qlag {

struct CodazziScalars {
  double s = 0.0;
  std::array<double, 3> lambda{};
  std::array<double, 3> mu{};
  std::array<double, 3> e1_mu{};
  /// omega_1^j(e_j), read off <nabla_X X, e_1> = -f <X, X>.
  double f = 0.0;
  std::array<double, 3> r7{};
  double r8 = 0.0;
  double r9 = 0.0;
  double r10 = 0.0;
  double r11 = 0.0;
  /// (e_1(mu_2) - lambda_3 mu_1 + lambda_1 mu_3) / (lambda_2 - 2 mu_2), when the denominator is nonzero.
  std::optional<double> f_single;
  /// sum mu_i e_1(mu_i) / sum mu_i (lambda_i - 2 mu_i), when the denominator is nonzero.
  std::optional<double> f_weighted;

  double max_residual() const {
    return std::max({r7[0], r7[1], r7[2], r8, r9, r10, r11});
  }
};

inline constexpr double kEstimatorFloor = 1e-6;

inline std::optional<double> f_single_estimator(const std::array<double, 3>& l, const std::array<double, 3>& m,
                                                const std::array<double, 3>& e1_mu) {
  const double den = l[1] - 2.0 * m[1];
  if (std::abs(den) <= kEstimatorFloor) return std::nullopt;
  return (e1_mu[1] - l[2] * m[0] + l[0] * m[2]) / den;
}

inline std::optional<double> f_weighted_estimator(const std::array<double, 3>& l, const std::array<double, 3>& m,
                                                  const std::array<double, 3>& e1_mu) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    num += m[i] * e1_mu[i];
    den += m[i] * (l[i] - 2.0 * m[i]);
  }
  if (std::abs(den) <= kEstimatorFloor) return std::nullopt;
  return num / den;
}

struct CodazziScalarSteps {
  /// d/ds of the curve coefficients.
  double s_step = kNestedStep;
  /// Leaf derivatives of the numerically extracted profile.
  double leaf_step = 1e-3;
  double leaf_jet_step = kNestedJetStep;
};

/// Evaluates the scalar system at (s, leaf_point) for each s.
inline std::vector<CodazziScalars> codazzi_scalar_check(const Extensor& ext, const std::vector<double>& s_grid,
                                                        const Point& leaf_point,
                                                        const CodazziScalarSteps& steps = {}) {
  if (!ext.base.unit_spherical || ext.base.target_dim() != ext.base.map.dim() + 1)
    throw GeometryError(ErrorCode::NotExtensor, ext.base.label);
  const std::size_t n = ext.map.dim();
  std::vector<CodazziScalars> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    CodazziScalars cs;
    cs.s = s;
    const CurveCoefficients c0 = curve_coefficients(ext.curve, s);
    const CurveCoefficients cp = curve_coefficients(ext.curve, s + steps.s_step);
    const CurveCoefficients cm = curve_coefficients(ext.curve, s - steps.s_step);
    cs.lambda = c0.lambda;
    cs.mu = c0.mu;
    for (std::size_t i = 0; i < 3; ++i) cs.e1_mu[i] = (cp.mu[i] - cm.mu[i]) / (2.0 * steps.s_step);

    Point p{s};
    p.insert(p.end(), leaf_point.begin(), leaf_point.end());
    const ImmersionJet j = jet(ext.map, p);
    const HVector e1 = (1.0 / j.d1[0].norm()) * j.d1[0];
    std::vector<double> len(n);
    for (std::size_t a = 0; a < n; ++a) len[a] = j.d1[a].norm();

    double fsum = 0.0;
    for (std::size_t a = 1; a < n; ++a) fsum += -inner(j.d2[a][a], e1) / (len[a] * len[a]);
    cs.f = fsum / static_cast<double>(n - 1);

    const auto& l = cs.lambda;
    const auto& m = cs.mu;
    const std::array<double, 3> cross{l[1] * m[2] - l[2] * m[1], l[2] * m[0] - l[0] * m[2], l[0] * m[1] - l[1] * m[0]};
    for (std::size_t i = 0; i < 3; ++i) cs.r7[i] = std::abs(cs.e1_mu[i] - (l[i] - 2.0 * m[i]) * cs.f - cross[i]);

    std::vector<double> w1_e1(n, 0.0);  // omega_1^j(e_1) = <nabla_{e1} e1, e_j>
    for (std::size_t a = 1; a < n; ++a) w1_e1[a] = inner(j.d2[0][0], j.d1[a]) / (len[0] * len[0] * len[a]);

    for (std::size_t a = 1; a < n; ++a) {
      const auto pp = extensor_point_profile(ext.map, detail::shifted(p, a, steps.leaf_step), steps.leaf_jet_step);
      const auto pm = extensor_point_profile(ext.map, detail::shifted(p, a, -steps.leaf_step), steps.leaf_jet_step);
      for (std::size_t i = 0; i < 3; ++i) {
        const double ej_lambda = (pp.profile.lambda[i] - pm.profile.lambda[i]) / (2.0 * steps.leaf_step * len[a]);
        const double ej_mu = (pp.profile.mu[i] - pm.profile.mu[i]) / (2.0 * steps.leaf_step * len[a]);
        cs.r8 = std::max(cs.r8, std::abs(ej_lambda - (l[i] - 2.0 * m[i]) * w1_e1[a]));
        cs.r10 = std::max(cs.r10, std::abs(ej_mu - 3.0 * m[i] * w1_e1[a]));
        cs.r11 = std::max(cs.r11, std::abs(m[i] * w1_e1[a]));
      }
      for (std::size_t b = 1; b < n; ++b) {
        if (b == a) continue;
        // omega_1^b(e_a) = <nabla_{e_a} e_1, e_b>
        const double w = inner(j.d2[a][0], j.d1[b]) / (len[a] * len[0] * len[b]);
        for (std::size_t i = 0; i < 3; ++i) cs.r9 = std::max(cs.r9, std::abs((l[i] - 2.0 * m[i]) * w));
      }
    }
    cs.f_single = f_single_estimator(l, m, cs.e1_mu);
    cs.f_weighted = f_weighted_estimator(l, m, cs.e1_mu);
    out.push_back(cs);
  }
  return out;
}

inline std::vector<CodazziScalars> codazzi_scalar_check(const Extensor& ext, const std::vector<double>& s_grid) {
  const auto leaf = ext.base.map.chart.center();
  return codazzi_scalar_check(ext, s_grid, leaf);
}

}  // namespace qlag
