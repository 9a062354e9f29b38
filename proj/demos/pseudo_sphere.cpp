// Builds the pseudo-sphere extensor, prints its profile at one point and
// the full check report.

#include <cstdio>
#include <iostream>

#include "qlag/families.hpp"
#include "qlag/report.hpp"
#include "qlag/suite.hpp"

int main() {
  using namespace qlag;
  const double b = 0.5;
  const Extensor ext = build_extensor(pseudo_sphere_curve(b), unit_sphere_immersion(3));
  const Point p{0.3, 0.2, -0.4};
  const ExtensorPointProfile pp = extensor_point_profile(ext.map, p);

  std::printf("point (s, u2, u3) = (%.2f, %.2f, %.2f)\n", p[0], p[1], p[2]);
  for (Structure s : kStructures) {
    const std::size_t i = slot_of(s);
    std::printf("  %s: lambda = %+.8f  mu = %+.8f  gamma = %+.8f\n", to_string(s), pp.profile.lambda[i],
                pp.profile.mu[i], pp.profile.gamma[i]);
  }
  std::printf("Lagrangian residual %.3g\n\n", is_lagrangian(pp.geometry.jet).residual);

  const VerificationReport report = run_suite({"pseudo_sphere", {{"b", "0.5"}, {"n", "3"}}}, "all", {9, kJetStep});
  std::cout << emit_report(report, ReportFormat::Table);
  return report.all_pass() ? 0 : 1;
}
