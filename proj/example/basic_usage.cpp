// Angle distribution of the ground state and first excited state, and the
// algebra check, at a few values of the deformation.

#include <cstdio>

#include "qps/qps.hpp"

int main() {
  const double tol = 1e-12;
  const qps::PhaseGrid grid(256);

  for (double mu : {1.0, 0.5, 0.1}) {
    const qps::QParam qp = qps::QParam::from_mu(mu);
    const auto omega0 = qps::angle_distribution_table(0, qp, grid, tol);
    const auto omega1 = qps::angle_distribution_table(1, qp, grid, tol);
    std::printf("mu = %.2f  q = %.6f  circular variance n=0: %.6f  n=1: %.6f\n", mu, qp.q(),
                qps::circular_variance(grid, omega0.values), qps::circular_variance(grid, omega1.values));
  }

  const qps::QParam qp = qps::QParam::from_q(0.5);
  const qps::Polynomial h3 = qps::rs_coefficients(3, qp);
  std::printf("H_3(y; 0.5) =");
  for (int r = 0; r <= h3.degree(); ++r) std::printf(" %+.6f y^%d", h3[r].real(), r);
  std::printf("\n");

  const auto lambda = qps::action_distribution_range(2, 0, 4, qp, qps::PhaseGrid(256), tol);
  std::printf("Lambda_2(m), m = 0..4:");
  for (double v : lambda) std::printf(" %.3e", v);
  std::printf("\n");

  const qps::RelationReport report = qps::verify_algebra(8, qp, tol);
  for (const auto& r : report.relations) std::printf("%-24s %.3e %s\n", r.name.c_str(), r.residual, r.passed ? "ok" : "FAIL");
  return report.all_passed() ? 0 : 1;
}
