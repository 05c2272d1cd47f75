#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "qps/qalgebra.hpp"

using qps::Polynomial;
using qps::QParam;
using cd = std::complex<double>;

TEST(LadderMatrices, Examples) {
  const QParam qp = QParam::from_q(0.5);
  const auto m = qps::build_ladder_matrices(3, qp);
  EXPECT_EQ(m.n_max(), 3);
  EXPECT_EQ(m.adag(1, 0), cd(1.0));
  EXPECT_EQ(m.adag(0, 1), cd(0.0));
  EXPECT_EQ(m.a(0, 1), cd(1.0));
  EXPECT_NEAR(m.a(1, 2).real(), 1.5, 1e-15);
  EXPECT_NEAR(m.a(2, 3).real(), 1.75, 1e-15);
  EXPECT_EQ(m.number(2, 2), cd(2.0));
  EXPECT_THROW(qps::build_ladder_matrices(0, qp), std::domain_error);
}

TEST(LadderOperators, ActOnRogersSzegoExactly) {
  for (double q : {0.1, 0.5, 0.9}) {
    const QParam qp = QParam::from_q(q);
    for (int n = 0; n <= 20; ++n) {
      const Polynomial h = qps::rs_coefficients(n, qp);
      const Polynomial up = qps::apply_Adag_poly(h, qp);
      const Polynomial h_next = qps::rs_coefficients(n + 1, qp);
      const double scale = std::abs(h_next[static_cast<std::size_t>((n + 1) / 2)]);
      EXPECT_LT(qps::max_coeff_diff(up, h_next), 1e-13 * scale) << "q=" << q << " n=" << n;
      if (n > 0) {
        const Polynomial down = qps::apply_A_poly(h, qp);
        const Polynomial ref = qps::qnumber(n, qp) * qps::rs_coefficients(n - 1, qp);
        EXPECT_LT(qps::max_coeff_diff(down, ref), 1e-13 * scale) << "q=" << q << " n=" << n;
      }
    }
  }
}

TEST(LadderOperators, PolynomialRelations) {
  // A Adag - q Adag A = 1 on arbitrary polynomials, not only on the basis.
  const QParam qp = QParam::from_q(0.6);
  const Polynomial p{cd(0.3, 1.0), cd(-2.0, 0.5), cd(0.0, 0.0), cd(1.25, -0.75)};
  const Polynomial lhs = qps::apply_A_poly(qps::apply_Adag_poly(p, qp), qp) -
                         qp.q() * qps::apply_Adag_poly(qps::apply_A_poly(p, qp), qp);
  EXPECT_LT(qps::max_coeff_diff(lhs, p), 1e-14);
}

TEST(ExpandInBasis, Examples) {
  const QParam qp = QParam::from_q(0.5);
  const auto one = qps::expand_in_rs_basis(Polynomial{1.0}, qp);
  EXPECT_EQ(one.n_max(), 0);
  EXPECT_EQ(one.coeffs(0), cd(1.0));
  // y = H_1 - H_0
  const auto y = qps::expand_in_rs_basis(Polynomial{0.0, 1.0}, qp);
  EXPECT_EQ(y.coeffs(0), cd(-1.0));
  EXPECT_EQ(y.coeffs(1), cd(1.0));
}

TEST(ExpandInBasis, BasisVectorsAndRoundTrip) {
  for (double q : {0.1, 0.5, 0.9}) {
    const QParam qp = QParam::from_q(q);
    for (int n = 0; n <= 12; ++n) {
      const auto v = qps::expand_in_rs_basis(qps::rs_coefficients(n, qp), qp);
      ASSERT_EQ(v.n_max(), n);
      for (int k = 0; k <= n; ++k) EXPECT_NEAR(std::abs(v.coeffs(k) - cd(k == n ? 1.0 : 0.0)), 0.0, 1e-12);
    }
    const Polynomial p{cd(1.0, -1.0), cd(0.5, 0.0), cd(0.0, 2.0), cd(-3.0, 0.0), cd(0.25, 0.25)};
    EXPECT_LT(qps::max_coeff_diff(qps::to_polynomial(qps::expand_in_rs_basis(p, qp), qp), p), 1e-13);
  }
}

TEST(ExpandInBasis, LadderMatrixColumnsMatchPolynomialAction) {
  const QParam qp = QParam::from_q(0.7);
  const int n_max = 8;
  const auto m = qps::build_ladder_matrices(n_max, qp);
  for (int n = 0; n < n_max; ++n) {
    const Polynomial h = qps::rs_coefficients(n, qp);
    const auto up = qps::expand_in_rs_basis(qps::apply_Adag_poly(h, qp), qp);
    const auto down = qps::expand_in_rs_basis(qps::apply_A_poly(h, qp), qp);
    for (int k = 0; k <= n_max; ++k) {
      const cd u = k <= up.n_max() ? up.coeffs(k) : cd{};
      const cd d = k <= down.n_max() ? down.coeffs(k) : cd{};
      EXPECT_LT(std::abs(u - m.adag(k, n)), 1e-12) << "n=" << n << " k=" << k;
      EXPECT_LT(std::abs(d - m.a(k, n)), 1e-12) << "n=" << n << " k=" << k;
    }
  }
}

TEST(VerifyAlgebra, AllRelationsHold) {
  for (double q : {0.1, 0.5, 0.9}) {
    const auto report = qps::verify_algebra(15, QParam::from_q(q), 1e-12);
    ASSERT_EQ(report.relations.size(), 5u);
    for (const auto& r : report.relations) EXPECT_LT(r.residual, 1e-12) << r.name << " q=" << q;
    EXPECT_TRUE(report.all_passed());
  }
}

TEST(VerifyAlgebra, CommutatorNearIdentityAsQApproachesOne) {
  const auto report = qps::verify_algebra(15, QParam::from_q(1 - 1e-8), 1e-12);
  EXPECT_LT(report.commutator_identity_deviation, 1e-6);
  const auto far = qps::verify_algebra(15, QParam::from_q(0.5), 1e-12);
  EXPECT_NEAR(far.commutator_identity_deviation, 1 - std::pow(0.5, 14), 1e-14);
}

TEST(VerifyAlgebra, RejectsBadArguments) {
  EXPECT_THROW(qps::verify_algebra(1, QParam::from_q(0.5), 1e-12), std::domain_error);
  EXPECT_THROW(qps::verify_algebra(5, QParam::from_q(0.5), 0.0), std::domain_error);
}
