#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qps/rspoly.hpp"
#include "support/oracles.hpp"

using qps::Polynomial;
using qps::QParam;
using cd = std::complex<double>;

TEST(Polynomial, StripsTrailingZeros) {
  const Polynomial p{1.0, 2.0, 0.0, 0.0};
  EXPECT_EQ(p.degree(), 1);
  EXPECT_TRUE(Polynomial{0.0}.is_zero());
  EXPECT_EQ(Polynomial{}.degree(), -1);
  EXPECT_EQ(p[7], cd{});
}

TEST(Polynomial, ArithmeticAndEvaluation) {
  const Polynomial p{1.0, 2.0};
  const Polynomial q{0.0, 0.0, 3.0};
  EXPECT_EQ(p + q, (Polynomial{1.0, 2.0, 3.0}));
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(p.shifted(), (Polynomial{0.0, 1.0, 2.0}));
  EXPECT_EQ((p + q)(cd(2.0)), cd(1.0 + 4.0 + 12.0));
}

TEST(RsCoefficients, Examples) {
  const QParam qp = QParam::from_q(0.5);
  EXPECT_EQ(qps::rs_coefficients(0, qp), (Polynomial{1.0}));
  EXPECT_EQ(qps::rs_coefficients(1, qp), (Polynomial{1.0, 1.0}));
  EXPECT_LT(qps::max_coeff_diff(qps::rs_coefficients(2, qp), Polynomial{1.0, 1.5, 1.0}), 1e-15);
}

TEST(RsCoefficients, MatchRecurrenceOnCoefficientLists) {
  for (double q : {0.1, 0.5, 0.9}) {
    const QParam qp = QParam::from_q(q);
    for (int n = 0; n <= 20; ++n) {
      const auto ref = oracle::rs_coeffs_by_recurrence(n, static_cast<oracle::ld>(q));
      const Polynomial h = qps::rs_coefficients(n, qp);
      ASSERT_EQ(h.size(), ref.size());
      for (std::size_t r = 0; r < ref.size(); ++r) {
        EXPECT_GT(h[r].real(), 0.0);
        EXPECT_NEAR(h[r].real(), static_cast<double>(ref[r]), 1e-12 * static_cast<double>(ref[r]));
      }
    }
  }
}

TEST(RsEval, Examples) {
  const QParam qp = QParam::from_q(0.5);
  EXPECT_EQ(qps::rs_eval_direct(0, {3.0, 2.0}, qp), cd(1.0));
  EXPECT_EQ(qps::rs_eval_direct(5, 0.0, qp), cd(1.0));
  EXPECT_NEAR(std::abs(qps::rs_eval_direct(3, 1.0, qp) - 5.5), 0.0, 1e-14);

  const cd y(0.4, -0.8);
  EXPECT_NEAR(std::abs(qps::rs_eval_recurrence(2, y, qp) - ((1.0 + y) * (1.0 + y) - 0.5 * y)), 0.0, 1e-15);
  EXPECT_EQ(qps::rs_eval_recurrence(1, -1.0, qp), cd(0.0));

  const QParam q7 = QParam::from_q(0.7);
  const cd a = qps::rs_eval_recurrence(4, {0.3, 0.1}, q7);
  const cd b = qps::rs_eval_direct(4, {0.3, 0.1}, q7);
  EXPECT_LT(std::abs(a - b), 1e-13 * std::abs(b));
}

TEST(RsEval, RoutesAgree) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> radius(0.0, 3.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (double q : {0.1, 0.5, 0.9}) {
    const QParam qp = QParam::from_q(q);
    for (int n = 0; n <= 25; ++n) {
      for (int trial = 0; trial < 50; ++trial) {
        const cd y = std::polar(radius(rng), angle(rng));
        const cd d = qps::rs_eval_direct(n, y, qp);
        const cd r = qps::rs_eval_recurrence(n, y, qp);
        double mass = 0.0;
        for (double b : qps::qbinomial_row(n, qp)) mass = mass * std::abs(y) + b;
        EXPECT_LT(std::abs(d - r), 1e-13 * mass) << "q=" << q << " n=" << n << " y=" << y;
      }
    }
  }
}

TEST(RsEval, ClassicalLimit) {
  const QParam qp = QParam::from_q(1 - 1e-8);
  for (int n = 0; n <= 10; ++n) {
    for (cd y : {cd(0.5, 0.0), cd(-0.3, 0.9), cd(2.0, -1.0)}) {
      const cd ref = std::pow(1.0 + y, n);
      EXPECT_LT(std::abs(qps::rs_eval_direct(n, y, qp) - ref), 1e-5 * std::abs(ref));
    }
  }
}

TEST(JacksonDerivative, Examples) {
  const QParam qp = QParam::from_q(0.5);
  EXPECT_TRUE(qps::jackson_derivative(Polynomial{4.0}, qp).is_zero());
  EXPECT_EQ(qps::jackson_derivative(Polynomial{1.0, 1.0}, qp), (Polynomial{1.0}));
  const Polynomial d3 = qps::jackson_derivative(qps::rs_coefficients(3, qp), qp);
  EXPECT_LT(qps::max_coeff_diff(d3, 1.75 * qps::rs_coefficients(2, qp)), 1e-14);
}

TEST(JacksonDerivative, DifferenceQuotient) {
  const QParam qp = QParam::from_q(0.6);
  const Polynomial p{cd(1.0, 2.0), cd(-0.5, 0.0), cd(0.0, 3.0), cd(2.0, 0.0)};
  const Polynomial d = qps::jackson_derivative(p, qp);
  for (cd y : {cd(0.7, 0.2), cd(-1.3, 0.4)}) {
    const cd ref = (p(y) - p(qp.q() * y)) / ((1.0 - qp.q()) * y);
    EXPECT_LT(std::abs(d(y) - ref), 1e-13 * std::abs(ref));
  }
}

TEST(JacksonDerivative, LowersRogersSzego) {
  for (double q : {0.1, 0.5, 0.9}) {
    const QParam qp = QParam::from_q(q);
    for (int n = 1; n <= 20; ++n) {
      const Polynomial d = qps::jackson_derivative(qps::rs_coefficients(n, qp), qp);
      const Polynomial ref = qps::qnumber(n, qp) * qps::rs_coefficients(n - 1, qp);
      EXPECT_LT(qps::max_coeff_diff(d, ref), 1e-13 * std::abs(ref[static_cast<std::size_t>(n / 2)]));
    }
  }
}

TEST(RsFunction, Examples) {
  const QParam qp = QParam::from_q(0.5);
  EXPECT_EQ(qps::rs_function(0, 1.2, qp), cd(1.0));
  for (double q : {0.1, 0.5, 0.9}) {
    const QParam p = QParam::from_q(q);
    const double ref = std::sqrt(q) * (1 - 1 / std::sqrt(q)) / std::sqrt(1 - q);
    EXPECT_NEAR(std::abs(qps::rs_function(1, 0.0, p) - ref), 0.0, 1e-15);
  }
  const double phi = std::numbers::pi / 3;
  const cd y = -std::polar(1 / std::sqrt(0.5), phi);
  const cd brute = std::pow(0.5, 1.0) / std::sqrt(qps::qfactorial(2, qp)) * qps::rs_eval_direct(2, y, qp);
  EXPECT_LT(std::abs(qps::rs_function(2, phi, qp) - brute), 1e-14 * std::abs(brute));
}

// Errors are measured against the largest |R_n| on the circle: R_n is tiny
// near phi = 0 when q is close to 1, and no evaluation is relatively accurate
// there.
TEST(RsFunction, MatchesLongDoubleDefinition) {
  for (double mu : {5e-4, 0.05, 0.35, 1.15, 3.0}) {
    const QParam qp = QParam::from_mu(mu);
    for (int n : {1, 2, 5, 10, 14}) {
      // The long-double oracle sums the monomial form, so it is itself
      // inaccurate near q = 1; only compare where it can be trusted.
      if (mu < 0.01 && n > 2) continue;
      const double scale = std::abs(cd(oracle::rs_function(n, std::numbers::pi, mu)));
      for (int k = 0; k < 32; ++k) {
        const double phi = -std::numbers::pi + 2 * std::numbers::pi * k / 32;
        const cd ref(oracle::rs_function(n, phi, mu));
        EXPECT_LT(std::abs(qps::rs_function(n, phi, qp) - ref), 1e-14 * std::max(1.0, scale))
            << "mu=" << mu << " n=" << n << " phi=" << phi;
      }
    }
  }
}

TEST(RsFunction, StableNearClassicalLimit) {
  for (double q : {0.99, 0.999, 0.9999}) {
    const QParam qp = QParam::from_q(q);
    for (int n : {3, 5, 10, 20}) {
      const double scale = std::abs(oracle::rs_function_mp(n, std::numbers::pi, qp.mu()));
      for (int k = 0; k < 16; ++k) {
        const double phi = -std::numbers::pi + 2 * std::numbers::pi * k / 16 + 0.01;
        const cd ref = oracle::rs_function_mp(n, phi, qp.mu());
        EXPECT_LT(std::abs(qps::rs_function(n, phi, qp) - ref), 1e-14 * scale)
            << "q=" << q << " n=" << n << " phi=" << phi;
      }
    }
  }
}

TEST(RsFunction, Conjugation) {
  for (double q : {0.1, 0.5, 0.9, 0.999}) {
    const QParam qp = QParam::from_q(q);
    for (int n = 0; n <= 12; ++n) {
      for (double phi : {0.1, 0.7, 2.0, 3.0}) {
        const cd a = qps::rs_function(n, -phi, qp);
        const cd b = std::conj(qps::rs_function(n, phi, qp));
        EXPECT_LT(std::abs(a - b), 1e-14 * std::max(1.0, std::abs(b)));
      }
    }
  }
}
