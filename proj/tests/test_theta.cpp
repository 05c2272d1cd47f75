#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qps/theta.hpp"
#include "support/oracles.hpp"

using qps::QParam;
using qps::ThetaRepresentation;

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-15;

TEST(Theta3Series, Examples) {
  const QParam small_q = QParam::from_q(1e-3);
  // e^{-mu m^2} = q^{m^2 / 2}
  EXPECT_NEAR(qps::theta3_series(0.0, small_q, 1e-15).value,
              1 + 2 * std::sqrt(1e-3) + 2 * 1e-6 + 2 * std::pow(1e-3, 4.5), 1e-15);

  // A loose tolerance keeps a single cosine.
  EXPECT_DOUBLE_EQ(qps::theta3_series(0.7, QParam::from_mu(3.0), 0.9).value, 1 + 2 * std::exp(-3.0) * std::cos(0.7));

  const QParam half = QParam::from_q(0.5);
  const double ref = static_cast<double>(oracle::theta3_long(0.0L, std::log(2.0L) / 2, 200));
  EXPECT_NEAR(qps::theta3_series(0.0, half, 1e-15).value, ref, 1e-14 * ref);
}

TEST(Theta3Series, ReportsRepresentationAndTerms) {
  const auto e = qps::theta3_series(0.3, QParam::from_mu(2.0), 1e-12);
  EXPECT_EQ(e.representation, ThetaRepresentation::FourierSeries);
  EXPECT_GT(e.terms_used, 1);
  EXPECT_LT(e.terms_used, 10);
}

TEST(Theta3Series, CapIsAnError) {
  EXPECT_THROW(qps::theta3_series(0.0, QParam::from_mu(1e-9), 1e-15), qps::convergence_error);
}

TEST(Theta3Gaussian, Examples) {
  const QParam qp = QParam::from_mu(0.01);
  EXPECT_NEAR(qps::theta3_gaussian(0.0, qp, 1e-15).value, std::sqrt(100 * kPi), 1e-12);
  const double two_term = 2 * std::sqrt(kPi / 0.01) * std::exp(-kPi * kPi / 0.04);
  const double v = qps::theta3_gaussian(kPi, qp, 1e-300).value;
  EXPECT_NEAR(v, two_term, 1e-12 * two_term);
}

TEST(Theta3Gaussian, CapIsAnError) {
  EXPECT_THROW(qps::theta3_gaussian(0.0, QParam::from_mu(20.0), 1e-15, 0), qps::convergence_error);
}

TEST(Theta3, DispatchesByMu) {
  EXPECT_EQ(qps::theta3(0.5, QParam::from_mu(0.05), kTol).representation, ThetaRepresentation::GaussianSum);
  EXPECT_EQ(qps::theta3(0.5, QParam::from_mu(2.0), kTol).representation, ThetaRepresentation::FourierSeries);
}

TEST(Theta3, ContinuousAcrossSwitch) {
  for (double d : {-1e-9, 1e-9}) {
    const QParam qp = QParam::from_mu(qps::kThetaSwitchMu + d);
    for (double phi : {0.0, 1.0, 2.5, kPi}) {
      const double a = qps::theta3_series(phi, qp, kTol).value;
      const double b = qps::theta3_gaussian(phi, qp, kTol).value;
      EXPECT_NEAR(a, b, 1e-12 * b);
    }
  }
}

TEST(Theta3, BranchesAgreeToTwiceTol) {
  const double tol = 1e-10;
  for (double mu : {0.5, 1.0, 2.0, 4.0}) {
    const QParam qp = QParam::from_mu(mu);
    for (double phi : {-3.0, -1.0, 0.0, 0.4, 2.0}) {
      EXPECT_LE(std::abs(qps::theta3_series(phi, qp, tol).value - qps::theta3_gaussian(phi, qp, tol).value), 2 * tol);
    }
  }
}

TEST(Theta3, AgreesWithLongSums) {
  for (double mu : {0.01, 0.1, 0.7, 2.0, 5.0}) {
    const QParam qp = QParam::from_mu(mu);
    for (double phi : {-3.0, -1.5, 0.0, 0.2, 1.0, 3.1}) {
      const double ref = static_cast<double>(mu < 1.0 ? oracle::theta3_gauss_long(phi, mu)
                                                      : oracle::theta3_long(phi, mu, 200));
      // tol bounds the absolute truncation error
      EXPECT_NEAR(qps::theta3(phi, qp, kTol).value, ref, kTol + 1e-13 * ref) << "mu=" << mu << " phi=" << phi;
      // a tiny tol keeps every image that is representable
      EXPECT_NEAR(qps::theta3_gaussian(phi, qp, 1e-300).value, ref, 1e-13 * ref) << "mu=" << mu << " phi=" << phi;
    }
  }
}

TEST(Theta3, PeriodicEvenPositive) {
  for (double mu : {0.01, 0.3, 1.0, 5.0}) {
    const QParam qp = QParam::from_mu(mu);
    for (double phi : {0.0, 0.3, 1.7, 3.0}) {
      const double v = qps::theta3(phi, qp, kTol).value;
      EXPECT_GT(v, 0.0);
      EXPECT_NEAR(qps::theta3(-phi, qp, kTol).value, v, 1e-13 * v);
      // phi + 2 pi is rounded, and log theta3 has slope up to pi / (2 mu).
      EXPECT_NEAR(qps::theta3(phi + 2 * kPi, qp, kTol).value, v, 1e-12 * v);
    }
  }
}

TEST(Theta3, UnitMeanOnTheCircle) {
  for (double mu : {0.05, 0.5, 3.0}) {
    const QParam qp = QParam::from_mu(mu);
    const int k = 256;
    double s = 0;
    for (int j = 0; j < k; ++j) s += qps::theta3(-kPi + 2 * kPi * j / k, qp, kTol).value / k;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Theta3, PeakApproachesGaussianLimit) {
  // sqrt(mu) theta3(0) = sqrt(pi) (1 + 2 e^{-pi^2 / mu} + ...)
  for (double mu : {1.0, 0.1, 0.01, 0.001}) {
    const double scaled = qps::theta3(0.0, QParam::from_mu(mu), kTol).value * std::sqrt(mu);
    const double expected = std::sqrt(kPi) * (1 + 2 * std::exp(-kPi * kPi / mu));
    EXPECT_NEAR(scaled, expected, 1e-14 * expected) << "mu=" << mu;
  }
}

TEST(Theta3, BandwidthBoundsTail) {
  const QParam qp = QParam::from_mu(0.2);
  const int t = qps::theta3_bandwidth(qp, 1e-12);
  EXPECT_LT(std::exp(-0.2 * t * t), 1e-12);
  EXPECT_GE(std::exp(-0.2 * (t - 1) * (t - 1)), 1e-12);
}
