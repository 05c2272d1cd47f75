/**
 * @file theta.hpp
 * @brief The Jacobi theta_3 measure function on the circle,
 *
 *   theta3(phi; q) = sum_m q^{m^2/2} e^{i m phi} = sum_m exp(-mu m^2 + i m phi),
 *
 * in its Fourier-series form and in its periodized-Gaussian form
 *
 *   theta3(phi; q) = sqrt(pi / mu) sum_n exp(-(phi - 2 pi n)^2 / (4 mu)),
 *
 * which are equal by Poisson summation. The Fourier series converges fast for
 * large mu and the Gaussian sum for small mu; theta3() picks the cheaper one.
 *
 * Tolerances are absolute bounds on the dropped tail of the chosen series.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qps/qseries.hpp"

namespace qps {

enum class ThetaRepresentation { FourierSeries, GaussianSum };

inline const char* to_string(ThetaRepresentation r) noexcept {
  return r == ThetaRepresentation::FourierSeries ? "fourier_series" : "gaussian_sum";
}

struct ThetaEval {
  double phi = 0.0;
  double mu = 0.0;
  double value = 0.0;
  ThetaRepresentation representation = ThetaRepresentation::FourierSeries;
  /// Number of non-negative indices summed (each paired with its mirror).
  int terms_used = 0;
};

/// Crossover between the two representations; the tails e^{-mu T^2} and
/// e^{-pi^2 N^2 / mu} decay equally fast at mu = pi / 2.
inline constexpr double kThetaSwitchMu = std::numbers::pi / 2.0;
inline constexpr int kThetaMaxTerms = 5000;

/// Smallest T with exp(-mu T^2) < tol: the Fourier bandwidth of theta3 at tol.
inline int theta3_bandwidth(const QParam& qp, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("theta3_bandwidth: tol must be positive");
  if (tol >= 1.0) return 0;
  return static_cast<int>(std::ceil(std::sqrt(-std::log(tol) / qp.mu())));
}

namespace detail {

/// phi reduced to [-pi, pi].
inline double reduce_angle(double phi) noexcept {
  return std::remainder(phi, 2.0 * std::numbers::pi);
}

}  // namespace detail

/**
 * @brief Fourier-series form 1 + 2 sum_{m>=1} e^{-mu m^2} cos(m phi).
 *
 * Summation stops at the first T with e^{-mu T^2} < tol (1 - e^{-mu}), which
 * bounds each one-sided tail by tol. Accuracy is absolute: where theta3 is
 * exponentially small (small mu, phi far from 0) the cosine sum cancels and
 * the Gaussian form should be used instead.
 *
 * @throws convergence_error if T would exceed max_terms.
 */
inline ThetaEval theta3_series(double phi, const QParam& qp, double tol, int max_terms = kThetaMaxTerms) {
  if (!(tol > 0.0)) throw std::domain_error("theta3_series: tol must be positive");
  const double mu = qp.mu();
  const double target = tol * (-std::expm1(-mu));
  const double t_real = target < 1.0 ? std::ceil(std::sqrt(-std::log(target) / mu)) : 1.0;
  if (!(t_real <= max_terms)) {
    throw convergence_error("theta3_series: " + std::to_string(t_real) +
                            " terms needed at mu = " + std::to_string(mu) + "; use the Gaussian form");
  }
  const int terms = static_cast<int>(t_real);
  const double x = detail::reduce_angle(phi);
  double sum = 0.0;
  for (int m = terms; m >= 1; --m) {
    sum += std::exp(-mu * m * static_cast<double>(m)) * std::cos(m * x);
  }
  return {phi, mu, 1.0 + 2.0 * sum, ThetaRepresentation::FourierSeries, terms + 1};
}

/**
 * @brief Periodized-Gaussian form sqrt(pi/mu) sum_n exp(-(phi - 2 pi n)^2 / (4 mu)).
 *
 * After reducing phi to [-pi, pi] the image at distance (2k - 1) pi bounds
 * the k-th pair; consecutive bounds shrink by at least exp(-2 pi^2 / mu), so
 * the remaining tail is bounded by a geometric series.
 *
 * @throws convergence_error if more than max_terms image pairs are needed.
 */
inline ThetaEval theta3_gaussian(double phi, const QParam& qp, double tol, int max_terms = kThetaMaxTerms) {
  if (!(tol > 0.0)) throw std::domain_error("theta3_gaussian: tol must be positive");
  constexpr double pi = std::numbers::pi;
  const double mu = qp.mu();
  const double scale = std::sqrt(pi / mu);
  const double inv4mu = 0.25 / mu;
  const double ratio = -std::expm1(-2.0 * pi * pi / mu);
  const double x = std::abs(detail::reduce_angle(phi));

  auto tail_bound = [&](int k) {
    const double d = (2.0 * k + 1.0) * pi;
    return 2.0 * scale * std::exp(-d * d * inv4mu) / ratio;
  };

  double sum = std::exp(-x * x * inv4mu);
  int k = 0;
  while (tail_bound(k) >= tol) {
    ++k;
    if (k > max_terms) {
      throw convergence_error("theta3_gaussian: more than " + std::to_string(max_terms) +
                              " images needed at mu = " + std::to_string(mu) + "; use the Fourier series");
    }
    const double a = x - 2.0 * pi * k;
    const double b = x + 2.0 * pi * k;
    sum += std::exp(-a * a * inv4mu) + std::exp(-b * b * inv4mu);
  }
  return {phi, mu, scale * sum, ThetaRepresentation::GaussianSum, k + 1};
}

/// theta3 through whichever representation converges faster at this mu.
inline ThetaEval theta3(double phi, const QParam& qp, double tol) {
  return qp.mu() < kThetaSwitchMu ? theta3_gaussian(phi, qp, tol) : theta3_series(phi, qp, tol);
}

}  // namespace qps
