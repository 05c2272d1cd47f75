/**
 * @file qseries.hpp
 * @brief Scalar q-series primitives: q-Pochhammer symbols, Gaussian binomials,
 * q-numbers and the finite Cauchy expansion.
 *
 * Every quantity here is a function of the single deformation parameter
 * q = exp(-2 mu), 0 < q < 1. Factors of the form (1 - q^k) are evaluated as
 * -expm1(-2 k mu) so that they keep full relative precision as q -> 1.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qps {

/// Raised when a series or product cannot reach its tolerance within the
/// configured term budget.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief The deformation parameter pair (q, mu) with q = exp(-2 mu).
 *
 * Construct through from_q() or from_mu(); both reject values outside the
 * open interval 0 < q < 1.
 */
class QParam {
 public:
  static QParam from_q(double q) {
    if (!(q > 0.0 && q < 1.0)) {
      throw std::domain_error("q must satisfy 0 < q < 1, got " + std::to_string(q));
    }
    // log1p keeps mu accurate when q is close to 1 (q - 1 is exact there).
    const double mu = q > 0.5 ? -0.5 * std::log1p(q - 1.0) : -0.5 * std::log(q);
    return QParam(q, mu);
  }

  static QParam from_mu(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
      throw std::domain_error("mu must be positive and finite, got " + std::to_string(mu));
    }
    const double q = std::exp(-2.0 * mu);
    if (!(q > 0.0 && q < 1.0)) {
      throw std::domain_error("mu = " + std::to_string(mu) + " gives q outside (0, 1)");
    }
    return QParam(q, mu);
  }

  [[nodiscard]] double q() const noexcept { return q_; }
  [[nodiscard]] double mu() const noexcept { return mu_; }

  /// q^k for real k.
  [[nodiscard]] double pow(double k) const noexcept { return std::exp(-2.0 * mu_ * k); }

  /// 1 - q^k without cancellation.
  [[nodiscard]] double one_minus_pow(double k) const noexcept { return -std::expm1(-2.0 * mu_ * k); }

  friend bool operator==(const QParam&, const QParam&) = default;

 private:
  QParam(double q, double mu) : q_(q), mu_(mu) {}

  double q_;
  double mu_;
};

/// (x; q)_n = prod_{s=0}^{n-1} (1 - q^s x), with (x; q)_0 = 1.
inline std::complex<double> qpochhammer(std::complex<double> x, const QParam& qp, int n) {
  if (n < 0) throw std::domain_error("qpochhammer: n must be non-negative");
  std::complex<double> prod{1.0, 0.0};
  for (int s = 0; s < n; ++s) {
    prod *= 1.0 - qp.pow(s) * x;
  }
  return prod;
}

/// Result of a truncated infinite product.
struct InfiniteProduct {
  std::complex<double> value;
  int factors_used = 0;
  /// Bound on |value / true_limit - 1| from the dropped factors.
  double relative_tail_bound = 0.0;
};

inline constexpr int kDefaultMaxProductTerms = 10000;

/**
 * @brief (x; q)_infinity, truncated at the first factor with |q^s x| < tol.
 *
 * The dropped factors satisfy |log prod_{s>=S}(1 - q^s x)| <= 2|q^S x| / (1 - q)
 * when |q^S x| <= 1/2, which gives relative_tail_bound.
 *
 * @throws convergence_error if more than max_terms factors would be needed.
 */
inline InfiniteProduct qpochhammer_inf(std::complex<double> x, const QParam& qp, double tol,
                                       int max_terms = kDefaultMaxProductTerms) {
  if (!(tol > 0.0)) throw std::domain_error("qpochhammer_inf: tol must be positive");
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
    throw std::domain_error("qpochhammer_inf: x must be finite");
  }
  InfiniteProduct out{{1.0, 0.0}, 0, 0.0};
  const double ax = std::abs(x);
  int s = 0;
  for (;; ++s) {
    const double qs = qp.pow(s);
    if (qs * ax < tol) break;
    if (s >= max_terms) {
      throw convergence_error("qpochhammer_inf: tolerance not met within " +
                              std::to_string(max_terms) + " factors");
    }
    out.value *= 1.0 - qs * x;
    if (out.value == std::complex<double>{0.0, 0.0}) {
      // A vanishing factor makes the limit exactly zero.
      out.factors_used = s + 1;
      return out;
    }
  }
  out.factors_used = s;
  const double lead = qp.pow(s) * ax;
  out.relative_tail_bound = std::expm1(2.0 * lead / qp.one_minus_pow(1));
  return out;
}

/**
 * @brief Gaussian binomial [n j] = (q;q)_n / ((q;q)_j (q;q)_{n-j}).
 *
 * Evaluated as the telescoped product prod_{s=1}^{k} (1 - q^{n-k+s}) / (1 - q^s)
 * with k = min(j, n - j), so [n 0] = [n n] = 1 and [n j] = [n n-j] hold exactly.
 */
inline double qbinomial(int n, int j, const QParam& qp) {
  if (n < 0 || j < 0 || j > n) {
    throw std::domain_error("qbinomial: need 0 <= j <= n, got n=" + std::to_string(n) +
                            ", j=" + std::to_string(j));
  }
  const int k = std::min(j, n - j);
  double value = 1.0;
  for (int s = 1; s <= k; ++s) {
    value *= qp.one_minus_pow(n - k + s) / qp.one_minus_pow(s);
  }
  return value;
}

/// The row [n 0], [n 1], ..., [n n].
inline std::vector<double> qbinomial_row(int n, const QParam& qp) {
  if (n < 0) throw std::domain_error("qbinomial_row: n must be non-negative");
  std::vector<double> row(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) row[static_cast<std::size_t>(j)] = qbinomial(n, j, qp);
  return row;
}

/// q-number [n] = (1 - q^n) / (1 - q).
inline double qnumber(int n, const QParam& qp) {
  if (n < 0) throw std::domain_error("qnumber: n must be non-negative");
  return qp.one_minus_pow(n) / qp.one_minus_pow(1);
}

/// (q; q)_n = prod_{s=1}^{n} (1 - q^s).
inline double qfactorial(int n, const QParam& qp) {
  if (n < 0) throw std::domain_error("qfactorial: n must be non-negative");
  double value = 1.0;
  for (int s = 1; s <= n; ++s) value *= qp.one_minus_pow(s);
  return value;
}

/// Coefficients c_j = (-1)^j [n j] q^{j(j-1)/2}, so that sum_j c_j x^j = (x; q)_n.
inline std::vector<double> finite_cauchy_coeffs(int n, const QParam& qp) {
  if (n < 0) throw std::domain_error("finite_cauchy_coeffs: n must be non-negative");
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    c[static_cast<std::size_t>(j)] = sign * qbinomial(n, j, qp) * qp.pow(0.5 * j * (j - 1));
  }
  return c;
}

namespace detail {

/// Gaussian binomial row in an arbitrary real type. Powers of q are formed by
/// repeated multiplication so no transcendental functions are needed.
template <class Real>
std::vector<Real> qbinomial_row_generic(int n, const Real& q) {
  std::vector<Real> one_minus(static_cast<std::size_t>(n) + 1);
  Real qk = 1;
  for (int k = 0; k <= n; ++k) {
    one_minus[static_cast<std::size_t>(k)] = Real(1) - qk;
    qk *= q;
  }
  std::vector<Real> row(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const int k = std::min(j, n - j);
    Real value = 1;
    for (int s = 1; s <= k; ++s) {
      value *= one_minus[static_cast<std::size_t>(n - k + s)] / one_minus[static_cast<std::size_t>(s)];
    }
    row[static_cast<std::size_t>(j)] = value;
  }
  return row;
}

}  // namespace detail

}  // namespace qps
