/**
 * @file rspoly.hpp
 * @brief Rogers-Szego polynomials H_n(y; q) = sum_r [n r] y^r, their two
 * evaluation routes, the Jackson q-derivative and the normalized
 * Rogers-Szego functions R_n(phi; q) on the circle.
 *
 * The circle variable enters through y = -q^{-1/2} e^{i phi}. Because
 * q^{-1/2} grows without bound as q -> 0, the practical domain is roughly
 * q in [1e-4, 1 - 1e-4].
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qps/qseries.hpp"

namespace qps {

/// Dense polynomial in y with complex coefficients; coeffs()[r] multiplies y^r.
/// Trailing exact zeros are stripped, so the zero polynomial has no coefficients.
class Polynomial {
 public:
  using value_type = std::complex<double>;

  Polynomial() = default;
  explicit Polynomial(std::vector<value_type> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }
  Polynomial(std::initializer_list<value_type> coeffs) : coeffs_(coeffs) { normalize(); }

  static Polynomial from_real(const std::vector<double>& coeffs) {
    return Polynomial(std::vector<value_type>(coeffs.begin(), coeffs.end()));
  }

  [[nodiscard]] const std::vector<value_type>& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }

  /// Coefficient of y^r, zero beyond the degree.
  [[nodiscard]] value_type operator[](std::size_t r) const noexcept {
    return r < coeffs_.size() ? coeffs_[r] : value_type{};
  }

  /// Horner evaluation.
  [[nodiscard]] value_type operator()(value_type y) const noexcept {
    value_type acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * y + *it;
    return acc;
  }

  /// Multiplication by y.
  [[nodiscard]] Polynomial shifted() const {
    if (is_zero()) return {};
    std::vector<value_type> c(coeffs_.size() + 1);
    std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + 1);
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t r = 0; r < rhs.coeffs_.size(); ++r) coeffs_[r] += rhs.coeffs_[r];
    normalize();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t r = 0; r < rhs.coeffs_.size(); ++r) coeffs_[r] -= rhs.coeffs_[r];
    normalize();
    return *this;
  }
  Polynomial& operator*=(value_type s) {
    for (auto& c : coeffs_) c *= s;
    normalize();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(value_type s, Polynomial p) { return p *= s; }
  friend Polynomial operator*(Polynomial p, value_type s) { return p *= s; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == value_type{}) coeffs_.pop_back();
  }

  std::vector<value_type> coeffs_;
};

/// Largest coefficient-wise deviation between two polynomials.
inline double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
  const std::size_t len = std::max(a.size(), b.size());
  double worst = 0.0;
  for (std::size_t r = 0; r < len; ++r) worst = std::max(worst, std::abs(a[r] - b[r]));
  return worst;
}

/// H_n(y; q) as a coefficient vector: coeffs[r] = [n r].
inline Polynomial rs_coefficients(int n, const QParam& qp) {
  if (n < 0) throw std::domain_error("rs_coefficients: n must be non-negative");
  return Polynomial::from_real(qbinomial_row(n, qp));
}

/// H_n(y; q) by Horner evaluation of the defining sum.
inline std::complex<double> rs_eval_direct(int n, std::complex<double> y, const QParam& qp) {
  return rs_coefficients(n, qp)(y);
}

/// H_n(y; q) by the three-term recurrence
/// H_{k+1} = (1 + y) H_k - (1 - q^k) y H_{k-1}, starting from H_0 = 1, H_1 = 1 + y.
inline std::complex<double> rs_eval_recurrence(int n, std::complex<double> y, const QParam& qp) {
  if (n < 0) throw std::domain_error("rs_eval_recurrence: n must be non-negative");
  std::complex<double> prev{1.0, 0.0};
  if (n == 0) return prev;
  std::complex<double> cur = 1.0 + y;
  for (int k = 1; k < n; ++k) {
    const std::complex<double> next = (1.0 + y) * cur - qp.one_minus_pow(k) * y * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Jackson q-derivative D_q p, i.e. (p(y) - p(q y)) / ((1 - q) y).
/// Coefficient-wise (D_q p)[r] = [r + 1] p[r + 1].
inline Polynomial jackson_derivative(const Polynomial& p, const QParam& qp) {
  if (p.size() <= 1) return {};
  std::vector<std::complex<double>> c(p.size() - 1);
  for (std::size_t r = 0; r + 1 < p.size(); ++r) {
    c[r] = qnumber(static_cast<int>(r) + 1, qp) * p[r + 1];
  }
  return Polynomial(std::move(c));
}

/**
 * @brief Normalized Rogers-Szego function
 * R_n(phi) = q^{n/2} (q;q)_n^{-1/2} H_n(-q^{-1/2} e^{i phi}; q).
 *
 * Evaluated by the recurrence for R_n itself,
 *   sqrt(1 - q^{k+1}) R_{k+1} = (e^{-mu} - e^{i phi}) R_k + sqrt(1 - q^k) q^{1/2} e^{i phi} R_{k-1},
 * whose coefficients stay bounded as q -> 1. Summing the monomial expansion
 * instead loses about n log10(1/mu) digits near q = 1. R_0 = 1.
 */
inline std::complex<double> rs_function(int n, double phi, const QParam& qp) {
  if (n < 0) throw std::domain_error("rs_function: n must be non-negative");
  const double s = std::sin(phi);
  const double h = std::sin(0.5 * phi);
  const std::complex<double> e(std::cos(phi), s);
  // e^{-mu} - e^{i phi} without cancellation near mu = phi = 0.
  const std::complex<double> diag(std::expm1(-qp.mu()) + 2.0 * h * h, -s);
  const std::complex<double> off = std::exp(-qp.mu()) * e;
  std::complex<double> prev{};
  std::complex<double> cur{1.0, 0.0};
  for (int k = 0; k < n; ++k) {
    std::complex<double> next = diag * cur;
    if (k > 0) next += std::sqrt(qp.one_minus_pow(k)) * off * prev;
    next /= std::sqrt(qp.one_minus_pow(k + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace qps
