/**
 * @file qalgebra.hpp
 * @brief The q-deformed oscillator algebra {A, A^dagger, N} realized on
 * Rogers-Szego polynomials.
 *
 * Polynomial form: A = D_q and A^dagger = (1 + y) - (1 - q) y D_q.
 * Matrix form: truncated to span{H_0, ..., H_nmax} with
 * A^dagger H_n = H_{n+1}, A H_n = [n] H_{n-1}, N H_n = n H_n.
 *
 * Relations checked by verify_algebra():
 *   [A, A^dagger] = q^N,  [N, A^dagger] = A^dagger,  [N, A] = -A,
 *   A A^dagger - q A^dagger A = 1,  A^dagger A = [N].
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qps/qseries.hpp"
#include "qps/rspoly.hpp"

namespace qps {

/// Coefficients in the {H_n} basis (not monomials): coeffs[n] multiplies H_n.
struct StateVector {
  Eigen::VectorXcd coeffs;

  explicit StateVector(Eigen::VectorXcd c) : coeffs(std::move(c)) {
    if (coeffs.size() < 1) throw std::invalid_argument("StateVector needs at least one coefficient");
  }
  [[nodiscard]] int n_max() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

struct LadderMatrices {
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd adag;
  Eigen::MatrixXcd number;

  [[nodiscard]] int n_max() const noexcept { return static_cast<int>(a.rows()) - 1; }
};

inline Polynomial apply_A_poly(const Polynomial& p, const QParam& qp) { return jackson_derivative(p, qp); }

/// (1 + y) p - (1 - q) y D_q p.
inline Polynomial apply_Adag_poly(const Polynomial& p, const QParam& qp) {
  const Polynomial y_dq = jackson_derivative(p, qp).shifted();
  return p + p.shifted() - qp.one_minus_pow(1) * y_dq;
}

inline LadderMatrices build_ladder_matrices(int n_max, const QParam& qp) {
  if (n_max < 1) throw std::domain_error("build_ladder_matrices: n_max must be at least 1");
  const Eigen::Index dim = n_max + 1;
  LadderMatrices m{Eigen::MatrixXcd::Zero(dim, dim), Eigen::MatrixXcd::Zero(dim, dim),
                   Eigen::MatrixXcd::Zero(dim, dim)};
  for (Eigen::Index k = 0; k < dim; ++k) {
    m.number(k, k) = static_cast<double>(k);
    if (k + 1 < dim) {
      m.adag(k + 1, k) = 1.0;
      m.a(k, k + 1) = qnumber(static_cast<int>(k) + 1, qp);
    }
  }
  return m;
}

/**
 * @brief Expansion of a polynomial in the {H_n} basis.
 *
 * H_n is monic of degree n, so the change of basis is unit upper triangular:
 * peel off the leading coefficient times H_deg until nothing is left.
 */
inline StateVector expand_in_rs_basis(const Polynomial& p, const QParam& qp) {
  const int deg = std::max(p.degree(), 0);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(deg + 1);
  std::vector<std::complex<double>> rest(p.coeffs());
  rest.resize(static_cast<std::size_t>(deg) + 1);
  for (int k = deg; k >= 0; --k) {
    const std::complex<double> lead = rest[static_cast<std::size_t>(k)];
    c(k) = lead;
    if (lead == std::complex<double>{}) continue;
    const std::vector<double> row = qbinomial_row(k, qp);
    for (int r = 0; r <= k; ++r) rest[static_cast<std::size_t>(r)] -= lead * row[static_cast<std::size_t>(r)];
  }
  return StateVector(std::move(c));
}

/// sum_n coeffs[n] H_n as a monomial-basis polynomial.
inline Polynomial to_polynomial(const StateVector& v, const QParam& qp) {
  std::vector<std::complex<double>> acc(static_cast<std::size_t>(v.n_max()) + 1);
  for (int n = 0; n <= v.n_max(); ++n) {
    const std::vector<double> row = qbinomial_row(n, qp);
    for (int r = 0; r <= n; ++r) acc[static_cast<std::size_t>(r)] += v.coeffs(n) * row[static_cast<std::size_t>(r)];
  }
  return Polynomial(std::move(acc));
}

struct RelationResidual {
  std::string name;
  double residual = 0.0;
  bool passed = false;
};

struct RelationReport {
  int n_max = 0;
  double q = 0.0;
  double tol = 0.0;
  std::vector<RelationResidual> relations;
  /// max |[A, A^dagger] - 1| on the interior block; small when q is near 1.
  double commutator_identity_deviation = 0.0;

  [[nodiscard]] bool all_passed() const noexcept {
    for (const auto& r : relations)
      if (!r.passed) return false;
    return true;
  }
};

/**
 * @brief Residuals of the algebra relations on the interior block 0..nmax-1.
 *
 * The top row and column are excluded: A^dagger maps H_nmax outside the
 * truncated space, so products there are truncation artifacts.
 */
inline RelationReport verify_algebra(int n_max, const QParam& qp, double tol) {
  if (n_max < 2) throw std::domain_error("verify_algebra: n_max must be at least 2");
  if (!(tol > 0.0)) throw std::domain_error("verify_algebra: tol must be positive");
  const LadderMatrices m = build_ladder_matrices(n_max, qp);
  const Eigen::Index dim = n_max + 1;
  const Eigen::Index inner = n_max;

  Eigen::MatrixXcd q_pow_n = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd q_number_n = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    q_pow_n(k, k) = qp.pow(static_cast<double>(k));
    q_number_n(k, k) = qnumber(static_cast<int>(k), qp);
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd a_adag = m.a * m.adag;
  const Eigen::MatrixXcd adag_a = m.adag * m.a;
  const Eigen::MatrixXcd comm = a_adag - adag_a;

  auto interior_max = [&](const Eigen::MatrixXcd& x) {
    return x.topLeftCorner(inner, inner).cwiseAbs().maxCoeff();
  };

  RelationReport report;
  report.n_max = n_max;
  report.q = qp.q();
  report.tol = tol;
  auto add = [&](std::string name, const Eigen::MatrixXcd& residual) {
    const double r = interior_max(residual);
    report.relations.push_back({std::move(name), r, r < tol});
  };
  add("[A,Adag] - q^N", comm - q_pow_n);
  add("[N,Adag] - Adag", m.number * m.adag - m.adag * m.number - m.adag);
  add("[N,A] + A", m.number * m.a - m.a * m.number + m.a);
  add("A Adag - q Adag A - 1", a_adag - qp.q() * adag_a - id);
  add("Adag A - [N]", adag_a - q_number_n);
  report.commutator_identity_deviation = interior_max(comm - id);
  return report;
}

}  // namespace qps
