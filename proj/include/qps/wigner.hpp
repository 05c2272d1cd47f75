/**
 * @file wigner.hpp
 * @brief Phase-space quantities for the Rogers-Szego oscillator states on the
 * action-angle pair (m, theta).
 *
 * The Weyl-Wigner map used here is
 *
 *   O(m, theta) = int e^{i m tt} <theta - tt/2| O |theta + tt/2> theta3(theta - tt/2) dtt / 2pi
 *
 * over tt in [-pi, pi). For the projector |n><n| it reduces to the triple sum
 *
 *   O_n(m, theta) = q^n/(q;q)_n sum_t e^{-mu t^2 + i t theta}
 *                   sum_{r,s} (-1)^{r+s} [n r][n s] e^{mu (r+s)} e^{i theta (r-s)}
 *                   sinc(m - (t+r+s)/2).
 *
 * The triple sum is complex in general: with theta3 placed at theta + tt/2
 * instead, the result is the complex conjugate, and O_n(m, -theta) is the
 * conjugate of O_n(m, theta). The real part is the symmetrized map (the average
 * of both placements); it is what wigner_eval() reports as the value. The
 * imaginary part is odd in theta and drops out of both marginals:
 *
 *   Lambda_n(m)     = int O_n(m, theta) dtheta / 2pi = delta_{m,n}
 *   Omega_n(theta)  = sum_m O_n(m, theta) = theta3(theta) |R_n(theta)|^2.
 */
#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qps/qseries.hpp"
#include "qps/rspoly.hpp"
#include "qps/theta.hpp"

namespace qps {

/// Uniform grid theta_k = -pi + 2 pi k / K, k = 0..K-1, with weight 1/K (dtheta / 2pi).
class PhaseGrid {
 public:
  explicit PhaseGrid(int points) : points_(points) {
    if (points < 1) throw std::domain_error("PhaseGrid needs at least one point");
  }

  [[nodiscard]] int size() const noexcept { return points_; }
  [[nodiscard]] double weight() const noexcept { return 1.0 / points_; }
  [[nodiscard]] double operator[](int k) const noexcept {
    return -std::numbers::pi + 2.0 * std::numbers::pi * k / points_;
  }
  [[nodiscard]] std::vector<double> points() const {
    std::vector<double> out(static_cast<std::size_t>(points_));
    for (int k = 0; k < points_; ++k) out[static_cast<std::size_t>(k)] = (*this)[k];
    return out;
  }

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;

 private:
  int points_;
};

inline constexpr int kDefaultGridPoints = 256;

/// Minimum grid size for theta3-weighted quadratures of H_m H_n.
inline int required_grid_points(int m, int n, const QParam& qp, double tol) {
  return 4 * (m + n) + 2 * theta3_bandwidth(qp, tol);
}

/// Smallest power of two that is at least max(floor, required_grid_points(...)).
inline int adequate_grid_points(int m, int n, const QParam& qp, double tol, int floor = kDefaultGridPoints) {
  const int need = std::max(floor, required_grid_points(m, n, qp, tol));
  int k = 1;
  while (k < need) k *= 2;
  return k;
}

/// A number c with 2c integral, stored exactly as twice its value.
struct HalfInteger {
  int twice = 0;

  static constexpr HalfInteger from_twice(int t) noexcept { return {t}; }
  static constexpr HalfInteger from_int(int v) noexcept { return {2 * v}; }
  [[nodiscard]] constexpr double value() const noexcept { return 0.5 * twice; }
};

/**
 * @brief sin((m - c) pi) / ((m - c) pi) for half-integral c, by case analysis.
 *
 * 1 at m = c, 0 when m - c is a non-zero integer, and (-1)^k / ((m - c) pi)
 * when m - c = k + 1/2.
 */
inline double sinc_kernel(int m, HalfInteger c) noexcept {
  const int d2 = 2 * m - c.twice;
  if (d2 == 0) return 1.0;
  if (d2 % 2 == 0) return 0.0;
  // d2 = 2k + 1, and sin((k + 1/2) pi) = (-1)^k.
  const int k = (d2 - 1) / 2;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign / (0.5 * d2 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Orthogonality of the Rogers-Szego polynomials
// ---------------------------------------------------------------------------

namespace detail {

using ExtendedReal = boost::multiprecision::cpp_bin_float_quad;

inline ExtendedReal ipow(ExtendedReal base, long long e) {
  if (e < 0) {
    base = ExtendedReal(1) / base;
    e = -e;
  }
  ExtendedReal result = 1;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}


template <class Real>
struct CxVec {
  std::vector<Real> re;
  std::vector<Real> im;

  explicit CxVec(std::size_t n = 0) : re(n, Real(0)), im(n, Real(0)) {}
  [[nodiscard]] std::size_t size() const noexcept { return re.size(); }
};

template <class Real>
Real real_pi() {
  if constexpr (std::is_same_v<Real, double>) {
    return std::numbers::pi;
  } else {
    return boost::math::constants::pi<Real>();
  }
}

}  // namespace detail

/**
 * @brief I_mn = sum_{r,s} (-1)^{r+s} [m r][n s] q^{r(r-1)/2} q^{s(s-1)/2} q^{-rs}.
 *
 * The alternating terms reach q^{-mn} while the sum is of order
 * q^{-n}(q;q)_n or zero, so the accumulation is carried out in 113-bit
 * binary floating point and rounded once at the end.
 */
inline double carlitz_double_sum(int m, int n, const QParam& qp) {
  if (m < 0 || n < 0) throw std::domain_error("carlitz_double_sum: indices must be non-negative");
  using detail::ExtendedReal;
  const ExtendedReal q = qp.q();
  const std::vector<ExtendedReal> row_m = detail::qbinomial_row_generic(m, q);
  const std::vector<ExtendedReal> row_n = detail::qbinomial_row_generic(n, q);
  ExtendedReal sum = 0;
  for (int r = 0; r <= m; ++r) {
    for (int s = 0; s <= n; ++s) {
      const long long e = (static_cast<long long>(r) * (r - 1) + static_cast<long long>(s) * (s - 1)) / 2 -
                          static_cast<long long>(r) * s;
      ExtendedReal term = row_m[static_cast<std::size_t>(r)] * row_n[static_cast<std::size_t>(s)] * detail::ipow(q, e);
      if ((r + s) % 2 != 0) term = -term;
      sum += term;
    }
  }
  return static_cast<double>(sum);
}

/// I_mn = q^{-n} (q;q)_n delta_{mn}.
inline double carlitz_closed_form(int m, int n, const QParam& qp) {
  if (m < 0 || n < 0) throw std::domain_error("carlitz_closed_form: indices must be non-negative");
  if (m != n) return 0.0;
  return qfactorial(n, qp) / qp.pow(n);
}

struct QuadratureEstimate {
  double value = 0.0;
  /// Largest Fourier mode of the integrand that matters at tol.
  int bandwidth = 0;
  /// False when bandwidth exceeds half the grid; the value may then be aliased.
  bool resolved = true;
};

namespace detail {

/**
 * Trapezoidal sum of R_m conj(R_n) theta3 over the grid in 113-bit arithmetic.
 * Node phases e^{i phi_k} = -w^k with w = e^{2 pi i / K} come from a power
 * table, and theta3 from its Fourier series with e^{i j phi_k} looked up by
 * (j k mod K), so no node is ever rounded to double.
 */
inline ExtendedReal orthogonality_sum_extended(int m, int n, const QParam& qp, int points, double tol) {
  using boost::multiprecision::cos;
  using boost::multiprecision::exp;
  using boost::multiprecision::expm1;
  using boost::multiprecision::sin;
  using boost::multiprecision::sqrt;
  const auto K = static_cast<std::size_t>(points);
  const ExtendedReal mu = qp.mu();
  const ExtendedReal step = 2 * boost::math::constants::pi<ExtendedReal>() / points;
  CxVec<ExtendedReal> w(K);
  w.re[0] = 1;
  const ExtendedReal c1 = cos(step);
  const ExtendedReal s1 = sin(step);
  for (std::size_t k = 1; k < K; ++k) {
    w.re[k] = w.re[k - 1] * c1 - w.im[k - 1] * s1;
    w.im[k] = w.re[k - 1] * s1 + w.im[k - 1] * c1;
  }

  // Fourier truncation far below double resolution relative to tol.
  const double target = tol * 1e-16;
  const int terms = static_cast<int>(std::ceil(std::sqrt(-std::log(target) / qp.mu())));
  std::vector<ExtendedReal> gauss(static_cast<std::size_t>(terms) + 1);
  for (int j = 0; j <= terms; ++j) gauss[static_cast<std::size_t>(j)] = exp(-mu * j * j);

  // Recurrence coefficients of R_k, as in rs_function().
  const int top = std::max(m, n);
  std::vector<ExtendedReal> root(static_cast<std::size_t>(top) + 2);
  for (int k = 0; k <= top + 1; ++k) root[static_cast<std::size_t>(k)] = sqrt(-expm1(-2 * mu * k));
  const ExtendedReal em = expm1(-mu);
  const ExtendedReal sq = exp(-mu);

  ExtendedReal acc = 0;
  for (std::size_t k = 0; k < K; ++k) {
    // e^{i phi} = -w^k.
    const ExtendedReal cr = -w.re[k];
    const ExtendedReal ci = -w.im[k];
    ExtendedReal theta = gauss[0];
    for (int j = 1; j <= terms; ++j) {
      const std::size_t idx = (static_cast<std::size_t>(j) * k) % K;
      const ExtendedReal re = (j % 2 == 0) ? w.re[idx] : ExtendedReal(-w.re[idx]);
      theta += 2 * gauss[static_cast<std::size_t>(j)] * re;
    }
    // diag = e^{-mu} - e^{i phi}, with 1 - cos(phi) formed from the table.
    const ExtendedReal dre = em + (1 - cr);
    const ExtendedReal dim = -ci;
    const ExtendedReal ore = sq * cr;
    const ExtendedReal oim = sq * ci;
    ExtendedReal pre = 0, pim = 0, cre = 1, cim = 0;
    ExtendedReal rm_re = 1, rm_im = 0, rn_re = 1, rn_im = 0;
    for (int j = 0; j < top; ++j) {
      ExtendedReal nre = dre * cre - dim * cim;
      ExtendedReal nim = dre * cim + dim * cre;
      if (j > 0) {
        const ExtendedReal a = root[static_cast<std::size_t>(j)];
        nre += a * (ore * pre - oim * pim);
        nim += a * (ore * pim + oim * pre);
      }
      const ExtendedReal b = root[static_cast<std::size_t>(j) + 1];
      nre /= b;
      nim /= b;
      pre = cre;
      pim = cim;
      cre = nre;
      cim = nim;
      if (j + 1 == m) {
        rm_re = cre;
        rm_im = cim;
      }
      if (j + 1 == n) {
        rn_re = cre;
        rn_im = cim;
      }
    }
    // Re(R_m conj(R_n)).
    acc += (rm_re * rn_re + rm_im * rn_im) * theta;
  }
  return acc / points;
}

}  // namespace detail

/**
 * @brief Periodic trapezoidal quadrature of
 * int H_m(-q^{-1/2} e^{i phi}) H_n(-q^{-1/2} e^{-i phi}) theta3(phi) dphi / 2pi.
 *
 * The integrand is sqrt(I_mm I_nn) R_m(phi) conj(R_n(phi)) theta3(phi), a
 * trigonometric series, so the rule converges spectrally once the grid
 * resolves modes up to max(m, n) + theta3_bandwidth.
 *
 * Off the diagonal the exact value is zero while the integrand is of size
 * sqrt(I_mm I_nn), which reaches 1e10 at q = 0.1, n = 10. When that scale
 * times the double rounding unit exceeds tol the sum is formed in 113-bit
 * arithmetic.
 */
inline QuadratureEstimate orthogonality_quadrature(int m, int n, const QParam& qp, const PhaseGrid& grid,
                                                   double tol) {
  if (m < 0 || n < 0) throw std::domain_error("orthogonality_quadrature: indices must be non-negative");
  if (!(tol > 0.0)) throw std::domain_error("orthogonality_quadrature: tol must be positive");
  const double scale = std::sqrt(carlitz_closed_form(m, m, qp) * carlitz_closed_form(n, n, qp));
  QuadratureEstimate out;
  out.bandwidth = std::max(m, n) + theta3_bandwidth(qp, tol);
  out.resolved = 2 * out.bandwidth <= grid.size();
  if (scale * std::numeric_limits<double>::epsilon() > tol) {
    out.value = static_cast<double>(scale * detail::orthogonality_sum_extended(m, n, qp, grid.size(), tol));
    return out;
  }
  std::complex<double> acc{};
  for (int k = 0; k < grid.size(); ++k) {
    const double phi = grid[k];
    acc += rs_function(m, phi, qp) * std::conj(rs_function(n, phi, qp)) * theta3(phi, qp, tol).value;
  }
  out.value = scale * (acc * grid.weight()).real();
  return out;
}

// ---------------------------------------------------------------------------
// Wigner function
// ---------------------------------------------------------------------------

struct WignerValue {
  int n = 0;
  int m = 0;
  double theta = 0.0;
  /// Real part of the triple sum (the symmetrized map).
  double value = 0.0;
  /// Imaginary part; odd in theta, zero at theta = 0 and theta = pi.
  double imag = 0.0;
};

enum class WignerPrecision { Auto, Double, Extended };

inline const char* to_string(WignerPrecision p) noexcept {
  switch (p) {
    case WignerPrecision::Double: return "double";
    case WignerPrecision::Extended: return "extended";
    default: return "auto";
  }
}


/**
 * @brief Precomputed tables for the Wigner function of |n><n| at fixed q.
 *
 * With c_r = (-1)^r [n r] e^{mu (r - n)} / sqrt((q;q)_n), which folds the
 * q^n / (q;q)_n prefactor into the coefficients, the triple sum becomes
 *
 *   O_n(m, theta) = sum_k S_k(theta) sinc(m - k/2),
 *   S_k = sum_{t + u = k} e^{-mu t^2 + i t theta} B_u,
 *   B_u = sum_{r + s = u} c_r c_s e^{i theta (r - s)}.
 *
 * The per-angle table S costs O(T n); each m then costs O(T).
 *
 * As q -> 1 the c_r grow like (q;q)_n^{-1/2} and the sum cancels heavily.
 * The amplification (sum |c_r|)^2 sum_t e^{-mu t^2} times the double
 * rounding unit estimates the attainable absolute accuracy; when it exceeds
 * tol the tables are built and reduced in 113-bit floating point.
 */
class WignerKernel {
 public:
  using Extended = detail::ExtendedReal;

  struct AngleFactors {
    double theta = 0.0;
    detail::CxVec<double> sums;        ///< S_k for k = -T..T+2n, double path
    detail::CxVec<Extended> sums_ext;  ///< same, extended path
  };

  WignerKernel(int n, const QParam& qp, double tol, WignerPrecision precision = WignerPrecision::Auto)
      : n_(n), qp_(qp), tol_(tol) {
    if (n < 0) throw std::domain_error("WignerKernel: n must be non-negative");
    if (!(tol > 0.0)) throw std::domain_error("WignerKernel: tol must be positive");
    // q and mu must agree to extended precision or the cancellation is spoiled.
    const Extended q = boost::multiprecision::exp(-2 * Extended(qp.mu()));
    const std::vector<Extended> row = detail::qbinomial_row_generic(n, q);
    Extended poch = 1;
    for (int k = 1; k <= n; ++k) poch *= -boost::multiprecision::expm1(Extended(-2 * k) * Extended(qp.mu()));
    const Extended norm = 1 / boost::multiprecision::sqrt(poch);
    coeffs_ext_.resize(row.size());
    coeffs_.resize(row.size());
    double abs_sum = 0.0;
    for (int r = 0; r <= n; ++r) {
      Extended c = row[static_cast<std::size_t>(r)] * boost::multiprecision::exp(Extended(qp.mu()) * (r - n)) * norm;
      if (r % 2 != 0) c = -c;
      coeffs_ext_[static_cast<std::size_t>(r)] = c;
      coeffs_[static_cast<std::size_t>(r)] = static_cast<double>(c);
      abs_sum += std::abs(coeffs_[static_cast<std::size_t>(r)]);
    }
    // Gaussian tail bound, scaled by the largest possible |B_u| total.
    const double scale = std::max(1.0, abs_sum * abs_sum);
    t_max_ = static_cast<int>(std::ceil(std::sqrt(std::log(scale / tol) / qp.mu()))) + 1;

    gauss_.resize(static_cast<std::size_t>(2 * t_max_ + 1));
    gauss_ext_.resize(gauss_.size());
    double gauss_mass = 0.0;
    for (int t = -t_max_; t <= t_max_; ++t) {
      const auto idx = static_cast<std::size_t>(t + t_max_);
      gauss_ext_[idx] = boost::multiprecision::exp(-Extended(qp.mu()) * t * t);
      gauss_[idx] = static_cast<double>(gauss_ext_[idx]);
      gauss_mass += gauss_[idx];
    }
    amplification_ = abs_sum * abs_sum * gauss_mass;
    if (precision == WignerPrecision::Auto) {
      precision = amplification_ * std::numeric_limits<double>::epsilon() > tol ? WignerPrecision::Extended
                                                                                : WignerPrecision::Double;
    }
    precision_ = precision;
  }

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] const QParam& qparam() const noexcept { return qp_; }
  [[nodiscard]] double tol() const noexcept { return tol_; }
  [[nodiscard]] int t_max() const noexcept { return t_max_; }
  [[nodiscard]] WignerPrecision precision() const noexcept { return precision_; }
  /// Ratio of the largest partial sums to the O(1) result scale.
  [[nodiscard]] double amplification() const noexcept { return amplification_; }

  [[nodiscard]] AngleFactors factors(double theta) const {
    AngleFactors f;
    f.theta = theta;
    if (precision_ == WignerPrecision::Extended) {
      f.sums_ext = build_sums<Extended>(Extended(theta), coeffs_ext_, gauss_ext_);
    } else {
      f.sums = build_sums<double>(theta, coeffs_, gauss_);
    }
    return f;
  }

  /// Tables at grid node k. On the extended path the node is formed from k
  /// exactly, since near q = 1 the sum is too steep in theta to tolerate the
  /// rounding of grid[k] to double.
  [[nodiscard]] AngleFactors factors(const PhaseGrid& grid, int k) const {
    if (precision_ != WignerPrecision::Extended) return factors(grid[k]);
    AngleFactors f;
    f.theta = grid[k];
    const Extended theta = detail::real_pi<Extended>() * (2 * k - grid.size()) / grid.size();
    f.sums_ext = build_sums<Extended>(theta, coeffs_ext_, gauss_ext_);
    return f;
  }

  /// The complex triple sum O_n(m, theta).
  [[nodiscard]] std::complex<double> evaluate(int m, const AngleFactors& f) const {
    return precision_ == WignerPrecision::Extended ? reduce<Extended>(m, f.sums_ext) : reduce<double>(m, f.sums);
  }

  [[nodiscard]] std::complex<double> evaluate(int m, double theta) const { return evaluate(m, factors(theta)); }

  /// Real part of evaluate() before rounding to double, for accumulation.
  [[nodiscard]] Extended evaluate_real_extended(int m, const AngleFactors& f) const {
    if (precision_ == WignerPrecision::Extended) return reduce_parts<Extended>(m, f.sums_ext).first;
    return Extended(reduce_parts<double>(m, f.sums).first);
  }

 private:
  template <class Real>
  detail::CxVec<Real> build_sums(const Real& theta, const std::vector<Real>& c, const std::vector<Real>& g) const {
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    const int width = std::max(2 * t_max_ + 1, 2 * n_ + 1);
    // Powers e^{i j theta} for j = 0..width.
    detail::CxVec<Real> pw(static_cast<std::size_t>(width) + 1);
    if constexpr (std::is_same_v<Real, double>) {
      for (int j = 0; j <= width; ++j) {
        pw.re[static_cast<std::size_t>(j)] = std::cos(theta * j);
        pw.im[static_cast<std::size_t>(j)] = std::sin(theta * j);
      }
    } else {
      // Repeated multiplication; the 113-bit rounding drift stays far below double resolution.
      const Real wr = cos(theta);
      const Real wi = sin(theta);
      pw.re[0] = 1;
      for (std::size_t j = 1; j < pw.size(); ++j) {
        pw.re[j] = pw.re[j - 1] * wr - pw.im[j - 1] * wi;
        pw.im[j] = pw.re[j - 1] * wi + pw.im[j - 1] * wr;
      }
    }
    auto phase = [&](int j, Real& re, Real& im) {
      const auto idx = static_cast<std::size_t>(j < 0 ? -j : j);
      re = pw.re[idx];
      im = j < 0 ? Real(-pw.im[idx]) : pw.im[idx];
    };

    detail::CxVec<Real> b(static_cast<std::size_t>(2 * n_ + 1));
    for (int r = 0; r <= n_; ++r) {
      for (int s = 0; s <= n_; ++s) {
        Real re;
        Real im;
        phase(r - s, re, im);
        const Real w = c[static_cast<std::size_t>(r)] * c[static_cast<std::size_t>(s)];
        b.re[static_cast<std::size_t>(r + s)] += w * re;
        b.im[static_cast<std::size_t>(r + s)] += w * im;
      }
    }

    detail::CxVec<Real> sums(static_cast<std::size_t>(2 * t_max_ + 2 * n_ + 1));
    for (int t = -t_max_; t <= t_max_; ++t) {
      Real re;
      Real im;
      phase(t, re, im);
      const Real& amp = g[static_cast<std::size_t>(t + t_max_)];
      const Real gre = amp * re;
      const Real gim = amp * im;
      for (int u = 0; u <= 2 * n_; ++u) {
        const auto k = static_cast<std::size_t>(t + t_max_ + u);
        const auto ui = static_cast<std::size_t>(u);
        sums.re[k] += gre * b.re[ui] - gim * b.im[ui];
        sums.im[k] += gre * b.im[ui] + gim * b.re[ui];
      }
    }
    return sums;
  }

  template <class Real>
  std::complex<double> reduce(int m, const detail::CxVec<Real>& sums) const {
    const auto [re, im] = reduce_parts<Real>(m, sums);
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  template <class Real>
  std::pair<Real, Real> reduce_parts(int m, const detail::CxVec<Real>& sums) const {
    Real re = 0;
    Real im = 0;
    const Real pi = detail::real_pi<Real>();
    for (std::size_t i = 0; i < sums.size(); ++i) {
      const int k = static_cast<int>(i) - t_max_;
      const int d2 = 2 * m - k;
      if (d2 == 0) {
        re += sums.re[i];
        im += sums.im[i];
      } else if (d2 % 2 != 0) {
        const int half = (d2 - 1) / 2;
        const Real w = Real(half % 2 == 0 ? 2 : -2) / (pi * d2);
        re += w * sums.re[i];
        im += w * sums.im[i];
      }
    }
    return {re, im};
  }

  int n_;
  QParam qp_;
  double tol_;
  int t_max_ = 0;
  double amplification_ = 0.0;
  WignerPrecision precision_ = WignerPrecision::Double;
  std::vector<double> coeffs_;
  std::vector<Extended> coeffs_ext_;
  std::vector<double> gauss_;
  std::vector<Extended> gauss_ext_;
};

/// Wigner function of |n><n| at (m, theta). The t-sum is truncated where the
/// Gaussian weight times the coefficient mass falls below tol.
inline WignerValue wigner_eval(int n, int m, double theta, const QParam& qp, double tol) {
  const WignerKernel kernel(n, qp, tol);
  const std::complex<double> v = kernel.evaluate(m, theta);
  return {n, m, theta, v.real(), v.imag()};
}

/// Lambda_n(m) for every m in [m_lo, m_hi], by trapezoidal quadrature over theta.
inline std::vector<double> action_distribution_range(int n, int m_lo, int m_hi, const QParam& qp,
                                                     const PhaseGrid& grid, double tol) {
  if (m_hi < m_lo) throw std::domain_error("action_distribution_range: empty m range");
  const WignerKernel kernel(n, qp, tol);
  // Near q = 1 the integrand is large compared with the result; sum with compensation.
  std::vector<detail::ExtendedReal> acc(static_cast<std::size_t>(m_hi - m_lo + 1));
  for (int k = 0; k < grid.size(); ++k) {
    const auto f = kernel.factors(grid, k);
    for (int m = m_lo; m <= m_hi; ++m) acc[static_cast<std::size_t>(m - m_lo)] += kernel.evaluate_real_extended(m, f);
  }
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<double>(acc[i] / grid.size());
  return out;
}

/// Lambda_n(m) = int O_n(m, theta) dtheta / 2pi, equal to delta_{m,n}.
inline double action_distribution(int n, int m, const QParam& qp, const PhaseGrid& grid, double tol) {
  return action_distribution_range(n, m, m, qp, grid, tol).front();
}

/// Omega_n(theta) = theta3(theta) |R_n(theta)|^2.
inline double angle_distribution(int n, double theta, const QParam& qp, double tol) {
  return theta3(theta, qp, tol).value * std::norm(rs_function(n, theta, qp));
}

/**
 * @brief Omega_n(theta) recovered by summing the Wigner function over m.
 *
 * Terms are accumulated in mirrored pairs m = +k, -k over the symmetric window
 * |m| <= m_cut. For a half-integral centre c the window tails are alternating
 * 1/(m - c) series whose leading 1/m_cut parts cancel between the two ends,
 * leaving an O(1/m_cut^2) truncation error.
 */
inline double angle_distribution_from_wigner(int n, double theta, const QParam& qp, int m_cut, double tol) {
  if (m_cut < n + 10) {
    throw std::domain_error("angle_distribution_from_wigner: m_cut must be at least n + 10");
  }
  const WignerKernel kernel(n, qp, tol);
  const auto f = kernel.factors(theta);
  std::complex<double> total = kernel.evaluate(0, f);
  for (int k = 1; k <= m_cut; ++k) total += kernel.evaluate(k, f) + kernel.evaluate(-k, f);
  return total.real();
}

/// Angle density of the mixed state sum_n p_n |n><n|.
inline double mixed_angle_distribution(std::span<const double> populations, double theta, const QParam& qp,
                                       double tol) {
  double total = 0.0;
  for (std::size_t n = 0; n < populations.size(); ++n) {
    if (populations[n] != 0.0) total += populations[n] * angle_distribution(static_cast<int>(n), theta, qp, tol);
  }
  return total;
}

/// 1 - |<e^{i theta}>| for a density sampled on the grid (weights dtheta / 2pi).
inline double circular_variance(const PhaseGrid& grid, std::span<const double> density) {
  if (density.size() != static_cast<std::size_t>(grid.size())) {
    throw std::invalid_argument("circular_variance: density size does not match the grid");
  }
  std::complex<double> first_moment{};
  double mass = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    const double w = density[static_cast<std::size_t>(k)];
    first_moment += w * std::complex<double>(std::cos(grid[k]), std::sin(grid[k]));
    mass += w;
  }
  return 1.0 - std::abs(first_moment) / mass;
}

// ---------------------------------------------------------------------------
// Tabulated marginals
// ---------------------------------------------------------------------------

enum class DistributionKind { Angle, Action };

struct DistributionTable {
  DistributionKind kind = DistributionKind::Angle;
  int n = 0;
  QParam qp = QParam::from_q(0.5);
  /// Angle grid points for Angle tables, integer m values for Action tables.
  std::variant<std::vector<double>, std::vector<int>> support;
  std::vector<double> values;
  double tol = 0.0;
  int grid_points = 0;
  /// theta3 terms (Angle) or t-sum half-width (Action).
  int series_terms = 0;
};

inline DistributionTable angle_distribution_table(int n, const QParam& qp, const PhaseGrid& grid, double tol) {
  DistributionTable table;
  table.kind = DistributionKind::Angle;
  table.n = n;
  table.qp = qp;
  table.support = grid.points();
  table.tol = tol;
  table.grid_points = grid.size();
  table.values.reserve(static_cast<std::size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) {
    const ThetaEval th = theta3(grid[k], qp, tol);
    table.series_terms = std::max(table.series_terms, th.terms_used);
    table.values.push_back(th.value * std::norm(rs_function(n, grid[k], qp)));
  }
  return table;
}

inline DistributionTable action_distribution_table(int n, int m_lo, int m_hi, const QParam& qp,
                                                   const PhaseGrid& grid, double tol) {
  DistributionTable table;
  table.kind = DistributionKind::Action;
  table.n = n;
  table.qp = qp;
  std::vector<int> ms(static_cast<std::size_t>(m_hi - m_lo + 1));
  std::iota(ms.begin(), ms.end(), m_lo);
  table.support = std::move(ms);
  table.values = action_distribution_range(n, m_lo, m_hi, qp, grid, tol);
  table.tol = tol;
  table.grid_points = grid.size();
  table.series_terms = WignerKernel(n, qp, tol).t_max();
  return table;
}

}  // namespace qps
