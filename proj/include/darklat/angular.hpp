#ifndef DARKLAT_ANGULAR_HPP
#define DARKLAT_ANGULAR_HPP

#include <Eigen/Dense>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <stdexcept>

#include "darklat/half_int.hpp"

namespace darklat {

// ---------------------------------------------------------------------------
// Spherical photon polarization basis
// ---------------------------------------------------------------------------

/// Photon polarization index q = 0, +-1 relative to the quantization axis e_z.
enum class Polarization : int { sigma_minus = -1, pi = 0, sigma_plus = +1 };

inline constexpr std::array<Polarization, 3> all_polarizations = {
    Polarization::sigma_minus, Polarization::pi, Polarization::sigma_plus};

inline constexpr int q_of(Polarization p) { return static_cast<int>(p); }

inline Polarization polarization_from_q(int q) {
  if (q < -1 || q > 1) throw std::invalid_argument("polarization q must be in {-1,0,+1}");
  return static_cast<Polarization>(q);
}

using PolarizationVector = Eigen::Vector3cd;

/// Normalized spherical basis vectors: e_0 = e_z, e_+- = -+(e_x +- i e_y)/sqrt(2).
/// Unit norm so that e_q^dag . e_q' = delta_qq'.
inline PolarizationVector spherical_vector(Polarization p) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  using C = std::complex<double>;
  switch (p) {
    case Polarization::pi:
      return PolarizationVector(C(0, 0), C(0, 0), C(1, 0));
    case Polarization::sigma_plus:
      return PolarizationVector(C(-inv_sqrt2, 0), C(0, -inv_sqrt2), C(0, 0));
    case Polarization::sigma_minus:
      return PolarizationVector(C(inv_sqrt2, 0), C(0, -inv_sqrt2), C(0, 0));
  }
  throw std::logic_error("unreachable");
}

/// Conjugate overlap e_q^dag . eps_L of a spherical basis vector with a laser
/// polarization. The laser vector must be unit-normalized.
inline std::complex<double> polarization_overlap(Polarization q, const PolarizationVector& eps_l) {
  if (std::abs(eps_l.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("laser polarization vector must be unit-normalized");
  return spherical_vector(q).dot(eps_l);  // Eigen dot conjugates the left factor
}

// ---------------------------------------------------------------------------
// Clebsch-Gordan coefficients
// ---------------------------------------------------------------------------

namespace detail {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline const BigInt& big_factorial(int n) {
  constexpr int cap = 200;
  static const auto table = [] {
    std::array<BigInt, cap + 1> t;
    t[0] = 1;
    for (int i = 1; i <= cap; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0 || n > cap) throw std::invalid_argument("factorial argument out of range");
  return table[static_cast<std::size_t>(n)];
}

// Halved sum of twice-values; throws if the combination is not an integer.
inline int half_sum(int twice_total) {
  if (twice_total % 2 != 0) throw std::logic_error("non-integer angular momentum combination");
  return twice_total / 2;
}

}  // namespace detail

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> in the Condon-Shortley
/// convention, evaluated with the Racah closed form. All factorials and the
/// alternating sum are carried as exact integers/rationals and converted to
/// double only inside the final square root, so there is no cancellation
/// error; the result is accurate to ~1 ulp for any j reachable here.
/// Violated selection rules (M != m1+m2, triangle, parity, |m| > j) return 0.
inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  using detail::BigRat;
  using detail::big_factorial;
  using detail::half_sum;

  if (m1.twice() + m2.twice() != M.twice()) return 0.0;
  if (!projection_valid(j1, m1) || !projection_valid(j2, m2) || !projection_valid(J, M)) return 0.0;
  // triangle rule and integer perimeter
  if ((j1.twice() + j2.twice() + J.twice()) % 2 != 0) return 0.0;
  if (J.twice() > j1.twice() + j2.twice()) return 0.0;
  if (J.twice() < std::abs(j1.twice() - j2.twice())) return 0.0;

  const int a = half_sum(j1.twice() + j2.twice() - J.twice());
  const int b = half_sum(j1.twice() - j2.twice() + J.twice());
  const int c = half_sum(-j1.twice() + j2.twice() + J.twice());
  const int j1p = half_sum(j1.twice() + m1.twice());
  const int j1m = half_sum(j1.twice() - m1.twice());
  const int j2p = half_sum(j2.twice() + m2.twice());
  const int j2m = half_sum(j2.twice() - m2.twice());
  const int Jp = half_sum(J.twice() + M.twice());
  const int Jm = half_sum(J.twice() - M.twice());
  const int t4 = half_sum(J.twice() - j2.twice() + m1.twice());  // + k
  const int t5 = half_sum(J.twice() - j1.twice() - m2.twice());  // + k

  BigRat prefactor2(big_factorial(a) * big_factorial(b) * big_factorial(c) * (J.twice() + 1),
                    big_factorial(a + b + c + 1));
  prefactor2 *= BigRat(big_factorial(j1p) * big_factorial(j1m) * big_factorial(j2p) *
                       big_factorial(j2m) * big_factorial(Jp) * big_factorial(Jm));

  const int k_lo = std::max({0, -t4, -t5});
  const int k_hi = std::min({a, j1m, j2p});
  BigRat sum = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    BigRat term(1, big_factorial(k) * big_factorial(a - k) * big_factorial(j1m - k) *
                       big_factorial(j2p - k) * big_factorial(t4 + k) * big_factorial(t5 + k));
    if (k % 2 != 0) term = -term;
    sum += term;
  }
  if (sum == 0) return 0.0;

  const double magnitude = std::sqrt(static_cast<double>(prefactor2 * sum * sum));
  return sum < 0 ? -magnitude : magnitude;
}

// ---------------------------------------------------------------------------
// Spin matrices
// ---------------------------------------------------------------------------

/// Angular-momentum matrices for spin F in the ascending-m basis
/// (-F, -F+1, ..., F). F_z is diagonal with entries m and the set satisfies
/// [F_x, F_y] = i F_z and cyclic permutations.
struct SpinMatrices {
  Eigen::MatrixXcd x, y, z;

  Eigen::MatrixXcd casimir() const { return x * x + y * y + z * z; }
};

inline SpinMatrices spin_matrices(HalfInt f) {
  if (f.twice() < 0) throw std::invalid_argument("spin F must be non-negative");
  const int dim = multiplicity(f);
  Eigen::MatrixXcd plus = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd fz = Eigen::MatrixXcd::Zero(dim, dim);
  const double fval = f.value();
  for (int i = 0; i < dim; ++i) {
    const double m = projection_at(f, i).value();
    fz(i, i) = m;
    if (i + 1 < dim) plus(i + 1, i) = std::sqrt(fval * (fval + 1.0) - m * (m + 1.0));
  }
  SpinMatrices s;
  const std::complex<double> half_i(0.0, 0.5);
  s.x = 0.5 * (plus + plus.adjoint());
  s.y = -half_i * (plus - plus.adjoint());
  s.z = fz;
  return s;
}

}  // namespace darklat

#endif
