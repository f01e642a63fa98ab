#ifndef DARKLAT_GREENS_HPP
#define DARKLAT_GREENS_HPP

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "darklat/angular.hpp"

namespace darklat {

/// Site positions in units of 1/k_0 (k_0 = 1 internally).
struct Geometry {
  std::vector<Eigen::Vector3d> positions;

  int n_sites() const { return static_cast<int>(positions.size()); }
};

inline Geometry chain_geometry(double lattice_constant, int n_sites) {
  Geometry g;
  for (int i = 0; i < n_sites; ++i)
    g.positions.emplace_back(0.0, 0.0, lattice_constant * i);
  return g;
}

inline Geometry lattice_geometry(double lattice_constant, int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("lattice dims must be >= 1");
  Geometry g;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int z = 0; z < nz; ++z)
        g.positions.emplace_back(lattice_constant * x, lattice_constant * y, lattice_constant * z);
  return g;
}

/// Uniform random positions in a cube of the given side, with a minimum
/// pairwise separation enforced by rejection. Deterministic in the seed.
inline Geometry random_geometry(int n_sites, double box_side, double min_separation,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, box_side);
  Geometry g;
  int attempts = 0;
  while (g.n_sites() < n_sites) {
    if (++attempts > 100000) throw std::runtime_error("random geometry rejection sampling failed");
    Eigen::Vector3d candidate(coord(rng), coord(rng), coord(rng));
    bool ok = true;
    for (const auto& p : g.positions)
      if ((candidate - p).norm() < min_separation) {
        ok = false;
        break;
      }
    if (ok) g.positions.push_back(candidate);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Dyadic Green's tensor
// ---------------------------------------------------------------------------

/// Vacuum dyadic Green's tensor at separation r (units 1/k_0):
///   G(r) = (3*gamma/4) { [1 - rr] e^{ix}/x + [1 - 3 rr](i e^{ix}/x^2 - e^{ix}/x^3) },
/// with x = k_0 |r| and rr the projector onto the unit separation.
inline Eigen::Matrix3cd green_tensor(const Eigen::Vector3d& r, double gamma) {
  const double x = r.norm();
  if (x <= 0.0) throw std::invalid_argument("green_tensor requires r != 0; use onsite_green");
  const Eigen::Vector3d rhat = r / x;
  const Eigen::Matrix3d proj = rhat * rhat.transpose();
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, x));
  const std::complex<double> far = phase / x;
  const std::complex<double> near = std::complex<double>(0.0, 1.0) * phase / (x * x) - phase / (x * x * x);
  return (0.75 * gamma) * ((id - proj).cast<std::complex<double>>() * far +
                           (id - 3.0 * proj).cast<std::complex<double>>() * near);
}

/// Onsite coefficients in the deep-trap limit: Re G^{ii} = 0,
/// Im G^{ii} = (gamma/2) * Identity, independent of trap details.
inline Eigen::Matrix3cd onsite_green(double gamma) {
  return std::complex<double>(0.0, 0.5 * gamma) * Eigen::Matrix3cd::Identity();
}

// ---------------------------------------------------------------------------
// Polarization-projected coupling tables
// ---------------------------------------------------------------------------

/// Per-pair couplings R^{ij}_{qq'} = e_q^dag Re(G^{ij}) e_q' and
/// I^{ij}_{qq'} = e_q^dag Im(G^{ij}) e_q'. Entries are complex for generic
/// geometries; Hermiticity under (i,q) <-> (j,q') is inherited from G.
class CouplingTable {
 public:
  CouplingTable(const Geometry& geometry, double gamma)
      : n_sites_(geometry.n_sites()), gamma_(gamma) {
    if (n_sites_ < 1) throw std::invalid_argument("geometry needs at least one site");
    r_.resize(static_cast<std::size_t>(n_sites_ * n_sites_ * 9));
    i_.resize(static_cast<std::size_t>(n_sites_ * n_sites_ * 9));
    std::array<PolarizationVector, 3> e;
    for (int k = 0; k < 3; ++k) e[static_cast<std::size_t>(k)] = spherical_vector(all_polarizations[static_cast<std::size_t>(k)]);
    for (int i = 0; i < n_sites_; ++i)
      for (int j = 0; j < n_sites_; ++j) {
        Eigen::Matrix3cd g;
        if (i == j) {
          g = onsite_green(gamma);
        } else {
          const Eigen::Vector3d dr = geometry.positions[static_cast<std::size_t>(i)] -
                                     geometry.positions[static_cast<std::size_t>(j)];
          if (dr.norm() <= 0.0) throw std::invalid_argument("distinct sites must not coincide");
          g = green_tensor(dr, gamma);
        }
        const Eigen::Matrix3cd re = 0.5 * (g + g.conjugate());
        const Eigen::Matrix3cd im = std::complex<double>(0, -0.5) * (g - g.conjugate());
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            r_[flat(i, j, a, b)] = e[static_cast<std::size_t>(a)].dot(re * e[static_cast<std::size_t>(b)]);
            i_[flat(i, j, a, b)] = e[static_cast<std::size_t>(a)].dot(im * e[static_cast<std::size_t>(b)]);
          }
      }
  }

  int n_sites() const { return n_sites_; }
  double gamma() const { return gamma_; }

  std::complex<double> coherent(int i, int j, Polarization q, Polarization qp) const {
    return r_[flat(i, j, q_of(q) + 1, q_of(qp) + 1)];
  }
  std::complex<double> dissipative(int i, int j, Polarization q, Polarization qp) const {
    return i_[flat(i, j, q_of(q) + 1, q_of(qp) + 1)];
  }

  /// Dissipator matrix over the composite index (i, q); must be Hermitian PSD
  /// for Eq. (1) to be of Lindblad form.
  Eigen::MatrixXcd dissipation_matrix() const {
    Eigen::MatrixXcd m(3 * n_sites_, 3 * n_sites_);
    for (int i = 0; i < n_sites_; ++i)
      for (int j = 0; j < n_sites_; ++j)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) m(3 * i + a, 3 * j + b) = i_[flat(i, j, a, b)];
    return m;
  }

 private:
  std::size_t flat(int i, int j, int a, int b) const {
    return static_cast<std::size_t>(((i * n_sites_ + j) * 3 + a) * 3 + b);
  }

  int n_sites_;
  double gamma_;
  std::vector<std::complex<double>> r_;
  std::vector<std::complex<double>> i_;
};

inline CouplingTable coupling_table(const Geometry& geometry, double gamma) {
  return CouplingTable(geometry, gamma);
}

}  // namespace darklat

#endif
