#ifndef DARKLAT_FOCK_HPP
#define DARKLAT_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "darklat/angular.hpp"
#include "darklat/half_int.hpp"
#include "darklat/level_scheme.hpp"

namespace darklat {

enum class Manifold { ground, excited };

/// A single-particle internal level |g_m> or |e_m>.
struct Mode {
  Manifold manifold;
  HalfInt m;

  bool operator==(const Mode&) const = default;
};

inline Mode ground_mode(HalfInt m) { return {Manifold::ground, m}; }
inline Mode excited_mode(HalfInt m) { return {Manifold::excited, m}; }

// ---------------------------------------------------------------------------
// Single-site two-fermion basis
// ---------------------------------------------------------------------------

/// Ordered basis of antisymmetric two-fermion states on one lattice site.
/// Modes are numbered canonically (ground levels ascending in m, then excited
/// levels ascending in m) and a Fock state (p, q) with p < q stands for
/// f^dag_p f^dag_q |vac>. States are sorted lexicographically in (p, q).
class SiteBasis {
 public:
  explicit SiteBasis(LevelScheme scheme) : scheme_(scheme) {
    const int ng = multiplicity(scheme.f_ground);
    const int ne = multiplicity(scheme.f_excited);
    n_modes_ = ng + ne;
    for (int p = 0; p < n_modes_; ++p)
      for (int q = p + 1; q < n_modes_; ++q) states_.emplace_back(p, q);
  }

  const LevelScheme& scheme() const { return scheme_; }
  int n_modes() const { return n_modes_; }
  int dim() const { return static_cast<int>(states_.size()); }

  int n_ground_modes() const { return multiplicity(scheme_.f_ground); }

  /// Canonical index of a mode; throws on projections outside the manifold.
  int mode_index(Mode mode) const {
    if (mode.manifold == Manifold::ground) {
      return projection_index(scheme_.f_ground, mode.m);
    }
    return n_ground_modes() + projection_index(scheme_.f_excited, mode.m);
  }

  Mode mode_at(int index) const {
    const int ng = n_ground_modes();
    if (index < 0 || index >= n_modes_) throw std::out_of_range("mode index");
    if (index < ng) return ground_mode(projection_at(scheme_.f_ground, index));
    return excited_mode(projection_at(scheme_.f_excited, index - ng));
  }

  const std::pair<int, int>& state(int index) const { return states_.at(index); }

  int state_index(int p, int q) const {
    if (p > q) std::swap(p, q);
    if (p == q) throw std::invalid_argument("Pauli exclusion: repeated mode in Fock state");
    // states are sorted lexicographically; closed-form offset
    if (p < 0 || q >= n_modes_) throw std::out_of_range("mode index");
    const int skipped = p * n_modes_ - p * (p + 1) / 2;
    return skipped + (q - p - 1);
  }

  /// Number of excited-manifold fermions in a basis state (0, 1 or 2).
  int excitation_number(int state_index) const {
    const auto& [p, q] = states_.at(state_index);
    const int ng = n_ground_modes();
    return (p >= ng ? 1 : 0) + (q >= ng ? 1 : 0);
  }

  /// Total projection M = m_1 + m_2 of a basis state.
  HalfInt total_m(int state_index) const {
    const auto& [p, q] = states_.at(state_index);
    return mode_at(p).m + mode_at(q).m;
  }

  std::string state_label(int state_index) const {
    const auto& [p, q] = states_.at(state_index);
    auto one = [this](int i) {
      Mode md = mode_at(i);
      return std::string(md.manifold == Manifold::ground ? "g" : "e") + "[" + md.m.str() + "]";
    };
    return one(p) + " " + one(q);
  }

  bool operator==(const SiteBasis& other) const { return scheme_ == other.scheme_; }

 private:
  LevelScheme scheme_;
  int n_modes_ = 0;
  std::vector<std::pair<int, int>> states_;
};

// ---------------------------------------------------------------------------
// Site-local operators with fermionic signs
// ---------------------------------------------------------------------------

/// Matrix of f^dag_out f_in on the two-fermion sector. Signs follow the
/// canonical mode ordering (Jordan-Wigner within the site).
inline Eigen::MatrixXcd site_one_body(const SiteBasis& basis, Mode out_mode, Mode in_mode) {
  const int a = basis.mode_index(out_mode);
  const int b = basis.mode_index(in_mode);
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int s = 0; s < basis.dim(); ++s) {
    const auto& [p, q] = basis.state(s);
    if (b != p && b != q) continue;
    const int survivor = (b == p) ? q : p;
    const int sign_remove = (b == p) ? +1 : -1;
    if (a == survivor) continue;  // Pauli blocked
    const int sign_create = (a < survivor) ? +1 : -1;
    op(basis.state_index(a, survivor), s) += sign_remove * sign_create;
  }
  return op;
}

/// Lift of a one-body mode-space coefficient matrix: sum_ab M_ab f^dag_a f_b.
inline Eigen::MatrixXcd site_one_body_from_coeffs(const SiteBasis& basis,
                                                  const Eigen::MatrixXcd& coeffs) {
  const int n = basis.n_modes();
  if (coeffs.rows() != n || coeffs.cols() != n)
    throw std::invalid_argument("coefficient matrix must be n_modes x n_modes");
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int s = 0; s < basis.dim(); ++s) {
    const auto& [p, q] = basis.state(s);
    for (const int b : {p, q}) {
      const int survivor = (b == p) ? q : p;
      const int sign_remove = (b == p) ? +1 : -1;
      for (int a = 0; a < n; ++a) {
        if (coeffs(a, b) == std::complex<double>(0, 0)) continue;
        if (a == survivor) continue;
        const int sign_create = (a < survivor) ? +1 : -1;
        op(basis.state_index(a, survivor), s) +=
            static_cast<double>(sign_remove * sign_create) * coeffs(a, b);
      }
    }
  }
  return op;
}

/// Multilevel lowering operator D^-_q = sum_m C^q_m f^dag_{g_m} f_{e_{m+q}}.
inline Eigen::MatrixXcd site_lowering(const SiteBasis& basis, Polarization q) {
  const LevelScheme& scheme = basis.scheme();
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < multiplicity(scheme.f_ground); ++i) {
    const HalfInt m = projection_at(scheme.f_ground, i);
    const double cg = cg_transition(scheme, m, q);
    if (cg == 0.0) continue;
    op += cg * site_one_body(basis, ground_mode(m), excited_mode(m + HalfInt(q_of(q))));
  }
  return op;
}

/// Diagonal excited-manifold occupation operator for one site.
inline Eigen::MatrixXcd site_excitation_number(const SiteBasis& basis) {
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int s = 0; s < basis.dim(); ++s) op(s, s) = basis.excitation_number(s);
  return op;
}

/// F_T . F_T for the two fermions on one site, built from the block spin
/// matrices of the ground and excited manifolds.
inline Eigen::MatrixXcd site_total_f_squared(const SiteBasis& basis) {
  const LevelScheme& scheme = basis.scheme();
  const SpinMatrices sg = spin_matrices(scheme.f_ground);
  const SpinMatrices se = spin_matrices(scheme.f_excited);
  const int ng = multiplicity(scheme.f_ground);
  const int n = basis.n_modes();

  auto block = [&](const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& e) {
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(n, n);
    full.topLeftCorner(ng, ng) = g;
    full.bottomRightCorner(n - ng, n - ng) = e;
    return full;
  };
  const Eigen::MatrixXcd fx = site_one_body_from_coeffs(basis, block(sg.x, se.x));
  const Eigen::MatrixXcd fy = site_one_body_from_coeffs(basis, block(sg.y, se.y));
  const Eigen::MatrixXcd fz = site_one_body_from_coeffs(basis, block(sg.z, se.z));
  return fx * fx + fy * fy + fz * fz;
}

/// z component of the total angular momentum on one site (diagonal, entries M).
inline Eigen::MatrixXcd site_total_f_z(const SiteBasis& basis) {
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int s = 0; s < basis.dim(); ++s) op(s, s) = basis.total_m(s).value();
  return op;
}

/// Unit Fock vector |a b> = f^dag_a f^dag_b |vac>; carries the reordering
/// sign when the labels are not in canonical order. Repeated labels throw.
inline Eigen::VectorXcd site_fock_state(const SiteBasis& basis, Mode a, Mode b) {
  const int p = basis.mode_index(a);
  const int q = basis.mode_index(b);
  if (p == q) throw std::invalid_argument("Pauli exclusion: repeated mode in Fock state");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dim());
  v(basis.state_index(p, q)) = (p < q) ? 1.0 : -1.0;
  return v;
}

// ---------------------------------------------------------------------------
// Multisite composition
// ---------------------------------------------------------------------------

/// Tensor product of per-site two-fermion bases. Site 0 is the slowest (most
/// significant) index, matching kron(site_0, site_1, ...).
class CompositeBasis {
 public:
  explicit CompositeBasis(std::vector<SiteBasis> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) throw std::invalid_argument("composite basis needs at least one site");
    dim_ = 1;
    for (const auto& s : sites_) {
      if (dim_ > (1L << 40) / s.dim()) throw std::invalid_argument("composite dimension overflow");
      dim_ *= s.dim();
    }
  }

  CompositeBasis(const SiteBasis& site, int n_sites)
      : CompositeBasis(std::vector<SiteBasis>(static_cast<std::size_t>(n_sites), site)) {}

  int n_sites() const { return static_cast<int>(sites_.size()); }
  const SiteBasis& site(int i) const { return sites_.at(static_cast<std::size_t>(i)); }
  long dim() const { return dim_; }

  long stride_after(int site_index) const {
    long inner = 1;
    for (int k = site_index + 1; k < n_sites(); ++k) inner *= sites_[static_cast<std::size_t>(k)].dim();
    return inner;
  }

  bool operator==(const CompositeBasis& other) const {
    if (sites_.size() != other.sites_.size()) return false;
    for (std::size_t i = 0; i < sites_.size(); ++i)
      if (!(sites_[i] == other.sites_[i])) return false;
    return true;
  }

 private:
  std::vector<SiteBasis> sites_;
  long dim_ = 0;
};

using Basis = std::shared_ptr<const CompositeBasis>;

inline Basis make_basis(const SiteBasis& site, int n_sites = 1) {
  return std::make_shared<const CompositeBasis>(site, n_sites);
}

inline Basis make_basis(const LevelScheme& scheme, int n_sites = 1) {
  return make_basis(SiteBasis(scheme), n_sites);
}

inline void check_same_basis(const Basis& a, const Basis& b, const char* what) {
  if (a == b) return;
  if (!a || !b || !(*a == *b)) throw std::invalid_argument(std::string("basis mismatch in ") + what);
}

// ---------------------------------------------------------------------------
// Basis-tagged vectors and matrices
// ---------------------------------------------------------------------------

struct StateVector {
  Eigen::VectorXcd v;
  Basis basis;
};

struct OperatorMatrix {
  Eigen::MatrixXcd m;
  Basis basis;
};

struct DensityMatrix {
  Eigen::MatrixXcd m;
  Basis basis;
  double time = 0.0;
};

inline DensityMatrix pure_state_density(const StateVector& psi) {
  return DensityMatrix{psi.v * psi.v.adjoint(), psi.basis, 0.0};
}

// Dense kron lift of a site-local matrix; intended for moderate dimensions.
inline Eigen::MatrixXcd lift_site_matrix(const CompositeBasis& basis, int site_index,
                                         const Eigen::MatrixXcd& local) {
  const long d = basis.dim();
  if (d > 20000) throw std::invalid_argument("composite dimension too large for dense operators");
  const int ds = basis.site(site_index).dim();
  if (local.rows() != ds || local.cols() != ds)
    throw std::invalid_argument("site operator dimension mismatch");
  const long inner = basis.stride_after(site_index);
  const long outer = d / (inner * ds);
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(d, d);
  for (long o = 0; o < outer; ++o)
    for (int r = 0; r < ds; ++r)
      for (int c = 0; c < ds; ++c) {
        const std::complex<double> val = local(r, c);
        if (val == std::complex<double>(0, 0)) continue;
        const long row0 = (o * ds + r) * inner;
        const long col0 = (o * ds + c) * inner;
        for (long i = 0; i < inner; ++i) full(row0 + i, col0 + i) += val;
      }
  return full;
}

/// Applies a site-local matrix to a composite pure state without forming the
/// lifted operator; this is what makes large multisite darkness checks cheap.
inline Eigen::VectorXcd apply_site_matrix(const CompositeBasis& basis, int site_index,
                                          const Eigen::MatrixXcd& local,
                                          const Eigen::VectorXcd& in) {
  const long d = basis.dim();
  if (in.size() != d) throw std::invalid_argument("state dimension mismatch");
  const int ds = basis.site(site_index).dim();
  const long inner = basis.stride_after(site_index);
  const long outer = d / (inner * ds);
  Eigen::VectorXcd out(d);
  for (long o = 0; o < outer; ++o) {
    Eigen::Map<const Eigen::MatrixXcd> block(in.data() + o * ds * inner, inner, ds);
    Eigen::Map<Eigen::MatrixXcd> target(out.data() + o * ds * inner, inner, ds);
    target.noalias() = block * local.transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spec-facing composite operators
// ---------------------------------------------------------------------------

inline OperatorMatrix one_body_operator(const Basis& basis, int site_index, Mode out_mode,
                                        Mode in_mode) {
  const Eigen::MatrixXcd local = site_one_body(basis->site(site_index), out_mode, in_mode);
  return {lift_site_matrix(*basis, site_index, local), basis};
}

inline OperatorMatrix lowering_operator(const Basis& basis, int site_index, Polarization q) {
  const Eigen::MatrixXcd local = site_lowering(basis->site(site_index), q);
  return {lift_site_matrix(*basis, site_index, local), basis};
}

inline OperatorMatrix excitation_number_operator(const Basis& basis) {
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
  for (int i = 0; i < basis->n_sites(); ++i)
    total += lift_site_matrix(*basis, i, site_excitation_number(basis->site(i)));
  return {std::move(total), basis};
}

inline OperatorMatrix total_f_squared_operator(const Basis& basis) {
  if (basis->n_sites() != 1)
    throw std::invalid_argument("total F^2 operator is defined for a single site");
  return {site_total_f_squared(basis->site(0)), basis};
}

inline StateVector fock_state(const Basis& basis, const std::vector<std::pair<Mode, Mode>>& labels) {
  if (static_cast<int>(labels.size()) != basis->n_sites())
    throw std::invalid_argument("one mode pair per site required");
  Eigen::VectorXcd v = site_fock_state(basis->site(0), labels[0].first, labels[0].second);
  for (int i = 1; i < basis->n_sites(); ++i) {
    const Eigen::VectorXcd w =
        site_fock_state(basis->site(i), labels[static_cast<std::size_t>(i)].first,
                        labels[static_cast<std::size_t>(i)].second);
    Eigen::VectorXcd prod(v.size() * w.size());
    for (long a = 0; a < v.size(); ++a) prod.segment(a * w.size(), w.size()) = v(a) * w;
    v = std::move(prod);
  }
  return {std::move(v), basis};
}

inline StateVector product_state(const Basis& basis, const std::vector<Eigen::VectorXcd>& site_states) {
  if (static_cast<int>(site_states.size()) != basis->n_sites())
    throw std::invalid_argument("one state per site required");
  Eigen::VectorXcd v = site_states[0];
  if (v.size() != basis->site(0).dim()) throw std::invalid_argument("site state dimension mismatch");
  for (int i = 1; i < basis->n_sites(); ++i) {
    const Eigen::VectorXcd& w = site_states[static_cast<std::size_t>(i)];
    if (w.size() != basis->site(i).dim())
      throw std::invalid_argument("site state dimension mismatch");
    Eigen::VectorXcd prod(v.size() * w.size());
    for (long a = 0; a < v.size(); ++a) prod.segment(a * w.size(), w.size()) = v(a) * w;
    v = std::move(prod);
  }
  return {std::move(v), basis};
}

}  // namespace darklat

#endif
