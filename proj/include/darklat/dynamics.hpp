#ifndef DARKLAT_DYNAMICS_HPP
#define DARKLAT_DYNAMICS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "darklat/fock.hpp"
#include "darklat/greens.hpp"

namespace darklat {

// ---------------------------------------------------------------------------
// Generator assembly
// ---------------------------------------------------------------------------

/// Composite lowering operators D^-_{i,q} for every site and polarization,
/// flattened as index 3*site + (q+1).
inline std::vector<Eigen::MatrixXcd> build_lowering_set(const CompositeBasis& basis) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(static_cast<std::size_t>(3 * basis.n_sites()));
  for (int i = 0; i < basis.n_sites(); ++i)
    for (Polarization q : all_polarizations)
      out.push_back(lift_site_matrix(basis, i, site_lowering(basis.site(i), q)));
  return out;
}

/// Dipolar Hamiltonian H = -sum_{i,j,q,q'} R^{ij}_{qq'} D^+_{i,q} D^-_{j,q'}.
/// Identically zero for a single site since R^{ii} = 0.
inline OperatorMatrix build_hamiltonian(const Basis& basis, const CouplingTable& table) {
  if (table.n_sites() != basis->n_sites())
    throw std::invalid_argument("coupling table and basis disagree on the number of sites");
  const std::vector<Eigen::MatrixXcd> d_minus = build_lowering_set(*basis);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
  for (int i = 0; i < basis->n_sites(); ++i)
    for (int j = 0; j < basis->n_sites(); ++j)
      for (Polarization q : all_polarizations)
        for (Polarization qp : all_polarizations) {
          const std::complex<double> r = table.coherent(i, j, q, qp);
          if (std::abs(r) < 1e-15) continue;
          const auto& dp = d_minus[static_cast<std::size_t>(3 * i + q_of(q) + 1)];
          const auto& dm = d_minus[static_cast<std::size_t>(3 * j + q_of(qp) + 1)];
          h.noalias() -= r * (dp.adjoint() * dm);
        }
  return {std::move(h), basis};
}

/// Hamiltonian and jump structure of the master equation. The jump list keeps
/// the literal (I^{ij}_{qq'}, D^+_{i,q}, D^-_{j,q'}) triples of Eq. (1);
/// the anticommutator part is cached as damping = sum I D^+ D^-.
struct GeneratorSet {
  Basis basis;
  Eigen::MatrixXcd h_dipolar;
  Eigen::MatrixXcd h_drive;
  std::vector<Eigen::MatrixXcd> d_minus;  // index 3*site + (q+1)
  std::vector<Eigen::MatrixXcd> d_plus;

  struct Jump {
    std::complex<double> coeff;  // I^{ij}_{qq'}
    int plus_index;              // (i, q)
    int minus_index;             // (j, q')
  };
  std::vector<Jump> jumps;

  Eigen::MatrixXcd damping;  // K = sum I^{ij}_{qq'} D^+_{i,q} D^-_{j,q'}
  Eigen::MatrixXcd h_total;
  bool coherent_part_zero = false;

  double gamma = 1.0;
};

inline GeneratorSet build_generator_set(const Basis& basis, const CouplingTable& table,
                                        const OperatorMatrix* drive = nullptr) {
  GeneratorSet gen;
  gen.basis = basis;
  gen.gamma = table.gamma();
  gen.h_dipolar = build_hamiltonian(basis, table).m;
  if (drive) {
    check_same_basis(basis, drive->basis, "drive Hamiltonian");
    gen.h_drive = drive->m;
  } else {
    gen.h_drive = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
  }
  if ((gen.h_dipolar - gen.h_dipolar.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::runtime_error("dipolar Hamiltonian lost Hermiticity");
  if ((gen.h_drive - gen.h_drive.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("drive Hamiltonian must be Hermitian");

  gen.d_minus = build_lowering_set(*basis);
  gen.d_plus.reserve(gen.d_minus.size());
  for (const auto& d : gen.d_minus) gen.d_plus.push_back(d.adjoint());

  gen.damping = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
  for (int i = 0; i < basis->n_sites(); ++i)
    for (int j = 0; j < basis->n_sites(); ++j)
      for (Polarization q : all_polarizations)
        for (Polarization qp : all_polarizations) {
          const std::complex<double> w = table.dissipative(i, j, q, qp);
          if (std::abs(w) < 1e-15) continue;
          const int a = 3 * i + q_of(q) + 1;
          const int b = 3 * j + q_of(qp) + 1;
          gen.jumps.push_back({w, a, b});
          gen.damping.noalias() +=
              w * (gen.d_plus[static_cast<std::size_t>(a)] * gen.d_minus[static_cast<std::size_t>(b)]);
        }
  gen.h_total = gen.h_dipolar + gen.h_drive;
  gen.coherent_part_zero = gen.h_total.cwiseAbs().maxCoeff() == 0.0;
  return gen;
}

// ---------------------------------------------------------------------------
// Master-equation right-hand side
// ---------------------------------------------------------------------------

/// drho/dt of Eq. (1), evaluated with matrix products only:
///   -i[H, rho] - {K, rho} + 2 sum I^{ij}_{qq'} D^-_{j,q'} rho D^+_{i,q}.
inline Eigen::MatrixXcd liouvillian_apply(const Eigen::MatrixXcd& rho, const GeneratorSet& gen) {
  if (rho.rows() != gen.damping.rows() || rho.cols() != gen.damping.cols())
    throw std::invalid_argument("density matrix dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  if (!gen.coherent_part_zero) {
    const std::complex<double> minus_i(0.0, -1.0);
    out.noalias() += minus_i * (gen.h_total * rho);
    out.noalias() -= minus_i * (rho * gen.h_total);
  }
  out.noalias() -= gen.damping * rho;
  out.noalias() -= rho * gen.damping;
  for (const auto& jump : gen.jumps) {
    const auto& dm = gen.d_minus[static_cast<std::size_t>(jump.minus_index)];
    const auto& dp = gen.d_plus[static_cast<std::size_t>(jump.plus_index)];
    out.noalias() += (2.0 * jump.coeff) * (dm * rho * dp);
  }
  return out;
}

inline Eigen::MatrixXcd liouvillian_apply(const DensityMatrix& rho, const GeneratorSet& gen) {
  check_same_basis(rho.basis, gen.basis, "liouvillian_apply");
  return liouvillian_apply(rho.m, gen);
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

inline std::complex<double> expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
  check_same_basis(rho.basis, op.basis, "expectation");
  return rho.m.transpose().cwiseProduct(op.m).sum();  // tr(rho * op)
}

inline double population(const DensityMatrix& rho, const StateVector& psi) {
  check_same_basis(rho.basis, psi.basis, "population");
  const double p = std::real(psi.v.dot(rho.m * psi.v));
  if (p < -1e-8 || p > 1.0 + 1e-8)
    throw std::runtime_error("population outside [0,1]: " + std::to_string(p));
  return p;
}

// ---------------------------------------------------------------------------
// Fixed-step integration
// ---------------------------------------------------------------------------

struct EvolveGrid {
  double t_end = 0.0;
  double dt = 0.01;
  int sample_every = 1;
};

/// Numerical-hygiene maxima accumulated over the sampled trajectory.
struct Monitors {
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;
  double min_eigenvalue = 1.0;

  void merge(const Monitors& o) {
    max_trace_drift = std::max(max_trace_drift, o.max_trace_drift);
    max_hermiticity_drift = std::max(max_hermiticity_drift, o.max_hermiticity_drift);
    min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
  }
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> channels;  // one vector per name

  int channel_index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("no such channel: " + name);
  }
  const std::vector<double>& channel(const std::string& name) const {
    return channels[static_cast<std::size_t>(channel_index(name))];
  }
};

struct EvolveResult {
  TimeSeries series;
  Monitors monitors;
  DensityMatrix final_state;
};

using ObservableSet = std::vector<std::pair<std::string, Eigen::MatrixXcd>>;

namespace detail {

inline void check_step_size(const GeneratorSet& gen, double dt) {
  double scale = gen.gamma;
  if (gen.h_drive.size() > 0) scale = std::max(scale, gen.h_drive.cwiseAbs().maxCoeff());
  if (gen.h_dipolar.size() > 0) scale = std::max(scale, gen.h_dipolar.cwiseAbs().maxCoeff());
  if (dt > 0.05 / scale + 1e-12)
    throw std::invalid_argument("dt too large for the fastest rate in the generator (need dt <= " +
                                std::to_string(0.05 / scale) + ")");
}

}  // namespace detail

/// Classical fixed-step 4th-order integration of the master equation.
/// Samples tr(rho O) for every named observable each sample_every steps,
/// tracks trace/Hermiticity drift and the minimum eigenvalue of sampled
/// states, and aborts with a step-size diagnostic if the trace drifts.
inline EvolveResult evolve(const DensityMatrix& rho0, const GeneratorSet& gen,
                           const EvolveGrid& grid, const ObservableSet& observables) {
  check_same_basis(rho0.basis, gen.basis, "evolve");
  if (grid.t_end < 0.0 || grid.dt <= 0.0) throw std::invalid_argument("invalid time grid");
  if (grid.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  detail::check_step_size(gen, grid.dt);
  if (std::abs(rho0.m.trace().real() - 1.0) > 1e-8 || std::abs(rho0.m.trace().imag()) > 1e-8)
    throw std::invalid_argument("initial state must have unit trace");
  if ((rho0.m - rho0.m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("initial state must be Hermitian");

  const long n_steps = std::max<long>(1, std::lround(grid.t_end / grid.dt));
  const double dt = grid.t_end > 0.0 ? grid.t_end / static_cast<double>(n_steps) : grid.dt;

  EvolveResult result;
  result.series.names.reserve(observables.size());
  result.series.channels.resize(observables.size());
  for (const auto& [name, op] : observables) {
    if (op.rows() != rho0.m.rows()) throw std::invalid_argument("observable dimension mismatch");
    result.series.names.push_back(name);
  }

  Eigen::MatrixXcd rho = rho0.m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig;

  auto sample = [&](double t) {
    result.series.times.push_back(rho0.time + t);
    for (std::size_t c = 0; c < observables.size(); ++c)
      result.series.channels[c].push_back(
          std::real(rho.transpose().cwiseProduct(observables[c].second).sum()));
    result.monitors.max_trace_drift =
        std::max(result.monitors.max_trace_drift, std::abs(rho.trace() - std::complex<double>(1, 0)));
    result.monitors.max_hermiticity_drift = std::max(
        result.monitors.max_hermiticity_drift, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    eig.compute(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    result.monitors.min_eigenvalue =
        std::min(result.monitors.min_eigenvalue, eig.eigenvalues().minCoeff());
  };

  sample(0.0);
  if (grid.t_end > 0.0) {
    Eigen::MatrixXcd k1, k2, k3, k4;
    for (long step = 1; step <= n_steps; ++step) {
      k1 = liouvillian_apply(rho, gen);
      k2 = liouvillian_apply(rho + (0.5 * dt) * k1, gen);
      k3 = liouvillian_apply(rho + (0.5 * dt) * k2, gen);
      k4 = liouvillian_apply(rho + dt * k3, gen);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

      const double drift = std::abs(rho.trace() - std::complex<double>(1, 0));
      if (drift > 1e-6)
        throw std::runtime_error("trace drift " + std::to_string(drift) + " at t=" +
                                 std::to_string(step * dt) +
                                 "; the fixed step dt=" + std::to_string(dt) + " is too coarse");
      if (step % grid.sample_every == 0 || step == n_steps) sample(step * dt);
    }
  }

  result.final_state = DensityMatrix{std::move(rho), rho0.basis, rho0.time + grid.t_end};
  return result;
}

}  // namespace darklat

#endif
