#pragma once

// Ground-state observables: site densities, one-body coherence, the
// collective-mode entanglement witness, the density-wave order parameter,
// the bipartite entanglement entropy, the charge gap and the time-of-flight
// structure factor.
//
// Functions taking a raw amplitude span accept any normalised real state over
// the basis, which lets tests feed product Fock states and superpositions
// directly. The GroundState overloads forward to them.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "ebh/fock.hpp"
#include "ebh/model.hpp"
#include "ebh/solver.hpp"

namespace ebh {

using Amplitudes = std::span<const double>;

inline Amplitudes amplitudes(const GroundState& gs) {
  return {gs.vector.data(), static_cast<std::size_t>(gs.vector.size())};
}

/// Wavenumber of momentum-grid point m on an L-site ring, 2 pi m / L.
double grid_wavenumber(int sites, int m);

/// Grid index m for q = 2 pi m / L. Throws std::invalid_argument when q is off
/// the grid by more than 1e-9 in units of m.
int grid_index(int sites, double q);

std::vector<double> site_densities(Amplitudes psi, const BasisTable& basis);

/// G_ij = <b+_i b_j>.
struct OneBodyMatrix {
  Eigen::MatrixXcd G;
};

OneBodyMatrix one_body_matrix(Amplitudes psi, const BasisTable& basis);

/// R psi with R = (1/L) sum_ij exp(i q (i - j)) b+_i b_j = b_q^dagger b_q.
Eigen::VectorXcd apply_collective_number(Amplitudes psi, const BasisTable& basis,
                                         double q);

/// First and second moments of R in a pure state.
struct CollectiveMoments {
  double mean = 0.0;    ///< <R>
  double second = 0.0;  ///< <R^2> = ||R psi||^2
};

CollectiveMoments collective_moments(Amplitudes psi, const BasisTable& basis, double q);

/// Lower bound on Var(R) obeyed by every separable state with these site
/// densities: [N (L - 1) + N^2 - sum_j <n_j>^2] / L^2.
double separable_bound(std::span<const double> densities, int bosons);

struct WitnessReport {
  int m = 0;
  double q = 0.0;
  double mean_R = 0.0;
  double var_R = 0.0;
  double r_sep = 0.0;
  double lambda = 0.0;  ///< var_R - r_sep; negative certifies entanglement among sites
};

/// Assembles a report from moments that may come from a mixture.
WitnessReport make_witness_report(int sites, int m, double mean, double second,
                                  std::span<const double> densities, int bosons);

WitnessReport witness(Amplitudes psi, const BasisTable& basis, int m);
WitnessReport witness_at(Amplitudes psi, const BasisTable& basis, double q);
inline WitnessReport witness(const GroundState& gs, const BasisTable& basis, int m) {
  return witness(amplitudes(gs), basis, m);
}

/// Minimum-lambda report over all L grid points; ties go to the smallest m.
WitnessReport witness_min_over_q(Amplitudes psi, const BasisTable& basis);
inline WitnessReport witness_min_over_q(const GroundState& gs, const BasisTable& basis) {
  return witness_min_over_q(amplitudes(gs), basis);
}

/// Density-wave order parameter 2 <D> / N and its RMS form 2 sqrt(<D^2>) / N.
struct ThetaLR {
  double signed_value = 0.0;
  double rms = 0.0;
};

ThetaLR theta_lr(Amplitudes psi, const BasisTable& basis);
inline ThetaLR theta_lr(const GroundState& gs, const BasisTable& basis) {
  return theta_lr(amplitudes(gs), basis);
}

struct EntropyReport {
  int cut = 0;
  std::vector<double> schmidt;  ///< squared Schmidt coefficients, descending
  double entropy = 0.0;         ///< von Neumann entropy in nats
};

/// Entropy between sites [0, cut) and [cut, L).
EntropyReport entanglement_entropy(Amplitudes psi, const BasisTable& basis, int cut);
inline EntropyReport entanglement_entropy(const GroundState& gs, const BasisTable& basis,
                                          int cut) {
  return entanglement_entropy(amplitudes(gs), basis, cut);
}

struct GapReport {
  double E_minus = 0.0;
  double E_0 = 0.0;
  double E_plus = 0.0;
  double delta = 0.0;
};

/// delta = N [E(N+1)/(N+1) + E(N-1)/(N-1) - 2 E(N)/N].
double gap_formula(int bosons, double e_minus, double e_0, double e_plus);

/// Ground energies at N-1, N, N+1 with the same Hamiltonian operator (the
/// cavity term keeps its 1/N normalisation from params.N). The three solves
/// run concurrently.
GapReport energy_gap(const ModelParams& params, const SolverOptions& opts = {});

/// S(k) = sum_ij exp(i k (i - j)) G_ij.
double structure_factor(Amplitudes psi, const BasisTable& basis, double k);
inline double structure_factor(const GroundState& gs, const BasisTable& basis, double k) {
  return structure_factor(amplitudes(gs), basis, k);
}

inline std::vector<double> site_densities(const GroundState& gs, const BasisTable& basis) {
  return site_densities(amplitudes(gs), basis);
}
inline OneBodyMatrix one_body_matrix(const GroundState& gs, const BasisTable& basis) {
  return one_body_matrix(amplitudes(gs), basis);
}

}  // namespace ebh
