#pragma once

// Extended Bose-Hubbard Hamiltonian: nearest-neighbour hopping, on-site
// repulsion and the cavity-mediated even/odd imbalance coupling.
//
//   H = -J sum_<ij> (b+_i b_j + h.c.) + U/2 sum_j n_j (n_j - 1)
//       - (U_LR / N) D^2 - pin_epsilon D,      D = sum_j (-1)^j n_j
//
// Site parity follows 1-based labels: the first site carries (-1)^1 = -1.
// Hopping amplitude used in the matrix is J + j_epsilon.

#include <Eigen/Sparse>

#include <cstdint>
#include <span>
#include <vector>

#include "ebh/fock.hpp"

namespace ebh {

enum class Boundary { periodic, open };

struct ModelParams {
  int L = 8;
  int N = 8;
  double J = 0.0;
  double U = 1.0;
  double U_LR = 0.0;
  Boundary boundary = Boundary::periodic;
  double pin_epsilon = 0.0;
  double j_epsilon = 0.0;

  double hopping() const { return J + j_epsilon; }

  /// Throws std::invalid_argument for inconsistent parameter sets.
  void validate() const;
};

/// Staggered sign of a 0-based site: -1 for the first site, +1 for the second.
constexpr int site_parity(std::size_t site) { return site % 2 == 0 ? -1 : 1; }

/// Even/odd occupation imbalance D = sum_j (-1)^j n_j.
int imbalance(std::span<const Occupation> s);

/// Unordered nearest-neighbour pairs, each listed once.
std::vector<std::pair<std::size_t, std::size_t>> lattice_bonds(int sites,
                                                               Boundary boundary);

/// Real symmetric matrix in compressed row storage.
class SparseHermitian {
public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

  SparseHermitian() = default;
  explicit SparseHermitian(Storage m) : m_(std::move(m)) { m_.makeCompressed(); }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }
  double diagonal(std::size_t k) const;

  /// y = H x.
  void apply(std::span<const double> x, std::span<double> y) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  /// max |H_rc - H_cr| over stored entries.
  double max_asymmetry() const;

  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(m_); }
  const Storage& storage() const { return m_; }

private:
  Storage m_;
};

/// Diagonal matrix element of the Hamiltonian for one Fock state. The cavity
/// term is normalised by params.N regardless of the state's own particle
/// number.
double diagonal_energy(const ModelParams& params, std::span<const Occupation> s);

/// Assembles H over `basis`, which must be built for (params.L, params.N).
SparseHermitian build_hamiltonian(const ModelParams& params, const BasisTable& basis);

/// Like build_hamiltonian but accepts a basis in any particle-number sector of
/// the same lattice. Used for the N +/- 1 solves of the charge gap.
SparseHermitian build_hamiltonian_in_sector(const ModelParams& params,
                                            const BasisTable& basis);

/// Matrix-free H psi, generated directly from the Fock states.
std::vector<double> apply_hamiltonian(const ModelParams& params,
                                      const BasisTable& basis,
                                      std::span<const double> psi);

/// Random start vector averaged over the lattice permutations that commute
/// with H. Krylov iteration from it stays in the totally symmetric sector,
/// which holds the ground state whenever the hopping is non-negative; this is
/// what selects the symmetric combination inside a degenerate CDW doublet.
/// Falls back to the plain random vector for negative hopping.
Eigen::VectorXd symmetric_start_vector(const ModelParams& params,
                                       const BasisTable& basis,
                                       std::uint64_t seed = 0);

}  // namespace ebh
