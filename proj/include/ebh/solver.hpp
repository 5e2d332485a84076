#pragma once

// Lowest eigenpairs of a real symmetric matrix: dense diagonalisation for
// small problems, Lanczos with full reorthogonalisation otherwise.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ebh/model.hpp"

namespace ebh {

struct SolverOptions {
  double tol = 1e-10;             ///< bound on ||H v - E v||
  int max_iter = 5000;            ///< total matrix-vector products per eigenpair
  int krylov_dim = 250;           ///< Lanczos basis size before an explicit restart
  std::size_t dense_threshold = 2000;
  std::uint64_t seed = 0;
  bool detect_degeneracy = true;  ///< solve for the second level to set the flag
  /// Optional start vector. In a degenerate ground manifold the returned vector
  /// is the normalised projection of this vector onto the manifold.
  std::optional<Eigen::VectorXd> start;
};

struct Eigenpair {
  double energy = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  bool degenerate = false;
  std::optional<double> gap_to_next;
};

class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

/// Energy gap below which two levels count as degenerate.
double degeneracy_threshold(double energy);

/// Flips the overall sign so the largest-magnitude amplitude is positive.
void fix_gauge(Eigen::VectorXd& v);

GroundState ground_state(const SparseHermitian& h, const SolverOptions& opts = {});

/// The k lowest eigenpairs, energies non-decreasing, vectors orthonormal.
std::vector<Eigenpair> lowest_k(const SparseHermitian& h, int k,
                                const SolverOptions& opts = {});

/// Builds H for `params` over `basis` (any particle-number sector of the same
/// lattice) and solves it. Unless opts.start is set, iteration starts from
/// symmetric_start_vector(params, basis, opts.seed).
GroundState solve_model(const ModelParams& params, const BasisTable& basis,
                        SolverOptions opts = {});

}  // namespace ebh
