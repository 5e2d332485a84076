#include "ebh/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace ebh {

double degeneracy_threshold(double energy) {
  return 1e-8 * std::max(1.0, std::abs(energy));
}

void fix_gauge(Eigen::VectorXd& v) {
  if (v.size() == 0) return;
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (v[at] < 0) v = -v;
}

namespace {

Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index k = 0; k < n; ++k) v[k] = dist(rng);
  return v;
}

void project_out(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& locked) {
  for (const auto& u : locked) w -= u.dot(w) * u;
}

double residual_norm(const SparseHermitian& h, const Eigen::VectorXd& x, double e) {
  return (h.apply(x) - e * x).norm();
}

// Lowest eigenpair of h restricted to the orthogonal complement of `locked`.
Eigenpair lanczos_lowest(const SparseHermitian& h, Eigen::VectorXd v,
                         const std::vector<Eigen::VectorXd>& locked,
                         const SolverOptions& opts, std::uint64_t fallback_seed) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  const auto free_dim = n - static_cast<Eigen::Index>(locked.size());

  project_out(v, locked);
  if (v.norm() < 1e-8) {
    v = random_vector(n, fallback_seed);
    project_out(v, locked);
  }
  v.normalize();

  int matvecs = 0;
  double last_residual = std::numeric_limits<double>::infinity();
  while (matvecs < opts.max_iter) {
    const Eigen::Index m = std::min<Eigen::Index>(opts.krylov_dim, free_dim);
    std::vector<Eigen::VectorXd> basis{v};
    std::vector<double> alpha;
    std::vector<double> beta;
    double scale = 0.0;

    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd w = h.apply(basis[j]);
      ++matvecs;
      project_out(w, locked);
      alpha.push_back(basis[j].dot(w));
      w -= alpha.back() * basis[j];
      if (j > 0) w -= beta.back() * basis[j - 1];
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : basis) w -= u.dot(w) * u;
        project_out(w, locked);
      }
      const double b = w.norm();
      scale = std::max({scale, std::abs(alpha.back()), b});
      const bool breakdown = b <= 1e-12 * std::max(1.0, scale);
      const bool last = j + 1 == m || matvecs >= opts.max_iter;
      // The tridiagonal eigensolve is O(j^3); thin it out for long runs.
      if (!(breakdown || last || j < 30 || j % 5 == 0)) {
        beta.push_back(b);
        basis.push_back(w / b);
        continue;
      }

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), j + 1);
      Eigen::VectorXd off = Eigen::Map<Eigen::VectorXd>(beta.data(), j);
      tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
      const Eigen::VectorXd s = tri.eigenvectors().col(0);
      const double estimate = b * std::abs(s[j]);

      if (estimate < 0.1 * opts.tol || breakdown || last) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i <= j; ++i) x += s[i] * basis[i];
        project_out(x, locked);
        x.normalize();
        const double rayleigh = x.dot(h.apply(x));
        last_residual = residual_norm(h, x, rayleigh);
        matvecs += 2;
        if (last_residual <= opts.tol) return {rayleigh, x, last_residual};
        v = x;
        break;
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }
  }

  std::ostringstream os;
  os << "Lanczos did not converge within " << opts.max_iter
     << " matrix-vector products (residual " << last_residual << ", tol "
     << opts.tol << ")";
  throw ConvergenceError(os.str(), last_residual);
}

Eigen::VectorXd initial_vector(const SparseHermitian& h, const SolverOptions& opts) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  if (opts.start) {
    if (opts.start->size() != n)
      throw std::invalid_argument("start vector length does not match the matrix");
    return *opts.start;
  }
  return random_vector(n, opts.seed);
}

}  // namespace

GroundState ground_state(const SparseHermitian& h, const SolverOptions& opts) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  if (n == 0) throw std::invalid_argument("ground_state: empty matrix");
  GroundState gs;

  if (h.dim() <= opts.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.to_dense());
    if (es.info() != Eigen::Success)
      throw ConvergenceError("dense diagonalisation failed", 0.0);
    const auto& evals = es.eigenvalues();
    const auto& evecs = es.eigenvectors();
    gs.energy = evals[0];
    gs.vector = evecs.col(0);

    const double thr = degeneracy_threshold(gs.energy);
    Eigen::Index manifold = 1;
    while (manifold < n && evals[manifold] - gs.energy < thr) ++manifold;
    if (manifold > 1 && opts.start) {
      const Eigen::VectorXd start = initial_vector(h, opts);
      const Eigen::MatrixXd block = evecs.leftCols(manifold);
      Eigen::VectorXd projected = block * (block.transpose() * start);
      if (projected.norm() > 1e-8) gs.vector = projected.normalized();
    }
    if (n > 1) {
      gs.gap_to_next = evals[1] - evals[0];
      gs.degenerate = *gs.gap_to_next < thr;
    }
  } else {
    auto first = lanczos_lowest(h, initial_vector(h, opts), {}, opts, opts.seed + 1);
    gs.energy = first.energy;
    gs.vector = std::move(first.vector);
    if (opts.detect_degeneracy) {
      auto second = lanczos_lowest(h, random_vector(n, opts.seed + 1), {gs.vector},
                                   opts, opts.seed + 2);
      gs.gap_to_next = second.energy - gs.energy;
      gs.degenerate = std::abs(*gs.gap_to_next) < degeneracy_threshold(gs.energy);
    }
  }

  fix_gauge(gs.vector);
  gs.residual = residual_norm(h, gs.vector, gs.energy);
  return gs;
}

std::vector<Eigenpair> lowest_k(const SparseHermitian& h, int k,
                                const SolverOptions& opts) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  if (k < 1 || k > n) throw std::invalid_argument("lowest_k: need 1 <= k <= dim");

  std::vector<Eigenpair> pairs;
  if (h.dim() <= opts.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.to_dense());
    if (es.info() != Eigen::Success)
      throw ConvergenceError("dense diagonalisation failed", 0.0);
    for (int i = 0; i < k; ++i) {
      Eigenpair p{es.eigenvalues()[i], es.eigenvectors().col(i), 0.0};
      fix_gauge(p.vector);
      p.residual = residual_norm(h, p.vector, p.energy);
      pairs.push_back(std::move(p));
    }
    return pairs;
  }

  std::vector<Eigen::VectorXd> locked;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd start = i == 0 ? initial_vector(h, opts)
                                   : random_vector(n, opts.seed + 1 + 2 * i);
    auto p = lanczos_lowest(h, std::move(start), locked, opts, opts.seed + 2 + 2 * i);
    locked.push_back(p.vector);
    pairs.push_back(std::move(p));
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return a.energy < b.energy; });
  for (auto& p : pairs) {
    fix_gauge(p.vector);
    p.residual = residual_norm(h, p.vector, p.energy);
  }
  return pairs;
}

GroundState solve_model(const ModelParams& params, const BasisTable& basis,
                        SolverOptions opts) {
  const auto h = build_hamiltonian_in_sector(params, basis);
  if (!opts.start) opts.start = symmetric_start_vector(params, basis, opts.seed);
  return ground_state(h, opts);
}

}  // namespace ebh
