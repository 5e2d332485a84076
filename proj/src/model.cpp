#include "ebh/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace ebh {

void ModelParams::validate() const {
  if (L < 1) throw std::invalid_argument("L must be at least 1");
  if (N < 0) throw std::invalid_argument("N must be non-negative");
  for (double v : {J, U, U_LR, pin_epsilon, j_epsilon})
    if (!std::isfinite(v)) throw std::invalid_argument("couplings must be finite");
  if (hopping() != 0.0 && L < 2)
    throw std::invalid_argument("hopping needs at least two sites");
  if ((U_LR != 0.0 || pin_epsilon != 0.0) && L % 2 != 0 &&
      boundary == Boundary::periodic)
    throw std::invalid_argument(
        "staggered terms are ill-defined for odd L with periodic boundary");
  if (U_LR != 0.0 && N == 0)
    throw std::invalid_argument("cavity term is normalised by N, which is zero");
}

int imbalance(std::span<const Occupation> s) {
  int d = 0;
  for (std::size_t j = 0; j < s.size(); ++j) d += site_parity(j) * s[j];
  return d;
}

std::vector<std::pair<std::size_t, std::size_t>> lattice_bonds(int sites,
                                                               Boundary boundary) {
  std::vector<std::pair<std::size_t, std::size_t>> bonds;
  const auto L = static_cast<std::size_t>(sites);
  for (std::size_t j = 0; j + 1 < L; ++j) bonds.emplace_back(j, j + 1);
  if (boundary == Boundary::periodic && L > 2) bonds.emplace_back(L - 1, 0);
  return bonds;
}

double SparseHermitian::diagonal(std::size_t k) const {
  return m_.coeff(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
}

void SparseHermitian::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim() || y.size() != dim())
    throw std::invalid_argument("SparseHermitian::apply: dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  yv.noalias() = m_ * xv;
}

Eigen::VectorXd SparseHermitian::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim())
    throw std::invalid_argument("SparseHermitian::apply: dimension mismatch");
  return m_ * x;
}

double SparseHermitian::max_asymmetry() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r)
    for (Storage::InnerIterator it(m_, r); it; ++it)
      worst = std::max(worst, std::abs(it.value() - m_.coeff(it.col(), it.row())));
  return worst;
}

double diagonal_energy(const ModelParams& params, std::span<const Occupation> s) {
  double onsite = 0.0;
  for (Occupation n : s) onsite += static_cast<double>(n) * (n - 1);
  const double d = imbalance(s);
  double e = 0.5 * params.U * onsite - params.pin_epsilon * d;
  if (params.U_LR != 0.0) e -= params.U_LR / params.N * d * d;
  return e;
}

namespace {

void check_lattice(const ModelParams& params, const BasisTable& basis) {
  params.validate();
  if (basis.sites() != params.L)
    throw std::invalid_argument("basis has " + std::to_string(basis.sites()) +
                                " sites, model has " + std::to_string(params.L));
}

// Calls emit(target_rank, value) for every off-diagonal element in column k.
template <typename Emit>
void for_each_hop(const BasisTable& basis, std::size_t k, double hopping,
                  const std::vector<std::pair<std::size_t, std::size_t>>& bonds,
                  std::vector<Occupation>& scratch, Emit&& emit) {
  const auto s = basis.state(k);
  for (auto [a, b] : bonds) {
    for (auto [dest, src] : {std::pair{a, b}, std::pair{b, a}}) {
      if (s[src] == 0) continue;
      std::copy(s.begin(), s.end(), scratch.begin());
      const double amp = std::sqrt(static_cast<double>(s[src]) * (s[dest] + 1));
      --scratch[src];
      ++scratch[dest];
      const auto target = basis.find(scratch);
      if (!target) throw std::logic_error("hopping left the particle-number sector");
      emit(*target, -hopping * amp);
    }
  }
}

}  // namespace

SparseHermitian build_hamiltonian_in_sector(const ModelParams& params,
                                            const BasisTable& basis) {
  check_lattice(params, basis);
  const double t = params.hopping();
  const auto bonds = lattice_bonds(params.L, params.boundary);
  std::vector<Occupation> scratch(static_cast<std::size_t>(params.L));

  std::vector<Eigen::Triplet<double, std::int64_t>> entries;
  entries.reserve(basis.dim() * (1 + (t != 0.0 ? 2 * bonds.size() : 0)));
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto col = static_cast<std::int64_t>(k);
    entries.emplace_back(col, col, diagonal_energy(params, basis.state(k)));
    if (t == 0.0) continue;
    for_each_hop(basis, k, t, bonds, scratch, [&](std::size_t row, double v) {
      entries.emplace_back(static_cast<std::int64_t>(row), col, v);
    });
  }

  const auto dim = static_cast<std::int64_t>(basis.dim());
  SparseHermitian::Storage m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return SparseHermitian(std::move(m));
}

SparseHermitian build_hamiltonian(const ModelParams& params, const BasisTable& basis) {
  if (basis.bosons() != params.N)
    throw std::invalid_argument("basis has " + std::to_string(basis.bosons()) +
                                " bosons, model has " + std::to_string(params.N));
  return build_hamiltonian_in_sector(params, basis);
}

std::vector<double> apply_hamiltonian(const ModelParams& params,
                                      const BasisTable& basis,
                                      std::span<const double> psi) {
  check_lattice(params, basis);
  if (psi.size() != basis.dim())
    throw std::invalid_argument("apply_hamiltonian: vector length does not match basis");
  const double t = params.hopping();
  const auto bonds = lattice_bonds(params.L, params.boundary);
  std::vector<Occupation> scratch(static_cast<std::size_t>(params.L));

  std::vector<double> out(basis.dim(), 0.0);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    out[k] += diagonal_energy(params, basis.state(k)) * psi[k];
    if (t == 0.0 || psi[k] == 0.0) continue;
    for_each_hop(basis, k, t, bonds, scratch,
                 [&](std::size_t row, double v) { out[row] += v * psi[k]; });
  }
  return out;
}

namespace {

// Site permutations of the lattice (translations and reflections) that leave
// H invariant.
std::vector<std::vector<std::size_t>> lattice_symmetries(const ModelParams& params) {
  const auto L = static_cast<std::size_t>(params.L);
  std::set<std::vector<std::size_t>> candidates;
  std::vector<std::size_t> perm(L);
  if (params.boundary == Boundary::periodic) {
    for (std::size_t shift = 0; shift < L; ++shift) {
      for (std::size_t j = 0; j < L; ++j) perm[j] = (j + shift) % L;
      candidates.insert(perm);
      for (std::size_t j = 0; j < L; ++j) perm[j] = (shift + L - j) % L;
      candidates.insert(perm);
    }
  } else {
    for (std::size_t j = 0; j < L; ++j) perm[j] = j;
    candidates.insert(perm);
    for (std::size_t j = 0; j < L; ++j) perm[j] = L - 1 - j;
    candidates.insert(perm);
  }

  std::vector<std::vector<std::size_t>> kept;
  for (const auto& p : candidates) {
    bool same = true;
    bool flipped = true;
    for (std::size_t j = 0; j < L; ++j) {
      same = same && site_parity(p[j]) == site_parity(j);
      flipped = flipped && site_parity(p[j]) == -site_parity(j);
    }
    const bool ok = params.pin_epsilon != 0.0 ? same
                    : params.U_LR != 0.0      ? (same || flipped)
                                              : true;
    if (ok) kept.push_back(p);
  }
  return kept;
}

}  // namespace

Eigen::VectorXd symmetric_start_vector(const ModelParams& params,
                                       const BasisTable& basis, std::uint64_t seed) {
  check_lattice(params, basis);
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(dim);

  if (params.hopping() < 0.0) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = dist(rng);
    return v.normalized();
  }

  // Positive entries guarantee overlap with the non-negative ground state.
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Eigen::VectorXd raw(dim);
  for (Eigen::Index k = 0; k < dim; ++k) raw[k] = dist(rng);

  const auto perms = lattice_symmetries(params);
  std::vector<Occupation> image(static_cast<std::size_t>(params.L));
  v.setZero();
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto s = basis.state(k);
    for (const auto& p : perms) {
      for (std::size_t j = 0; j < image.size(); ++j) image[p[j]] = s[j];
      v[static_cast<Eigen::Index>(k)] += raw[static_cast<Eigen::Index>(*basis.find(image))];
    }
  }
  return v.normalized();
}

}  // namespace ebh
