#include "ebh/observables.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ebh {

namespace {

void check_state(Amplitudes psi, const BasisTable& basis) {
  if (psi.size() != basis.dim())
    throw std::invalid_argument("state length " + std::to_string(psi.size()) +
                                " does not match basis dimension " +
                                std::to_string(basis.dim()));
}

// Scalars that are real by construction; a large imaginary part is a bug.
double real_part(std::complex<double> z, const char* what) {
  if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real())))
    throw std::logic_error(std::string(what) + " has a non-negligible imaginary part");
  return z.real();
}

// Calls visit(target_rank, amplitude) for every nonzero b+_dest b_src |k>.
template <typename Visit>
void for_each_pair_hop(const BasisTable& basis, std::size_t k,
                       std::vector<Occupation>& scratch, Visit&& visit) {
  const auto s = basis.state(k);
  const auto L = s.size();
  for (std::size_t src = 0; src < L; ++src) {
    if (s[src] == 0) continue;
    for (std::size_t dest = 0; dest < L; ++dest) {
      if (dest == src) continue;
      std::copy(s.begin(), s.end(), scratch.begin());
      const double amp = std::sqrt(static_cast<double>(s[src]) * (s[dest] + 1));
      --scratch[src];
      ++scratch[dest];
      visit(dest, src, *basis.find(scratch), amp);
    }
  }
}

}  // namespace

double grid_wavenumber(int sites, int m) {
  return 2.0 * std::numbers::pi * m / sites;
}

int grid_index(int sites, double q) {
  const double m = q * sites / (2.0 * std::numbers::pi);
  const double nearest = std::round(m);
  if (!std::isfinite(m) || std::abs(m - nearest) > 1e-9)
    throw std::invalid_argument("q = " + std::to_string(q) +
                                " is not on the momentum grid 2 pi m / L");
  const int idx = static_cast<int>(nearest) % sites;
  return idx < 0 ? idx + sites : idx;
}

std::vector<double> site_densities(Amplitudes psi, const BasisTable& basis) {
  check_state(psi, basis);
  std::vector<double> n(static_cast<std::size_t>(basis.sites()), 0.0);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double w = psi[k] * psi[k];
    if (w == 0.0) continue;
    const auto s = basis.state(k);
    for (std::size_t j = 0; j < n.size(); ++j) n[j] += w * s[j];
  }
  return n;
}

OneBodyMatrix one_body_matrix(Amplitudes psi, const BasisTable& basis) {
  check_state(psi, basis);
  const auto L = static_cast<Eigen::Index>(basis.sites());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(L, L);
  std::vector<Occupation> scratch(static_cast<std::size_t>(L));
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    if (psi[k] == 0.0) continue;
    const auto s = basis.state(k);
    for (Eigen::Index j = 0; j < L; ++j) g(j, j) += psi[k] * psi[k] * s[static_cast<std::size_t>(j)];
    for_each_pair_hop(basis, k, scratch,
                      [&](std::size_t dest, std::size_t src, std::size_t target, double amp) {
                        g(static_cast<Eigen::Index>(dest), static_cast<Eigen::Index>(src)) +=
                            psi[target] * amp * psi[k];
                      });
  }
  return {g.cast<std::complex<double>>()};
}

Eigen::VectorXcd apply_collective_number(Amplitudes psi, const BasisTable& basis,
                                         double q) {
  check_state(psi, basis);
  const auto L = static_cast<std::size_t>(basis.sites());
  const double inv_l = 1.0 / static_cast<double>(L);
  // phase[d] = exp(i q d) / L for d = dest - src + (L - 1).
  std::vector<std::complex<double>> phase(2 * L - 1);
  for (std::size_t d = 0; d < phase.size(); ++d) {
    const double offset = static_cast<double>(d) - static_cast<double>(L - 1);
    phase[d] = std::polar(inv_l, q * offset);
  }

  const double diag = static_cast<double>(basis.bosons()) * inv_l;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t k = 0; k < basis.dim(); ++k)
    out[static_cast<Eigen::Index>(k)] = diag * psi[k];

  std::vector<Occupation> scratch(L);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    if (psi[k] == 0.0) continue;
    for_each_pair_hop(basis, k, scratch,
                      [&](std::size_t dest, std::size_t src, std::size_t target, double amp) {
                        out[static_cast<Eigen::Index>(target)] +=
                            phase[dest + L - 1 - src] * (amp * psi[k]);
                      });
  }
  return out;
}

CollectiveMoments collective_moments(Amplitudes psi, const BasisTable& basis, double q) {
  const Eigen::VectorXcd r_psi = apply_collective_number(psi, basis, q);
  std::complex<double> mean = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k)
    mean += psi[k] * r_psi[static_cast<Eigen::Index>(k)];
  return {real_part(mean, "<R>"), r_psi.squaredNorm()};
}

double separable_bound(std::span<const double> densities, int bosons) {
  const double L = static_cast<double>(densities.size());
  const double N = bosons;
  double sum_sq = 0.0;
  for (double n : densities) sum_sq += n * n;
  return (N * (L - 1.0) + N * N - sum_sq) / (L * L);
}

WitnessReport make_witness_report(int sites, int m, double mean, double second,
                                  std::span<const double> densities, int bosons) {
  WitnessReport r;
  r.m = m;
  r.q = grid_wavenumber(sites, m);
  r.mean_R = mean;
  r.var_R = second - mean * mean;
  r.r_sep = separable_bound(densities, bosons);
  r.lambda = r.var_R - r.r_sep;
  return r;
}

WitnessReport witness(Amplitudes psi, const BasisTable& basis, int m) {
  const int L = basis.sites();
  if (m < 0 || m >= L) throw std::invalid_argument("witness: grid index out of range");
  const auto moments = collective_moments(psi, basis, grid_wavenumber(L, m));
  return make_witness_report(L, m, moments.mean, moments.second,
                             site_densities(psi, basis), basis.bosons());
}

WitnessReport witness_at(Amplitudes psi, const BasisTable& basis, double q) {
  return witness(psi, basis, grid_index(basis.sites(), q));
}

WitnessReport witness_min_over_q(Amplitudes psi, const BasisTable& basis) {
  const auto densities = site_densities(psi, basis);
  const int L = basis.sites();
  WitnessReport best;
  for (int m = 0; m < L; ++m) {
    const auto moments = collective_moments(psi, basis, grid_wavenumber(L, m));
    auto r = make_witness_report(L, m, moments.mean, moments.second, densities,
                                 basis.bosons());
    if (m == 0 || r.lambda < best.lambda) best = r;
  }
  return best;
}

ThetaLR theta_lr(Amplitudes psi, const BasisTable& basis) {
  check_state(psi, basis);
  if (basis.sites() % 2 != 0)
    throw std::invalid_argument("theta_lr needs an even number of sites");
  if (basis.bosons() == 0) throw std::invalid_argument("theta_lr needs N >= 1");
  double d1 = 0.0;
  double d2 = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double w = psi[k] * psi[k];
    const double d = imbalance(basis.state(k));
    d1 += w * d;
    d2 += w * d * d;
  }
  const double scale = 2.0 / basis.bosons();
  return {scale * d1, scale * std::sqrt(d2)};
}

EntropyReport entanglement_entropy(Amplitudes psi, const BasisTable& basis, int cut) {
  check_state(psi, basis);
  const int L = basis.sites();
  const int N = basis.bosons();
  if (cut < 1 || cut > L - 1)
    throw std::invalid_argument("entanglement_entropy: cut must lie in [1, L-1]");

  // Amplitudes regrouped into one matrix per particle number in A.
  std::vector<BasisTable> left;
  std::vector<BasisTable> right;
  std::vector<Eigen::MatrixXd> blocks;
  for (int na = 0; na <= N; ++na) {
    left.emplace_back(cut, na);
    right.emplace_back(L - cut, N - na);
    blocks.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(left.back().dim()),
                                           static_cast<Eigen::Index>(right.back().dim())));
  }
  const auto split = static_cast<std::size_t>(cut);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto s = basis.state(k);
    const auto a = s.first(split);
    const auto b = s.subspan(split);
    int na = 0;
    for (Occupation n : a) na += n;
    const auto ia = *left[static_cast<std::size_t>(na)].find(a);
    const auto ib = *right[static_cast<std::size_t>(na)].find(b);
    blocks[static_cast<std::size_t>(na)](static_cast<Eigen::Index>(ia),
                                         static_cast<Eigen::Index>(ib)) = psi[k];
  }

  EntropyReport report;
  report.cut = cut;
  for (const auto& block : blocks) {
    if (block.size() == 0) continue;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(block);
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      const double p = svd.singularValues()[i] * svd.singularValues()[i];
      if (p > 1e-24) report.schmidt.push_back(p);
    }
  }
  std::sort(report.schmidt.begin(), report.schmidt.end(), std::greater<>());
  for (double p : report.schmidt) report.entropy -= p * std::log(p);
  report.entropy = std::max(report.entropy, 0.0);
  return report;
}

double gap_formula(int bosons, double e_minus, double e_0, double e_plus) {
  const double N = bosons;
  return N * (e_plus / (N + 1.0) + e_minus / (N - 1.0) - 2.0 * e_0 / N);
}

GapReport energy_gap(const ModelParams& params, const SolverOptions& opts) {
  params.validate();
  if (params.N < 2) throw std::invalid_argument("energy_gap needs N >= 2");

  auto solve = [&params, opts](int bosons) {
    SolverOptions local = opts;
    local.detect_degeneracy = false;
    local.start.reset();
    const BasisTable basis(params.L, bosons);
    return solve_model(params, basis, local).energy;
  };
  auto minus = std::async(std::launch::async, solve, params.N - 1);
  auto plus = std::async(std::launch::async, solve, params.N + 1);
  GapReport r;
  r.E_0 = solve(params.N);
  r.E_minus = minus.get();
  r.E_plus = plus.get();
  r.delta = gap_formula(params.N, r.E_minus, r.E_0, r.E_plus);
  return r;
}

double structure_factor(Amplitudes psi, const BasisTable& basis, double k) {
  const auto g = one_body_matrix(psi, basis).G;
  std::complex<double> total = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      total += std::polar(1.0, k * static_cast<double>(i - j)) * g(i, j);
  return real_part(total, "S(k)");
}

}  // namespace ebh
