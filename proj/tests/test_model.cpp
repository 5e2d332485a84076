#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ebh/model.hpp"
#include "ebh/solver.hpp"
#include "oracles.hpp"

using ebh::BasisTable;
using ebh::Boundary;
using ebh::ModelParams;
using ebh::OccupationVector;

namespace {

ModelParams make(int L, int N, double J, double U, double ulr,
                 Boundary b = Boundary::periodic) {
  ModelParams p;
  p.L = L;
  p.N = N;
  p.J = J;
  p.U = U;
  p.U_LR = ulr;
  p.boundary = b;
  return p;
}

}  // namespace

TEST_CASE("diagonal matrix elements") {
  const BasisTable basis(8, 8);

  const auto single = make(8, 2, 0.0, 1.0, 0.0);
  CHECK(ebh::diagonal_energy(single, OccupationVector{2, 0, 0, 0, 0, 0, 0, 0}.view()) == 1.0);

  auto p = make(8, 8, 0.0, 1.0, 0.0);
  p.U_LR = 1.0;
  const auto cdw = oracle::repeat({2, 0}, 8);
  CHECK(ebh::imbalance(cdw.view()) == -8);
  CHECK(ebh::diagonal_energy(p, cdw.view()) == doctest::Approx(-4.0).epsilon(1e-15));

  const auto mott = oracle::repeat({1}, 8);
  for (double u : {0.3, 1.0, 4.0})
    for (double ulr : {0.0, 0.7, 2.0}) {
      auto q = make(8, 8, 0.0, u, ulr);
      CHECK(ebh::diagonal_energy(q, mott.view()) == 0.0);
    }

  const auto h = ebh::build_hamiltonian(p, basis);
  CHECK(h.diagonal(basis.rank(cdw)) == doctest::Approx(-4.0));
  CHECK(h.diagonal(basis.rank(mott)) == 0.0);
}

TEST_CASE("site parity starts at -1 and pinning favours positive imbalance") {
  CHECK(ebh::site_parity(0) == -1);
  CHECK(ebh::site_parity(1) == 1);
  auto p = make(4, 4, 0.0, 1.0, 0.0);
  p.pin_epsilon = 0.1;
  CHECK(ebh::diagonal_energy(p, OccupationVector{0, 2, 0, 2}.view()) ==
        doctest::Approx(2.0 - 0.4));
  CHECK(ebh::diagonal_energy(p, OccupationVector{2, 0, 2, 0}.view()) ==
        doctest::Approx(2.0 + 0.4));
}

TEST_CASE("bond lists count each pair once") {
  CHECK(ebh::lattice_bonds(2, Boundary::periodic).size() == 1);
  CHECK(ebh::lattice_bonds(2, Boundary::open).size() == 1);
  CHECK(ebh::lattice_bonds(8, Boundary::periodic).size() == 8);
  CHECK(ebh::lattice_bonds(8, Boundary::open).size() == 7);
  CHECK(ebh::lattice_bonds(1, Boundary::periodic).empty());
}

TEST_CASE("matrix-free product on a single bond") {
  const BasisTable basis(2, 2);
  const auto p = make(2, 2, 1.0, 0.0, 0.0, Boundary::open);
  std::vector<double> psi(basis.dim(), 0.0);
  psi[basis.rank(OccupationVector{1, 1})] = 1.0;
  const auto out = ebh::apply_hamiltonian(p, basis, psi);
  CHECK(out[basis.rank(OccupationVector{2, 0})] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(out[basis.rank(OccupationVector{0, 2})] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(out[basis.rank(OccupationVector{1, 1})] == 0.0);

  // Periodic L=2 has the same single bond.
  const auto pp = make(2, 2, 1.0, 0.0, 0.0, Boundary::periodic);
  CHECK(ebh::apply_hamiltonian(pp, basis, psi) == out);
}

TEST_CASE("matrix-free product on the Mott state at J=0 is zero") {
  const BasisTable basis(8, 8);
  const auto p = make(8, 8, 0.0, 1.0, 0.5);
  const auto psi = oracle::fock_state(basis, oracle::repeat({1}, 8));
  const auto out = ebh::apply_hamiltonian(p, basis, psi);
  CHECK(std::all_of(out.begin(), out.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("matrix-free and assembled products agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto b : {Boundary::periodic, Boundary::open}) {
    const BasisTable basis(4, 4);
    auto p = make(4, 4, 0.37, 1.3, 0.6, b);
    p.pin_epsilon = 0.05;
    p.j_epsilon = 1e-3;
    std::vector<double> psi(basis.dim());
    for (auto& x : psi) x = dist(rng);
    const auto free = ebh::apply_hamiltonian(p, basis, psi);
    std::vector<double> assembled(basis.dim());
    ebh::build_hamiltonian(p, basis).apply(psi, assembled);
    double scale = 0.0;
    for (double v : assembled) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < psi.size(); ++k)
      CHECK(std::abs(free[k] - assembled[k]) <= 1e-12 * scale);
  }
}

TEST_CASE("Hamiltonian is exactly symmetric and stays in the sector") {
  const BasisTable basis(6, 6);
  auto p = make(6, 6, 0.8, 1.0, 0.3);
  p.pin_epsilon = 0.01;
  const auto h = ebh::build_hamiltonian(p, basis);
  CHECK(h.max_asymmetry() == 0.0);
  CHECK(h.dim() == basis.dim());
  const auto& m = h.storage();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (ebh::SparseHermitian::Storage::InnerIterator it(m, r); it; ++it)
      CHECK((it.col() >= 0 && static_cast<std::size_t>(it.col()) < basis.dim()));
}

TEST_CASE("J=0 gives a diagonal matrix") {
  const BasisTable basis(6, 6);
  const auto h = ebh::build_hamiltonian(make(6, 6, 0.0, 1.0, 0.7), basis);
  CHECK(h.nonzeros() == basis.dim());
}

TEST_CASE("parameter validation") {
  const BasisTable basis(5, 5);
  CHECK_THROWS_AS(ebh::build_hamiltonian(make(5, 5, 0.0, 1.0, 0.5), basis),
                  std::invalid_argument);
  CHECK_NOTHROW(ebh::build_hamiltonian(make(5, 5, 0.0, 1.0, 0.5, Boundary::open), basis));
  CHECK_THROWS_AS(ebh::build_hamiltonian(make(5, 4, 0.1, 1.0, 0.0), basis),
                  std::invalid_argument);
  CHECK_THROWS_AS(ebh::build_hamiltonian(make(4, 5, 0.1, 1.0, 0.0), basis),
                  std::invalid_argument);
  CHECK_THROWS_AS(make(1, 3, 0.5, 1.0, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make(4, 4, NAN, 1.0, 0.0).validate(), std::invalid_argument);

  const auto p = make(5, 5, 0.1, 1.0, 0.0);
  std::vector<double> wrong(basis.dim() + 1);
  CHECK_THROWS_AS(ebh::apply_hamiltonian(p, basis, wrong), std::invalid_argument);
  CHECK_NOTHROW(ebh::build_hamiltonian_in_sector(p, BasisTable(5, 6)));
}

TEST_CASE("level crossing between Mott and density wave at U_LR = U/2") {
  const BasisTable basis(8, 8);
  const auto mott = basis.rank(oracle::repeat({1}, 8));
  const auto cdw_a = basis.rank(oracle::repeat({2, 0}, 8));
  const auto cdw_b = basis.rank(oracle::repeat({0, 2}, 8));

  auto minimisers = [&](double ulr) {
    const auto p = make(8, 8, 0.0, 1.0, ulr);
    double best = INFINITY;
    std::vector<std::size_t> at;
    for (std::size_t k = 0; k < basis.dim(); ++k) {
      const double e = ebh::diagonal_energy(p, basis.state(k));
      if (e < best - 1e-14) {
        best = e;
        at = {k};
      } else if (std::abs(e - best) <= 1e-14) {
        at.push_back(k);
      }
    }
    return at;
  };

  for (double ulr : {0.0, 0.25, 0.49, 0.4999999}) CHECK(minimisers(ulr) == std::vector{mott});
  for (double ulr : {0.5000001, 0.51, 1.0, 2.0}) {
    auto at = minimisers(ulr);
    std::sort(at.begin(), at.end());
    auto expected = std::vector{std::min(cdw_a, cdw_b), std::max(cdw_a, cdw_b)};
    CHECK(at == expected);
  }
  auto at = minimisers(0.5);
  std::sort(at.begin(), at.end());
  auto expected = std::vector{mott, cdw_a, cdw_b};
  std::sort(expected.begin(), expected.end());
  CHECK(at == expected);
}

TEST_CASE("ground energy decreases as the cavity coupling grows") {
  const BasisTable basis(6, 6);
  double previous = INFINITY;
  for (int i = 0; i <= 12; ++i) {
    const auto p = make(6, 6, 0.3, 1.0, 0.1 * i);
    const double e = ebh::solve_model(p, basis).energy;
    CHECK(e <= previous + 1e-10);
    previous = e;
  }
}

TEST_CASE("symmetric start vector is invariant under the lattice symmetries") {
  const BasisTable basis(6, 6);
  auto p = make(6, 6, 0.2, 1.0, 0.4);
  auto translate = [&](std::span<const ebh::Occupation> s, int by) {
    OccupationVector t(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) t.set((j + by) % s.size(), s[j]);
    return t;
  };
  auto reflect = [&](std::span<const ebh::Occupation> s) {
    OccupationVector t(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) t.set(s.size() - 1 - j, s[j]);
    return t;
  };

  const auto v = ebh::symmetric_start_vector(p, basis, 3);
  CHECK(v.norm() == doctest::Approx(1.0));
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto s = basis.state(k);
    CHECK(v[static_cast<Eigen::Index>(basis.rank(translate(s, 1)))] ==
          doctest::Approx(v[static_cast<Eigen::Index>(k)]).epsilon(1e-12));
    CHECK(v[static_cast<Eigen::Index>(basis.rank(reflect(s)))] ==
          doctest::Approx(v[static_cast<Eigen::Index>(k)]).epsilon(1e-12));
    CHECK(v[static_cast<Eigen::Index>(k)] > 0.0);
  }

  // A pinning field leaves only the two-site translations.
  p.pin_epsilon = 1e-3;
  const auto w = ebh::symmetric_start_vector(p, basis, 3);
  const auto a = basis.rank(oracle::repeat({2, 0}, 6));
  const auto b = basis.rank(oracle::repeat({0, 2}, 6));
  CHECK(w[static_cast<Eigen::Index>(a)] != doctest::Approx(w[static_cast<Eigen::Index>(b)]));
  for (std::size_t k = 0; k < basis.dim(); ++k)
    CHECK(w[static_cast<Eigen::Index>(basis.rank(translate(basis.state(k), 2)))] ==
          doctest::Approx(w[static_cast<Eigen::Index>(k)]).epsilon(1e-12));
}
