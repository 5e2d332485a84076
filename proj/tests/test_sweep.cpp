#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ebh/sweep.hpp"

using ebh::Axis;
using ebh::SweepRow;
using ebh::SweepSpec;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.fixed.L = 4;
  spec.fixed.N = 4;
  spec.axis = Axis::J;
  spec.values = ebh::linspace(0.0, 2.0, 9);
  spec.observables.gap = true;
  return spec;
}

bool same_bits(const SweepRow& a, const SweepRow& b) {
  const auto x = ebh::row_values(a);
  const auto y = ebh::row_values(b);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) != std::isnan(y[i])) return false;
    if (!std::isnan(x[i]) && x[i] != y[i]) return false;
  }
  return true;
}

std::vector<SweepRow> rows_with_lambda(std::vector<std::pair<double, double>> pts) {
  std::vector<SweepRow> rows;
  for (auto [x, l] : pts) {
    SweepRow r;
    r.axis_value = x;
    r.lambda = l;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("linspace") {
  const auto v = ebh::linspace(0.0, 1.2, 25);
  REQUIRE(v.size() == 25);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 1.2);
  CHECK(v[12] == doctest::Approx(0.6));
  CHECK(ebh::linspace(2.0, 3.0, 1) == std::vector{2.0});
  CHECK_THROWS_AS(ebh::linspace(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("axis values are in units of U") {
  auto spec = small_spec();
  spec.fixed.U = 2.0;
  CHECK(ebh::params_at(spec, 1.0).J == 1.0);
  spec.axis = Axis::U_LR;
  CHECK(ebh::params_at(spec, 0.25).U_LR == 0.5);
  CHECK(ebh::axis_label(Axis::J) == "2J_over_U");
  CHECK(ebh::axis_label(Axis::U_LR) == "ULR_over_U");
}

TEST_CASE("rows come back in axis order with every column filled") {
  const auto spec = small_spec();
  const auto rows = ebh::run_sweep(spec);
  REQUIRE(rows.size() == spec.values.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].axis_value == spec.values[i]);
    for (double v : ebh::row_values(rows[i])) CHECK_FALSE(std::isnan(v));
    CHECK(rows[i].residual <= spec.solver.tol);
    CHECK(rows[i].lambda == rows[i].var_R - rows[i].r_sep);
  }
  CHECK(rows[0].E0 == doctest::Approx(0.0));
  CHECK(rows[0].delta == doctest::Approx(4.0 / 5.0));
}

TEST_CASE("switched-off observables are NaN") {
  auto spec = small_spec();
  spec.observables = {false, false, false, false, false};
  const auto row = ebh::evaluate_point(spec, 1.0);
  CHECK_FALSE(std::isnan(row.E0));
  for (double v : {row.lambda, row.var_R, row.r_sep, row.mean_R, row.q_used, row.theta_signed,
                   row.theta_rms, row.S_V, row.delta})
    CHECK(std::isnan(v));

  spec.observables.structure_factor = true;
  spec.q_mode = ebh::QMode::explicit_m;
  spec.q_m = 0;
  const auto sf = ebh::evaluate_point(spec, 1.0);
  spec.observables.witness = true;
  const auto w = ebh::evaluate_point(spec, 1.0);
  CHECK(sf.mean_R == doctest::Approx(w.mean_R).epsilon(1e-10));
  CHECK(std::isnan(sf.lambda));
}

TEST_CASE("results do not depend on the thread count or evaluation order") {
  auto spec = small_spec();
  spec.threads = 1;
  const auto serial = ebh::run_sweep(spec);
  for (int threads : {2, 3, 8}) {
    spec.threads = threads;
    const auto parallel = ebh::run_sweep(spec);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(same_bits(serial[i], parallel[i]));
  }
  for (std::size_t i = serial.size(); i-- > 0;)
    CHECK(same_bits(ebh::evaluate_point(spec, spec.values[i]), serial[i]));
}

TEST_CASE("q selection") {
  auto spec = small_spec();
  spec.observables.gap = false;
  spec.q_mode = ebh::QMode::explicit_m;
  spec.q_m = 2;
  CHECK(ebh::evaluate_point(spec, 1.0).q_used == doctest::Approx(std::numbers::pi));
  spec.q_mode = ebh::QMode::min;
  const auto best = ebh::evaluate_point(spec, 1.0);
  for (int m = 0; m < 4; ++m) {
    spec.q_mode = ebh::QMode::explicit_m;
    spec.q_m = m;
    CHECK(best.lambda <= ebh::evaluate_point(spec, 1.0).lambda + 1e-15);
  }
}

TEST_CASE("sweep validation") {
  auto spec = small_spec();
  CHECK_NOTHROW(spec.validate());

  auto bad = spec;
  bad.values.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.values = {0.0, 1.0, 0.5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.values = {0.0, NAN};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.fixed.U = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.q_mode = ebh::QMode::explicit_m;
  bad.q_m = 4;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.cut = 4;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.fixed.L = 5;
  bad.fixed.N = 5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.observables.theta = false;
  CHECK_NOTHROW(bad.validate());
  bad = spec;
  bad.fixed.N = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(ebh::run_sweep(bad), std::invalid_argument);
}

TEST_CASE("solver failure names the sweep point") {
  auto spec = small_spec();
  spec.fixed.L = 8;
  spec.fixed.N = 8;
  spec.values = {1.0};
  spec.observables.gap = false;
  spec.solver.dense_threshold = 0;
  spec.solver.max_iter = 5;
  spec.solver.krylov_dim = 4;
  try {
    (void)ebh::run_sweep(spec);
    FAIL("expected SweepError");
  } catch (const ebh::SweepError& e) {
    CHECK(e.axis_value() == 1.0);
    CHECK(std::string(e.what()).find("2J_over_U") != std::string::npos);
  }
}

TEST_CASE("figure recipes") {
  const auto f1 = ebh::fig1_recipe();
  CHECK(f1.axis == Axis::U_LR);
  CHECK(f1.fixed.L == 8);
  CHECK(f1.fixed.N == 8);
  CHECK(f1.fixed.J == 0.0);
  CHECK(f1.fixed.j_epsilon == 1e-6);
  CHECK(f1.values.size() == 25);
  CHECK(f1.values.back() == 1.2);
  CHECK_FALSE(f1.observables.gap);

  const auto f2 = ebh::fig2_recipe();
  CHECK(f2.axis == Axis::J);
  CHECK(f2.fixed.U_LR == 0.0);
  CHECK(f2.values.back() == 3.0);
  CHECK(f2.observables.gap);

  const auto f3 = ebh::fig3_recipe();
  REQUIRE(f3.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(f3[i].axis == Axis::J);
    CHECK(f3[i].fixed.U_LR == doctest::Approx(0.1 * static_cast<double>(i)));
    CHECK(f3[i].values == f2.values);
  }
  for (const auto& s : {f1, f2}) CHECK_NOTHROW(s.validate());
}

TEST_CASE("crossing helpers") {
  auto rows = rows_with_lambda({{0.0, 0.0}, {1.0, 0.5}, {2.0, -1.5}, {3.0, -2.0}});
  CHECK(ebh::sign_changes(rows) == 1);
  CHECK(ebh::first_negative_crossing(rows).value() == doctest::Approx(1.25));

  rows = rows_with_lambda({{0.0, 2e-9}, {1.0, -5e-9}, {2.0, -0.1}});
  CHECK(ebh::sign_changes(rows) == 1);
  CHECK(ebh::first_negative_crossing(rows).value() == 1.0);

  rows = rows_with_lambda({{0.0, 1.0}, {1.0, -1.0}, {2.0, 1.0}, {3.0, -1.0}});
  CHECK(ebh::sign_changes(rows) == 3);
  CHECK(ebh::first_negative_crossing(rows).value() == doctest::Approx(0.5));

  rows = rows_with_lambda({{0.0, 1.0}, {1.0, 0.5}});
  CHECK(ebh::sign_changes(rows) == 0);
  CHECK_FALSE(ebh::first_negative_crossing(rows).has_value());
}
