#include "ebh/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "ebh/observables.hpp"

namespace ebh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolved_cut(const SweepSpec& spec) {
  return spec.cut == 0 ? spec.fixed.L / 2 : spec.cut;
}

}  // namespace

std::string axis_label(Axis axis) {
  return axis == Axis::J ? "2J_over_U" : "ULR_over_U";
}

std::vector<std::string> sweep_columns(Axis axis) {
  return {axis_label(axis), "E0",        "lambda",    "var_R",
          "r_sep",          "mean_R",    "q_used",    "theta_signed",
          "theta_rms",      "S_V",       "delta",     "residual"};
}

std::vector<double> row_values(const SweepRow& r) {
  return {r.axis_value, r.E0,           r.lambda,    r.var_R, r.r_sep, r.mean_R,
          r.q_used,     r.theta_signed, r.theta_rms, r.S_V,   r.delta, r.residual};
}

SweepRow row_from_values(const std::vector<double>& v) {
  if (v.size() != kSweepColumns)
    throw std::invalid_argument("sweep row needs exactly 12 values");
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]};
}

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep has no axis values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("axis values must be finite");
    if (i > 0 && !(values[i] > values[i - 1]))
      throw std::invalid_argument("axis values must be strictly increasing");
  }
  for (double v : {values.front(), values.back()}) params_at(*this, v).validate();
  if (fixed.U == 0.0)
    throw std::invalid_argument("axis values are in units of U, which must be nonzero");
  if (q_mode == QMode::explicit_m && (q_m < 0 || q_m >= fixed.L))
    throw std::invalid_argument("explicit q index must lie in [0, L-1]");
  if (observables.entropy) {
    const int cut = resolved_cut(*this);
    if (cut < 1 || cut > fixed.L - 1)
      throw std::invalid_argument("entropy cut must lie in [1, L-1]");
  }
  if (observables.theta && (fixed.L % 2 != 0 || fixed.N == 0))
    throw std::invalid_argument("theta needs even L and N >= 1");
  if (observables.gap && fixed.N < 2) throw std::invalid_argument("gap needs N >= 2");
}

ModelParams params_at(const SweepSpec& spec, double value) {
  ModelParams p = spec.fixed;
  if (spec.axis == Axis::J)
    p.J = 0.5 * value * p.U;
  else
    p.U_LR = value * p.U;
  return p;
}

namespace {

SweepRow evaluate(const SweepSpec& spec, const BasisTable& basis, double value) {
  const ModelParams params = params_at(spec, value);
  SolverOptions opts = spec.solver;
  opts.detect_degeneracy = false;
  opts.start.reset();

  GroundState gs;
  try {
    gs = solve_model(params, basis, opts);
  } catch (const ConvergenceError& e) {
    std::ostringstream os;
    os << "solver failed at " << axis_label(spec.axis) << " = " << value << ": "
       << e.what();
    throw SweepError(os.str(), value);
  }

  SweepRow row;
  row.axis_value = value;
  row.E0 = gs.energy;
  row.residual = gs.residual;
  row.lambda = row.var_R = row.r_sep = row.mean_R = row.q_used = kNaN;
  row.theta_signed = row.theta_rms = row.S_V = row.delta = kNaN;

  const int fixed_m = spec.q_mode == QMode::explicit_m ? spec.q_m : 0;
  if (spec.observables.witness) {
    const auto w = spec.q_mode == QMode::min ? witness_min_over_q(gs, basis)
                                             : witness(gs, basis, fixed_m);
    row.lambda = w.lambda;
    row.var_R = w.var_R;
    row.r_sep = w.r_sep;
    row.mean_R = w.mean_R;
    row.q_used = w.q;
  } else if (spec.observables.structure_factor) {
    row.q_used = grid_wavenumber(params.L, fixed_m);
    row.mean_R = structure_factor(gs, basis, row.q_used) / params.L;
  }
  if (spec.observables.theta) {
    const auto t = theta_lr(gs, basis);
    row.theta_signed = t.signed_value;
    row.theta_rms = t.rms;
  }
  if (spec.observables.entropy)
    row.S_V = entanglement_entropy(gs, basis, resolved_cut(spec)).entropy;
  if (spec.observables.gap) {
    try {
      row.delta = energy_gap(params, opts).delta;
    } catch (const ConvergenceError& e) {
      std::ostringstream os;
      os << "gap solve failed at " << axis_label(spec.axis) << " = " << value << ": "
         << e.what();
      throw SweepError(os.str(), value);
    }
  }
  return row;
}

}  // namespace

SweepRow evaluate_point(const SweepSpec& spec, double value) {
  spec.validate();
  const BasisTable basis(spec.fixed.L, spec.fixed.N);
  return evaluate(spec, basis, value);
}

int default_thread_count() {
  if (const char* env = std::getenv("EBH_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const BasisTable basis(spec.fixed.L, spec.fixed.N);
  const std::size_t count = spec.values.size();
  const int threads = std::min<int>(spec.threads > 0 ? spec.threads : default_thread_count(),
                                    static_cast<int>(count));

  std::vector<SweepRow> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        rows[i] = evaluate(spec, basis, spec.values[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::vector<double> linspace(double start, double stop, int count) {
  if (count < 1) throw std::invalid_argument("linspace needs at least one point");
  if (count == 1) return {start};
  std::vector<double> v(static_cast<std::size_t>(count));
  const double step = (stop - start) / (count - 1);
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = start + i * step;
  v.back() = stop;
  return v;
}

SweepSpec fig1_recipe() {
  SweepSpec spec;
  spec.fixed = ModelParams{};
  spec.fixed.j_epsilon = 1e-6;
  spec.axis = Axis::U_LR;
  spec.values = linspace(0.0, 1.2, 25);
  spec.observables = {.witness = true, .entropy = true, .gap = false, .theta = true};
  return spec;
}

SweepSpec fig2_recipe() {
  SweepSpec spec;
  spec.fixed = ModelParams{};
  spec.axis = Axis::J;
  spec.values = linspace(0.0, 3.0, 25);
  spec.observables = {.witness = true, .entropy = true, .gap = true, .theta = true};
  return spec;
}

std::vector<SweepSpec> fig3_recipe() {
  std::vector<SweepSpec> specs;
  for (double ulr : {0.0, 0.1, 0.2}) {
    SweepSpec spec = fig2_recipe();
    spec.fixed.U_LR = ulr;
    specs.push_back(spec);
  }
  return specs;
}

std::optional<double> first_negative_crossing(const std::vector<SweepRow>& rows,
                                              double zero_tol) {
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[i + 1];
    if (a.lambda >= -zero_tol && b.lambda < -zero_tol) {
      const double t = std::clamp(a.lambda / (a.lambda - b.lambda), 0.0, 1.0);
      return a.axis_value + t * (b.axis_value - a.axis_value);
    }
  }
  return std::nullopt;
}

int sign_changes(const std::vector<SweepRow>& rows, double zero_tol) {
  int changes = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if ((rows[i].lambda < -zero_tol) != (rows[i + 1].lambda < -zero_tol)) ++changes;
  return changes;
}

}  // namespace ebh
