#pragma once

// Parameter sweeps over one coupling and the figure recipes built on them.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebh/model.hpp"
#include "ebh/solver.hpp"

namespace ebh {

/// Swept coupling. Axis values are in the units of the output column:
/// 2J/U for Axis::J and U_LR/U for Axis::U_LR.
enum class Axis { J, U_LR };

enum class QMode { zero, min, explicit_m };

struct ObservableSet {
  bool witness = true;
  bool entropy = true;
  bool gap = false;
  bool theta = true;
  bool structure_factor = false;
};

struct SweepSpec {
  ModelParams fixed;
  Axis axis = Axis::J;
  std::vector<double> values;
  ObservableSet observables;
  QMode q_mode = QMode::zero;
  int q_m = 0;        ///< grid index for QMode::explicit_m
  int cut = 0;        ///< entropy bipartition; 0 means L/2
  SolverOptions solver;
  int threads = 0;    ///< 0: EBH_NUM_THREADS, else hardware concurrency

  /// Throws std::invalid_argument on an unusable spec.
  void validate() const;
};

/// One sweep point. Quantities whose observable is switched off are NaN.
struct SweepRow {
  double axis_value = 0.0;
  double E0 = 0.0;
  double lambda = 0.0;
  double var_R = 0.0;
  double r_sep = 0.0;
  double mean_R = 0.0;
  double q_used = 0.0;
  double theta_signed = 0.0;
  double theta_rms = 0.0;
  double S_V = 0.0;
  double delta = 0.0;
  double residual = 0.0;
};

inline constexpr int kSweepColumns = 12;

/// Column names in output order; the first depends on the axis.
std::vector<std::string> sweep_columns(Axis axis);
std::string axis_label(Axis axis);

/// Row values in column order.
std::vector<double> row_values(const SweepRow& row);
SweepRow row_from_values(const std::vector<double>& values);

/// Solver failure at one sweep point.
class SweepError : public std::runtime_error {
public:
  SweepError(const std::string& what, double axis_value)
      : std::runtime_error(what), axis_value_(axis_value) {}
  double axis_value() const { return axis_value_; }

private:
  double axis_value_;
};

/// Model parameters at one axis value.
ModelParams params_at(const SweepSpec& spec, double value);

/// Evaluates a single sweep point.
SweepRow evaluate_point(const SweepSpec& spec, double value);

/// Runs every point on a worker pool; rows come back in axis order and do not
/// depend on the thread count or scheduling.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// `count` evenly spaced values from start to stop inclusive.
std::vector<double> linspace(double start, double stop, int count);

/// Worker count from EBH_NUM_THREADS, falling back to hardware concurrency.
int default_thread_count();

/// Mott to density-wave sweep: L = N = 8, J = 0 with j_epsilon = 1e-6,
/// U_LR/U over [0, 1.2] in 25 points.
SweepSpec fig1_recipe();

/// Mott to superfluid sweep: L = N = 8, U_LR = 0, 2J/U over [0, 3] in 25
/// points, gap enabled.
SweepSpec fig2_recipe();

/// The fig2 sweep repeated at U_LR/U = 0, 0.1, 0.2.
std::vector<SweepSpec> fig3_recipe();

/// Axis value where lambda first goes from >= -zero_tol to < -zero_tol,
/// linearly interpolated between the bracketing points.
std::optional<double> first_negative_crossing(const std::vector<SweepRow>& rows,
                                              double zero_tol = 1e-8);

/// Number of transitions between lambda >= -zero_tol and lambda < -zero_tol.
int sign_changes(const std::vector<SweepRow>& rows, double zero_tol = 1e-8);

}  // namespace ebh
