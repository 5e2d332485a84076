// Command-line front end: figure recipes and generic parameter sweeps.
//
//   ebh fig1 --out fig1.csv
//   ebh fig2 --format json --out fig2.json
//   ebh fig3 --out fig3.csv        (writes fig3_ULR0.csv, fig3_ULR0.1.csv, ...)
//   ebh sweep --axis ULR --values 0:1.2:25 --J 0 --j-eps 1e-6
//   ebh sweep --config run.cfg --N 6
//
// Every option may also be given as key=value in the --config file; flags on
// the command line take precedence.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ebh/io.hpp"
#include "ebh/sweep.hpp"

namespace {

struct Options {
  int L = 8;
  int N = 8;
  double J = 0.0;
  double U = 1.0;
  double ULR = 0.0;
  std::string axis = "J";
  std::vector<std::string> values;
  std::string q = "zero";
  std::string boundary = "pbc";
  double j_eps = 0.0;
  double pin_eps = 0.0;
  int cut = 0;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::string out;
  std::string format = "csv";
  std::string observables;
  bool gap = false;
  bool no_gap = false;
  int threads = 0;
};

std::vector<double> parse_values(const std::vector<std::string>& items) {
  std::string text;
  for (const auto& item : items) text += (text.empty() ? "" : ",") + item;
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
      throw std::invalid_argument("--values range must be start:stop:count");
    return ebh::linspace(std::stod(a), std::stod(b), std::stoi(c));
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  return values;
}

ebh::ObservableSet parse_observables(const std::string& text) {
  ebh::ObservableSet set{false, false, false, false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "witness") set.witness = true;
    else if (item == "entropy") set.entropy = true;
    else if (item == "gap") set.gap = true;
    else if (item == "theta") set.theta = true;
    else if (item == "structure_factor") set.structure_factor = true;
    else if (!item.empty()) throw std::invalid_argument("unknown observable '" + item + "'");
  }
  return set;
}

void apply_overrides(const CLI::App& app, const Options& o, ebh::SweepSpec& spec) {
  auto given = [&app](const char* name) { return app.count(name) > 0; };
  if (given("--L")) spec.fixed.L = o.L;
  if (given("--N")) spec.fixed.N = o.N;
  if (given("--J")) spec.fixed.J = o.J;
  if (given("--U")) spec.fixed.U = o.U;
  if (given("--ULR")) spec.fixed.U_LR = o.ULR;
  if (given("--j-eps")) spec.fixed.j_epsilon = o.j_eps;
  if (given("--pin-eps")) spec.fixed.pin_epsilon = o.pin_eps;
  if (given("--boundary"))
    spec.fixed.boundary = o.boundary == "obc" ? ebh::Boundary::open : ebh::Boundary::periodic;
  if (given("--axis")) spec.axis = o.axis == "ULR" ? ebh::Axis::U_LR : ebh::Axis::J;
  if (given("--values")) spec.values = parse_values(o.values);
  if (given("--q")) {
    if (o.q == "zero") {
      spec.q_mode = ebh::QMode::zero;
    } else if (o.q == "min") {
      spec.q_mode = ebh::QMode::min;
    } else {
      spec.q_mode = ebh::QMode::explicit_m;
      spec.q_m = std::stoi(o.q);
    }
  }
  if (given("--observables")) spec.observables = parse_observables(o.observables);
  if (given("--gap")) spec.observables.gap = true;
  if (given("--no-gap")) spec.observables.gap = false;
  if (given("--cut")) spec.cut = o.cut;
  if (given("--seed")) spec.solver.seed = o.seed;
  if (given("--tol")) spec.solver.tol = o.tol;
  if (given("--threads")) spec.threads = o.threads;
}

std::string value_tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void write(const std::vector<ebh::SweepRow>& rows, ebh::Axis axis, ebh::Format format,
           const std::string& path) {
  if (path.empty()) {
    if (format == ebh::Format::csv)
      ebh::write_csv(std::cout, rows, axis);
    else
      ebh::write_json(std::cout, rows, axis);
  } else {
    ebh::emit(rows, axis, format, path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagonalisation of the extended Bose-Hubbard chain"};
  app.set_config("--config", "", "key=value file with option defaults");
  app.require_subcommand(1);
  Options o;

  app.add_option("--L", o.L, "number of sites");
  app.add_option("--N", o.N, "number of bosons");
  app.add_option("--J", o.J, "hopping energy");
  app.add_option("--U", o.U, "on-site interaction (energy unit)");
  app.add_option("--ULR", o.ULR, "cavity long-range coupling");
  app.add_option("--axis", o.axis, "swept coupling: J (values are 2J/U) or ULR (values are U_LR/U)")
      ->check(CLI::IsMember({"J", "ULR"}));
  app.add_option("--values", o.values, "start:stop:count or comma-separated list")
      ->delimiter(',')
      ->allow_extra_args(false);
  app.add_option("--q", o.q, "witness momentum: zero, min, or a grid index m");
  app.add_option("--boundary", o.boundary, "pbc or obc")->check(CLI::IsMember({"pbc", "obc"}));
  app.add_option("--j-eps", o.j_eps, "extra hopping added to J");
  app.add_option("--pin-eps", o.pin_eps, "staggered pinning field");
  app.add_option("--cut", o.cut, "sites in the entropy subsystem (default L/2)");
  app.add_option("--seed", o.seed, "solver seed");
  app.add_option("--tol", o.tol, "eigen-residual tolerance");
  app.add_option("--out", o.out, "output path (stdout when omitted)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--observables", o.observables,
                 "comma list of witness,entropy,gap,theta,structure_factor");
  app.add_flag("--gap", o.gap, "also compute the charge gap");
  app.add_flag("--no-gap", o.no_gap, "skip the charge gap");
  app.add_option("--threads", o.threads, "worker threads (default EBH_NUM_THREADS or all cores)");

  auto* fig1 = app.add_subcommand("fig1", "Mott to density-wave sweep over U_LR/U");
  auto* fig2 = app.add_subcommand("fig2", "Mott to superfluid sweep over 2J/U");
  auto* fig3 = app.add_subcommand("fig3", "2J/U sweeps at U_LR/U = 0, 0.1, 0.2");
  auto* sweep = app.add_subcommand("sweep", "generic sweep");
  for (auto* sub : {fig1, fig2, fig3, sweep}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto format = ebh::parse_format(o.format);
    if (fig3->parsed()) {
      if (app.count("--ULR") > 0)
        throw std::invalid_argument("fig3 fixes U_LR itself; drop --ULR");
      for (auto spec : ebh::fig3_recipe()) {
        apply_overrides(app, o, spec);
        const auto rows = ebh::run_sweep(spec);
        const std::string tag = "ULR" + value_tag(spec.fixed.U_LR);
        if (o.out.empty()) {
          std::cout << "# " << tag << '\n';
          write(rows, spec.axis, format, "");
        } else {
          std::filesystem::path p(o.out);
          const auto name = p.stem().string() + "_" + tag + p.extension().string();
          write(rows, spec.axis, format, (p.parent_path() / name).string());
        }
      }
      return 0;
    }

    ebh::SweepSpec spec;
    if (fig1->parsed()) {
      spec = ebh::fig1_recipe();
    } else if (fig2->parsed()) {
      spec = ebh::fig2_recipe();
    } else if (app.count("--values") == 0) {
      throw std::invalid_argument("sweep needs --values");
    }
    apply_overrides(app, o, spec);
    const auto rows = ebh::run_sweep(spec);
    write(rows, spec.axis, format, o.out);
  } catch (const ebh::SweepError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
