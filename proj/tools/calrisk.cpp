// calrisk: command-line front end for calibration-error estimation.
//
//   calrisk simulate   ground-truth simulation, risk curves over theta
//   calrisk evaluate   split / cross-validate / ensemble estimate for a dataset
//   calrisk risk-curve holdout risks per hyperparameter of one family
//
// Exit codes: 0 success, 2 input or parse error, 3 numeric failure.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "calrisk/calrisk.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string cell = text.substr(start, comma - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw calrisk::InputError("bad number '" + cell + "' in list '" + text + "'");
    }
    values.push_back(v);
    start = comma + 1;
  }
  return values;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    if (comma > start) names.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return names;
}

// Runs `body` with `path` opened for writing, or stdout when path is empty.
template <typename Body>
void with_output(const std::string& path, Body&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw calrisk::InputError("cannot write " + path);
  body(out);
}

struct SimulateArgs {
  calrisk::SimConfig cfg;
  int seeds = 100;
  std::string theta_grid;
  std::string out;
  std::string per_seed_out;
  std::string data_out;
};

void run_simulate(const SimulateArgs& args) {
  const std::vector<double> thetas =
      args.theta_grid.empty() ? calrisk::default_theta_grid() : parse_list(args.theta_grid);
  const auto summary = calrisk::risk_curves_over_seeds(args.cfg, thetas, args.seeds);

  with_output(args.out, [&](std::ostream& os) {
    os << "theta,mean_risk,sd_risk,se_risk,argmin_share\n" << std::setprecision(17);
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      std::size_t wins = 0;
      for (double a : summary.argmin_theta) wins += a == thetas[t] ? 1 : 0;
      os << thetas[t] << ',' << summary.mean[t] << ',' << summary.sd[t] << ',' << summary.se[t] << ','
         << static_cast<double>(wins) / static_cast<double>(args.seeds) << '\n';
    }
  });
  if (!args.per_seed_out.empty()) {
    with_output(args.per_seed_out, [&](std::ostream& os) {
      os << "seed,theta,risk\n" << std::setprecision(17);
      for (std::size_t s = 0; s < summary.risks.size(); ++s) {
        for (std::size_t t = 0; t < thetas.size(); ++t) {
          os << args.cfg.seed + s << ',' << thetas[t] << ',' << summary.risks[s][t] << '\n';
        }
      }
    });
  }
  if (!args.data_out.empty()) {
    const auto sim = calrisk::simulate(args.cfg);
    with_output(args.data_out, [&](std::ostream& os) { calrisk::write_probs_csv(os, sim.dataset); });
  }

  std::size_t best = 0;
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    if (summary.mean[t] < summary.mean[best]) best = t;
  }
  std::size_t near_one = 0;
  for (double a : summary.argmin_theta) near_one += (a >= 0.9 && a <= 1.1) ? 1 : 0;
  double accuracy = 0.0;
  for (double a : summary.accuracy) accuracy += a;
  accuracy /= static_cast<double>(summary.accuracy.size());

  nlohmann::json info = {
      {"seeds", args.seeds},
      {"argmin_mean_curve", thetas[best]},
      {"share_argmin_in_0.9_1.1", static_cast<double>(near_one) / args.seeds},
      {"mean_accuracy", accuracy},
  };
  if (!args.out.empty() && args.out != "-") std::cout << info.dump(2) << '\n';
}

struct EvaluateArgs {
  std::string data;
  std::string format = "logits-csv";
  std::string mode = "tce";
  std::string families = "bin,bin15,kde,kkr,ukkr";
  std::vector<std::string> grids;
  calrisk::RunConfig cfg;
  std::string out;
  std::string emit_csv;
};

void run_evaluate(EvaluateArgs args) {
  args.cfg.mode = calrisk::parse_mode(args.mode);
  args.cfg.families = split_names(args.families);
  for (const auto& entry : args.grids) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw calrisk::InputError("--grid expects family=v1,v2,...");
    args.cfg.grids[entry.substr(0, eq)] = parse_list(entry.substr(eq + 1));
  }
  const auto data = calrisk::load_dataset(args.data, calrisk::parse_format(args.format));
  const auto report = calrisk::run_evaluate(args.cfg, data, args.data);
  auto json = calrisk::to_json(report);
  json["metadata"]["format"] = args.format;
  with_output(args.out, [&](std::ostream& os) { os << json.dump(2) << '\n'; });
  if (!args.emit_csv.empty()) {
    with_output(args.emit_csv, [&](std::ostream& os) { calrisk::write_csv(os, report); });
  }
}

struct CurveArgs {
  std::string data;
  std::string format = "logits-csv";
  std::string mode = "tce";
  std::string family = "kkr";
  std::string grid;
  double test_fraction = 0.2;
  int k = 5;
  double gamma = calrisk::kDefaultGamma;
  double model_temp = 0.3;
  std::uint64_t seed = 0;
  bool linear_risk = false;
  std::string out;
};

void run_risk_curve(const CurveArgs& args) {
  const calrisk::Mode mode = calrisk::parse_mode(args.mode);
  calrisk::RunConfig check;
  check.mode = mode;
  check.families = {args.family};
  check.validate();

  auto data = calrisk::load_dataset(args.data, calrisk::parse_format(args.format));
  if (mode == calrisk::Mode::top_label) data = data.to_top_label();
  auto [tune, test] = calrisk::split_dataset(data, args.test_fraction, args.seed);

  const calrisk::Family family = args.family == "bin15" ? calrisk::Family::bin : calrisk::parse_family(args.family);
  calrisk::HyperGrid grid = calrisk::default_grid(family, mode, tune.size());
  if (args.family == "bin15") grid.values = {15.0};
  if (!args.grid.empty()) grid.values = parse_list(args.grid);

  calrisk::CvOptions options;
  options.fit.gamma = args.gamma;
  options.fit.model_temp = args.model_temp;
  options.linear_risk = args.linear_risk;
  const auto cv = calrisk::cross_validate(tune, grid, args.k, options, args.seed);

  with_output(args.out, [&](std::ostream& os) {
    os << "hyperparameter,mean_risk,risk_se,sqrt_risk_x100,sqrt_risk_se_x100,failed\n"
       << std::setprecision(17);
    for (const auto& point : cv.grid) {
      if (point.failed) {
        os << point.hyper << ",,,,,1\n";
        continue;
      }
      os << point.hyper << ',' << point.mean_risk << ',' << point.risk_se << ','
         << calrisk::sqrt_risk_x100(point.mean_risk) << ','
         << calrisk::sqrt_risk_se_x100(point.mean_risk, point.risk_se) << ",0\n";
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibration-error estimation with a mean-squared-error risk"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Dirichlet ground-truth simulation and theta risk curves");
  simulate->add_option("--n", sim.cfg.n, "Instances per simulated dataset")->capture_default_str();
  simulate->add_option("--d", sim.cfg.d, "Number of classes")->capture_default_str();
  simulate->add_option("--alpha", sim.cfg.alpha, "Dirichlet concentration")->capture_default_str();
  simulate->add_option("--model-temp", sim.cfg.model_temp, "Miscalibration factor")->capture_default_str();
  simulate->add_option("--seeds", sim.seeds, "Number of repetitions")->capture_default_str();
  simulate->add_option("--seed", sim.cfg.seed, "First seed")->capture_default_str();
  simulate->add_option("--theta-grid", sim.theta_grid, "Comma-separated theta values");
  simulate->add_option("--out", sim.out, "Curve CSV (stdout when omitted)");
  simulate->add_option("--per-seed-out", sim.per_seed_out, "Per-seed risks CSV");
  simulate->add_option("--data-out", sim.data_out, "Write the first seed's dataset as probs-csv");

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Calibration-evaluation pipeline on a dataset");
  evaluate->add_option("--data", eval.data, "Input CSV")->required();
  evaluate->add_option("--format", eval.format, "logits-csv or probs-csv")->capture_default_str();
  evaluate->add_option("--mode", eval.mode, "tce or cce")->capture_default_str();
  evaluate->add_option("--families", eval.families, "Comma-separated families")->capture_default_str();
  evaluate->add_option("--test-fraction", eval.cfg.test_fraction)->capture_default_str();
  evaluate->add_option("--k", eval.cfg.k_folds, "Cross-validation folds")->capture_default_str();
  evaluate->add_option("--gamma", eval.cfg.gamma, "RBF width")->capture_default_str();
  evaluate->add_option("--model-temp", eval.cfg.model_temp, "Temperature factor of the sim family")
      ->capture_default_str();
  evaluate->add_option("--seed", eval.cfg.seed)->capture_default_str();
  evaluate->add_option("--grid", eval.grids, "Grid override family=v1,v2,... (repeatable)");
  evaluate->add_option("--out", eval.out, "Report JSON (stdout when omitted)");
  evaluate->add_option("--emit-csv", eval.emit_csv, "Per (family, hyperparameter, fold) risk CSV");
  evaluate->add_flag("--linear-risk", eval.cfg.linear_risk, "Use the linear-complexity holdout risk");

  CurveArgs curve;
  auto* risk_curve = app.add_subcommand("risk-curve", "Holdout risk per hyperparameter of one family");
  risk_curve->add_option("--data", curve.data, "Input CSV")->required();
  risk_curve->add_option("--format", curve.format)->capture_default_str();
  risk_curve->add_option("--mode", curve.mode)->capture_default_str();
  risk_curve->add_option("--family", curve.family)->capture_default_str();
  risk_curve->add_option("--grid", curve.grid, "Comma-separated hyperparameters (default grid when omitted)");
  risk_curve->add_option("--test-fraction", curve.test_fraction)->capture_default_str();
  risk_curve->add_option("--k", curve.k)->capture_default_str();
  risk_curve->add_option("--gamma", curve.gamma)->capture_default_str();
  risk_curve->add_option("--model-temp", curve.model_temp)->capture_default_str();
  risk_curve->add_option("--seed", curve.seed)->capture_default_str();
  risk_curve->add_flag("--linear-risk", curve.linear_risk);
  risk_curve->add_option("--out", curve.out, "CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*simulate) run_simulate(sim);
    if (*evaluate) run_evaluate(eval);
    if (*risk_curve) run_risk_curve(curve);
  } catch (const calrisk::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const calrisk::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
