#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "calrisk/core.hpp"
#include "calrisk/pipeline.hpp"

namespace calrisk {

// Family names accepted on the command line: bin, bin15 (fixed 15 bins, no
// search), kde, kkr, ukkr, sim.
struct RunConfig {
  Mode mode = Mode::top_label;
  std::vector<std::string> families{"bin", "bin15", "kde", "kkr", "ukkr"};
  double test_fraction = 0.2;
  int k_folds = 5;
  double gamma = 0.5;
  double model_temp = 0.3;
  std::uint64_t seed = 0;
  bool linear_risk = false;
  std::map<std::string, std::vector<double>> grids;  // per-family overrides

  void validate() const;
};

Mode parse_mode(std::string_view name);

struct FamilyReport {
  std::string name;
  bool grid_searched = true;
  CvResult cv;
  CalibrationEstimate estimate;
};

struct Report {
  RunConfig config;
  std::string source;
  Index n_total = 0;
  Index n_tune = 0;
  Index n_test = 0;
  Index dim = 0;
  std::vector<FamilyReport> families;
};

// Split, cross-validate every family on the tuning part, then estimate the
// squared calibration error on the test part with the fold ensemble.
Report run_evaluate(const RunConfig& cfg, const Dataset& data, std::string source = {});

// Validation risks as 100 * sqrt(risk); the standard error goes through the
// delta method, se / (2 sqrt(risk)).
double sqrt_risk_x100(double risk);
double sqrt_risk_se_x100(double risk, double se);

nlohmann::json to_json(const Report& report);

// One row per (family, hyperparameter, fold).
void write_csv(std::ostream& out, const Report& report);

}  // namespace calrisk
