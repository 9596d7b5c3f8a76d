#include "calrisk/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>

namespace calrisk {

namespace {

constexpr const char* kKnownFamilies[] = {"bin", "bin15", "kde", "kkr", "ukkr", "sim"};

Family family_for(const std::string& name) {
  return name == "bin15" ? Family::bin : parse_family(name);
}

nlohmann::json risk_json(const RiskValue& r) {
  return {{"risk", r.value}, {"pairs_used", r.pairs_used}, {"dropped_nan", r.dropped_nan}};
}

}  // namespace

Mode parse_mode(std::string_view name) {
  if (name == "tce") return Mode::top_label;
  if (name == "cce") return Mode::canonical;
  throw InputError("unknown mode '" + std::string(name) + "' (expected tce or cce)");
}

void RunConfig::validate() const {
  if (families.empty()) throw InputError("no estimator families requested");
  std::set<std::string> seen;
  for (const auto& name : families) {
    if (std::find(std::begin(kKnownFamilies), std::end(kKnownFamilies), name) == std::end(kKnownFamilies)) {
      throw InputError("unknown estimator family '" + name + "'");
    }
    if (!seen.insert(name).second) throw InputError("family '" + name + "' requested twice");
    if (mode == Mode::canonical && (name == "bin" || name == "bin15")) {
      throw InputError("binning estimators are top-label only; use --mode tce");
    }
    if (mode == Mode::top_label && name == "sim") {
      throw InputError("the sim family needs canonical predictions; use --mode cce");
    }
  }
  for (const auto& [name, values] : grids) {
    if (name == "bin15") throw InputError("bin15 has a fixed grid");
    HyperGrid{family_for(name), values}.validate();
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InputError("test fraction must lie in (0, 1)");
  if (k_folds < 2) throw InputError("need at least 2 folds");
  if (!(gamma > 0.0)) throw InputError("gamma must be positive");
  if (!(model_temp > 0.0)) throw InputError("model temperature must be positive");
}

Report run_evaluate(const RunConfig& cfg, const Dataset& data, std::string source) {
  cfg.validate();
  const Dataset prepared = cfg.mode == Mode::top_label ? data.to_top_label() : data;
  auto [tune, test] = split_dataset(prepared, cfg.test_fraction, cfg.seed);

  Report report;
  report.config = cfg;
  report.source = std::move(source);
  report.n_total = data.size();
  report.n_tune = tune.size();
  report.n_test = test.size();
  report.dim = data.dim();

  CvWorkspace workspace(tune, cfg.k_folds, cfg.seed);
  CvOptions options;
  options.fit.gamma = cfg.gamma;
  options.fit.model_temp = cfg.model_temp;
  options.linear_risk = cfg.linear_risk;

  for (const auto& name : cfg.families) {
    FamilyReport entry;
    entry.name = name;
    const Family family = family_for(name);
    HyperGrid grid = default_grid(family, cfg.mode, tune.size());
    if (name == "bin15") {
      grid.values = {15.0};
      entry.grid_searched = false;
    } else if (auto it = cfg.grids.find(name); it != cfg.grids.end()) {
      grid.values = it->second;
    }
    try {
      entry.cv = cross_validate(workspace, grid, options);
      entry.estimate = final_estimate(entry.cv.fold_models, test);
    } catch (const NumericError& e) {
      throw NumericError(name + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(name + ": " + e.what());
    }
    // Fold models can be large; the report keeps only the numbers.
    entry.cv.fold_models.clear();
    report.families.push_back(std::move(entry));
  }
  return report;
}

double sqrt_risk_x100(double risk) {
  return 100.0 * std::sqrt(std::max(risk, 0.0));
}

double sqrt_risk_se_x100(double risk, double se) {
  if (!(risk > 0.0)) return 0.0;
  return 100.0 * se / (2.0 * std::sqrt(risk));
}

nlohmann::json to_json(const Report& report) {
  using nlohmann::json;
  const RunConfig& cfg = report.config;
  json meta = {
      {"mode", to_string(cfg.mode)},
      {"source", report.source},
      {"seed", cfg.seed},
      {"test_fraction", cfg.test_fraction},
      {"k_folds", cfg.k_folds},
      {"gamma", cfg.gamma},
      {"model_temp", cfg.model_temp},
      {"linear_risk", cfg.linear_risk},
      {"families", cfg.families},
      {"n_total", report.n_total},
      {"n_tune", report.n_tune},
      {"n_test", report.n_test},
      {"classes", report.dim},
  };

  json families = json::array();
  for (const auto& f : report.families) {
    const CvResult& cv = f.cv;
    json grid = json::array();
    for (const auto& point : cv.grid) {
      json entry = {{"hyperparameter", point.hyper}, {"failed", point.failed}};
      if (point.failed) {
        entry["failure"] = point.failure;
      } else {
        entry["mean_risk"] = point.mean_risk;
        entry["risk_se"] = point.risk_se;
        entry["sqrt_risk_x100"] = sqrt_risk_x100(point.mean_risk);
      }
      grid.push_back(std::move(entry));
    }
    json folds = json::array();
    Index dropped = 0;
    for (const auto& r : cv.fold_risks) {
      folds.push_back(risk_json(r));
      dropped += r.dropped_nan;
    }
    const CalibrationEstimate& est = f.estimate;
    families.push_back({
        {"family", f.name},
        {"grid_searched", f.grid_searched},
        {"best_hyperparameter", cv.best_hyper},
        {"validation",
         {{"mean_risk", cv.mean_risk},
          {"risk_se", cv.risk_se},
          {"sqrt_risk_x100", sqrt_risk_x100(cv.mean_risk)},
          {"sqrt_risk_se_x100", sqrt_risk_se_x100(cv.mean_risk, cv.risk_se)},
          {"dropped_nan_pairs", dropped},
          {"folds", std::move(folds)}}},
        {"estimate",
         {{"squared", est.squared_value},
          {"value", est.value},
          {"clipped", est.clipped},
          {"fold_se", est.fold_se},
          {"fold_means", est.fold_means},
          {"dropped_nan_predictions", est.dropped_predictions}}},
        {"grid", std::move(grid)},
    });
  }
  return {{"metadata", std::move(meta)}, {"families", std::move(families)}};
}

void write_csv(std::ostream& out, const Report& report) {
  out << "family,hyperparameter,fold,risk,pairs_used,dropped_nan,failed\n";
  out << std::setprecision(17);
  for (const auto& f : report.families) {
    for (const auto& point : f.cv.grid) {
      if (point.failed) {
        out << f.name << ',' << point.hyper << ",,,,,1\n";
        continue;
      }
      for (std::size_t k = 0; k < point.fold_risks.size(); ++k) {
        const RiskValue& r = point.fold_risks[k];
        out << f.name << ',' << point.hyper << ',' << k << ',' << r.value << ',' << r.pairs_used << ','
            << r.dropped_nan << ",0\n";
      }
    }
  }
}

}  // namespace calrisk
