#include "calrisk/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace calrisk {

namespace {

std::vector<Index> shuffled(Index n, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

// True when `a` is the simpler hyperparameter of the family.
bool simpler(Family family, double a, double b) {
  switch (family) {
    case Family::kde:
    case Family::kkr:
    case Family::ukkr:
      return a > b;
    case Family::bin:
    case Family::sim:
    case Family::constant:
      return a < b;
  }
  return a < b;
}

std::uint64_t fold_seed(std::uint64_t seed, int fold) {
  return seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(fold) + 1;
}

}  // namespace

void HyperGrid::validate() const {
  if (values.empty()) throw InputError(std::string("empty hyperparameter grid for ") + to_string(family));
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("non-finite hyperparameter");
    if (family == Family::bin && (v < 1.0 || v != std::floor(v))) {
      throw InputError("bin counts must be positive integers");
    }
    if ((family == Family::kde || family == Family::kkr || family == Family::ukkr) && !(v > 0.0)) {
      throw InputError(std::string("hyperparameters of ") + to_string(family) + " must be positive");
    }
  }
}

HyperGrid default_grid(Family family, Mode mode, Index n) {
  const double root_n = std::sqrt(static_cast<double>(n));
  HyperGrid grid{family, {}};
  auto& v = grid.values;
  switch (family) {
    case Family::bin:
      for (int i = 1; i <= 20; ++i) v.push_back(5.0 * i);
      break;
    case Family::kde:
      for (int i = 1; i <= 15; ++i) {
        const double t = (i - 1) / 14.0;
        v.push_back(std::pow(10.0, -5.0 * t - (1.0 - t)));
      }
      for (int i = 1; i <= 5; ++i) v.push_back(0.2 * i);
      break;
    case Family::kkr:
      if (mode == Mode::top_label) {
        for (int i = 1; i <= 9; ++i) v.push_back(root_n * std::pow(10.0, -2.0 * i + 1.0));
      } else {
        for (int i = 1; i <= 18; ++i) v.push_back(root_n * std::pow(10.0, -i + 9.0));
      }
      break;
    case Family::ukkr:
      if (mode == Mode::top_label) {
        for (int i = 1; i <= 9; ++i) v.push_back(root_n * std::pow(10.0, -i));
      } else {
        for (int i = 1; i <= 18; ++i) v.push_back(root_n * std::pow(10.0, -0.5 * i + 4.5));
      }
      break;
    case Family::sim:
      v = default_theta_grid();
      break;
    case Family::constant:
      v = {0.0};
      break;
  }
  return grid;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double test_fraction,
                                          std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InputError("test fraction must lie in (0, 1)");
  }
  const Index n = data.size();
  if (n < 5) throw InputError("need at least 5 samples to split");
  const auto n_test = static_cast<Index>(std::llround(test_fraction * static_cast<double>(n)));
  if (n_test < 1 || n_test >= n) throw InputError("test fraction leaves an empty split");

  const std::vector<Index> order = shuffled(n, seed);
  const std::span<const Index> all(order);
  return {data.subset(all.subspan(static_cast<std::size_t>(n_test)), Role::tune),
          data.subset(all.first(static_cast<std::size_t>(n_test)), Role::test)};
}

std::vector<std::vector<Index>> fold_indices(Index n, int k, std::uint64_t seed) {
  if (k < 2) throw InputError("cross-validation needs k >= 2");
  if (n < k) throw InputError("fewer samples than folds");
  const std::vector<Index> order = shuffled(n, seed);
  std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
  const Index base = n / k;
  const Index extra = n % k;
  std::size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    folds[static_cast<std::size_t>(f)].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                              order.begin() + static_cast<std::ptrdiff_t>(pos) + size);
    pos += static_cast<std::size_t>(size);
  }
  return folds;
}

CvWorkspace::CvWorkspace(const Dataset& tune, int k, std::uint64_t seed) : tune_(tune), seed_(seed) {
  if (tune.role() == Role::test) {
    throw InputError("cross-validation must not consume the calibration test set");
  }
  const auto folds = fold_indices(tune.size(), k, seed);
  for (int f = 0; f < k; ++f) {
    std::vector<Index> rest;
    for (int g = 0; g < k; ++g) {
      if (g == f) continue;
      const auto& other = folds[static_cast<std::size_t>(g)];
      rest.insert(rest.end(), other.begin(), other.end());
    }
    std::sort(rest.begin(), rest.end());
    train_.push_back(tune.subset(rest, Role::fold_train));
    holdout_.push_back(tune.subset(folds[static_cast<std::size_t>(f)], Role::fold_holdout));
  }
}

CvWorkspace::KernelCache& CvWorkspace::cache(int fold, double gamma) {
  auto [it, inserted] = kernels_.try_emplace({fold, gamma});
  if (inserted) {
    it->second.basis = KernelBasis::build(train(fold), gamma);
    it->second.projected = it->second.basis->project(holdout(fold).points());
  }
  return it->second;
}

std::shared_ptr<const KernelBasis> CvWorkspace::basis(int fold, double gamma) {
  return cache(fold, gamma).basis;
}

const Eigen::MatrixXd& CvWorkspace::projected_holdout(int fold, double gamma) {
  return cache(fold, gamma).projected;
}

std::pair<double, double> mean_and_se(std::span<const double> values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  const auto n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

CvResult cross_validate(CvWorkspace& ws, const HyperGrid& grid, const CvOptions& options) {
  grid.validate();
  const double gamma = options.fit.gamma;
  CvResult result;
  result.family = grid.family;
  bool have_best = false;

  for (double hyper : grid.values) {
    GridPointResult point;
    point.hyper = hyper;
    std::vector<EstimatorModel> models;
    try {
      for (int f = 0; f < ws.folds(); ++f) {
        const Dataset& holdout = ws.holdout(f);
        RiskValue risk;
        if (grid.family == Family::kkr) {
          KkrModel model = KkrModel::fit(ws.basis(f, gamma), hyper);
          risk = options.linear_risk
                     ? empirical_risk_linear(EstimatorModel(model), holdout, fold_seed(ws.seed(), f))
                     : empirical_risk_kkr(model, ws.projected_holdout(f, gamma), holdout);
          models.emplace_back(std::move(model));
        } else {
          EstimatorModel model = grid.family == Family::ukkr
                                     ? EstimatorModel(UkkrModel::fit(ws.basis(f, gamma), hyper))
                                     : fit_estimator(grid.family, hyper, ws.train(f), options.fit);
          risk = options.linear_risk ? empirical_risk_linear(model, holdout, fold_seed(ws.seed(), f))
                                     : empirical_risk(model, holdout);
          models.push_back(std::move(model));
        }
        point.fold_risks.push_back(risk);
      }
    } catch (const NumericError& e) {
      point.failed = true;
      point.failure = e.what();
    }
    if (!point.failed) {
      std::vector<double> values;
      for (const auto& r : point.fold_risks) values.push_back(r.value);
      std::tie(point.mean_risk, point.risk_se) = mean_and_se(values);
      const bool better = !have_best || point.mean_risk < result.mean_risk ||
                          (point.mean_risk == result.mean_risk &&
                           simpler(grid.family, hyper, result.best_hyper));
      if (better) {
        have_best = true;
        result.best_hyper = hyper;
        result.mean_risk = point.mean_risk;
        result.risk_se = point.risk_se;
        result.fold_risks = point.fold_risks;
        result.fold_models = std::move(models);
      }
    }
    result.grid.push_back(std::move(point));
  }
  if (!have_best) {
    throw NumericError(std::string("every grid point failed for ") + to_string(grid.family));
  }
  return result;
}

CvResult cross_validate(const Dataset& tune, const HyperGrid& grid, int k, const CvOptions& options,
                        std::uint64_t seed) {
  CvWorkspace ws(tune, k, seed);
  return cross_validate(ws, grid, options);
}

CalibrationEstimate final_estimate(std::span<const EstimatorModel> fold_models, const Dataset& test) {
  if (fold_models.empty()) throw InputError("final estimate needs at least one fold model");
  if (test.empty()) throw InputError("final estimate needs a nonempty test set");

  const Index n = test.size();
  CalibrationEstimate est;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXi count = Eigen::VectorXi::Zero(n);
  for (const auto& model : fold_models) {
    const Eigen::VectorXd diag = diagonal(model, test.points());
    double model_sum = 0.0;
    Index model_count = 0;
    for (Index i = 0; i < n; ++i) {
      if (std::isnan(diag[i])) {
        ++est.dropped_predictions;
        continue;
      }
      sum[i] += diag[i];
      ++count[i];
      model_sum += diag[i];
      ++model_count;
    }
    if (model_count > 0) est.fold_means.push_back(model_sum / static_cast<double>(model_count));
  }

  double total = 0.0;
  Index kept = 0;
  for (Index i = 0; i < n; ++i) {
    if (count[i] == 0) continue;
    total += sum[i] / count[i];
    ++kept;
  }
  if (kept == 0) throw NumericError("every test-set prediction was NaN");

  est.squared_value = total / static_cast<double>(kept);
  est.clipped = est.squared_value < 0.0;
  est.value = std::sqrt(std::max(est.squared_value, 0.0));
  est.fold_se = mean_and_se(est.fold_means).second;
  return est;
}

}  // namespace calrisk
