#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "calrisk/core.hpp"
#include "calrisk/estimator.hpp"
#include "calrisk/risk.hpp"

namespace calrisk {

struct HyperGrid {
  Family family;
  std::vector<double> values;

  void validate() const;
};

// Search spaces for the experiments on a tuning set of size n.
HyperGrid default_grid(Family family, Mode mode, Index n);

struct GridPointResult {
  double hyper = 0.0;
  bool failed = false;
  std::string failure;
  std::vector<RiskValue> fold_risks;
  double mean_risk = 0.0;
  double risk_se = 0.0;
};

struct CvResult {
  Family family = Family::constant;
  double best_hyper = 0.0;
  std::vector<EstimatorModel> fold_models;
  std::vector<RiskValue> fold_risks;
  double mean_risk = 0.0;
  double risk_se = 0.0;
  std::vector<GridPointResult> grid;  // in grid order, including failures
};

struct CalibrationEstimate {
  double squared_value = 0.0;
  double value = 0.0;  // sqrt(max(squared_value, 0))
  bool clipped = false;
  double fold_se = 0.0;
  std::vector<double> fold_means;
  Index dropped_predictions = 0;  // NaN diagonal predictions over all fold models
};

// Seeded shuffle, then |test| = round(test_fraction * n).
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double test_fraction,
                                          std::uint64_t seed);

// Seeded shuffle cut into k contiguous blocks; the first n mod k blocks get
// one extra sample.
std::vector<std::vector<Index>> fold_indices(Index n, int k, std::uint64_t seed);

// Fold splits of a tuning set plus lazily built kernel eigendecompositions,
// shared by every family and grid point evaluated on the same folds.
class CvWorkspace {
 public:
  CvWorkspace(const Dataset& tune, int k, std::uint64_t seed);

  int folds() const { return static_cast<int>(train_.size()); }
  std::uint64_t seed() const { return seed_; }
  const Dataset& tune() const { return tune_; }
  const Dataset& train(int fold) const { return train_[static_cast<std::size_t>(fold)]; }
  const Dataset& holdout(int fold) const { return holdout_[static_cast<std::size_t>(fold)]; }

  std::shared_ptr<const KernelBasis> basis(int fold, double gamma);
  // Q^T K_{train, holdout} for the fold's basis.
  const Eigen::MatrixXd& projected_holdout(int fold, double gamma);

 private:
  struct KernelCache {
    std::shared_ptr<const KernelBasis> basis;
    Eigen::MatrixXd projected;
  };
  KernelCache& cache(int fold, double gamma);

  Dataset tune_;
  std::uint64_t seed_;
  std::vector<Dataset> train_;
  std::vector<Dataset> holdout_;
  std::map<std::pair<int, double>, KernelCache> kernels_;
};

struct CvOptions {
  FitOptions fit;
  bool linear_risk = false;
};

// Fits every grid point on k - 1 folds, scores it on the held-out fold and
// keeps the k fold models of the point with the lowest mean risk. Equal
// risks resolve toward the simpler model: fewer bins, wider bandwidth,
// stronger ridge, smaller theta.
CvResult cross_validate(CvWorkspace& workspace, const HyperGrid& grid, const CvOptions& options = {});
CvResult cross_validate(const Dataset& tune, const HyperGrid& grid, int k, const CvOptions& options,
                        std::uint64_t seed);

// Mean over the test set of the fold-averaged diagonal prediction.
CalibrationEstimate final_estimate(std::span<const EstimatorModel> fold_models, const Dataset& test);

// Mean and sample standard deviation / sqrt(count).
std::pair<double, double> mean_and_se(std::span<const double> values);

}  // namespace calrisk
