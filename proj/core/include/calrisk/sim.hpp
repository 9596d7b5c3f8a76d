#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "calrisk/core.hpp"

namespace calrisk {

// Ground-truth simulation: P_i ~ Dir(alpha, ..., alpha), Y_i ~ P_i and a
// miscalibrated model f(X_i) = softmax(model_temp * log P_i).
struct SimConfig {
  Index n = 500;
  Index d = 5;
  double alpha = 0.04;
  double model_temp = 0.3;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr double kSimLogClip = 1e-12;

struct SimDataset {
  SimConfig config;
  Dataset dataset;
  Eigen::MatrixXd ground_truth;  // d x n
};

SimDataset simulate(const SimConfig& cfg);

// h(p, p') = <p - s(p), p' - s(p')>, s(p) = softmax(theta / model_temp * log p).
// theta = 1 undoes the simulated miscalibration.
class SimModel {
 public:
  SimModel(double theta, double model_temp);

  double theta() const { return theta_; }
  double model_temp() const { return model_temp_; }

  Eigen::VectorXd recalibrated(Point p) const;
  double operator()(Point p, Point q) const;

  Eigen::MatrixXd features(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd pair_matrix(const Eigen::MatrixXd& points) const;
  Eigen::VectorXd diagonal(const Eigen::MatrixXd& points) const;

 private:
  double theta_;
  double model_temp_;
};

double eval_hsim(double theta, Point p, Point q, double model_temp = 0.3);

struct CurvePoint {
  double theta;
  double risk;
};

// Empirical risk of the h_sim family over a theta grid on one simulated set.
std::vector<CurvePoint> risk_curve(const SimDataset& sim, std::span<const double> thetas);

struct SeedCurveSummary {
  std::vector<double> thetas;
  std::vector<std::vector<double>> risks;  // [seed][theta]
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> se;
  std::vector<double> argmin_theta;        // per seed
  std::vector<double> accuracy;            // per seed top-1 accuracy
};

// Repeats the simulation for seeds base_seed, base_seed + 1, ...
SeedCurveSummary risk_curves_over_seeds(SimConfig cfg, std::span<const double> thetas, int seeds);

std::vector<double> default_theta_grid();

}  // namespace calrisk
