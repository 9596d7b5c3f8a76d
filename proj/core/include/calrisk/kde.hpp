#pragma once

#include <utility>

#include <Eigen/Dense>

#include "calrisk/core.hpp"

namespace calrisk {

// Dirichlet-kernel density ratio estimator. The label distribution given a
// prediction q is estimated by the Nadaraya-Watson ratio
//
//   g(q) = sum_i t_i k_dir(x_i; q) / sum_i k_dir(x_i; q)
//
// over the retained training set, and h(p, p') = <p - g(p), p' - g(p')>.
// In top-label mode the points are confidences c embedded as (c, 1 - c) for
// the kernel and the targets are the correctness indicators.
//
// When sum_i k_dir(x_i; q) underflows to zero the estimate is NaN; callers
// drop such predictions.
class KdeModel {
 public:
  static KdeModel fit(const Dataset& train, double bandwidth);

  double bandwidth() const { return bandwidth_; }
  Mode mode() const { return train_.mode(); }
  const Dataset& train() const { return train_; }

  // g(q); NaN entries when the kernel mass underflows.
  Eigen::VectorXd label_estimate(Point q) const;
  // q - g(q) in the residual space of the dataset mode.
  Eigen::VectorXd residual_estimate(Point q) const;

  double operator()(Point p, Point q) const;

  Eigen::MatrixXd features(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd pair_matrix(const Eigen::MatrixXd& points) const;
  Eigen::VectorXd diagonal(const Eigen::MatrixXd& points) const;

 private:
  KdeModel(Dataset train, double bandwidth) : train_(std::move(train)), bandwidth_(bandwidth) {}

  Dataset train_;
  double bandwidth_ = 1.0;
  Eigen::MatrixXd log_train_;  // n x simplex dim, log of clipped training points
  Eigen::MatrixXd targets_;    // residual dim x n
};

}  // namespace calrisk
