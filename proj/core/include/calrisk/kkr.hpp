#pragma once

#include <memory>

#include <Eigen/Dense>

#include "calrisk/core.hpp"

namespace calrisk {

// Eigendecomposition K = Q diag(eigenvalues) Q^T of the RBF Gram matrix over
// a training set, together with the projected residuals Q^T Delta^T. Shared by
// every ridge constant fitted on the same training set.
class KernelBasis {
 public:
  static std::shared_ptr<const KernelBasis> build(const Dataset& train, double gamma);

  Index size() const { return train_points_.cols(); }
  double gamma() const { return gamma_; }
  const Eigen::MatrixXd& train_points() const { return train_points_; }
  const Eigen::MatrixXd& residuals() const { return residuals_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  // Q^T Delta^T, size n x residual dim.
  const Eigen::MatrixXd& residual_projection() const { return residual_projection_; }

  Eigen::VectorXd kernel_vector(Point p) const;
  // K_{X, points}, size n x points.cols().
  Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& points) const;
  // Q^T K_{X, points}.
  Eigen::MatrixXd project(const Eigen::MatrixXd& points) const;

 private:
  double gamma_ = 0.5;
  Eigen::MatrixXd train_points_;
  Eigen::MatrixXd residuals_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd residual_projection_;
};

// Kronecker kernel ridge regression on pair targets:
//
//   h(p, p') = k(p)^T Q (L o Q^T Delta^T Delta Q) Q^T k(p'),
//   L_ij = 1 / (l_i l_j + lambda n^2),
//
// the O(n^3) form of vec(Delta^T Delta)^T (K (x) K + lambda n^2 I)^{-1} (k(p) (x) k(p')).
class KkrModel {
 public:
  static KkrModel fit(const Dataset& train, double lambda, double gamma);
  static KkrModel fit(std::shared_ptr<const KernelBasis> basis, double lambda);

  double lambda() const { return lambda_; }
  double gamma() const { return basis_->gamma(); }
  const KernelBasis& basis() const { return *basis_; }
  // L o (Q^T Delta^T Delta Q), symmetric.
  const Eigen::MatrixXd& core() const { return core_; }

  double operator()(Point p, Point q) const;

  // H_ij = h(points_i, points_j) via K^T Q core Q^T K.
  Eigen::MatrixXd pair_matrix(const Eigen::MatrixXd& points) const;
  // Same, from already projected kernels U = Q^T K_{X, points}.
  Eigen::MatrixXd pair_matrix_projected(const Eigen::MatrixXd& projected) const;
  Eigen::VectorXd diagonal(const Eigen::MatrixXd& points) const;

 private:
  std::shared_ptr<const KernelBasis> basis_;
  double lambda_ = 0.0;
  Eigen::MatrixXd core_;
};

// Two-step kernel ridge regression: a vector-valued ridge fit of the
// residuals plugged into the inner product,
//
//   h(p, p') = k(p)^T (K + lambda n I)^{-1} Delta^T Delta (K + lambda n I)^{-1} k(p').
class UkkrModel {
 public:
  // Direct Cholesky solve of (K + lambda n I) X = Delta^T.
  static UkkrModel fit(const Dataset& train, double lambda, double gamma);
  // Same model through a shared eigendecomposition.
  static UkkrModel fit(std::shared_ptr<const KernelBasis> basis, double lambda);

  double lambda() const { return lambda_; }
  double gamma() const { return gamma_; }
  const Eigen::MatrixXd& train_points() const { return train_points_; }
  // (K + lambda n I)^{-1} Delta^T Delta (K + lambda n I)^{-1}
  const Eigen::MatrixXd& core() const { return core_; }
  // Delta (K + lambda n I)^{-1}; core = projection^T projection.
  const Eigen::MatrixXd& projection() const { return projection_; }

  double operator()(Point p, Point q) const;

  // Fitted residual vectors projection * k(p) for each point.
  Eigen::MatrixXd features(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd pair_matrix(const Eigen::MatrixXd& points) const;
  Eigen::VectorXd diagonal(const Eigen::MatrixXd& points) const;

 private:
  UkkrModel(Eigen::MatrixXd train_points, double lambda, double gamma, Eigen::MatrixXd projection);

  Eigen::MatrixXd train_points_;
  double lambda_ = 0.0;
  double gamma_ = 0.5;
  Eigen::MatrixXd projection_;
  Eigen::MatrixXd core_;
};

}  // namespace calrisk
