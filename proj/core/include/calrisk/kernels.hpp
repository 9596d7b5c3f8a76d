#pragma once

#include <Eigen/Dense>

#include "calrisk/core.hpp"

namespace calrisk {

inline constexpr double kDefaultGamma = 0.5;
inline constexpr double kDirichletClip = 1e-10;

// exp(-gamma * ||x - y||^2)
double rbf_kernel(Point x, Point y, double gamma);

// Cross-kernel matrix [k(a_i, b_j)] of shape a.cols() x b.cols().
Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma);

// Dirichlet density of `x` with concentration y / bandwidth + 1. Both
// arguments are clipped to kDirichletClip and renormalized first.
double dirichlet_kernel(Point x, Point y, double bandwidth);
double log_dirichlet_kernel(Point x, Point y, double bandwidth);

// Componentwise max(v, floor) followed by renormalization to unit sum.
Eigen::VectorXd clip_to_simplex(Point v, double floor = kDirichletClip);

}  // namespace calrisk
