#include "calrisk/kde.hpp"

#include <cmath>
#include <limits>

#include "calrisk/kernels.hpp"

namespace calrisk {

namespace {

Eigen::VectorXd embed(Point q, Mode mode) {
  if (mode == Mode::canonical) return q;
  Eigen::VectorXd s(2);
  s << q[0], 1.0 - q[0];
  return s;
}

}  // namespace

KdeModel KdeModel::fit(const Dataset& train, double bandwidth) {
  if (!(bandwidth > 0.0)) throw InputError("kde: bandwidth must be positive");
  if (train.empty()) throw InputError("kde: empty training set");
  KdeModel model(train, bandwidth);
  const Eigen::MatrixXd simplex = train.simplex_points();
  model.log_train_.resize(simplex.cols(), simplex.rows());
  for (Index i = 0; i < simplex.cols(); ++i) {
    model.log_train_.row(i) = clip_to_simplex(simplex.col(i)).array().log().matrix().transpose();
  }
  model.targets_ = train.targets();
  return model;
}

Eigen::VectorXd KdeModel::label_estimate(Point q) const {
  if (q.size() != train_.dim()) throw InputError("kde: dimension mismatch");
  const Eigen::VectorXd s = clip_to_simplex(embed(q, mode()));
  const Eigen::VectorXd alpha = (s / bandwidth_).array() + 1.0;

  double log_norm = std::lgamma(alpha.sum());
  for (Index k = 0; k < alpha.size(); ++k) log_norm -= std::lgamma(alpha[k]);

  // log k_dir(x_i; q) for every training point.
  Eigen::VectorXd log_k = (log_train_ * (alpha.array() - 1.0).matrix()).array() + log_norm;
  const double top = log_k.maxCoeff();
  if (!(std::exp(top) > 0.0)) {
    return Eigen::VectorXd::Constant(targets_.rows(), std::numeric_limits<double>::quiet_NaN());
  }
  const Eigen::VectorXd w = (log_k.array() - top).exp().matrix();
  return targets_ * w / w.sum();
}

Eigen::VectorXd KdeModel::residual_estimate(Point q) const {
  return q - label_estimate(q);
}

double KdeModel::operator()(Point p, Point q) const {
  return residual_estimate(p).dot(residual_estimate(q));
}

Eigen::MatrixXd KdeModel::features(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd f(targets_.rows(), points.cols());
  for (Index i = 0; i < points.cols(); ++i) f.col(i) = residual_estimate(points.col(i));
  return f;
}

Eigen::MatrixXd KdeModel::pair_matrix(const Eigen::MatrixXd& points) const {
  const Eigen::MatrixXd f = features(points);
  return f.transpose() * f;
}

Eigen::VectorXd KdeModel::diagonal(const Eigen::MatrixXd& points) const {
  return features(points).colwise().squaredNorm().transpose();
}

}  // namespace calrisk
