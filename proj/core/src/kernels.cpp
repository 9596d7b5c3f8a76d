#include "calrisk/kernels.hpp"

#include <cmath>

namespace calrisk {

double rbf_kernel(Point x, Point y, double gamma) {
  if (x.size() != y.size()) throw InputError("rbf_kernel: dimension mismatch");
  return std::exp(-gamma * (x - y).squaredNorm());
}

Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma) {
  if (a.rows() != b.rows()) throw InputError("rbf_gram: dimension mismatch");
  // Direct differences rather than the ||a||^2 + ||b||^2 - 2ab expansion:
  // keeps the diagonal exactly 1 and the matrix exactly symmetric.
  Eigen::MatrixXd k(a.cols(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < a.cols(); ++i) {
      k(i, j) = std::exp(-gamma * (a.col(i) - b.col(j)).squaredNorm());
    }
  }
  return k;
}

Eigen::VectorXd clip_to_simplex(Point v, double floor) {
  Eigen::VectorXd c = v.cwiseMax(floor);
  return c / c.sum();
}

double log_dirichlet_kernel(Point x, Point y, double bandwidth) {
  if (!(bandwidth > 0.0)) throw InputError("dirichlet_kernel: bandwidth must be positive");
  if (x.size() != y.size()) throw InputError("dirichlet_kernel: dimension mismatch");
  const Eigen::VectorXd xc = clip_to_simplex(x);
  const Eigen::VectorXd yc = clip_to_simplex(y);
  double alpha_sum = 0.0;
  double log_norm = 0.0;
  double log_kernel = 0.0;
  for (Index k = 0; k < xc.size(); ++k) {
    const double alpha = yc[k] / bandwidth + 1.0;
    alpha_sum += alpha;
    log_norm -= std::lgamma(alpha);
    log_kernel += (alpha - 1.0) * std::log(xc[k]);
  }
  return std::lgamma(alpha_sum) + log_norm + log_kernel;
}

double dirichlet_kernel(Point x, Point y, double bandwidth) {
  return std::exp(log_dirichlet_kernel(x, y, bandwidth));
}

}  // namespace calrisk
