#include "calrisk/kkr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "calrisk/kernels.hpp"

namespace calrisk {

namespace {

constexpr double kNegativeEigenTolerance = 1e-8;
constexpr double kSingularEigenvalue = 1e-12;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InputError("ridge constant must be finite and nonnegative");
  }
}

// In-place symmetric eigendecomposition; eigenvalues ascending.
void symmetric_eigen(Eigen::MatrixXd& a, Eigen::VectorXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigendecomposition did not converge");
  w = solver.eigenvalues();
  a = solver.eigenvectors();
}

}  // namespace

std::shared_ptr<const KernelBasis> KernelBasis::build(const Dataset& train, double gamma) {
  if (train.empty()) throw InputError("kernel ridge: empty training set");
  if (!(gamma > 0.0)) throw InputError("kernel ridge: gamma must be positive");

  auto basis = std::make_shared<KernelBasis>();
  basis->gamma_ = gamma;
  basis->train_points_ = train.points();
  basis->residuals_ = train.residuals();
  basis->eigenvectors_ = rbf_gram(train.points(), train.points(), gamma);
  symmetric_eigen(basis->eigenvectors_, basis->eigenvalues_);

  const double top = std::max(1.0, basis->eigenvalues_.maxCoeff());
  for (Index i = 0; i < basis->eigenvalues_.size(); ++i) {
    double& l = basis->eigenvalues_[i];
    if (l < -kNegativeEigenTolerance * top) {
      std::ostringstream msg;
      msg << "Gram matrix has eigenvalue " << l << "; kernel matrix is not positive semidefinite";
      throw NumericError(msg.str());
    }
    l = std::max(l, 0.0);
  }
  basis->residual_projection_ = basis->eigenvectors_.transpose() * basis->residuals_.transpose();
  return basis;
}

Eigen::VectorXd KernelBasis::kernel_vector(Point p) const {
  if (p.size() != train_points_.rows()) throw InputError("kernel ridge: dimension mismatch");
  Eigen::VectorXd k(size());
  for (Index i = 0; i < size(); ++i) k[i] = rbf_kernel(train_points_.col(i), p, gamma_);
  return k;
}

Eigen::MatrixXd KernelBasis::cross_kernel(const Eigen::MatrixXd& points) const {
  if (points.rows() != train_points_.rows()) throw InputError("kernel ridge: dimension mismatch");
  return rbf_gram(train_points_, points, gamma_);
}

Eigen::MatrixXd KernelBasis::project(const Eigen::MatrixXd& points) const {
  return eigenvectors_.transpose() * cross_kernel(points);
}

KkrModel KkrModel::fit(const Dataset& train, double lambda, double gamma) {
  check_lambda(lambda);
  return fit(KernelBasis::build(train, gamma), lambda);
}

KkrModel KkrModel::fit(std::shared_ptr<const KernelBasis> basis, double lambda) {
  check_lambda(lambda);
  const Eigen::VectorXd& l = basis->eigenvalues();
  if (lambda == 0.0 && l.minCoeff() < kSingularEigenvalue) {
    throw NumericError("kkr: lambda = 0 with a singular Gram matrix (minimum eigenvalue " +
                       std::to_string(l.minCoeff()) + ")");
  }
  const auto n = static_cast<double>(basis->size());
  const double ridge = lambda * n * n;
  const Eigen::MatrixXd& b = basis->residual_projection();
  const Eigen::MatrixXd gram = b * b.transpose();

  KkrModel model;
  model.basis_ = std::move(basis);
  model.lambda_ = lambda;
  const Index size = gram.rows();
  model.core_.resize(size, size);
  for (Index j = 0; j < size; ++j) {
    for (Index i = j; i < size; ++i) {
      const double v = gram(i, j) / (l[i] * l[j] + ridge);
      model.core_(i, j) = v;
      model.core_(j, i) = v;
    }
  }
  return model;
}

double KkrModel::operator()(Point p, Point q) const {
  const Eigen::MatrixXd& qmat = basis_->eigenvectors();
  const Eigen::VectorXd u = qmat.transpose() * basis_->kernel_vector(p);
  const Eigen::VectorXd v = qmat.transpose() * basis_->kernel_vector(q);
  return u.dot(core_ * v);
}

Eigen::MatrixXd KkrModel::pair_matrix_projected(const Eigen::MatrixXd& projected) const {
  const Eigen::MatrixXd right = core_ * projected;
  return projected.transpose() * right;
}

Eigen::MatrixXd KkrModel::pair_matrix(const Eigen::MatrixXd& points) const {
  return pair_matrix_projected(basis_->project(points));
}

Eigen::VectorXd KkrModel::diagonal(const Eigen::MatrixXd& points) const {
  const Eigen::MatrixXd u = basis_->project(points);
  const Eigen::MatrixXd right = core_ * u;
  return u.cwiseProduct(right).colwise().sum().transpose();
}

UkkrModel::UkkrModel(Eigen::MatrixXd train_points, double lambda, double gamma,
                     Eigen::MatrixXd projection)
    : train_points_(std::move(train_points)),
      lambda_(lambda),
      gamma_(gamma),
      projection_(std::move(projection)) {
  core_ = projection_.transpose() * projection_;
  // Symmetrize exactly; the product above is symmetric up to rounding.
  core_ = (0.5 * (core_ + core_.transpose())).eval();
}

UkkrModel UkkrModel::fit(const Dataset& train, double lambda, double gamma) {
  check_lambda(lambda);
  if (train.empty()) throw InputError("ukkr: empty training set");
  if (!(gamma > 0.0)) throw InputError("ukkr: gamma must be positive");
  const auto n = static_cast<double>(train.size());
  Eigen::MatrixXd system = rbf_gram(train.points(), train.points(), gamma);
  system.diagonal().array() += lambda * n;
  const Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success ||
      llt.rcond() < static_cast<double>(train.size()) * std::numeric_limits<double>::epsilon()) {
    throw NumericError("ukkr: K + lambda n I is singular or indefinite");
  }
  Eigen::MatrixXd solved = llt.solve(train.residuals().transpose());  // n x r
  return UkkrModel(train.points(), lambda, gamma, solved.transpose());
}

UkkrModel UkkrModel::fit(std::shared_ptr<const KernelBasis> basis, double lambda) {
  check_lambda(lambda);
  const auto n = static_cast<double>(basis->size());
  const Eigen::VectorXd shifted = basis->eigenvalues().array() + lambda * n;
  const double top = std::max(1.0, shifted.maxCoeff());
  if (shifted.minCoeff() <= kSingularEigenvalue * top) {
    throw NumericError("ukkr: K + lambda n I is singular");
  }
  // (K + lambda n I)^{-1} Delta^T = Q diag(1 / shifted) Q^T Delta^T
  const Eigen::MatrixXd scaled = shifted.cwiseInverse().asDiagonal() * basis->residual_projection();
  Eigen::MatrixXd solved = basis->eigenvectors() * scaled;
  return UkkrModel(basis->train_points(), lambda, basis->gamma(), solved.transpose());
}

double UkkrModel::operator()(Point p, Point q) const {
  if (p.size() != train_points_.rows() || q.size() != train_points_.rows()) {
    throw InputError("ukkr: dimension mismatch");
  }
  Eigen::VectorXd kp(train_points_.cols());
  Eigen::VectorXd kq(train_points_.cols());
  for (Index i = 0; i < train_points_.cols(); ++i) {
    kp[i] = rbf_kernel(train_points_.col(i), p, gamma_);
    kq[i] = rbf_kernel(train_points_.col(i), q, gamma_);
  }
  return kp.dot(core_ * kq);
}

Eigen::MatrixXd UkkrModel::features(const Eigen::MatrixXd& points) const {
  return projection_ * rbf_gram(train_points_, points, gamma_);
}

Eigen::MatrixXd UkkrModel::pair_matrix(const Eigen::MatrixXd& points) const {
  const Eigen::MatrixXd f = features(points);
  return f.transpose() * f;
}

Eigen::VectorXd UkkrModel::diagonal(const Eigen::MatrixXd& points) const {
  return features(points).colwise().squaredNorm().transpose();
}

}  // namespace calrisk
