#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "calrisk/core.hpp"

namespace calrisk {

// Equal-width histogram over top-label confidences. Each bin stores the gap
// conf(B_m) - acc(B_m); h(c, c') = gap(bin(c)) * gap(bin(c')).
class BinningModel {
 public:
  static BinningModel fit(const Dataset& train, int bins);

  int bins() const { return static_cast<int>(gaps_.size()); }
  std::span<const double> edges() const { return edges_; }
  std::span<const double> gaps() const { return gaps_; }
  std::span<const Index> counts() const { return counts_; }

  // Bins are [e_m, e_{m+1}) with the last one closed.
  int bin_of(double confidence) const;
  double gap_at(double confidence) const { return gaps_[static_cast<std::size_t>(bin_of(confidence))]; }

  double operator()(double c, double c_prime) const { return gap_at(c) * gap_at(c_prime); }
  double operator()(Point p, Point q) const { return (*this)(p[0], q[0]); }

  // Sum_m |B_m| / n * gap_m^2, the squared binned TCE on the training set.
  double squared_error() const;

  Eigen::MatrixXd features(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd pair_matrix(const Eigen::MatrixXd& points) const;
  Eigen::VectorXd diagonal(const Eigen::MatrixXd& points) const;

 private:
  std::vector<double> edges_;
  std::vector<double> gaps_;
  std::vector<Index> counts_;
};

}  // namespace calrisk
