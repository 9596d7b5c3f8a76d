#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "calrisk/errors.hpp"

namespace calrisk {

using Index = Eigen::Index;
using Point = Eigen::Ref<const Eigen::VectorXd>;

inline constexpr double kSimplexTolerance = 1e-9;

// A point on the probability simplex.
class ProbVector {
 public:
  explicit ProbVector(Eigen::VectorXd values, double tolerance = kSimplexTolerance);
  ProbVector(std::initializer_list<double> values);

  const Eigen::VectorXd& values() const { return values_; }
  Index dim() const { return values_.size(); }
  double operator[](Index i) const { return values_[i]; }

 private:
  Eigen::VectorXd values_;
};

struct Sample {
  ProbVector probs;
  int label;

  Sample(ProbVector p, int y);
};

enum class Mode { canonical, top_label };

// Where a dataset came from in the evaluation pipeline. Cross-validation
// refuses anything tagged `test`.
enum class Role { full, tune, test, fold_train, fold_holdout };

const char* to_string(Mode mode);
const char* to_string(Role role);

// A set of (prediction, label) pairs stored column-wise.
//
// canonical: points are d-dimensional probability vectors, labels are
//            class indices in [0, d).
// top_label: points are 1-dimensional confidences, labels are 0/1
//            correctness indicators.
class Dataset {
 public:
  static Dataset canonical(Eigen::MatrixXd probs, std::vector<int> labels,
                           Role role = Role::full);
  static Dataset top_label(Eigen::VectorXd confidences, std::vector<int> correct,
                           Role role = Role::full);
  static Dataset from_samples(std::span<const Sample> samples);

  Mode mode() const { return mode_; }
  Role role() const { return role_; }
  Index size() const { return points_.cols(); }
  Index dim() const { return points_.rows(); }
  bool empty() const { return size() == 0; }

  const Eigen::MatrixXd& points() const { return points_; }
  auto point(Index i) const { return points_.col(i); }
  std::span<const int> labels() const { return labels_; }
  int label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  // Regression targets: one-hot labels (d x n) or correctness (1 x n).
  Eigen::MatrixXd targets() const;

  // Columns f(X_i) - e_{Y_i}, or c_i - a_i in top-label mode.
  Eigen::MatrixXd residuals() const;

  // Points embedded in a simplex; top-label confidences become (c, 1 - c).
  Eigen::MatrixXd simplex_points() const;

  // Reduce a canonical dataset to (confidence, correctness) pairs.
  Dataset to_top_label() const;

  Dataset subset(std::span<const Index> indices, Role role) const;
  Dataset with_role(Role role) const;

 private:
  Dataset(Mode mode, Role role, Eigen::MatrixXd points, std::vector<int> labels);

  Mode mode_;
  Role role_;
  Eigen::MatrixXd points_;
  std::vector<int> labels_;
};

struct TopLabel {
  double confidence;
  int correct;
};

ProbVector softmax(std::span<const double> logits, double temperature = 1.0);
Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);

// Index of the largest component; ties go to the lowest index.
Index argmax(const Eigen::Ref<const Eigen::VectorXd>& values);

TopLabel top_label_reduce(const ProbVector& probs, int label);

// Regression target for the ordered pair (i, j).
double pair_target(const Sample& a, const Sample& b, Mode mode);

// Matrix of all pair targets R^T R for a dataset.
Eigen::MatrixXd pair_targets(const Dataset& data);

}  // namespace calrisk
