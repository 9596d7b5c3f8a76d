#pragma once

#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "calrisk/binning.hpp"
#include "calrisk/core.hpp"
#include "calrisk/kde.hpp"
#include "calrisk/kkr.hpp"
#include "calrisk/sim.hpp"

namespace calrisk {

// h == value everywhere. Used as a reference point and in tests.
class ConstantModel {
 public:
  explicit ConstantModel(double value) : value_(value) {}
  double value() const { return value_; }
  double operator()(Point, Point) const { return value_; }
  Eigen::MatrixXd pair_matrix(const Eigen::MatrixXd& points) const {
    return Eigen::MatrixXd::Constant(points.cols(), points.cols(), value_);
  }
  Eigen::VectorXd diagonal(const Eigen::MatrixXd& points) const {
    return Eigen::VectorXd::Constant(points.cols(), value_);
  }

 private:
  double value_;
};

enum class Family { bin, kde, kkr, ukkr, sim, constant };

const char* to_string(Family family);
Family parse_family(std::string_view name);

using EstimatorModel =
    std::variant<BinningModel, KdeModel, KkrModel, UkkrModel, SimModel, ConstantModel>;

Family family_of(const EstimatorModel& model);

double evaluate(const EstimatorModel& model, Point p, Point q);

// [h(x_i, x_j)] over the columns of `points`; NaN marks dropped predictions.
Eigen::MatrixXd pair_matrix(const EstimatorModel& model, const Eigen::MatrixXd& points);

// [h(x_i, x_i)].
Eigen::VectorXd diagonal(const EstimatorModel& model, const Eigen::MatrixXd& points);

struct FitOptions {
  double gamma = 0.5;
  double model_temp = 0.3;
};

// Fits one family at one hyperparameter: number of bins, bandwidth, ridge
// constant, theta, or the constant value.
EstimatorModel fit_estimator(Family family, double hyper, const Dataset& train,
                             const FitOptions& options = {});

}  // namespace calrisk
