#include "calrisk/estimator.hpp"

#include <cmath>
#include <string>

namespace calrisk {

const char* to_string(Family family) {
  switch (family) {
    case Family::bin: return "bin";
    case Family::kde: return "kde";
    case Family::kkr: return "kkr";
    case Family::ukkr: return "ukkr";
    case Family::sim: return "sim";
    case Family::constant: return "constant";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "bin") return Family::bin;
  if (name == "kde") return Family::kde;
  if (name == "kkr") return Family::kkr;
  if (name == "ukkr") return Family::ukkr;
  if (name == "sim") return Family::sim;
  if (name == "constant") return Family::constant;
  throw InputError("unknown estimator family '" + std::string(name) + "'");
}

Family family_of(const EstimatorModel& model) {
  static constexpr Family order[] = {Family::bin, Family::kde,  Family::kkr,
                                     Family::ukkr, Family::sim, Family::constant};
  return order[model.index()];
}

double evaluate(const EstimatorModel& model, Point p, Point q) {
  return std::visit([&](const auto& m) { return m(p, q); }, model);
}

Eigen::MatrixXd pair_matrix(const EstimatorModel& model, const Eigen::MatrixXd& points) {
  return std::visit([&](const auto& m) { return m.pair_matrix(points); }, model);
}

Eigen::VectorXd diagonal(const EstimatorModel& model, const Eigen::MatrixXd& points) {
  return std::visit([&](const auto& m) { return m.diagonal(points); }, model);
}

EstimatorModel fit_estimator(Family family, double hyper, const Dataset& train,
                             const FitOptions& options) {
  switch (family) {
    case Family::bin: {
      if (hyper < 1.0 || hyper != std::floor(hyper)) {
        throw InputError("number of bins must be a positive integer");
      }
      return BinningModel::fit(train, static_cast<int>(hyper));
    }
    case Family::kde: return KdeModel::fit(train, hyper);
    case Family::kkr: return KkrModel::fit(train, hyper, options.gamma);
    case Family::ukkr: return UkkrModel::fit(train, hyper, options.gamma);
    case Family::sim: {
      if (train.mode() != Mode::canonical) throw InputError("h_sim needs canonical predictions");
      return SimModel(hyper, options.model_temp);
    }
    case Family::constant: return ConstantModel(hyper);
  }
  throw InputError("unknown estimator family");
}

}  // namespace calrisk
