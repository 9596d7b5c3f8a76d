#include "calrisk/binning.hpp"

#include <cmath>

namespace calrisk {

BinningModel BinningModel::fit(const Dataset& train, int bins) {
  if (train.mode() != Mode::top_label) throw InputError("binning needs a top-label dataset");
  if (train.empty()) throw InputError("binning: empty training set");
  if (bins < 1) throw InputError("binning: number of bins must be positive");

  BinningModel model;
  const auto m = static_cast<std::size_t>(bins);
  model.edges_.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) model.edges_[i] = static_cast<double>(i) / bins;
  model.edges_.back() = 1.0;
  model.gaps_.assign(m, 0.0);
  model.counts_.assign(m, 0);

  std::vector<double> conf_sum(m, 0.0);
  std::vector<double> acc_sum(m, 0.0);
  for (Index i = 0; i < train.size(); ++i) {
    const double c = train.points()(0, i);
    const auto b = static_cast<std::size_t>(model.bin_of(c));
    conf_sum[b] += c;
    acc_sum[b] += train.label(i);
    ++model.counts_[b];
  }
  for (std::size_t b = 0; b < m; ++b) {
    if (model.counts_[b] == 0) continue;
    const auto count = static_cast<double>(model.counts_[b]);
    model.gaps_[b] = conf_sum[b] / count - acc_sum[b] / count;
  }
  return model;
}

int BinningModel::bin_of(double confidence) const {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw InputError("binning: confidence outside [0, 1]");
  }
  const int last = bins() - 1;
  int b = std::min(static_cast<int>(std::floor(confidence * bins())), last);
  // floor(c * M) can land one bin off at an edge; settle against the stored edges.
  while (b > 0 && confidence < edges_[static_cast<std::size_t>(b)]) --b;
  while (b < last && confidence >= edges_[static_cast<std::size_t>(b) + 1]) ++b;
  return b;
}

double BinningModel::squared_error() const {
  Index n = 0;
  for (Index c : counts_) n += c;
  double sum = 0.0;
  for (std::size_t b = 0; b < gaps_.size(); ++b) {
    sum += static_cast<double>(counts_[b]) / static_cast<double>(n) * gaps_[b] * gaps_[b];
  }
  return sum;
}

Eigen::MatrixXd BinningModel::features(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd f(1, points.cols());
  for (Index i = 0; i < points.cols(); ++i) f(0, i) = gap_at(points(0, i));
  return f;
}

Eigen::MatrixXd BinningModel::pair_matrix(const Eigen::MatrixXd& points) const {
  const Eigen::MatrixXd f = features(points);
  return f.transpose() * f;
}

Eigen::VectorXd BinningModel::diagonal(const Eigen::MatrixXd& points) const {
  return features(points).row(0).array().square().matrix().transpose();
}

}  // namespace calrisk
