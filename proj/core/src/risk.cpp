#include "calrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace calrisk {

namespace {

void require_pairs(const Dataset& eval) {
  if (eval.size() < 2) throw InputError("empirical risk needs at least two evaluation samples");
}

RiskValue finish(double sum, Index used, Index dropped) {
  if (used == 0) throw NumericError("every prediction pair was dropped as NaN");
  return {sum / static_cast<double>(used), used, dropped};
}

}  // namespace

RiskValue risk_from_pair_matrix(const Eigen::MatrixXd& predictions, const Dataset& eval) {
  require_pairs(eval);
  const Index n = eval.size();
  if (predictions.rows() != n || predictions.cols() != n) {
    throw InputError("prediction matrix does not match the evaluation set");
  }
  const Eigen::MatrixXd targets = pair_targets(eval);
  double sum = 0.0;
  Index used = 0;
  Index dropped = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      if (std::isnan(predictions(i, j)) || std::isnan(predictions(j, i))) {
        ++dropped;
        continue;
      }
      const double e = targets(i, j) - predictions(i, j);
      sum += e * e;
      ++used;
    }
  }
  return finish(sum, used, dropped);
}

RiskValue empirical_risk_pointwise(const PairFunction& h, const Dataset& eval) {
  require_pairs(eval);
  const Index n = eval.size();
  Eigen::MatrixXd predictions(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      predictions(i, j) = i == j ? 0.0 : h(eval.point(i), eval.point(j));
    }
  }
  return risk_from_pair_matrix(predictions, eval);
}

RiskValue empirical_risk(const EstimatorModel& h, const Dataset& eval) {
  if (const auto* kkr = std::get_if<KkrModel>(&h)) return empirical_risk_kkr(*kkr, eval);
  require_pairs(eval);
  return risk_from_pair_matrix(pair_matrix(h, eval.points()), eval);
}

RiskValue empirical_risk_kkr(const KkrModel& model, const Dataset& eval) {
  require_pairs(eval);
  return risk_from_pair_matrix(model.pair_matrix(eval.points()), eval);
}

RiskValue empirical_risk_kkr(const KkrModel& model, const Eigen::MatrixXd& projected,
                             const Dataset& eval) {
  require_pairs(eval);
  return risk_from_pair_matrix(model.pair_matrix_projected(projected), eval);
}

RiskValue empirical_risk_linear(const PairFunction& h, const Dataset& eval, std::uint64_t seed) {
  require_pairs(eval);
  const Index n = eval.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const Eigen::MatrixXd residuals = eval.residuals();
  double sum = 0.0;
  Index used = 0;
  Index dropped = 0;
  for (Index k = 0; k < n; ++k) {
    const Index i = order[static_cast<std::size_t>(k)];
    const Index j = order[static_cast<std::size_t>((k + 1) % n)];
    const double forward = h(eval.point(i), eval.point(j));
    const double backward = h(eval.point(j), eval.point(i));
    if (std::isnan(forward) || std::isnan(backward)) {
      ++dropped;
      continue;
    }
    const double e = residuals.col(i).dot(residuals.col(j)) - forward;
    sum += e * e;
    ++used;
  }
  return finish(sum, used, dropped);
}

RiskValue empirical_risk_linear(const EstimatorModel& h, const Dataset& eval, std::uint64_t seed) {
  return empirical_risk_linear([&h](Point p, Point q) { return evaluate(h, p, q); }, eval, seed);
}

}  // namespace calrisk
