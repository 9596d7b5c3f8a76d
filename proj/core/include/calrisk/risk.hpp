#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "calrisk/core.hpp"
#include "calrisk/estimator.hpp"

namespace calrisk {

// U-statistic estimate of E[(<f(X) - e_Y, f(X') - e_Y'> - h(f(X), f(X')))^2].
struct RiskValue {
  double value = 0.0;
  Index pairs_used = 0;
  Index dropped_nan = 0;  // ordered pairs dropped for a NaN prediction
};

using PairFunction = std::function<double(Point, Point)>;

// Averages the squared error over all ordered pairs i != j given the
// prediction matrix H_ij = h(x_i, x_j). A pair is dropped when H_ij or H_ji
// is NaN. The evaluation set must be disjoint from h's training data.
RiskValue risk_from_pair_matrix(const Eigen::MatrixXd& predictions, const Dataset& eval);

// Evaluates h once per ordered pair.
RiskValue empirical_risk_pointwise(const PairFunction& h, const Dataset& eval);

// Batched prediction matrix; kernel ridge models take the O(n^3) path.
RiskValue empirical_risk(const EstimatorModel& h, const Dataset& eval);

// H = K_{X,X'}^T Q core Q^T K_{X,X'}.
RiskValue empirical_risk_kkr(const KkrModel& model, const Dataset& eval);
// Same, with U = Q^T K_{X,X'} precomputed (shared across ridge constants).
RiskValue empirical_risk_kkr(const KkrModel& model, const Eigen::MatrixXd& projected,
                             const Dataset& eval);

// Incomplete U-statistic over the circular pairs (pi_i, pi_{i+1 mod n}) of a
// seeded shuffle pi: O(n) evaluations of h, every sample used twice.
RiskValue empirical_risk_linear(const PairFunction& h, const Dataset& eval, std::uint64_t seed);
RiskValue empirical_risk_linear(const EstimatorModel& h, const Dataset& eval, std::uint64_t seed);

}  // namespace calrisk
