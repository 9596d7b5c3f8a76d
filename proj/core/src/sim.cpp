#include "calrisk/sim.hpp"

#include <cmath>
#include <random>

#include "calrisk/risk.hpp"

namespace calrisk {

namespace {

// log of a Gamma(shape, 1) draw. Shapes below 1 use the boost
// G_a = G_{a+1} U^{1/a}, which stays finite in log space.
double log_gamma_draw(double shape, std::mt19937_64& rng) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> gamma(shape, 1.0);
    return std::log(gamma(rng));
  }
  std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = uniform(rng);
  while (u <= 0.0) u = uniform(rng);
  return std::log(gamma(rng)) + std::log(u) / shape;
}

int categorical_draw(const Eigen::VectorXd& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double acc = 0.0;
  for (Index k = 0; k < p.size(); ++k) {
    acc += p[k];
    if (u < acc) return static_cast<int>(k);
  }
  // u landed in the rounding slack above the cumulative sum.
  Index last = p.size() - 1;
  while (last > 0 && p[last] == 0.0) --last;
  return static_cast<int>(last);
}

}  // namespace

void SimConfig::validate() const {
  if (n < 2) throw InputError("simulation needs n >= 2");
  if (d < 2) throw InputError("simulation needs d >= 2");
  if (!(alpha > 0.0)) throw InputError("simulation needs alpha > 0");
  if (!(model_temp > 0.0)) throw InputError("simulation needs model_temp > 0");
}

SimDataset simulate(const SimConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  Eigen::MatrixXd truth(cfg.d, cfg.n);
  Eigen::MatrixXd preds(cfg.d, cfg.n);
  std::vector<int> labels(static_cast<std::size_t>(cfg.n));
  Eigen::VectorXd log_g(cfg.d);
  for (Index i = 0; i < cfg.n; ++i) {
    for (Index k = 0; k < cfg.d; ++k) log_g[k] = log_gamma_draw(cfg.alpha, rng);
    const Eigen::VectorXd p = softmax(log_g);
    truth.col(i) = p;
    labels[static_cast<std::size_t>(i)] = categorical_draw(p, rng);
    const Eigen::VectorXd logits = cfg.model_temp * p.cwiseMax(kSimLogClip).array().log();
    preds.col(i) = softmax(logits);
  }
  return {cfg, Dataset::canonical(std::move(preds), std::move(labels)), std::move(truth)};
}

SimModel::SimModel(double theta, double model_temp) : theta_(theta), model_temp_(model_temp) {
  if (!std::isfinite(theta)) throw InputError("h_sim: theta must be finite");
  if (!(model_temp > 0.0)) throw InputError("h_sim: model_temp must be positive");
}

Eigen::VectorXd SimModel::recalibrated(Point p) const {
  const Eigen::VectorXd logits = (theta_ / model_temp_) * p.cwiseMax(kSimLogClip).array().log();
  return softmax(logits);
}

double SimModel::operator()(Point p, Point q) const {
  return (p - recalibrated(p)).dot(q - recalibrated(q));
}

Eigen::MatrixXd SimModel::features(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd f(points.rows(), points.cols());
  for (Index i = 0; i < points.cols(); ++i) f.col(i) = points.col(i) - recalibrated(points.col(i));
  return f;
}

Eigen::MatrixXd SimModel::pair_matrix(const Eigen::MatrixXd& points) const {
  const Eigen::MatrixXd f = features(points);
  return f.transpose() * f;
}

Eigen::VectorXd SimModel::diagonal(const Eigen::MatrixXd& points) const {
  return features(points).colwise().squaredNorm().transpose();
}

double eval_hsim(double theta, Point p, Point q, double model_temp) {
  return SimModel(theta, model_temp)(p, q);
}

std::vector<CurvePoint> risk_curve(const SimDataset& sim, std::span<const double> thetas) {
  if (thetas.size() < 2) throw InputError("risk curve needs at least two thetas");
  std::vector<CurvePoint> curve;
  curve.reserve(thetas.size());
  for (double theta : thetas) {
    const EstimatorModel model = SimModel(theta, sim.config.model_temp);
    curve.push_back({theta, empirical_risk(model, sim.dataset).value});
  }
  return curve;
}

SeedCurveSummary risk_curves_over_seeds(SimConfig cfg, std::span<const double> thetas, int seeds) {
  if (seeds < 1) throw InputError("need at least one seed");
  SeedCurveSummary out;
  out.thetas.assign(thetas.begin(), thetas.end());
  const std::uint64_t base = cfg.seed;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = base + static_cast<std::uint64_t>(s);
    const SimDataset sim = simulate(cfg);
    const auto curve = risk_curve(sim, thetas);
    std::vector<double> row;
    row.reserve(curve.size());
    std::size_t best = 0;
    for (std::size_t t = 0; t < curve.size(); ++t) {
      row.push_back(curve[t].risk);
      if (curve[t].risk < curve[best].risk) best = t;
    }
    out.argmin_theta.push_back(curve[best].theta);
    out.risks.push_back(std::move(row));

    const Dataset& ds = sim.dataset;
    Index hits = 0;
    for (Index i = 0; i < ds.size(); ++i) hits += argmax(ds.point(i)) == ds.label(i) ? 1 : 0;
    out.accuracy.push_back(static_cast<double>(hits) / static_cast<double>(ds.size()));
  }
  const std::size_t m = thetas.size();
  out.mean.assign(m, 0.0);
  out.sd.assign(m, 0.0);
  out.se.assign(m, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    double sum = 0.0;
    for (const auto& row : out.risks) sum += row[t];
    const double mean = sum / seeds;
    double ss = 0.0;
    for (const auto& row : out.risks) ss += (row[t] - mean) * (row[t] - mean);
    out.mean[t] = mean;
    out.sd[t] = seeds > 1 ? std::sqrt(ss / (seeds - 1)) : 0.0;
    out.se[t] = out.sd[t] / std::sqrt(static_cast<double>(seeds));
  }
  return out;
}

std::vector<double> default_theta_grid() {
  return {0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0};
}

}  // namespace calrisk
