#include <doctest.h>

#include <cmath>
#include <numeric>

#include "calrisk/sim.hpp"

using namespace calrisk;

TEST_CASE("simulation is reproducible per seed") {
  SimConfig cfg;
  cfg.n = 100;
  cfg.seed = 12;
  const SimDataset a = simulate(cfg);
  const SimDataset b = simulate(cfg);
  CHECK(a.dataset.points() == b.dataset.points());
  CHECK(std::equal(a.dataset.labels().begin(), a.dataset.labels().end(), b.dataset.labels().begin()));
  cfg.seed = 13;
  CHECK(simulate(cfg).dataset.points() != a.dataset.points());

  CHECK(a.dataset.dim() == 5);
  CHECK(a.dataset.size() == 100);
  CHECK((a.ground_truth.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(a.ground_truth.minCoeff() >= 0.0);
}

TEST_CASE("theta one inverts the simulated miscalibration") {
  SimConfig cfg;
  cfg.n = 200;
  cfg.alpha = 1.0;  // keeps every probability well above the log clip
  const SimDataset sim = simulate(cfg);
  const SimModel ideal(1.0, cfg.model_temp);
  for (Index i = 0; i < sim.dataset.size(); ++i) {
    if (sim.ground_truth.col(i).minCoeff() <= kSimLogClip) continue;
    CHECK((ideal.recalibrated(sim.dataset.point(i)) - sim.ground_truth.col(i)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("h_sim at theta 0 compares against the uniform vector") {
  Eigen::VectorXd p(3), q(3);
  p << 0.7, 0.2, 0.1;
  q << 0.1, 0.1, 0.8;
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  CHECK(eval_hsim(0.0, p, q) == doctest::Approx((p - u).dot(q - u)).epsilon(1e-14));
  CHECK(eval_hsim(1.3, p, q) == doctest::Approx(eval_hsim(1.3, q, p)).epsilon(1e-15));
  CHECK_THROWS_AS(SimModel(1.0, 0.0), InputError);
}

TEST_CASE("risk curves over seeds") {
  SimConfig cfg;
  cfg.n = 80;
  cfg.seed = 3;
  const std::vector<double> thetas{0.5, 1.0, 2.0};
  const SeedCurveSummary s = risk_curves_over_seeds(cfg, thetas, 4);
  CHECK(s.risks.size() == 4);
  CHECK(s.argmin_theta.size() == 4);
  CHECK(s.accuracy.size() == 4);
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    double sum = 0.0;
    for (const auto& row : s.risks) sum += row[t];
    CHECK(s.mean[t] == doctest::Approx(sum / 4.0).epsilon(1e-14));
    CHECK(s.se[t] == doctest::Approx(s.sd[t] / 2.0).epsilon(1e-14));
  }
  // Seeds are base, base + 1, ...
  cfg.seed = 5;
  const auto curve = risk_curve(simulate(cfg), thetas);
  CHECK(curve[1].risk == s.risks[2][1]);

  const auto grid = default_theta_grid();
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(std::find(grid.begin(), grid.end(), 1.0) != grid.end());
  SimConfig bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(simulate(bad), InputError);
}
