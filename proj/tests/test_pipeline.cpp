#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "calrisk/pipeline.hpp"
#include "oracles.hpp"

using namespace calrisk;

TEST_CASE("split sizes and roles") {
  std::mt19937_64 rng(1);
  const Dataset ds = oracle::random_canonical(101, 3, rng);
  const auto [tune, test] = split_dataset(ds, 0.2, 7);
  CHECK(test.size() == 20);
  CHECK(tune.size() == 81);
  CHECK(tune.role() == Role::tune);
  CHECK(test.role() == Role::test);
  const auto [tune2, test2] = split_dataset(ds, 0.2, 7);
  CHECK(test2.points() == test.points());
  CHECK_THROWS_AS(split_dataset(ds, 1.0, 0), InputError);
  CHECK_THROWS_AS(split_dataset(ds, 0.0, 0), InputError);
}

TEST_CASE("folds partition the index set") {
  const auto folds = fold_indices(23, 5, 3);
  CHECK(folds.size() == 5);
  std::set<Index> seen;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    CHECK(folds[f].size() == (f < 3 ? 5u : 4u));
    seen.insert(folds[f].begin(), folds[f].end());
  }
  CHECK(seen.size() == 23);
  CHECK(*seen.rbegin() == 22);
  CHECK_THROWS_AS(fold_indices(3, 5, 0), InputError);
  CHECK_THROWS_AS(fold_indices(10, 1, 0), InputError);
}

TEST_CASE("cross-validation refuses the test split") {
  std::mt19937_64 rng(2);
  const auto [tune, test] = split_dataset(oracle::random_canonical(50, 3, rng), 0.2, 0);
  CHECK_THROWS_AS(CvWorkspace(test, 5, 0), InputError);
  CHECK_NOTHROW(CvWorkspace(tune, 5, 0));
}

TEST_CASE("workspace folds are disjoint and cover the tuning set") {
  std::mt19937_64 rng(3);
  const Dataset tune = oracle::random_canonical(40, 3, rng).with_role(Role::tune);
  CvWorkspace ws(tune, 4, 9);
  Index total = 0;
  for (int f = 0; f < 4; ++f) {
    CHECK(ws.train(f).size() + ws.holdout(f).size() == 40);
    CHECK(ws.holdout(f).role() == Role::fold_holdout);
    total += ws.holdout(f).size();
  }
  CHECK(total == 40);
  CHECK(ws.basis(0, 0.5).get() == ws.basis(0, 0.5).get());
  CHECK(ws.basis(0, 0.5).get() != ws.basis(0, 0.25).get());
}

TEST_CASE("constant family picks the risk minimizer") {
  std::mt19937_64 rng(4);
  const Dataset tune = oracle::random_canonical(200, 3, rng).with_role(Role::tune);
  const HyperGrid grid{Family::constant, {1.0, 0.0, -1.0}};
  const CvResult cv = cross_validate(tune, grid, 5, {}, 11);
  CHECK(cv.best_hyper == 0.0);
  CHECK(cv.fold_models.size() == 5);
  CHECK(cv.fold_risks.size() == 5);
  CHECK(cv.grid.size() == 3);
  for (const auto& p : cv.grid) CHECK(p.mean_risk >= cv.mean_risk);
}

TEST_CASE("ties resolve toward fewer bins") {
  // Every confidence equal: all bin counts give the same gaps and risks.
  Eigen::VectorXd c = Eigen::VectorXd::Constant(40, 0.55);
  std::vector<int> a(40);
  for (int i = 0; i < 40; ++i) a[static_cast<std::size_t>(i)] = i % 3 == 0 ? 0 : 1;
  const Dataset tune = Dataset::top_label(c, a, Role::tune);
  const CvResult cv = cross_validate(tune, HyperGrid{Family::bin, {20.0, 5.0, 10.0}}, 4, {}, 0);
  CHECK(cv.grid[0].mean_risk == cv.grid[1].mean_risk);
  CHECK(cv.best_hyper == 5.0);
}

TEST_CASE("ties resolve toward wider bandwidth") {
  Eigen::VectorXd c = Eigen::VectorXd::Constant(30, 0.7);
  std::vector<int> a(30, 1);
  for (int i = 0; i < 9; ++i) a[static_cast<std::size_t>(i)] = 0;
  const Dataset tune = Dataset::top_label(c, a, Role::tune);
  const CvResult cv = cross_validate(tune, HyperGrid{Family::kde, {0.1, 0.5, 0.3}}, 3, {}, 0);
  CHECK(cv.best_hyper == 0.5);
}

TEST_CASE("failed grid points are recorded and skipped") {
  // Distinct, well separated confidences: at bandwidth 1e-7 every holdout
  // kernel mass underflows, every pair is dropped and the point fails.
  Eigen::VectorXd c(20);
  std::vector<int> a(20);
  for (int i = 0; i < 20; ++i) {
    c[i] = 0.04 + 0.045 * i;
    a[static_cast<std::size_t>(i)] = i % 2;
  }
  const Dataset tune = Dataset::top_label(c, a, Role::tune);
  const CvResult cv = cross_validate(tune, HyperGrid{Family::kde, {1e-7, 0.5}}, 4, {}, 0);
  REQUIRE(cv.grid.size() == 2);
  CHECK(cv.grid[0].failed);
  CHECK_FALSE(cv.grid[0].failure.empty());
  CHECK_FALSE(cv.grid[1].failed);
  CHECK(cv.best_hyper == 0.5);
  CHECK_THROWS_AS(cross_validate(tune, HyperGrid{Family::kde, {1e-7}}, 4, {}, 0), NumericError);
  CHECK_THROWS_AS(cross_validate(tune, HyperGrid{Family::kde, {}}, 4, {}, 0), InputError);
}

TEST_CASE("final estimate averages fold diagonals") {
  std::mt19937_64 rng(5);
  const Dataset test = oracle::random_canonical(30, 3, rng).with_role(Role::test);
  const std::vector<EstimatorModel> models{ConstantModel(0.01), ConstantModel(0.03)};
  const CalibrationEstimate est = final_estimate(models, test);
  CHECK(est.squared_value == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(est.value == doctest::Approx(std::sqrt(0.02)).epsilon(1e-14));
  CHECK_FALSE(est.clipped);
  CHECK(est.fold_means.size() == 2);
  CHECK(est.fold_se == doctest::Approx(0.01).epsilon(1e-12));

  const std::vector<EstimatorModel> negative{ConstantModel(-0.01)};
  const CalibrationEstimate neg = final_estimate(negative, test);
  CHECK(neg.value == 0.0);
  CHECK(neg.clipped);
}

TEST_CASE("mean and standard error") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto [mean, se] = mean_and_se(v);
  CHECK(mean == 2.5);
  CHECK(se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("default grids") {
  CHECK(default_grid(Family::bin, Mode::top_label, 100).values.size() == 20);
  CHECK(default_grid(Family::kde, Mode::canonical, 100).values.size() == 20);
  const auto kkr = default_grid(Family::kkr, Mode::top_label, 100).values;
  CHECK(kkr.size() == 9);
  CHECK(kkr.front() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(default_grid(Family::kkr, Mode::canonical, 100).values.size() == 18);
  CHECK(default_grid(Family::ukkr, Mode::canonical, 100).values.size() == 18);
  CHECK(default_grid(Family::ukkr, Mode::top_label, 100).values.front() == doctest::Approx(1.0).epsilon(1e-14));
}
