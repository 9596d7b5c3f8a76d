#include <doctest.h>

#include <cmath>
#include <random>

#include "calrisk/kde.hpp"
#include "oracles.hpp"

using namespace calrisk;

TEST_CASE("kde matches the direct ratio") {
  std::mt19937_64 rng(8);
  for (double bw : {0.05, 0.2, 1.0}) {
    const Dataset train = oracle::random_canonical(40, 3, rng, 2.0);
    const Dataset eval = oracle::random_canonical(10, 3, rng, 2.0);
    const KdeModel m = KdeModel::fit(train, bw);
    for (Index i = 0; i < eval.size(); ++i) {
      const Eigen::VectorXd g = m.label_estimate(eval.point(i));
      const Eigen::VectorXd want = oracle::kde_ratio_direct(train, bw, eval.point(i));
      CHECK((g - want).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (Index j = 0; j < eval.size(); ++j) {
        CHECK(m(eval.point(i), eval.point(j)) ==
              doctest::Approx(oracle::kde_direct(train, bw, eval.point(i), eval.point(j))).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("kde in top-label mode") {
  std::mt19937_64 rng(2);
  const Dataset train = oracle::random_top_label(60, rng);
  const KdeModel m = KdeModel::fit(train, 0.1);
  Eigen::VectorXd q(1);
  q << 0.7;
  const Eigen::VectorXd g = m.label_estimate(q);
  CHECK(g.size() == 1);
  CHECK(g[0] >= 0.0);
  CHECK(g[0] <= 1.0);
  CHECK(g[0] == doctest::Approx(oracle::kde_ratio_direct(train, 0.1, q)[0]).epsilon(1e-12));
  CHECK(m(q, q) == doctest::Approx((0.7 - g[0]) * (0.7 - g[0])).epsilon(1e-12));
}

TEST_CASE("log-space weights survive small bandwidths") {
  // The direct sum overflows here; the shifted ratio stays finite.
  Eigen::MatrixXd p(2, 3);
  p << 0.5, 0.52, 0.9,
       0.5, 0.48, 0.1;
  const Dataset train = Dataset::canonical(p, {0, 1, 0});
  const KdeModel m = KdeModel::fit(train, 1e-4);
  Eigen::VectorXd q(2);
  q << 0.51, 0.49;
  const Eigen::VectorXd g = m.label_estimate(q);
  CHECK(std::isfinite(g[0]));
  CHECK(g.sum() == doctest::Approx(1.0));
}

TEST_CASE("kde yields NaN when every kernel value underflows") {
  Eigen::MatrixXd p(2, 2);
  p << 1e-10, 2e-10,
       1.0 - 1e-10, 1.0 - 2e-10;
  const Dataset train = Dataset::canonical(p, {0, 1});
  const KdeModel m = KdeModel::fit(train, 1e-6);
  Eigen::VectorXd q(2);
  q << 1.0, 0.0;
  CHECK(std::isnan(m.label_estimate(q)[0]));
  CHECK(std::isnan(m(q, q)));
  CHECK(std::isnan(m.diagonal(q)[0]));
}

TEST_CASE("diagonal mean equals the squared kde error") {
  std::mt19937_64 rng(31);
  for (double bw : {0.05, 0.3}) {
    const Dataset ds = oracle::random_canonical(200, 3, rng, 1.5);
    const KdeModel m = KdeModel::fit(ds, bw);
    CHECK(m.diagonal(ds.points()).mean() ==
          doctest::Approx(oracle::kde_squared_error_direct(ds, bw)).epsilon(1e-10));
  }
}

TEST_CASE("pair matrix agrees with pointwise evaluation") {
  std::mt19937_64 rng(5);
  const Dataset train = oracle::random_canonical(50, 4, rng);
  const Dataset eval = oracle::random_canonical(15, 4, rng);
  const KdeModel m = KdeModel::fit(train, 0.1);
  const Eigen::MatrixXd h = m.pair_matrix(eval.points());
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  for (Index i = 0; i < 15; ++i)
    for (Index j = 0; j < 15; ++j)
      CHECK(h(i, j) == doctest::Approx(m(eval.point(i), eval.point(j))).epsilon(1e-12));
  CHECK_THROWS_AS(KdeModel::fit(train, 0.0), InputError);
}
