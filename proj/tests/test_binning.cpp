#include <doctest.h>

#include <random>

#include "calrisk/binning.hpp"
#include "oracles.hpp"

using namespace calrisk;

namespace {

// Bin 0 of 2: four points at 0.2, one correct -> gap 0.2 - 0.25 = -0.05.
// Bin 1 of 2: two points at 0.6, one correct  -> gap 0.6 - 0.5  =  0.1.
Dataset toy() {
  Eigen::VectorXd c(6);
  c << 0.2, 0.2, 0.6, 0.2, 0.6, 0.2;
  return Dataset::top_label(c, {1, 0, 1, 0, 0, 0});
}

}  // namespace

TEST_CASE("binning gaps on a toy set") {
  const BinningModel m = BinningModel::fit(toy(), 2);
  CHECK(m.bins() == 2);
  CHECK(m.gaps()[0] == doctest::Approx(-0.05).epsilon(1e-14));
  CHECK(m.gaps()[1] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(m.counts()[0] == 4);
  CHECK(m.counts()[1] == 2);
  CHECK(m(0.6, 0.2) == doctest::Approx(-0.005).epsilon(1e-13));
  CHECK(m(0.6, 0.6) == doctest::Approx(0.01).epsilon(1e-13));
  // 2/6 * 0.01 + 4/6 * 0.0025
  CHECK(m.squared_error() == doctest::Approx(0.005).epsilon(1e-13));
}

TEST_CASE("bin boundaries") {
  const BinningModel m = BinningModel::fit(toy(), 4);
  CHECK(m.bin_of(0.0) == 0);
  CHECK(m.bin_of(0.25) == 1);
  CHECK(m.bin_of(0.5) == 2);
  CHECK(m.bin_of(0.999) == 3);
  CHECK(m.bin_of(1.0) == 3);
  // No training point falls in [0.75, 1].
  CHECK(m.gaps()[3] == 0.0);
  CHECK(m.counts()[3] == 0);
  CHECK(m(0.9, 0.2) == 0.0);
  CHECK_THROWS_AS(BinningModel::fit(toy(), 0), InputError);
}

TEST_CASE("binning rejects canonical data") {
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(BinningModel::fit(oracle::random_canonical(10, 3, rng), 5), InputError);
}

TEST_CASE("diagonal mean equals the squared binned error") {
  std::mt19937_64 rng(21);
  for (int bins : {1, 3, 10, 15, 40}) {
    const Dataset ds = oracle::random_top_label(200, rng);
    const BinningModel m = BinningModel::fit(ds, bins);
    const double plug_in = m.diagonal(ds.points()).mean();
    CHECK(plug_in == doctest::Approx(oracle::binned_squared_error_direct(ds, bins)).epsilon(1e-12));
    CHECK(plug_in == doctest::Approx(m.squared_error()).epsilon(1e-12));
  }
}

TEST_CASE("pair matrix is a rank one outer product") {
  std::mt19937_64 rng(4);
  const Dataset ds = oracle::random_top_label(30, rng);
  const BinningModel m = BinningModel::fit(ds, 7);
  const Eigen::MatrixXd f = m.features(ds.points());
  const Eigen::MatrixXd h = m.pair_matrix(ds.points());
  CHECK((h - f.transpose() * f).cwiseAbs().maxCoeff() <= 1e-15);
  for (Index i = 0; i < 30; ++i)
    for (Index j = 0; j < 30; ++j) CHECK(h(i, j) == doctest::Approx(m(ds.point(i), ds.point(j))));
}
