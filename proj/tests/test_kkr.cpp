#include <doctest.h>

#include <random>

#include "calrisk/kkr.hpp"
#include "oracles.hpp"

using namespace calrisk;

TEST_CASE("kkr matches the dense Kronecker solve") {
  std::mt19937_64 rng(101);
  for (Index n : {2, 5, 9}) {
    for (double lambda : {0.01, 1.0}) {
      const Dataset train = oracle::random_canonical(n, 3, rng);
      const Dataset eval = oracle::random_canonical(4, 3, rng);
      const KkrModel m = KkrModel::fit(train, lambda, 0.5);
      for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 4; ++j) {
          const double want = oracle::kkr_naive(train, lambda, 0.5, eval.point(i), eval.point(j));
          CHECK(m(eval.point(i), eval.point(j)) == doctest::Approx(want).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("naive oracle refuses large n") {
  std::mt19937_64 rng(1);
  const Dataset train = oracle::random_canonical(13, 2, rng);
  CHECK_THROWS_AS(oracle::kkr_naive(train, 1.0, 0.5, train.point(0), train.point(1)), InputError);
}

TEST_CASE("kkr core is symmetric and predictions are symmetric") {
  std::mt19937_64 rng(7);
  const Dataset train = oracle::random_canonical(40, 4, rng);
  const Dataset eval = oracle::random_canonical(12, 4, rng);
  const KkrModel m = KkrModel::fit(train, 1e-3, 0.5);
  CHECK((m.core() - m.core().transpose()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd h = m.pair_matrix(eval.points());
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::MatrixXd hp = m.pair_matrix_projected(m.basis().project(eval.points()));
  CHECK((h - hp).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((m.diagonal(eval.points()) - h.diagonal()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("kernel basis reconstructs the Gram matrix") {
  std::mt19937_64 rng(3);
  const Dataset train = oracle::random_canonical(30, 3, rng);
  const auto basis = KernelBasis::build(train, 0.5);
  const Eigen::MatrixXd& q = basis->eigenvectors();
  const Eigen::MatrixXd k = q * basis->eigenvalues().asDiagonal() * q.transpose();
  CHECK((k - rbf_gram(train.points(), train.points(), 0.5)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(basis->eigenvalues().minCoeff() >= 0.0);
}

TEST_CASE("basis stays orthogonal on a clustered 1-d spectrum") {
  // Top-label confidences give a Gram matrix with hundreds of eigenvalues
  // at rounding level.
  std::mt19937_64 rng(29);
  const Dataset train = oracle::calibrated_canonical(300, 3, rng).to_top_label();
  const auto basis = KernelBasis::build(train, 0.5);
  const Eigen::MatrixXd& q = basis->eigenvectors();
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(300, 300)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(basis->residual_projection().norm() == doctest::Approx(basis->residuals().norm()).epsilon(1e-10));

  const Dataset eval = oracle::calibrated_canonical(5, 3, rng).to_top_label();
  const UkkrModel direct = UkkrModel::fit(train, 1.0, 0.5);
  const UkkrModel eig = UkkrModel::fit(basis, 1.0);
  for (Index i = 0; i < 5; ++i)
    CHECK(eig(eval.point(i), eval.point(i)) == doctest::Approx(direct(eval.point(i), eval.point(i))).epsilon(1e-8));
}

TEST_CASE("kkr with lambda 0 on a singular Gram matrix is a numeric error") {
  Eigen::MatrixXd p(2, 3);
  p << 0.5, 0.5, 0.2,
       0.5, 0.5, 0.8;
  const Dataset train = Dataset::canonical(p, {0, 1, 1});
  CHECK_THROWS_AS(KkrModel::fit(train, 0.0, 0.5), NumericError);
  CHECK_THROWS_AS(KkrModel::fit(train, -1.0, 0.5), InputError);
}

TEST_CASE("ukkr matches the explicit inverse") {
  std::mt19937_64 rng(17);
  for (double lambda : {1e-3, 0.1, 2.0}) {
    const Dataset train = oracle::random_canonical(25, 3, rng);
    const Dataset eval = oracle::random_canonical(6, 3, rng);
    const UkkrModel direct = UkkrModel::fit(train, lambda, 0.5);
    const UkkrModel eig = UkkrModel::fit(KernelBasis::build(train, 0.5), lambda);
    for (Index i = 0; i < 6; ++i) {
      for (Index j = 0; j < 6; ++j) {
        const double want = oracle::ukkr_factored(train, lambda, 0.5, eval.point(i), eval.point(j));
        CHECK(direct(eval.point(i), eval.point(j)) == doctest::Approx(want).epsilon(1e-9));
        CHECK(eig(eval.point(i), eval.point(j)) == doctest::Approx(want).epsilon(1e-8));
      }
    }
    CHECK((direct.core() - direct.projection().transpose() * direct.projection()).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("ukkr and kkr agree at lambda 0") {
  std::mt19937_64 rng(19);
  Eigen::MatrixXd p(3, 6);
  for (Index i = 0; i < 6; ++i) p.col(i) = oracle::random_simplex(3, rng);
  const Dataset train = Dataset::canonical(p, {0, 1, 2, 0, 1, 2});
  const Dataset eval = oracle::random_canonical(5, 3, rng);
  const KkrModel k = KkrModel::fit(train, 0.0, 2.0);
  const UkkrModel u = UkkrModel::fit(train, 0.0, 2.0);
  const Eigen::MatrixXd hk = k.pair_matrix(eval.points());
  const Eigen::MatrixXd hu = u.pair_matrix(eval.points());
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) CHECK(hk(i, j) == doctest::Approx(hu(i, j)).epsilon(1e-6));
}

TEST_CASE("kkr in top-label mode") {
  std::mt19937_64 rng(23);
  const Dataset train = oracle::random_top_label(10, rng);
  const Dataset eval = oracle::random_top_label(3, rng);
  const KkrModel m = KkrModel::fit(train, 0.05, 0.5);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      CHECK(m(eval.point(i), eval.point(j)) ==
            doctest::Approx(oracle::kkr_naive(train, 0.05, 0.5, eval.point(i), eval.point(j))).epsilon(1e-9));
}
