#include <doctest.h>

#include <set>
#include <string>

#include <gwb/panel.hpp>
#include <gwb/sampling.hpp>

#include "test_util.hpp"

using namespace gwb;
using test::expect_error;
using test::max_abs_diff;
using test::seeded_spd;
using test::seeded_vector;

TEST_CASE("multivariate normal sampling reproduces its moments") {
  const Index n = 100000;
  Vector mean(2);
  mean << 1.0, -2.0;
  Matrix cov(2, 2);
  cov << 2.0, 0.8, 0.8, 1.0;

  Rng rng(12);
  const Matrix draws = sample_mvn(mean, cov, n, rng);
  REQUIRE(draws.rows() == n);
  REQUIRE(draws.cols() == 2);

  const Vector m = draws.colwise().mean();
  // 4-sigma band on each mean component.
  for (Index j = 0; j < 2; ++j)
    CHECK(std::abs(m(j) - mean(j)) < 4.0 * std::sqrt(cov(j, j) / n));

  const Matrix centered = draws.rowwise() - m.transpose();
  const Matrix cov_hat = centered.transpose() * centered / double(n - 1);
  CHECK((cov_hat - cov).norm() < 0.05);
}

TEST_CASE("zero covariance reproduces the mean exactly") {
  Vector mean(3);
  mean << 0.5, -1.5, 2.0;
  Rng rng(3);
  const Matrix draws = sample_mvn(mean, Matrix::Zero(3, 3), 4, rng);
  for (Index i = 0; i < 4; ++i)
    CHECK(max_abs_diff(Vector(draws.row(i).transpose()), mean) == 0.0);
}

TEST_CASE("Wishart draws average to df times the scale") {
  const Matrix scale = seeded_spd(3, 8, 0.5, 1.5);
  const int df = 5;
  Rng rng(21);
  Matrix acc = Matrix::Zero(3, 3);
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) acc += sample_wishart(df, scale, rng);
  CHECK((acc / (double(reps) * df) - scale).norm() < 0.05);

  SUBCASE("one dimension") {
    Rng r2(5);
    double sum = 0.0;
    for (int r = 0; r < 10000; ++r) sum += sample_wishart(4, Matrix::Identity(1, 1), r2)(0, 0);
    CHECK(std::abs(sum / (10000.0 * 4) - 1.0) < 0.05);
  }
  SUBCASE("zero scale yields zero") {
    Rng r2(6);
    CHECK(sample_wishart(4, Matrix::Zero(2, 2), r2).norm() == 0.0);
  }
  SUBCASE("degrees of freedom below the dimension are rejected") {
    Rng r2(7);
    expect_error(Errc::insufficient_dof,
                 [&] { sample_wishart(2, Matrix::Identity(3, 3), r2); });
  }
}

TEST_CASE("random correlation matrices are unit-diagonal and positive semidefinite") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const Index dim = 2 + rep % 4;
    const Matrix corr = random_correlation(dim, rng);
    for (Index i = 0; i < dim; ++i) CHECK(corr(i, i) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs_diff(corr, Matrix(corr.transpose())) < 1e-14);
    CHECK(min_eigenvalue(corr) > -1e-10);
    CHECK(corr.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("view synthesis is centered by kind") {
  const Index n = 3;
  const Matrix P = Matrix::Identity(n, n);
  Vector mu_fwd(n);
  mu_fwd << 0.4, -0.2, 0.1;
  const Matrix cov_fwd = seeded_spd(n, 2, 0.3, 1.0);
  const int ell_f = 120;

  auto mc_mean = [&](ViewKind kind, unsigned seed) {
    Rng rng(seed);
    Vector acc = Vector::Zero(n);
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) acc += generate_views(kind, P, mu_fwd, cov_fwd, ell_f, rng).nu;
    return Vector(acc / double(reps));
  };

  // nu scatters with variance about cov_fwd around its center.
  const double band = 4.0 * std::sqrt(cov_fwd.diagonal().maxCoeff() / 4000.0) + 0.01;
  CHECK(max_abs_diff(mc_mean(ViewKind::Correct, 31), mu_fwd) < band);
  CHECK(max_abs_diff(mc_mean(ViewKind::Incorrect, 32), Vector(-mu_fwd)) < band);
  CHECK(mc_mean(ViewKind::Ambiguous, 33).cwiseAbs().maxCoeff() < band);

  SUBCASE("view covariance estimates the pushforward") {
    Rng rng(44);
    Matrix acc = Matrix::Zero(n, n);
    const int reps = 4000;
    for (int r = 0; r < reps; ++r)
      acc += generate_views(ViewKind::Correct, P, mu_fwd, cov_fwd, ell_f, rng).cov;
    CHECK((acc / double(reps) - cov_fwd).norm() < 0.05);
  }
  SUBCASE("too short a forward window is rejected") {
    Rng rng(45);
    expect_error(Errc::insufficient_dof,
                 [&] { generate_views(ViewKind::Correct, P, mu_fwd, cov_fwd, 2, rng); });
  }
}

TEST_CASE("view kind names round-trip") {
  for (ViewKind k : {ViewKind::Correct, ViewKind::Ambiguous, ViewKind::Incorrect})
    CHECK(view_kind_from_name(view_kind_name(k)) == k);
  expect_error(Errc::parse_error, [] { view_kind_from_name("sideways"); });
}

TEST_CASE("universe subsampling") {
  ReturnsPanel panel;
  const Index n_assets = 10, n_periods = 6;
  panel.returns = Matrix::Zero(n_periods, n_assets);
  for (Index t = 0; t < n_periods; ++t)
    for (Index j = 0; j < n_assets; ++j) panel.returns(t, j) = 100.0 * double(j) + double(t);
  for (Index j = 0; j < n_assets; ++j) panel.tickers.push_back("A" + std::to_string(j));
  for (Index t = 0; t < n_periods; ++t) panel.dates.push_back("d" + std::to_string(t));

  SUBCASE("same seed picks the same subset, columns intact") {
    Rng a(9), b(9);
    const ReturnsPanel sa = subsample_universe(panel, 4, a);
    const ReturnsPanel sb = subsample_universe(panel, 4, b);
    REQUIRE(sa.n_assets() == 4);
    CHECK(sa.tickers == sb.tickers);
    CHECK(max_abs_diff(sa.returns, sb.returns) == 0.0);
    CHECK(sa.dates == panel.dates);
    // Each kept column is a verbatim copy of the original.
    for (Index c = 0; c < 4; ++c) {
      const Index src = Index(std::stoi(sa.tickers[size_t(c)].substr(1)));
      CHECK(max_abs_diff(Vector(sa.returns.col(c)), Vector(panel.returns.col(src))) == 0.0);
    }
    // Original relative order is preserved.
    for (size_t c = 1; c < sa.tickers.size(); ++c) CHECK(sa.tickers[c - 1] < sa.tickers[c]);
  }
  SUBCASE("full-size subsample returns the panel unchanged") {
    Rng rng(1);
    const ReturnsPanel s = subsample_universe(panel, n_assets, rng);
    CHECK(s.tickers == panel.tickers);
    CHECK(max_abs_diff(s.returns, panel.returns) == 0.0);
  }
  SUBCASE("every asset appears under repeated draws") {
    std::set<std::string> seen;
    for (unsigned seed = 0; seed < 60; ++seed) {
      Rng rng(seed);
      for (const auto& t : subsample_universe(panel, 3, rng).tickers) seen.insert(t);
    }
    CHECK(seen.size() == size_t(n_assets));
  }
  SUBCASE("bad sizes are rejected") {
    Rng rng(2);
    expect_error(Errc::too_few_assets, [&] { subsample_universe(panel, n_assets + 1, rng); });
    expect_error(Errc::out_of_range, [&] { subsample_universe(panel, 0, rng); });
  }
}
