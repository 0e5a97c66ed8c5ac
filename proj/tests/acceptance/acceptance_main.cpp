// End-to-end acceptance suite. Each criterion prints exactly one line:
//   [PASS] criterion NN: <what it checked>
//   [FAIL] criterion NN: <what it checked> -- <first reason>
// The process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include <gwb/estimation.hpp>
#include <gwb/gaussian.hpp>
#include <gwb/gwb_oracle.hpp>
#include <gwb/json_io.hpp>
#include <gwb/matrix_ops.hpp>
#include <gwb/mvo.hpp>
#include <gwb/panel.hpp>
#include <gwb/posterior.hpp>
#include <gwb/rng.hpp>
#include <gwb/sampling.hpp>
#include <gwb/stage1.hpp>
#include <gwb/stage2.hpp>
#include <gwb/stats.hpp>

namespace {

using namespace gwb;

// ---------------------------------------------------------------- harness --

struct Failure {
  std::string reason;
};

void require(bool ok, const std::string& reason) {
  if (!ok) throw Failure{reason};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ------------------------------------------------------- deterministic rng --

Matrix seeded_spd(Index n, unsigned seed, double lo = 0.5, double hi = 2.0) {
  Matrix g(n, n);
  std::uint64_t s = 0x9e3779b97f4a7c15ULL * (seed + 1);
  auto next = [&s]() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return static_cast<double>((s * 0x2545f4914f6cdd1dULL) >> 11) * 0x1p-53;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = 2.0 * next() - 1.0;
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  Vector eigs(n);
  for (Index i = 0; i < n; ++i) eigs(i) = lo + (hi - lo) * next();
  const Matrix m = q * eigs.asDiagonal() * q.transpose();
  return (m + m.transpose()) / 2;
}

Vector seeded_vector(Index n, unsigned seed, double scale = 1.0) {
  Vector v(n);
  std::uint64_t s = 0xbf58476d1ce4e5b9ULL * (seed + 1);
  for (Index i = 0; i < n; ++i) {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    v(i) = scale * (2.0 * (static_cast<double>((s * 0x2545f4914f6cdd1dULL) >> 11) * 0x1p-53) - 1.0);
  }
  return v;
}

Matrix rank_deficient_spd(Index n, unsigned seed) {
  Matrix cov = seeded_spd(n, seed, 0.2, 1.5);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  Vector eigs = es.eigenvalues().cwiseMax(0.0);
  eigs(0) = 0.0;
  const Matrix m = es.eigenvectors() * eigs.asDiagonal() * es.eigenvectors().transpose();
  return (m + m.transpose()) / 2;
}

ViewSet random_views(Index n_views, Index n_assets, unsigned seed, ViewTarget target) {
  ViewSet v;
  v.P = Matrix(n_views, n_assets);
  for (Index i = 0; i < n_views; ++i)
    v.P.row(i) = seeded_vector(n_assets, seed + 997 * unsigned(i) + 13).transpose();
  v.nu = seeded_vector(n_views, seed + 7, 0.1);
  v.cov = SymMatrix::covariance(seeded_spd(n_views, seed + 11, 0.4, 1.6));
  v.target = target;
  return v;
}

// View map with singular values in [0.6, 1.8], so the residual of the pinned
// limit, which shrinks like 1 / (lambda * sigma_min(P P^T)), stays within the
// stated tolerance at lambda = 1e8.
Matrix well_conditioned_map(Index n_views, Index n_assets, unsigned seed) {
  Matrix gu(n_views, n_views), gv(n_assets, n_assets);
  for (Index j = 0; j < n_views; ++j) gu.col(j) = seeded_vector(n_views, seed + unsigned(j));
  for (Index j = 0; j < n_assets; ++j)
    gv.col(j) = seeded_vector(n_assets, seed + 100 + unsigned(j));
  const Matrix u = Eigen::HouseholderQR<Matrix>(gu).householderQ();
  const Matrix v = Eigen::HouseholderQR<Matrix>(gv).householderQ();
  const Vector spectrum =
      (seeded_vector(n_views, seed + 200).array() * 0.6 + 1.2).matrix();
  return u * spectrum.asDiagonal() * v.leftCols(n_views).transpose();
}

double lagrangian_of(const Vector& mean, const Matrix& cov, const Vector& mu_p,
                     const Matrix& cov_p, const ViewSet& v, double lambda) {
  const GaussianMeasure cand{mean, SymMatrix::covariance(clip_to_psd(cov))};
  const GaussianMeasure prior{mu_p, SymMatrix::covariance(cov_p)};
  const GaussianMeasure views{v.nu, v.cov};
  return gwb_lagrangian(cand, prior, views, v.P, lambda);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GWB_CLI_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  require(status != -1, "cannot spawn the CLI");
#ifdef _WIN32
  return status;
#else
  return WEXITSTATUS(status);
#endif
}

// ------------------------------------------------------------- criteria ----

// 100 seeded blend instances, checked against the derivative-free minimizer.
void criterion_01() {
  const auto start = std::chrono::steady_clock::now();
  const double lambdas[4] = {0.25, 1.0, 4.0, 19.0};
  for (unsigned s = 0; s < 100; ++s) {
    const Index na = 2 + Index(s % 3);
    const Index nv = 1 + Index(s % std::uint64_t(na));
    const double lambda = lambdas[s % 4];

    const Vector mu = seeded_vector(na, s, 0.1);
    const Matrix cov = seeded_spd(na, s + 211, 0.4, 1.8);
    const ViewSet v = random_views(nv, na, s + 409, ViewTarget::ReturnSpace);

    const GwbCore closed = gwb_core_update(mu, cov, v, lambda);
    const OracleResult oracle = gwb_numeric_oracle(mu, cov, v, lambda, 4000, s + 1, 2);

    const double mean_gap = (closed.mean - oracle.mean).cwiseAbs().maxCoeff();
    require(mean_gap <= 1e-5,
            "instance " + std::to_string(s) + ": mean gap " + fmt(mean_gap) + " > 1e-5");

    const Vector zero = Vector::Zero(na);
    const double cov_gap = wasserstein2_sq(
        GaussianMeasure{zero, closed.cov},
        GaussianMeasure{zero, SymMatrix::covariance(clip_to_psd(oracle.cov))});
    require(cov_gap <= 1e-4,
            "instance " + std::to_string(s) + ": covariance gap " + fmt(cov_gap) + " > 1e-4");

    const double l_closed = lagrangian_of(closed.mean, closed.cov.mat(), mu, cov, v, lambda);
    const double l_oracle = lagrangian_of(oracle.mean, oracle.cov, mu, cov, v, lambda);
    require(l_closed <= l_oracle + 1e-8,
            "instance " + std::to_string(s) + ": closed-form objective " + fmt(l_closed) +
                " exceeds the searched one " + fmt(l_oracle));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  require(elapsed <= 120.0, "took " + fmt(elapsed) + "s, budget is 120s");
}

// Endpoint behavior of the blend weight.
void criterion_02() {
  for (unsigned s = 0; s < 100; ++s) {
    const Index na = 2 + Index(s % 4);
    const Index nv = 1 + Index(s % std::uint64_t(na));
    const Vector mu = seeded_vector(na, s + 17, 0.1);
    const Matrix cov = seeded_spd(na, s + 313, 0.4, 1.8);
    ViewSet v = random_views(nv, na, s + 613, ViewTarget::ReturnSpace);
    v.P = well_conditioned_map(nv, na, s + 613);
    v.nu = (seeded_vector(nv, s + 7).array().sign() *
            (seeded_vector(nv, s + 19).array().abs() * 0.1 + 0.05))
               .matrix();

    const GwbCore at_zero = gwb_core_update(mu, cov, v, 0.0);
    const double prior_gap =
        std::max((at_zero.mean - mu).cwiseAbs().maxCoeff(),
                 (at_zero.cov.mat() - cov).cwiseAbs().maxCoeff());
    require(prior_gap <= 1e-12,
            "instance " + std::to_string(s) + ": zero weight drifted " + fmt(prior_gap));

    const GwbCore pinned = gwb_core_update(mu, cov, v, 1e8);
    const double mean_res = (v.P * pinned.mean - v.nu).norm();
    require(mean_res <= 1e-5 * v.nu.norm(),
            "instance " + std::to_string(s) + ": view-space mean residual " + fmt(mean_res));
    const double cov_res =
        (v.P * pinned.cov.mat() * v.P.transpose() - v.cov.mat()).norm();
    require(cov_res <= 1e-4 * v.cov.mat().norm(),
            "instance " + std::to_string(s) + ": view-space covariance residual " + fmt(cov_res));
  }
}

// Alternate closed forms of the blended covariance, plus the commuting case.
void criterion_03() {
  const double lambdas[4] = {0.25, 1.0, 4.0, 19.0};
  for (unsigned s = 0; s < 100; ++s) {
    const Index n = 2 + Index(s % 4);
    const Vector mu = seeded_vector(n, s + 29, 0.1);
    const Matrix cov = seeded_spd(n, s + 511, 0.4, 1.8);
    ViewSet v = random_views(n, n, s + 811, ViewTarget::ReturnSpace);
    v.P = Matrix::Identity(n, n);

    const CrossCheckReport rep = gwb_cross_checks(mu, cov, v, lambdas[s % 4]);
    require(rep.applicable, "instance " + std::to_string(s) + ": cross-check not applicable");
    require(rep.max_rel_dev <= 1e-8,
            "instance " + std::to_string(s) + ": form deviation " + fmt(rep.max_rel_dev));
    require(rep.inverse_residual <= 1e-8,
            "instance " + std::to_string(s) + ": inverse-formula residual " +
                fmt(rep.inverse_residual));
  }

  for (unsigned s = 0; s < 100; ++s) {
    const Index n = 2 + Index(s % 3);
    const double lambda = lambdas[s % 4];
    Vector sp(n), sv(n);
    for (Index i = 0; i < n; ++i) {
      sp(i) = 0.5 + 0.1 * double((s + unsigned(i)) % 13);
      sv(i) = 0.4 + 0.1 * double((s + 3 * unsigned(i)) % 11);
    }
    ViewSet v;
    v.P = Matrix::Identity(n, n);
    v.nu = seeded_vector(n, s + 5, 0.1);
    v.cov = SymMatrix::covariance(Matrix(sv.array().square().matrix().asDiagonal()));
    v.target = ViewTarget::ReturnSpace;
    const GwbCore out = gwb_core_update(
        seeded_vector(n, s, 0.1),
        Matrix(sp.array().square().matrix().asDiagonal()), v, lambda);
    for (Index i = 0; i < n; ++i) {
      const double sd_ref = (sp(i) + lambda * sv(i)) / (1.0 + lambda);
      const double gap = std::abs(std::sqrt(out.cov.mat()(i, i)) - sd_ref);
      require(gap <= 1e-12, "diagonal instance " + std::to_string(s) + ": sd gap " + fmt(gap));
    }
  }
}

// Scalar Bayesian drift update against the hand-derived form.
void criterion_04() {
  Rng rng(1301);
  for (int rep = 0; rep < 1000; ++rep) {
    const double sigma2 = rng.uniform(0.05, 2.0);
    const double omega2 = rng.uniform(0.05, 2.0);
    const double tau = rng.uniform(0.01, 1.0);
    const double mu0 = rng.normal() * 0.1;
    const double nu = rng.normal() * 0.1;

    PriorSpec prior;
    prior.mu = Vector::Constant(1, mu0);
    prior.cov = SymMatrix::covariance(Matrix::Constant(1, 1, sigma2));
    prior.tau = tau;

    ViewSet v;
    v.P = Matrix::Constant(1, 1, 1.0);
    v.nu = Vector::Constant(1, nu);
    v.cov = SymMatrix::covariance(Matrix::Constant(1, 1, omega2));
    v.target = ViewTarget::DriftSpace;

    const PosteriorUpdate post = bl1_update(prior, v);
    const double ts2 = tau * sigma2;
    const double mean_ref = (omega2 * mu0 + ts2 * nu) / (omega2 + ts2);
    const double cov_ref = sigma2 + ts2 * omega2 / (omega2 + ts2);
    require(std::abs(post.mean(0) - mean_ref) <= 1e-12,
            "instance " + std::to_string(rep) + ": mean gap " +
                fmt(std::abs(post.mean(0) - mean_ref)));
    require(std::abs(post.cov.mat()(0, 0) - cov_ref) <= 1e-12,
            "instance " + std::to_string(rep) + ": variance gap " +
                fmt(std::abs(post.cov.mat()(0, 0) - cov_ref)));
  }
}

// Metric axioms of the squared transport distance.
void criterion_05() {
  for (unsigned s = 0; s < 100; ++s) {
    const Index n = 2 + Index(s % 3);
    const bool degen = s % 4 == 0;
    auto cov_for = [&](unsigned seed) {
      return degen ? rank_deficient_spd(n, seed) : seeded_spd(n, seed, 0.2, 1.5);
    };
    const GaussianMeasure a{seeded_vector(n, s + 1),
                            SymMatrix::covariance(cov_for(s + 101))};
    const GaussianMeasure b{seeded_vector(n, s + 2),
                            SymMatrix::covariance(cov_for(s + 202))};
    const GaussianMeasure c{seeded_vector(n, s + 3),
                            SymMatrix::covariance(cov_for(s + 303))};

    const double dab = wasserstein2_sq(a, b);
    const double dba = wasserstein2_sq(b, a);
    require(std::abs(dab - dba) <= 1e-9,
            "case " + std::to_string(s) + ": asymmetry " + fmt(std::abs(dab - dba)));
    require(dab >= -1e-10, "case " + std::to_string(s) + ": negative distance " + fmt(dab));
    const double daa = wasserstein2_sq(a, a);
    require(daa <= 1e-10, "case " + std::to_string(s) + ": self-distance " + fmt(daa));
    require(dab > 1e-10,
            "case " + std::to_string(s) + ": distinct measures at distance " + fmt(dab));

    const double dac = wasserstein2_sq(a, c);
    const double dbc = wasserstein2_sq(b, c);
    const double slack = std::sqrt(dab) + std::sqrt(dbc) - std::sqrt(dac);
    require(slack >= -1e-7, "case " + std::to_string(s) + ": triangle slack " + fmt(slack));
  }

  Rng rng(555);
  for (int rep = 0; rep < 100; ++rep) {
    const double m1 = rng.normal(), m2 = rng.normal();
    const double s1 = rng.uniform(0.1, 2.0), s2 = rng.uniform(0.1, 2.0);
    const GaussianMeasure a{Vector::Constant(1, m1),
                            SymMatrix::covariance(Matrix::Constant(1, 1, s1 * s1))};
    const GaussianMeasure b{Vector::Constant(1, m2),
                            SymMatrix::covariance(Matrix::Constant(1, 1, s2 * s2))};
    const double ref = (m1 - m2) * (m1 - m2) + (s1 - s2) * (s1 - s2);
    require(std::abs(wasserstein2_sq(a, b) - ref) <= 1e-12,
            "scalar case " + std::to_string(rep) + ": gap " +
                fmt(std::abs(wasserstein2_sq(a, b) - ref)));
  }
}

// Penrose conditions across ranks and the pseudodeterminant.
void criterion_06() {
  for (unsigned s = 0; s < 30; ++s) {
    const Index n = 3 + Index(s % 3);
    for (const Index rank : {Index(1), n - 1, n}) {
      Matrix cov = seeded_spd(n, s + 100 * unsigned(rank), 0.5, 2.0);
      if (rank < n) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
        Vector eigs = es.eigenvalues().cwiseMax(0.0);
        for (Index i = 0; i < n - rank; ++i) eigs(i) = 0.0;
        cov = es.eigenvectors() * eigs.asDiagonal() * es.eigenvectors().transpose();
        cov = ((cov + cov.transpose()) / 2).eval();
      }
      const Matrix p = pseudo_inverse(cov);
      const double r1 = (cov * p * cov - cov).cwiseAbs().maxCoeff();
      const double r2 = (p * cov * p - p).cwiseAbs().maxCoeff();
      const double r3 = ((cov * p).transpose() - cov * p).cwiseAbs().maxCoeff();
      const double r4 = ((p * cov).transpose() - p * cov).cwiseAbs().maxCoeff();
      const double worst = std::max(std::max(r1, r2), std::max(r3, r4));
      require(worst <= 1e-9, "rank " + std::to_string(rank) + " seed " + std::to_string(s) +
                                 ": Penrose residual " + fmt(worst));
    }

    const Matrix spd = seeded_spd(4, s + 900, 0.5, 2.0);
    const double pd = pseudo_det(spd);
    const double d = spd.determinant();
    require(std::abs(pd - d) <= 1e-9 * std::abs(d),
            "seed " + std::to_string(s) + ": pseudo-det " + fmt(pd) + " vs det " + fmt(d));
  }
}

// Allocator certificates and analytic solutions.
void criterion_07() {
  for (unsigned s = 0; s < 100; ++s) {
    const Index n = 2 + Index(s % 7);
    MvoProblem p;
    p.drift = seeded_vector(n, s, 0.1);
    p.cov = SymMatrix::covariance(seeded_spd(n, s + 701, 0.2, 2.0));
    p.gamma = 1.0 + double(s % 5);
    KktInfo info;
    solve_mvo(p, &info);
    require(info.stationarity <= 1e-7,
            "instance " + std::to_string(s) + ": stationarity " + fmt(info.stationarity));
    require(info.dual_feasibility <= 1e-7,
            "instance " + std::to_string(s) + ": dual feasibility " + fmt(info.dual_feasibility));
    require(info.complementarity <= 1e-8,
            "instance " + std::to_string(s) + ": complementarity " + fmt(info.complementarity));
  }

  for (unsigned s = 0; s < 50; ++s) {
    const Index n = 3 + Index(s % 4);
    Vector w_bm = seeded_vector(n, s + 50, 0.3).array() + 1.0;
    w_bm /= w_bm.sum();
    const Matrix cov = seeded_spd(n, s + 150, 0.3, 1.6);
    MvoProblem p;
    p.drift = equilibrium_drift(cov, w_bm, 2.5, 0.0);
    p.cov = SymMatrix::covariance(cov);
    p.gamma = 2.5;
    const Vector w = solve_mvo(p).w;
    const double gap = (w - w_bm).cwiseAbs().maxCoeff();
    require(gap <= 1e-6,
            "round trip " + std::to_string(s) + ": weight gap " + fmt(gap));
  }

  {
    MvoProblem p;
    p.drift = Vector(2);
    p.drift << 0.3, 0.1;
    p.cov = SymMatrix::covariance(Matrix::Identity(2, 2));
    p.gamma = 1.0;
    const Vector w = solve_mvo(p).w;
    require(std::abs(w(0) - 0.6) <= 1e-8 && std::abs(w(1) - 0.4) <= 1e-8,
            "identity-covariance case: got (" + fmt(w(0)) + ", " + fmt(w(1)) + ")");
  }
  {
    Matrix cov = Matrix::Zero(2, 2);
    cov(0, 0) = 1.0;
    cov(1, 1) = 0.5;
    MvoProblem p;
    p.drift = Vector(2);
    p.drift << 0.2, 0.1;
    p.cov = SymMatrix::covariance(cov);
    p.gamma = 2.0;
    const Vector w = solve_mvo(p).w;
    require(std::abs(w(0) - 11.0 / 30.0) <= 1e-8,
            "diagonal case: got first weight " + fmt(w(0)));
  }
  {
    Matrix cov = Matrix::Zero(2, 2);
    cov(0, 0) = 1.0;
    cov(1, 1) = 4.0;
    const Vector w = min_vol_weights(SymMatrix::covariance(cov), 2.5).w;
    require(std::abs(w(0) - 0.8) <= 1e-8 && std::abs(w(1) - 0.2) <= 1e-8,
            "minimum-variance case: got (" + fmt(w(0)) + ", " + fmt(w(1)) + ")");
  }
}

// Simulated study at desk scale: directional Sharpe orderings by view quality.
void criterion_08() {
  Stage1Config cfg;
  cfg.n_assets = 10;
  cfg.n_views = 10;
  cfg.horizon = 800;
  cfg.n_paths = 64;
  cfg.lookback = 60;
  cfg.forward = 120;
  cfg.tau = 1.0 / 60.0;
  cfg.gamma = 2.5;
  cfg.confidences = {0.95, 0.05};
  cfg.rebalance_period = 63;
  cfg.master_seed = 42;
  cfg.periods_per_year = 1.0;
  cfg.drift_vol = 1.1;
  cfg.vol_low = 1.2;
  cfg.vol_high = 2.4;

  const unsigned threads =
      std::max(1u, std::min(8u, std::thread::hardware_concurrency()));

  auto run_kind = [&](ViewKind kind) {
    Stage1Config c = cfg;
    c.views_kind = kind;
    const auto start = std::chrono::steady_clock::now();
    const RunReport r = run_stage1(c, threads);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(elapsed <= 600.0, std::string(view_kind_name(kind)) + " scenario took " +
                                  fmt(elapsed) + "s, budget is 600s");
    return r;
  };

  auto column = [](const RunReport& r, const std::string& label) {
    for (std::size_t m = 0; m < r.methods.size(); ++m)
      if (r.methods[m] == label) return Index(m);
    throw Failure{"report lacks the '" + label + "' column"};
  };

  {
    const RunReport r = run_kind(ViewKind::Correct);
    const Index bm = column(r, "BM");
    const Index hi = column(r, "GWB2_t0.95");
    const Index lo = column(r, "GWB2_t0.05");
    require(r.delta_s(hi, bm) > 0.0 && r.tstat(hi, bm) > kCriticalT,
            "correct views: high-confidence blend vs benchmark t=" + fmt(r.tstat(hi, bm)));
    require(r.delta_s(hi, lo) > 0.0 && r.tstat(hi, lo) > kCriticalT,
            "correct views: high vs low confidence t=" + fmt(r.tstat(hi, lo)));
  }
  {
    const RunReport r = run_kind(ViewKind::Ambiguous);
    double worst = 0.0;
    for (Index i = 0; i < r.tstat.rows(); ++i)
      for (Index j = 0; j < r.tstat.cols(); ++j)
        worst = std::max(worst, std::abs(r.tstat(i, j)));
    require(worst < kCriticalT,
            "ambiguous views: a pair separated with |t|=" + fmt(worst));
  }
  {
    const RunReport r = run_kind(ViewKind::Incorrect);
    const Index hi2 = column(r, "GWB2_t0.95");
    const Index lo2 = column(r, "GWB2_t0.05");
    require(r.delta_s(lo2, hi2) > 0.0 && r.tstat(lo2, hi2) > kCriticalT,
            "incorrect views: low vs high confidence (return space) t=" +
                fmt(r.tstat(lo2, hi2)));
    const Index hi1 = column(r, "GWB1_t0.95");
    const Index lo1 = column(r, "GWB1_t0.05");
    require(r.delta_s(lo1, hi1) > 0.0 && r.tstat(lo1, hi1) > kCriticalT,
            "incorrect views: low vs high confidence (drift space) t=" +
                fmt(r.tstat(lo1, hi1)));
  }
}

// Wishart sampler mean.
void criterion_09() {
  const Matrix scale = seeded_spd(3, 77, 0.5, 1.5);
  const int df = 5;
  Rng rng(4242);
  Matrix acc = Matrix::Zero(3, 3);
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) acc += sample_wishart(df, scale, rng);
  const double gap = (acc / (double(reps) * df) - scale).norm();
  require(gap <= 0.05, "mean deviates by " + fmt(gap) + " in Frobenius norm");
}

// Bytewise-identical reports from equal seeds through the CLI.
void criterion_10() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gwb_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  Stage1Config cfg;
  cfg.n_assets = 6;
  cfg.n_views = 6;
  cfg.horizon = 400;
  cfg.n_paths = 8;
  cfg.lookback = 50;
  cfg.forward = 80;
  cfg.tau = 1.0 / 50.0;
  cfg.master_seed = 2024;
  const std::string config = (dir / "config.json").string();
  write_text_file(config, canonical_dump(stage1_config_to_json(cfg), 2));

  const std::string a = (dir / "a.json").string();
  const std::string b = (dir / "b.json").string();
  require(run_cli("simulate --config " + config + " --threads 4 --out " + a) == 0,
          "first run failed");
  require(run_cli("simulate --config " + config + " --threads 2 --out " + b) == 0,
          "second run failed");

  const std::string bytes_a = slurp(a);
  require(!bytes_a.empty(), "first report is empty");
  require(bytes_a == slurp(b), "equal seeds produced different bytes");
  fs::remove_all(dir);
}

// Trailing-window estimation ignores rows after each rebalance date.
void criterion_11() {
  ReturnsPanel panel;
  const Index n_assets = 5, n_periods = 160;
  Rng rng(99);
  panel.returns =
      sample_mvn(Vector::Zero(n_assets), 1e-4 * seeded_spd(n_assets, 3, 0.5, 2.0),
                 n_periods, rng);
  for (Index j = 0; j < n_assets; ++j) panel.tickers.push_back("A" + std::to_string(j));
  for (Index t = 0; t < n_periods; ++t) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "d%04d", int(t));
    panel.dates.push_back(buf);
  }

  Stage2Config cfg;
  cfg.n_assets = 4;
  cfg.n_paths = 3;
  cfg.lookback = 30;
  cfg.tau = 1.0 / 30.0;
  cfg.min_history = 30;
  cfg.rebalance_period = 63;
  cfg.master_seed = 1;

  StageTrace before;
  run_stage2(cfg, panel, 1, &before);
  require(!before.paths.empty() && !before.paths[0].empty(), "no rebalances recorded");
  require(before.paths[0][0].period == cfg.lookback, "unexpected first rebalance period");

  ReturnsPanel mutated = panel;
  for (Index t = cfg.lookback; t < 100; ++t) mutated.returns.row(t).setConstant(0.123);

  StageTrace after;
  run_stage2(cfg, mutated, 1, &after);
  for (std::size_t p = 0; p < before.paths.size(); ++p) {
    const Matrix& x = before.paths[p][0].weights;
    const Matrix& y = after.paths[p][0].weights;
    require((x - y).cwiseAbs().maxCoeff() == 0.0,
            "path " + std::to_string(p) + ": weights moved after a forward-data rewrite");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "closed-form blend matches an independent numeric minimizer", criterion_01},
      {2, "blend weight endpoints reproduce the prior and pin the views", criterion_02},
      {3, "alternate covariance-blend formulas and the diagonal case agree", criterion_03},
      {4, "scalar Bayesian drift update matches the hand-derived form", criterion_04},
      {5, "squared transport distance obeys the metric axioms", criterion_05},
      {6, "pseudoinverse meets the Penrose conditions and the pseudodeterminant matches det",
       criterion_06},
      {7, "allocator passes KKT certificates, round trips and analytic cases", criterion_07},
      {8, "simulated study orders Sharpe ratios by view quality and confidence", criterion_08},
      {9, "Wishart sampler mean matches df times the scale", criterion_09},
      {10, "equal-seed simulation reports are byte-identical through the CLI", criterion_10},
      {11, "backtest weights ignore data after the rebalance date", criterion_11},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string reason;
    try {
      c.run();
    } catch (const Failure& f) {
      reason = f.reason;
    } catch (const std::exception& e) {
      reason = std::string("unexpected error: ") + e.what();
    }
    if (reason.empty()) {
      std::printf("[PASS] criterion %02d: %s\n", c.id, c.label);
    } else {
      std::printf("[FAIL] criterion %02d: %s -- %s\n", c.id, c.label, reason.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
