// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "cryptorisk/dist/mvg.hpp"
#include "cryptorisk/dist/mvt.hpp"
#include "cryptorisk/dist/nig.hpp"
#include "cryptorisk/dist/tcopula.hpp"
#include "cryptorisk/error.hpp"
#include "cryptorisk/stats.hpp"

using namespace cryptorisk;
using namespace cryptorisk::dist;

namespace {

MvtParams three_asset_t() {
  MvtParams p;
  p.nu = 5.0;
  p.mu = Eigen::Vector3d(0.01, -0.02, 0.0);
  Eigen::MatrixXd s(3, 3);
  s << 1.0, 0.5, 0.2, 0.5, 2.0, 0.3, 0.2, 0.3, 0.5;
  p.sigma = s;
  return p;
}

}  // namespace

TEST_CASE("multivariate t: sample moments and refit") {
  const auto p = three_asset_t();
  const Eigen::MatrixXd x = sample_mvt(p, 200000, 42);
  const Eigen::MatrixXd cov = stats::covariance(x);
  const Eigen::MatrixXd expected = p.sigma * (p.nu / (p.nu - 2.0));
  CHECK((cov - expected).cwiseAbs().maxCoeff() < 0.08);
  const auto fit = fit_mvt(x, 5.0);
  CHECK((fit.sigma - cov * 0.6).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((fit.mu - p.mu).cwiseAbs().maxCoeff() < 0.02);
  CHECK((sample_mvt(p, 10, 7) - sample_mvt(p, 10, 7)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("multivariate t density in one dimension matches Student t") {
  MvtParams p;
  p.nu = 6.0;
  p.mu = Eigen::VectorXd::Constant(1, 0.5);
  p.sigma = Eigen::MatrixXd::Constant(1, 1, 4.0);
  const boost::math::students_t t(6.0);
  for (double x : {-3.0, 0.0, 0.5, 2.0, 7.0}) {
    const double expected = boost::math::pdf(t, (x - 0.5) / 2.0) / 2.0;
    CHECK(mvt_density(p, Eigen::VectorXd::Constant(1, x)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("multivariate t rejects singular data and low nu") {
  Eigen::MatrixXd x(50, 2);
  for (int i = 0; i < 50; ++i) x.row(i) << i, 2.0 * i;
  try {
    fit_mvt(x, 5.0);
    FAIL("expected singular matrix");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_matrix);
  }
  auto p = three_asset_t();
  p.nu = 4.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("kernel margins invert") {
  std::vector<double> sample;
  for (int i = 0; i < 300; ++i) sample.push_back(std::sin(i * 1.7) * 2.0 + 0.01 * i);
  for (double bw : {0.0, 0.3}) {
    const KernelMargin m(sample, bw);
    for (double u : {0.001, 0.05, 0.3, 0.5, 0.9, 0.999}) {
      CHECK(m.cdf(m.quantile(u)) == doctest::Approx(u).epsilon(bw == 0.0 ? 1e-9 : 1e-3));
    }
    CHECK(m.cdf(-1e6) >= 0.0);
    CHECK(m.cdf(1e6) <= 1.0);
  }
}

TEST_CASE("pseudo observations are scaled ranks") {
  Eigen::MatrixXd x(4, 1);
  x << 3.0, 1.0, 4.0, 2.0;
  const auto u = pseudo_observations(x, 0.0);
  CHECK(u(0, 0) == doctest::Approx(3.0 / 5.0));
  CHECK(u(1, 0) == doctest::Approx(1.0 / 5.0));
  CHECK(u(2, 0) == doctest::Approx(4.0 / 5.0));
}

TEST_CASE("t copula recovers its correlation") {
  const auto src = three_asset_t();
  const Eigen::MatrixXd x = sample_mvt(src, 5000, 9);
  const auto fit = fit_tcopula(x, 0.0, 5.0);
  Eigen::MatrixXd target = src.sigma;
  const Eigen::VectorXd sd = target.diagonal().cwiseSqrt();
  target = sd.cwiseInverse().asDiagonal() * target * sd.cwiseInverse().asDiagonal();
  CHECK((fit.corr - target).cwiseAbs().maxCoeff() < 0.05);
  CHECK((fit.corr.diagonal().array() - 1.0).abs().maxCoeff() < 1e-12);

  const Eigen::MatrixXd sim = sample_tcopula(fit, 20000, 3);
  CHECK((stats::correlation(sim) - stats::correlation(x)).cwiseAbs().maxCoeff() < 0.05);
  Eigen::VectorXd u = Eigen::Vector3d(0.3, 0.5, 0.7);
  CHECK(std::isfinite(tcopula_log_density(fit, u)));
}

TEST_CASE("MVG covariance formula matches simulation") {
  MvgParams p;
  p.mu0 = Eigen::Vector2d(0.0, 0.01);
  p.theta = Eigen::Vector2d(-0.2, 0.1);
  p.sigma_g = Eigen::Vector2d(1.0, 0.8);
  p.nu_common = 2.0;
  p.nu_idio = Eigen::Vector2d(3.0, 4.0);
  p.d_scale = Eigen::Vector2d(0.9, 0.7);
  p.mix = 0.6;
  const Eigen::MatrixXd x = sample_mvg(p, 400000, 17);
  CHECK((stats::column_means(x) - p.mean()).cwiseAbs().maxCoeff() < 0.01);
  CHECK((stats::covariance(x) - p.covariance()).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("MVG fit reproduces first two moments") {
  MvgParams p;
  p.mu0 = Eigen::Vector2d(0.0, 0.0);
  p.theta = Eigen::Vector2d(-0.3, -0.1);
  p.sigma_g = Eigen::Vector2d(1.0, 1.0);
  p.nu_common = 3.0;
  p.nu_idio = Eigen::Vector2d(3.0, 3.0);
  p.d_scale = Eigen::Vector2d(1.0, 1.0);
  p.mix = 0.5;
  const Eigen::MatrixXd x = sample_mvg(p, 100000, 2);
  const auto fit = fit_mvg(x);
  CHECK((fit.mean() - stats::column_means(x)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((fit.covariance().diagonal() - stats::covariance(x).diagonal()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(stats::correlation(sample_mvg(fit, 100000, 5))(0, 1) == doctest::Approx(stats::correlation(x)(0, 1)).epsilon(0.05));
}

TEST_CASE("NIG density integrates to one and matches its moments") {
  const NigParams p{2.0, -0.5, 1.2, 0.3};
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double x) { return nig_density(p, x); };
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(gauss_kronrod<double, 61>::integrate(f, -inf, inf, 15, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  auto xf = [&](double x) { return x * nig_density(p, x); };
  CHECK(gauss_kronrod<double, 61>::integrate(xf, -inf, inf, 15, 1e-12) == doctest::Approx(p.mean()).epsilon(1e-8));
  const auto s = sample_nig(p, 400000, 4);
  CHECK(stats::mean(s) == doctest::Approx(p.mean()).epsilon(0.01));
  CHECK(stats::variance(s) == doctest::Approx(p.variance()).epsilon(0.02));
  CHECK(stats::skewness(s) == doctest::Approx(p.skewness()).epsilon(0.1));
}

TEST_CASE("NIG MGF") {
  const NigParams p{2.0, -0.5, 1.2, 0.3};
  CHECK(nig_mgf(p, 0.0) == doctest::Approx(1.0));
  const double z = 0.7;
  const double expected = std::exp(p.mu * z + p.delta * (std::sqrt(4.0 - 0.25) - std::sqrt(4.0 - 0.04)));
  CHECK(nig_mgf(p, z) == doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS(nig_mgf(p, 2.6), Error);
}

TEST_CASE("NIG fit recovers parameters") {
  const NigParams p{1.5, -0.3, 1.0, 0.2};
  const auto x = sample_nig(p, 20000, 8);
  const auto fit = fit_nig(x);
  CHECK(fit.alpha == doctest::Approx(p.alpha).epsilon(0.15));
  CHECK(fit.beta == doctest::Approx(p.beta).epsilon(0.3));
  CHECK(fit.delta == doctest::Approx(p.delta).epsilon(0.1));
  CHECK(std::abs(fit.mu - p.mu) < 0.1);
  CHECK(nig_log_likelihood(fit, x) >= nig_log_likelihood(p, x));
  std::vector<double> few(50, 0.1);
  CHECK_THROWS_AS(fit_nig(few), Error);
}
