#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"
#include "slabeb/rng.hpp"
#include "slabeb/ssl.hpp"

using namespace slabeb;

namespace {

// Brute-force marginal of the concentrated Laplace spike: all slab mass in
// |u| <= 60/lambda0, Simpson with a split at the kink.
double spike_g_oracle(double lambda0, double x) {
  const SlabSpec s = SlabSpec::laplace(lambda0);
  auto f = [&](double u) { return oracle::phi(x - u) * s.density(u); };
  const double w = 60.0 / lambda0;
  return oracle::simpson(f, -w, 0.0, 20000) + oracle::simpson(f, 0.0, w, 20000);
}

double spike_moment2_oracle(double lambda0, double x, double mu) {
  const SlabSpec s = SlabSpec::laplace(lambda0);
  auto f = [&](double u) {
    return (u - mu) * (u - mu) * oracle::phi(x - u) * s.density(u);
  };
  const double w = 60.0 / lambda0;
  return (oracle::simpson(f, -w, 0.0, 20000) + oracle::simpson(f, 0.0, w, 20000)) /
         spike_g_oracle(lambda0, x);
}

}  // namespace

TEST_CASE("construction defaults and calibration") {
  const SslModel m(1000);
  CHECK(m.lambda0() == doctest::Approx(5.0 * kSqrt2Pi * 1000.0).epsilon(1e-15));
  CHECK(m.lambda1() == 0.05);
  const double n = 1000.0, logn = std::log(n);
  const double C = m.calibration_constant();
  CHECK(C == std::floor(C));  // integer valued
  CHECK(C >= 1.0);
  // Defining property: beta(sqrt(2 log n)) >= n/(C log n), and C is smallest.
  const double b = m.beta(m.sqrt_2log_n());
  CHECK(b >= n / (C * logn));
  if (C > 1.0) CHECK(b < n / ((C - 1.0) * logn));
  CHECK(m.alpha_lower() == doctest::Approx(C * logn / n).epsilon(1e-15));
  CHECK_THROWS_AS(SslModel(1), ConfigError);
}

TEST_CASE("model string grammar") {
  const SslModel a = SslModel::parse("ssl:1000");
  CHECK(a.n() == 1000);
  const SslModel b = SslModel::parse("ssl:500:lambda0=2000:lambda1=0.1:slab1=lap");
  CHECK(b.lambda0() == 2000.0);
  CHECK(b.lambda1() == 0.1);
  const SslModel c = SslModel::parse("ssl", 200);
  CHECK(c.n() == 200);
  // round trip through str()
  const SslModel d = SslModel::parse(b.str());
  CHECK(d.lambda0() == b.lambda0());
  CHECK(d.n() == b.n());
  CHECK_THROWS_AS(SslModel::parse("ssl"), ConfigError);          // no n anywhere
  CHECK_THROWS_AS(SslModel::parse("ssl:1000:bogus=1"), ConfigError);
  CHECK_THROWS_AS(SslModel::parse("sas:1000"), ConfigError);
  CHECK_THROWS_AS(SslModel::parse("ssl:1000:lambda0=-5"), ConfigError);
}

TEST_CASE("spike marginal hugs the noise density") {
  const SslModel m(100);  // lambda0 ~ 1253, still integrable by brute force
  const double l0 = m.lambda0();
  for (double x : {0.0, 0.5, 1.5, 3.0}) {
    const double g0 = std::exp(m.log_g0(x));
    CHECK(g0 == doctest::Approx(spike_g_oracle(l0, x)).epsilon(1e-8));
    CHECK(std::abs(g0 - std_normal(x)) <= 1.0 / (l0 * l0));
  }
}

TEST_CASE("mixture score beta against the two marginals") {
  const SslModel m(100);
  const SlabSpec slab1 = SlabSpec::cauchy(0.05);
  for (double x : {0.0, 0.2, 1.0, 2.5}) {
    const double g1 = oracle::marginal_g(slab1, x);
    const double g0 = spike_g_oracle(m.lambda0(), x);
    CHECK(m.beta(x) == doctest::Approx(g1 / g0 - 1.0).epsilon(1e-6));
  }
  // negative near zero (slab much flatter than spike), positive for large x
  CHECK(m.beta(0.0) < 0.0);
  CHECK(m.beta(m.sqrt_2log_n()) > 0.0);
}

TEST_CASE("posterior mixture: weights, mean, risk") {
  const SslModel m(100);
  for (double alpha : {0.05, 0.4}) {
    for (double x : {0.0, 0.8, 2.0, 3.5}) {
      const double a = m.post_weight(alpha, x), ac = m.post_weight_compl(alpha, x);
      CHECK(a + ac == doctest::Approx(1.0).epsilon(1e-14));
      const double g1 = oracle::marginal_g(SlabSpec::cauchy(0.05), x);
      const double g0 = spike_g_oracle(m.lambda0(), x);
      CHECK(a == doctest::Approx(alpha * g1 / ((1.0 - alpha) * g0 + alpha * g1))
                     .epsilon(1e-6));
      // risk identity against per-component brute force
      const double mu = 1.0;
      const double r0 = spike_moment2_oracle(m.lambda0(), x, mu);
      const double r1 = oracle::cond_moment2(SlabSpec::cauchy(0.05), mu, x);
      CHECK(m.risk_r2(alpha, mu, x) == doctest::Approx(ac * r0 + a * r1).epsilon(1e-5));
      // mean shrinkage: between 0 and x for x >= 0
      const double pm = m.post_mean(alpha, x);
      CHECK(pm >= -1e-10);
      CHECK(pm <= x + 1e-10);
    }
  }
}

TEST_CASE("posterior median: continuity, symmetry, monotonicity") {
  const SslModel m(100);
  const double alpha = 0.1;
  // Unlike the point-mass spike there is no exact-zero branch, but small
  // observations still give a near-zero median.
  CHECK(std::abs(m.post_median(alpha, 0.0)) < 1e-6);
  CHECK(m.post_median(alpha, -2.0) == doctest::Approx(-m.post_median(alpha, 2.0))
                                          .epsilon(1e-6));
  double prev = -10.0;
  for (double x = -4.0; x <= 4.0; x += 0.5) {
    const double med = m.post_median(alpha, x);
    CHECK(med >= prev - 1e-8);
    prev = med;
    // median defined by mixture survivor = 1/2
    const double surv = m.post_weight_compl(alpha, x) * m.component_survivor(0, x, med) +
                        m.post_weight(alpha, x) * m.component_survivor(1, x, med);
    CHECK(surv == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("component survivors and densities normalize") {
  const SslModel m(100);
  for (int k : {0, 1}) {
    for (double x : {0.0, 1.5, 3.0}) {
      CHECK(m.component_survivor(k, x, -(std::abs(x) + 45.0)) ==
            doctest::Approx(1.0).epsilon(1e-8));
      CHECK(m.component_survivor(k, x, std::abs(x) + 45.0) ==
            doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("ssl thresholds") {
  const SslModel m(10000);
  for (double alpha : {0.05, 0.2}) {
    try {
      const double z = m.threshold_zeta(alpha);
      CHECK(m.beta(z) == doctest::Approx(1.0 / alpha).epsilon(1e-8));
      CHECK(z >= 2.0 * m.lambda1());
      CHECK(z <= m.sqrt_2log_n());
    } catch (const DomainError&) {
      // 1/alpha outside beta(J_n) for this n; acceptable per the contract
    }
    const double tau = m.threshold_tau(alpha);
    if (alpha < m.alpha_star() && tau > 0.0) {
      // Omega(tau, alpha) = (alpha/(1-alpha)) (2 g1/phi)(tau) = 1
      const double omega = alpha / (1.0 - alpha) * 2.0 *
                           std::exp(m.slab_marginal().log_g_over_phi(tau));
      CHECK(omega == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(m.tau_tilde(alpha) >= m.lambda1() - 1e-12);
  }
  // alpha0 calibration: tau(alpha0) = lambda1.
  CHECK(m.threshold_tau(m.alpha0()) == doctest::Approx(m.lambda1()).epsilon(1e-9));
}

TEST_CASE("ssl fit") {
  const SslModel m(1000);
  // All-zero data: score negative everywhere, lower boundary.
  const EbFit quiet = ssl_fit_mmle(m, Eigen::ArrayXd::Zero(1000));
  CHECK(quiet.at_lower_boundary);
  CHECK(quiet.alpha_hat == m.alpha_lower());
  CHECK(std::isnan(quiet.t_hat));
  // Signal data: interior fit matching the grid argmax of the mixture
  // likelihood sum log((1-alpha) g0 + alpha g1).
  Eigen::ArrayXd x(1000);
  NormalStream rng(11, 0);
  for (int i = 0; i < 1000; ++i) x[i] = (i < 60 ? 5.0 : 0.0) + rng.next();
  const EbFit fit = ssl_fit_mmle(m, x);
  CHECK(fit.alpha_hat >= m.alpha_lower());
  CHECK(fit.alpha_hat <= 1.0);
  if (!fit.at_lower_boundary && !fit.at_upper_boundary) {
    std::vector<double> g0v, g1v;
    for (int i = 0; i < 1000; ++i) {
      g0v.push_back(std::exp(m.log_g0(x[i])));
      g1v.push_back(std::exp(m.log_g1(x[i])));
    }
    const double grid = oracle::grid_argmax_alpha(g0v, g1v, m.alpha_lower());
    CHECK(fit.alpha_hat == doctest::Approx(grid).epsilon(1e-4));
  }
  CHECK_THROWS_AS(ssl_fit_mmle(m, Eigen::ArrayXd::Zero(10)), DomainError);
}
