#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "slabeb/errors.hpp"
#include "slabeb/rng.hpp"
#include "slabeb/theory.hpp"

using namespace slabeb;

namespace {

struct McMoment {
  double mean, se;
};

// Monte-Carlo estimate of E_mu [beta(X,alpha)^p], X = mu + Z. Unit tests use
// 10^6 draws; the acceptance run uses 10^7.
template <typename Beta>
McMoment mc_moment(Beta beta, double mu, double alpha, int p, int draws,
                   std::uint64_t seed) {
  NormalStream rng(seed, 0);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double b = beta(mu + rng.next());
    double v = b / (1.0 + alpha * b);
    if (p == 2) v *= v;
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / draws;
  const double var = (sum2 / draws - mean * mean) / (draws - 1);
  return {mean, std::sqrt(std::max(var, 0.0))};
}

}  // namespace

TEST_CASE("m_tilde: sign, monotonicity, MC agreement") {
  const SasModel model(100000, SlabSpec::laplace(1.0));
  double prev = 0.0;
  for (double alpha : {1e-4, 1e-3, 1e-2, 0.1, 0.5}) {
    const double mt = m_tilde(model, alpha);
    CHECK(mt >= prev);  // increasing in alpha
    CHECK(mt >= 0.0);
    prev = mt;
  }
  auto beta = [&](double x) { return model.beta(x); };
  for (double alpha : {1e-3, 0.1}) {
    const McMoment mc = mc_moment(beta, 0.0, alpha, 1, 1000000, 21);
    CHECK(std::abs(-mc.mean - m_tilde(model, alpha)) <= 3.0 * mc.se);
  }
}

TEST_CASE("alpha * m_tilde is strictly increasing") {
  const SasModel model(100000, SlabSpec::laplace(1.0));
  double prev = 0.0;
  for (double alpha : {1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0}) {
    const double v = alpha * m_tilde(model, alpha);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("m1 against Monte Carlo, m2 against dense Simpson") {
  const SasModel model(100000, SlabSpec::laplace(1.0));
  auto beta = [&](double x) { return model.beta(x); };
  for (double mu : {0.0, 2.0, 5.0}) {
    for (double alpha : {1e-3, 0.1}) {
      const McMoment a1 = mc_moment(beta, mu, alpha, 1, 1000000, 31);
      CHECK(std::abs(m1(model, mu, alpha) - a1.mean) <= 3.0 * a1.se + 1e-9);
      // m2's integrand is too heavy-tailed for a cheap MC check; use a dense
      // fixed-grid Simpson reference instead.
      auto f = [&](double x) {
        const double b = beta(x);
        const double v = b / (1.0 + alpha * b);
        return v * v * oracle::phi(x - mu);
      };
      const double ref = oracle::simpson(f, mu - 50.0, std::max(mu + 50.0, 50.0), 400000);
      CHECK(m2(model, mu, alpha) == doctest::Approx(ref).epsilon(1e-7));
    }
  }
  // m1 decreasing in alpha at fixed mu
  for (double mu : {0.0, 2.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {1e-4, 1e-3, 1e-2, 0.1}) {
      const double v = m1(model, mu, alpha);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("ssl moments run and match Monte Carlo") {
  const SslModel model(10000);
  auto beta = [&](double x) { return model.beta(x); };
  const double alpha = 0.05;
  const McMoment a1 = mc_moment(beta, 2.0, alpha, 1, 1000000, 41);
  CHECK(std::abs(m1(model, 2.0, alpha) - a1.mean) <= 3.0 * a1.se + 1e-9);
  CHECK(m_tilde(model, alpha) >= 0.0);
}

TEST_CASE("rate quantities exact formulas") {
  const RateQuantities a = rate_quantities(10000, 10);
  CHECK(a.r_n == doctest::Approx(20.0 * std::log(1000.0)).epsilon(1e-14));
  CHECK(a.R_n == doctest::Approx(6.0).epsilon(0.5 / 6.0));
  const RateQuantities b = rate_quantities(10000000, 10);
  CHECK(b.R_n == doctest::Approx(13.9).epsilon(0.2 / 13.9));
  CHECK(b.eta == doctest::Approx(1e-6).epsilon(1e-14));
  CHECK_THROWS_AS(rate_quantities(100, 1), DomainError);
  CHECK_THROWS_AS(rate_quantities(100, 100), DomainError);
}

TEST_CASE("solve_alpha1 satisfies its defining equations") {
  const SasModel model(10000, SlabSpec::laplace(1.0));
  for (double d : {1.0, 4.0}) {
    const RateQuantities rq = solve_alpha1(model, 10000, 10, d);
    const double resid = d * rq.alpha1 * m_tilde(model, rq.alpha1) - rq.eta;
    CHECK(std::abs(resid) <= 1e-10 * rq.eta + 1e-15);
    CHECK(model.beta(rq.zeta1) == doctest::Approx(1.0 / rq.alpha1).epsilon(1e-8));
    CHECK(rq.d == d);
  }
  CHECK_THROWS_AS(solve_alpha1(model, 10000, 10, 0.0), DomainError);
}

TEST_CASE("signal fraction") {
  Eigen::ArrayXd theta(5);
  theta << 0.0, 1.0, -2.0, 0.4, 3.0;
  CHECK(signal_fraction(theta, 1.0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(signal_fraction(theta, 0.0) == 1.0);
  CHECK_THROWS_AS(signal_fraction(theta, -1.0), DomainError);
}
