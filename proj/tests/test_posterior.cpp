#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "slabeb/errors.hpp"
#include "slabeb/posterior.hpp"

using namespace slabeb;

namespace {
const SlabSpec kSlabs[] = {SlabSpec::laplace(1.0), SlabSpec::laplace(0.5),
                           SlabSpec::cauchy(1.0), SlabSpec::quasi_cauchy()};
}

TEST_CASE("posterior weight against brute force") {
  for (const SlabSpec& s : kSlabs) {
    const SasModel model(1000, s);
    for (double alpha : {1e-3, 0.1, 0.7}) {
      for (double x : {-4.0, -1.0, 0.0, 0.5, 2.0, 5.0}) {
        const double ref = oracle::post_weight(s, alpha, x);
        CHECK(model.post_weight(alpha, x) == doctest::Approx(ref).epsilon(1e-8));
        CHECK(model.post_weight(alpha, x) + model.post_weight_compl(alpha, x) ==
              doctest::Approx(1.0).epsilon(1e-14));
      }
    }
    CHECK(model.post_weight(0.0, 3.0) == 0.0);
    CHECK(model.post_weight(1.0, 3.0) == 1.0);
  }
}

TEST_CASE("complement stays accurate where the weight saturates") {
  const SasModel model(1000, SlabSpec::cauchy(1.0));
  const double ac = model.post_weight_compl(0.5, 9.0);
  // direct ratio: (1-a)/a = phi/g * (1-alpha)/alpha, both tiny but exact
  const double ref = oracle::phi(9.0) / oracle::marginal_g(SlabSpec::cauchy(1.0), 9.0);
  CHECK(ac == doctest::Approx(ref / (1.0 + ref)).epsilon(1e-7));
  CHECK(ac > 0.0);
  CHECK(ac < 1e-10);
}

TEST_CASE("slab-component moments") {
  for (const SlabSpec& s : kSlabs) {
    const SasModel model(1000, s);
    for (double x : {-2.0, 0.3, 1.0, 4.0}) {
      // first moment: int u gamma_x(u) du
      const double g = oracle::marginal_g(s, x);
      auto f1 = [&](double u) { return u * oracle::phi(x - u) * s.density(u); };
      CHECK(model.cond_moment(x, 0.0, 1) ==
            doctest::Approx(oracle::split_integral(f1, x) / g).epsilon(1e-6));
      for (double mu : {0.0, 2.0})
        CHECK(model.cond_moment(x, mu, 2) ==
              doctest::Approx(oracle::cond_moment2(s, mu, x)).epsilon(1e-6));
      // fourth moment
      auto f4 = [&](double u) {
        const double d = (u - 1.0) * (u - 1.0);
        return d * d * oracle::phi(x - u) * s.density(u);
      };
      CHECK(model.cond_moment(x, 1.0, 4) ==
            doctest::Approx(oracle::split_integral(f4, x) / g).epsilon(1e-6));
    }
  }
}

TEST_CASE("posterior mean and quadratic risk against brute force") {
  for (const SlabSpec& s : kSlabs) {
    const SasModel model(1000, s);
    for (double alpha : {0.01, 0.3}) {
      for (double x : {-3.0, 0.0, 1.2, 4.0}) {
        CHECK(model.post_mean(alpha, x) ==
              doctest::Approx(oracle::post_mean(s, alpha, x)).epsilon(1e-6));
        for (double mu : {0.0, 2.5})
          CHECK(model.risk_r2(alpha, mu, x) ==
                doctest::Approx(oracle::risk_r2(s, alpha, mu, x)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("laplace survivor closed form") {
  const SlabSpec s = SlabSpec::laplace(1.0);
  const SasModel model(1000, s);
  for (double x : {0.0, 1.0, 3.0, 6.0})
    for (double m : {-2.0, 0.0, 0.5, 2.0, 5.0})
      CHECK(model.gamma_x_survivor(x, m) ==
            doctest::Approx(oracle::gamma_x_survivor(s, x, m)).epsilon(1e-7));
  // Huge rate: survivor must stay in [0,1] and finite; mass concentrates at 0.
  const SasModel spike(1000, SlabSpec::laplace(1e7));
  const double s0 = spike.gamma_x_survivor(3.0, 0.0);
  CHECK(std::isfinite(s0));
  CHECK(s0 >= 0.0);
  CHECK(s0 <= 1.0);
  CHECK(spike.gamma_x_survivor(3.0, 1.0) < 1e-30);
}

TEST_CASE("posterior median: atom rule, oracle match, antisymmetry, monotonicity") {
  for (const SlabSpec& s : kSlabs) {
    const SasModel model(1000, s);
    const double alpha = 0.1;
    // Small |x|: the zero atom keeps at least half the mass.
    CHECK(model.post_median(alpha, 0.3) == 0.0);
    CHECK(model.post_median(alpha, -0.3) == 0.0);
    for (double x : {2.5, 4.0, 6.0}) {
      const double med = model.post_median(alpha, x);
      CHECK(med == doctest::Approx(oracle::post_median(s, alpha, x)).epsilon(1e-5));
      CHECK(model.post_median(alpha, -x) == doctest::Approx(-med).epsilon(1e-9));
    }
    // Monotone in x on a coarse grid.
    double prev = -1.0;
    for (double x = 0.0; x <= 8.0; x += 0.5) {
      const double med = model.post_median(alpha, x);
      CHECK(med >= prev - 1e-9);
      prev = med;
    }
  }
}

TEST_CASE("median definition: survivor at the median equals 1/(2a)") {
  const SasModel model(1000, SlabSpec::cauchy(1.0));
  const double alpha = 0.2, x = 4.0;
  const double med = model.post_median(alpha, x);
  REQUIRE(med > 0.0);
  const double a = model.post_weight(alpha, x);
  CHECK(a * model.gamma_x_survivor(x, med) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("thresholds: defining equations and ordering") {
  for (const SlabSpec& s : kSlabs) {
    const SasModel model(100000, s);
    for (double alpha : {1e-4, 1e-2, 0.1}) {
      const Thresholds th = model.thresholds(alpha);
      // zeta: beta(zeta) = 1/alpha
      CHECK(model.beta(th.zeta) == doctest::Approx(1.0 / alpha).epsilon(1e-8));
      // tau: posterior weight one half
      if (alpha < model.alpha_star())
        CHECK(model.post_weight(alpha, th.tau) == doctest::Approx(0.5).epsilon(1e-9));
      // t: the median switches on; check the defining product
      CHECK(model.post_weight(alpha, th.t) * model.gamma_x_survivor(th.t, 0.0) ==
            doctest::Approx(0.5).epsilon(1e-7));
      CHECK(th.tau <= th.t + 1e-8);
      CHECK(th.t <= th.zeta + 1e-8);
      CHECK(th.tau_tilde >= th.tau - 1e-10);
    }
    // tau degenerates at alpha_star
    CHECK(model.threshold_tau(model.alpha_star() * 1.01) == 0.0);
    CHECK(model.threshold_tau(model.alpha_star() * 0.99) > 0.0);
  }
}

TEST_CASE("threshold t inverse round trips") {
  const SasModel model(100000, SlabSpec::laplace(1.0));
  for (double alpha : {1e-4, 1e-3, 1e-2}) {
    const double t = model.threshold_t(alpha);
    CHECK(model.threshold_t_inverse(t) == doctest::Approx(alpha).epsilon(1e-7));
  }
  // alpha_n: t(alpha_n) = sqrt(2 log n) with residual <= 1e-8
  CHECK(model.threshold_t(model.alpha_n()) ==
        doctest::Approx(model.sqrt_2log_n()).epsilon(1e-8));
}

TEST_CASE("posterior domain errors") {
  const SasModel model(1000, SlabSpec::laplace(1.0));
  CHECK_THROWS_AS(model.threshold_t(0.0), DomainError);
  CHECK_THROWS_AS(model.threshold_t(1.5), DomainError);
  CHECK_THROWS_AS(model.threshold_tau(-0.1), DomainError);
  CHECK_THROWS_AS(model.cond_moment(1.0, 0.0, 3), DomainError);
  CHECK_THROWS_AS(SasModel(1, SlabSpec::laplace(1.0)), ConfigError);
  // beta can never reach 1/alpha when alpha is so small that 1/alpha
  // overflows; the capped search range turns that into a domain error.
  const SasModel qc(1000, SlabSpec::quasi_cauchy());
  CHECK_THROWS_AS(qc.threshold_zeta(1e-320), DomainError);
}
