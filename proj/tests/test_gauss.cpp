#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <limits>

#include "slabeb/gauss.hpp"

using namespace slabeb;

TEST_CASE("standard normal density and tail reference values") {
  CHECK(std_normal(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(upper_tail(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // Phi-bar(1), frozen from the erfc series to 17 digits.
  CHECK(upper_tail(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-14));
  CHECK(upper_tail(-1.0) == doctest::Approx(1.0 - 0.15865525393145707).epsilon(1e-14));
  CHECK(log_std_normal(3.0) == doctest::Approx(-0.5 * 9.0 - kLogSqrt2Pi).epsilon(1e-15));
}

TEST_CASE("erfcx matches exp(t^2) erfc(t) where the naive product is finite") {
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    const double naive = std::exp(t * t) * std::erfc(t);
    if (std::isfinite(naive) && naive > 0.0)
      CHECK(erfcx(t) == doctest::Approx(naive).epsilon(1e-12));
  }
  // Asymptotic regime: erfcx(t) ~ 1/(t sqrt(pi)) (1 - 1/(2t^2) + 3/(4t^4)).
  for (double t : {50.0, 500.0, 5e4}) {
    const double s = 1.0 / (2.0 * t * t);
    const double ref = (1.0 - s + 3.0 * s * s) / (t * 1.7724538509055160273);
    CHECK(erfcx(t) == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK(erfcx(-3.0) == doctest::Approx(std::exp(9.0) * std::erfc(-3.0)).epsilon(1e-13));
}

TEST_CASE("scaled upper tail H") {
  CHECK(scaled_upper_tail(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // H(1) = e^{1/2} Phi-bar(1).
  CHECK(scaled_upper_tail(1.0) ==
        doctest::Approx(std::exp(0.5) * 0.15865525393145707).epsilon(1e-13));
  // Monotone decreasing, Mills asymptote H(z) ~ 1/(sqrt(2 pi) z).
  double prev = std::numeric_limits<double>::infinity();
  for (double z : {-3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 100.0}) {
    const double h = scaled_upper_tail(z);
    CHECK(h < prev);
    prev = h;
  }
  const double z = 1e6;
  CHECK(scaled_upper_tail(z) * kSqrt2Pi * z == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("log variants agree with direct logs and extend past overflow") {
  for (double z : {-5.0, -1.0, 0.0, 1.0, 5.0, 20.0})
    CHECK(log_scaled_upper_tail(z) ==
          doctest::Approx(std::log(scaled_upper_tail(z))).epsilon(1e-12));
  // For z << 0, H(z) -> exp(z^2/2), so log H(z) ~ z^2/2.
  CHECK(log_scaled_upper_tail(-60.0) == doctest::Approx(1800.0).epsilon(1e-10));
  for (double x : {-2.0, 0.0, 2.0, 8.0})
    CHECK(log_upper_tail(x) == doctest::Approx(std::log(upper_tail(x))).epsilon(1e-12));
  // Far tail via the Mills expansion: log Phi-bar(40) = -x^2/2 - log(sqrt(2 pi) x) + log(1 - 1/x^2 + ...)
  const double x = 40.0;
  const double ref = -0.5 * x * x - std::log(kSqrt2Pi * x) +
                     std::log1p(-1.0 / (x * x) + 3.0 / (x * x * x * x));
  CHECK(log_upper_tail(x) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("log_sum_exp") {
  CHECK(log_sum_exp(0.0, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(log_sum_exp(1000.0, 0.0) == doctest::Approx(1000.0).epsilon(1e-15));
  CHECK(log_sum_exp(-std::numeric_limits<double>::infinity(), 3.0) == 3.0);
}
