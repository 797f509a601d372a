#pragma once

#include <cstdint>

#include "slabeb/posterior.hpp"
#include "slabeb/ssl.hpp"

#include <Eigen/Core>

namespace slabeb {

struct RateQuantities {
  std::int64_t n = 0, s = 0;
  double eta = 0.0;      // s/n
  double r_n = 0.0;      // 2 s log(n/s)
  double R_n = 0.0;      // exp(sqrt(2 log(n/s))) / log(n/s)
  double zeta1 = 0.0;    // beta(zeta1) = 1/alpha1
  double alpha1 = 0.0;   // d alpha1 mtilde(alpha1) = eta
  double d = 1.0;
};

/// mtilde(alpha) = -2 int_0^inf [beta(z)/(1 + alpha beta(z))] phi(z) dz;
/// nonnegative and increasing in alpha. Quadrature split at zeta(alpha).
double m_tilde(const SasModel& model, double alpha);
double m_tilde(const SslModel& model, double alpha);

/// m1 = E_mu beta(X, alpha), m2 = E_mu beta(X, alpha)^2.
double m1(const SasModel& model, double mu, double alpha);
double m2(const SasModel& model, double mu, double alpha);
double m1(const SslModel& model, double mu, double alpha);
double m2(const SslModel& model, double mu, double alpha);

/// Solves d * alpha1 * mtilde(alpha1) = s/n on the increasing map, then
/// zeta1 from beta(zeta1) = 1/alpha1. d defaults to 1; d = 4 recovers the
/// alpha*/zeta* calibration.
RateQuantities solve_alpha1(const SasModel& model, std::int64_t n, std::int64_t s,
                            double d = 1.0);
RateQuantities solve_alpha1(const SslModel& model, std::int64_t n, std::int64_t s,
                            double d = 1.0);

/// (r_n, R_n) only; requires 2 <= s < n.
RateQuantities rate_quantities(std::int64_t n, std::int64_t s);

/// Fraction of coordinates with |theta_i| >= tau.
double signal_fraction(const Eigen::Ref<const Eigen::ArrayXd>& theta, double tau);

}  // namespace slabeb
