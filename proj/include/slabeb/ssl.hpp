#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "slabeb/marginal.hpp"
#include "slabeb/mmle.hpp"

namespace slabeb {

/// Spike-and-slab LASSO: both mixture components are continuous, with a very
/// concentrated Laplace(lambda0) spike (lambda0 = 5 sqrt(2 pi) n by default)
/// and a heavy slab G1 (Cauchy(1/lambda1) by default, lambda1 = 0.05).
/// Immutable and thread-safe after construction.
class SslModel {
 public:
  static constexpr double kDefaultLambda1 = 0.05;

  SslModel(std::int64_t n, std::optional<double> lambda0 = std::nullopt,
           double lambda1 = kDefaultLambda1, SlabFamily slab1 = SlabFamily::Cauchy);

  /// Grammar: `ssl:<n>[:lambda0=<v>][:lambda1=<v>][:slab1=cauchy|lap]`.
  /// A bare `ssl` is allowed when n_override is given.
  static SslModel parse(std::string_view text,
                        std::optional<std::int64_t> n_override = std::nullopt);
  std::string str() const;

  std::int64_t n() const { return n_; }
  double lambda0() const { return lambda0_; }
  double lambda1() const { return lambda1_; }
  double calibration_constant() const { return C_; }   // smallest integer with
                                                       // beta(sqrt(2 log n)) >= n/(C log n)
  double alpha_lower() const { return alpha_lo_; }     // C log n / n
  double sqrt_2log_n() const { return sqrt_2log_n_; }
  double alpha0() const { return alpha0_; }            // tau(alpha0) = lambda1
  double alpha_star() const { return alpha_star_; }
  const MarginalDensity& spike_marginal() const { return md0_; }
  const MarginalDensity& slab_marginal() const { return md1_; }

  MarginalDensity::Derivs g0_eval(double x) const { return md0_.eval(x); }
  double log_g0(double x) const { return md0_.log_g(x); }
  double log_g1(double x) const { return md1_.log_g(x); }

  double beta(double x) const;              // (g1/g0)(x) - 1
  double log_g1_over_g0(double x) const;
  double post_weight(double alpha, double x) const;
  double post_weight_compl(double alpha, double x) const;

  double component_density(int k, double x, double u) const;  // gamma_{k,x}(u)
  double component_survivor(int k, double x, double m) const;
  double cond_moment1(int k, double x) const;                 // mean of gamma_{k,x}
  double cond_moment2(int k, double x, double mu) const;      // int (u-mu)^2 gamma_{k,x}

  double risk_r2(double alpha, double mu, double x) const;
  double post_mean(double alpha, double x) const;
  double post_median(double alpha, double x) const;

  double threshold_zeta(double alpha) const;  // bisection of beta on J_n
  double threshold_tau(double alpha) const;   // Omega(x,alpha) = 1
  double tau_tilde(double alpha) const;

 private:
  std::int64_t n_;
  double lambda0_, lambda1_;
  SlabFamily slab1_;
  MarginalDensity md0_, md1_;
  double sqrt_2log_n_, C_, alpha_lo_, alpha_star_, alpha0_;

  const MarginalDensity& md(int k) const;
};

Eigen::ArrayXd ssl_beta_values(const SslModel& model, const DataRef& data);
EbFit ssl_fit_mmle(const SslModel& model, const DataRef& data);
EbFit ssl_fit_mmle_from_beta(const SslModel& model, const Eigen::ArrayXd& beta);

}  // namespace slabeb
