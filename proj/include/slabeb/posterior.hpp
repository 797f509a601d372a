#pragma once

#include <cstdint>

#include "slabeb/marginal.hpp"

namespace slabeb {

/// P[U > m] for U ~ gamma_x, the slab component of the posterior at
/// observation x: density phi(x-u) gamma(u) / g(x). Closed form for Laplace
/// slabs (stable for arbitrarily large rate), adaptive quadrature otherwise.
double slab_gamma_x_survivor(const SlabSpec& slab, double x, double m, double log_g,
                             double rel_tol);

struct CoordPosterior {
  double alpha;
  double x;
  double a;  // posterior slab weight
};

struct Thresholds {
  double alpha;
  double t;          // posterior-median threshold
  double zeta;       // beta(zeta) = 1/alpha
  double tau;        // a(tau) = 1/2
  double tau_tilde;  // tau(alpha ^ alpha0)
};

/// Spike-and-slab model for n coordinates: prior (1-alpha) delta_0 + alpha G
/// per coordinate, alpha calibrated elsewhere. Exposes the per-coordinate
/// posterior functionals and the threshold family. Immutable and thread-safe
/// after construction; alpha_n / alpha0 / alpha_star are solved eagerly.
class SasModel {
 public:
  SasModel(std::int64_t n, SlabSpec slab);
  SasModel(std::int64_t n, SlabSpec slab, MarginalOptions opt);

  std::int64_t n() const { return n_; }
  const MarginalDensity& marginal() const { return md_; }
  double beta(double x) const { return md_.beta(x); }

  double post_weight(double alpha, double x) const;
  double post_weight_compl(double alpha, double x) const;  // 1 - a, accurate when small
  CoordPosterior coord_posterior(double alpha, double x) const;

  /// k-th central-at-mu moment of the slab part gamma_x; k in {1, 2, 4}.
  double cond_moment(double x, double mu, int k) const;
  double post_mean(double alpha, double x) const;
  double post_median(double alpha, double x) const;
  double risk_r2(double alpha, double mu, double x) const;
  double risk_r4(double alpha, double mu, double x) const;

  double threshold_t(double alpha) const;
  double threshold_t_inverse(double tval) const;
  double threshold_zeta(double alpha) const;
  double threshold_tau(double alpha) const;
  double tau_tilde(double alpha) const;
  Thresholds thresholds(double alpha) const;

  double alpha_n() const { return alpha_n_; }        // t(alpha_n) = sqrt(2 log n)
  double alpha0() const { return alpha0_; }          // tau(alpha0) = 1
  double alpha_star() const { return alpha_star_; }  // tau degenerates to 0 above
  double sqrt_2log_n() const { return sqrt_2log_n_; }

  /// P[gamma_x > m]; the continuous branch of the posterior median.
  double gamma_x_survivor(double x, double m) const;

 private:
  std::int64_t n_;
  SlabSpec slab_;
  MarginalDensity md_;
  double sqrt_2log_n_, alpha_star_, alpha0_, alpha_n_;
};

}  // namespace slabeb
