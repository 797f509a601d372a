#pragma once

#include <Eigen/Core>
#include <optional>

#include "slabeb/posterior.hpp"

namespace slabeb {

struct EbFit {
  double alpha_hat = 0.0;
  double zeta_hat = 0.0;  // zeta(alpha_hat)
  double t_hat = 0.0;     // t(alpha_hat)
  bool at_lower_boundary = false;
  bool at_upper_boundary = false;
  double score_at_solution = 0.0;
  struct Modified {
    double A, alpha_A, t_n, t_A;
    bool triggered;
  };
  std::optional<Modified> modified;
};

using DataRef = Eigen::Ref<const Eigen::ArrayXd>;

/// beta(X_i) for a whole dataset; one marginal evaluation per datum, reused
/// by every likelihood/score evaluation.
Eigen::ArrayXd beta_values(const SasModel& model, const DataRef& data);

/// l(alpha) = sum_i log((1-alpha) phi(X_i) + alpha g(X_i)), via
/// sum log phi(X_i) + sum log1p(alpha beta_i).
double log_marginal(const SasModel& model, double alpha, const DataRef& data);

/// S(alpha) = l'(alpha) = sum_i beta_i / (1 + alpha beta_i); strictly
/// decreasing in alpha.
double score(const SasModel& model, double alpha, const DataRef& data);

/// Constrained maximizer of l over [alpha_n, 1] by monotone-score bisection.
EbFit fit_mmle(const SasModel& model, const DataRef& data);
EbFit fit_mmle_from_beta(const SasModel& model, const Eigen::ArrayXd& beta);

/// Threshold-capped variant: keep alpha_hat while t(alpha_hat) <= t_n with
/// t_n^2 = 2 log n - 5 log log n, otherwise fall back to
/// alpha_A = t^{-1}(sqrt(2 (1+A) log n)).
EbFit fit_modified(const SasModel& model, const DataRef& data, double A);
EbFit fit_modified_from_fit(const SasModel& model, EbFit fit, double A);

namespace detail {
// Shared score-bisection core: maximize over [alpha_lo, 1] given the
// precomputed beta vector. Also used by the SSL fit.
EbFit fit_from_beta(const Eigen::ArrayXd& beta, double alpha_lo);
double score_from_beta(const Eigen::ArrayXd& beta, double alpha);
}  // namespace detail

}  // namespace slabeb
