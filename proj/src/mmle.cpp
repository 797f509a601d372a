#include "slabeb/mmle.hpp"

#include <cmath>

#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"

namespace slabeb {

namespace detail {

double score_from_beta(const Eigen::ArrayXd& beta, double alpha) {
  // Serial accumulation keeps results independent of thread count.
  double s = 0.0;
  const double* b = beta.data();
  const Eigen::Index n = beta.size();
  for (Eigen::Index i = 0; i < n; ++i) s += b[i] / (1.0 + alpha * b[i]);
  return s;
}

EbFit fit_from_beta(const Eigen::ArrayXd& beta, double alpha_lo) {
  constexpr double kUpper = 1.0 - 1e-15;  // division guard at alpha = 1
  EbFit fit;
  const double s_lo = score_from_beta(beta, alpha_lo);
  if (s_lo <= 0.0) {
    fit.alpha_hat = alpha_lo;
    fit.at_lower_boundary = true;
    fit.score_at_solution = s_lo;
    return fit;
  }
  const double s_hi = score_from_beta(beta, kUpper);
  if (s_hi >= 0.0) {
    fit.alpha_hat = 1.0;
    fit.at_upper_boundary = true;
    fit.score_at_solution = s_hi;
    return fit;
  }
  double lo = alpha_lo, hi = kUpper;
  while (hi - lo > 1e-12 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (score_from_beta(beta, mid) > 0.0 ? lo : hi) = mid;
  }
  fit.alpha_hat = 0.5 * (lo + hi);
  fit.score_at_solution = score_from_beta(beta, fit.alpha_hat);
  return fit;
}

}  // namespace detail

Eigen::ArrayXd beta_values(const SasModel& model, const DataRef& data) {
  Eigen::ArrayXd beta(data.size());
  const MarginalDensity& md = model.marginal();
  for (Eigen::Index i = 0; i < data.size(); ++i) beta[i] = md.beta(data[i]);
  return beta;
}

double log_marginal(const SasModel& model, double alpha, const DataRef& data) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("log_marginal: alpha outside [0,1]");
  const Eigen::ArrayXd beta = beta_values(model, data);
  double l = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i)
    l += log_std_normal(data[i]) + std::log1p(alpha * beta[i]);
  return l;
}

double score(const SasModel& model, double alpha, const DataRef& data) {
  return detail::score_from_beta(beta_values(model, data), alpha);
}

EbFit fit_mmle_from_beta(const SasModel& model, const Eigen::ArrayXd& beta) {
  EbFit fit = detail::fit_from_beta(beta, model.alpha_n());
  fit.zeta_hat = model.threshold_zeta(fit.alpha_hat);
  fit.t_hat = fit.alpha_hat >= 1.0 ? 0.0 : model.threshold_t(fit.alpha_hat);
  return fit;
}

EbFit fit_mmle(const SasModel& model, const DataRef& data) {
  if (data.size() != model.n())
    throw DomainError("fit_mmle: data length does not match model n");
  return fit_mmle_from_beta(model, beta_values(model, data));
}

EbFit fit_modified_from_fit(const SasModel& model, EbFit fit, double A) {
  const auto n = static_cast<double>(model.n());
  if (model.n() < 3) throw DomainError("fit_modified: n must be at least 3 for log log n");
  if (A < 0.0) throw DomainError("fit_modified: A must be nonnegative");
  const double tn2 = 2.0 * std::log(n) - 5.0 * std::log(std::log(n));
  const double t_n = tn2 > 0.0 ? std::sqrt(tn2) : 0.0;
  const double t_A = std::sqrt(2.0 * (1.0 + A) * std::log(n));
  const double alpha_A = model.threshold_t_inverse(t_A);
  const bool triggered = fit.t_hat > t_n;
  fit.modified = EbFit::Modified{A, alpha_A, t_n, t_A, triggered};
  if (triggered) {
    fit.alpha_hat = alpha_A;
    fit.zeta_hat = model.threshold_zeta(alpha_A);
    fit.t_hat = t_A;
    fit.at_lower_boundary = fit.at_upper_boundary = false;
  }
  return fit;
}

EbFit fit_modified(const SasModel& model, const DataRef& data, double A) {
  return fit_modified_from_fit(model, fit_mmle(model, data), A);
}

}  // namespace slabeb
