#include "slabeb/theory.hpp"

#include <cmath>
#include <functional>

#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"
#include "slabeb/quadrature.hpp"

namespace slabeb {
namespace {

// Shared quadrature cores; the two model types differ only in beta and in
// where beta crosses 1/alpha.

double zeta_or(const std::function<double(double)>& zeta, double alpha, double fallback) {
  try {
    return zeta(alpha);
  } catch (const DomainError&) {
    return fallback;
  }
}

double m_tilde_impl(const std::function<double(double)>& beta,
                    const std::function<double(double)>& zeta, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("m_tilde: alpha outside (0,1]");
  const double z = zeta_or(zeta, alpha, 6.0);
  auto f = [&, alpha](double x) {
    const double b = beta(x);
    return b / (1.0 + alpha * b) * std_normal(x);
  };
  const double hi = std::max(z, 1.0) + 45.0;
  return -2.0 * integrate_panels(f, {0.0, 0.5 * z, z, hi}, {1e-9, 1e-14, 4096}).value;
}

double m_k_impl(const std::function<double(double)>& beta,
                const std::function<double(double)>& zeta, double mu, double alpha,
                int k) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("m1/m2: alpha outside (0,1]");
  const double z = zeta_or(zeta, alpha, 6.0);
  auto f = [&, alpha, mu, k](double x) {
    const double b = beta(x);
    const double ba = b / (1.0 + alpha * b);
    return (k == 1 ? ba : ba * ba) * std_normal(x - mu);
  };
  const double lo = std::min(-z, mu - 45.0) - 1.0, hi = std::max(z, mu + 45.0) + 1.0;
  std::vector<double> pts = {lo, hi};
  for (double p : {-z, 0.0, z, mu})
    if (p > lo && p < hi) pts.push_back(p);
  // |beta(.,alpha)| <= ~1/alpha sets the natural scale of the integrand.
  const double floor = 1e-12 * std::max(1.0, 1.0 / alpha);
  return integrate_panels(f, pts, {1e-9, floor, 4096}).value;
}

RateQuantities solve_alpha1_impl(const std::function<double(double)>& am,
                                 const std::function<double(double)>& zeta,
                                 std::int64_t n, std::int64_t s, double d) {
  if (!(d > 0.0)) throw DomainError("solve_alpha1: d must be positive");
  RateQuantities rq = rate_quantities(n, s);
  rq.d = d;
  const double eta = rq.eta;
  double lo = 1e-15, hi = 1.0;
  if (d * am(hi) < eta)
    throw DomainError("solve_alpha1: eta above the attainable range of d alpha mtilde");
  if (d * am(lo) > eta)
    throw DomainError("solve_alpha1: eta below the attainable range of d alpha mtilde");
  // alpha m_tilde(alpha) ~ alpha^2 near zero, so the alpha tolerance must sit
  // well below the 1e-10 relative residual contract.
  while (hi - lo > 1e-13 * lo) {
    const double mid = std::sqrt(lo * hi);  // log-space bisection
    if (mid <= lo || mid >= hi) break;
    (d * am(mid) < eta ? lo : hi) = mid;
  }
  rq.alpha1 = std::sqrt(lo * hi);
  rq.zeta1 = zeta(rq.alpha1);
  return rq;
}

}  // namespace

double m_tilde(const SasModel& model, double alpha) {
  return m_tilde_impl([&](double x) { return model.beta(x); },
                      [&](double a) { return model.threshold_zeta(a); }, alpha);
}

double m_tilde(const SslModel& model, double alpha) {
  return m_tilde_impl([&](double x) { return model.beta(x); },
                      [&](double a) { return model.threshold_zeta(a); }, alpha);
}

double m1(const SasModel& model, double mu, double alpha) {
  return m_k_impl([&](double x) { return model.beta(x); },
                  [&](double a) { return model.threshold_zeta(a); }, mu, alpha, 1);
}

double m2(const SasModel& model, double mu, double alpha) {
  return m_k_impl([&](double x) { return model.beta(x); },
                  [&](double a) { return model.threshold_zeta(a); }, mu, alpha, 2);
}

double m1(const SslModel& model, double mu, double alpha) {
  return m_k_impl([&](double x) { return model.beta(x); },
                  [&](double a) { return model.threshold_zeta(a); }, mu, alpha, 1);
}

double m2(const SslModel& model, double mu, double alpha) {
  return m_k_impl([&](double x) { return model.beta(x); },
                  [&](double a) { return model.threshold_zeta(a); }, mu, alpha, 2);
}

RateQuantities solve_alpha1(const SasModel& model, std::int64_t n, std::int64_t s,
                            double d) {
  return solve_alpha1_impl([&](double a) { return a * m_tilde(model, a); },
                           [&](double a) { return model.threshold_zeta(a); }, n, s, d);
}

RateQuantities solve_alpha1(const SslModel& model, std::int64_t n, std::int64_t s,
                            double d) {
  return solve_alpha1_impl([&](double a) { return a * m_tilde(model, a); },
                           [&](double a) { return model.threshold_zeta(a); }, n, s, d);
}

RateQuantities rate_quantities(std::int64_t n, std::int64_t s) {
  if (s < 2 || s >= n) throw DomainError("rate_quantities: need 2 <= s < n");
  RateQuantities rq;
  rq.n = n;
  rq.s = s;
  rq.eta = static_cast<double>(s) / static_cast<double>(n);
  const double lns = std::log(static_cast<double>(n) / static_cast<double>(s));
  rq.r_n = 2.0 * static_cast<double>(s) * lns;
  rq.R_n = std::exp(std::sqrt(2.0 * lns)) / lns;
  return rq;
}

double signal_fraction(const Eigen::Ref<const Eigen::ArrayXd>& theta, double tau) {
  if (tau < 0.0) throw DomainError("signal_fraction: tau must be nonnegative");
  std::int64_t count = 0;
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    if (std::abs(theta[i]) >= tau) ++count;
  return theta.size() == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(theta.size());
}

}  // namespace slabeb
