#include "slabeb/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"
#include "slabeb/quadrature.hpp"

namespace slabeb {
namespace {

// Generic monotone-increasing root find: smallest x in [lo, hi] with f(x) = 0.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double flo, double fhi, double xtol) {
  if (!(flo <= 0.0 && fhi >= 0.0))
    throw NumericalError("bisection bracket lost");
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SasModel::SasModel(std::int64_t n, SlabSpec slab)
    : SasModel(n, slab,
               MarginalOptions{MarginalDensity::default_backend(slab), 1e-10, false}) {}

SasModel::SasModel(std::int64_t n, SlabSpec slab, MarginalOptions opt)
    : n_(n), slab_(slab), md_(slab, opt) {
  if (n < 2) throw ConfigError("SasModel: n must be at least 2");
  sqrt_2log_n_ = std::sqrt(2.0 * std::log(static_cast<double>(n)));
  alpha_star_ = 1.0 / (1.0 + std::exp(md_.log_g_over_phi(0.0)));
  alpha0_ = 1.0 / (1.0 + std::exp(md_.log_g_over_phi(1.0)));
  alpha_n_ = threshold_t_inverse(sqrt_2log_n_);
}

double SasModel::post_weight(double alpha, double x) const {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  const double q = (1.0 - alpha) / alpha * std::exp(-md_.log_g_over_phi(x));
  return 1.0 / (1.0 + q);
}

double SasModel::post_weight_compl(double alpha, double x) const {
  if (alpha <= 0.0) return 1.0;
  if (alpha >= 1.0) return 0.0;
  const double q = (1.0 - alpha) / alpha * std::exp(-md_.log_g_over_phi(x));
  return q / (1.0 + q);
}

CoordPosterior SasModel::coord_posterior(double alpha, double x) const {
  return {alpha, x, post_weight(alpha, x)};
}

double SasModel::cond_moment(double x, double mu, int k) const {
  switch (k) {
    case 1:
      return x + md_.dlog_g(x);
    case 2: {
      const MarginalDensity::Ratios r = md_.ratios(x);
      const double d = x - mu;
      return d * d + 1.0 + r.g2_over_g + 2.0 * d * r.dlog_g;
    }
    case 4: {
      const double w = 45.0;
      std::vector<double> pts = {std::min({x, mu, 0.0}) - w, 0.0, mu, x,
                                 std::max({x, mu, 0.0}) + w};
      const double log_g = md_.log_g(x);
      auto f = [&](double u) {
        const double d = u - mu, d2 = d * d;
        return d2 * d2 * std::exp(log_std_normal(u - x) + slab_.log_density(u) - log_g);
      };
      return integrate_panels(f, pts, {1e-10, 0.0, 4096}).value;
    }
    default:
      throw DomainError("cond_moment: k must be 1, 2 or 4");
  }
}

double SasModel::post_mean(double alpha, double x) const {
  const double a = post_weight(alpha, x);
  if (a == 0.0) return 0.0;
  return a * cond_moment(x, 0.0, 1);
}

double slab_gamma_x_survivor(const SlabSpec& slab, double x, double m, double log_g,
                             double rel_tol) {
  if (slab.family == SlabFamily::Laplace) {
    // For m >= 0 all remaining slab mass sits on the e^{-au} branch:
    //   int_m^inf phi(u-x)(a/2)e^{-au} du = (a/2) e^{-x^2/2 - m(a-x) - m^2/2} H(a-x+m).
    // The exponent never forms a^2/2, so it stays exact for rates of order n.
    const double a = slab.param;
    const double log_f = std::log(0.5 * a) - 0.5 * x * x;
    if (m >= 0.0) {
      const double log_u =
          log_f - m * (a - x) - 0.5 * m * m + log_scaled_upper_tail(a - x + m);
      return std::exp(log_u - log_g);
    }
    const double log_l =
        log_f + m * (a + x) - 0.5 * m * m + log_scaled_upper_tail(a + x - m);
    return 1.0 - std::exp(log_l - log_g);
  }
  const double hi = std::max(x, m) + 45.0;
  if (m >= hi) return 0.0;
  std::vector<double> pts;
  for (double p : {m, 0.0, x, hi})
    if (p >= m && p <= hi) pts.push_back(p);
  auto f = [&](double u) {
    return std::exp(log_std_normal(u - x) + slab.log_density(u) - log_g);
  };
  const double s = integrate_panels(f, pts, {rel_tol, 1e-14, 4096}).value;
  return std::min(1.0, std::max(0.0, s));
}

double SasModel::gamma_x_survivor(double x, double m) const {
  return slab_gamma_x_survivor(slab_, x, m, md_.log_g(x), md_.rel_tol());
}

double SasModel::post_median(double alpha, double x) const {
  if (x < 0.0) return -post_median(alpha, -x);
  const double a = post_weight(alpha, x);
  if (a <= 0.0) return 0.0;
  const double s0 = gamma_x_survivor(x, 0.0);
  if (a * s0 <= 0.5) return 0.0;
  const double target = 0.5 / a;  // solve P[gamma_x > m] = 1/(2a), decreasing in m
  double hi = std::max(x, 1.0);
  int guard = 0;
  while (gamma_x_survivor(x, hi) > target) {
    hi += 10.0;
    if (++guard > 20) throw NumericalError("post_median: no upper bracket");
  }
  auto f = [&](double m) { return target - gamma_x_survivor(x, m); };
  return bisect_increasing(f, 0.0, hi, target - s0, f(hi), 1e-10);
}

double SasModel::risk_r2(double alpha, double mu, double x) const {
  const double ac = post_weight_compl(alpha, x);
  const double a = 1.0 - ac;
  return ac * mu * mu + (a > 0.0 ? a * cond_moment(x, mu, 2) : 0.0);
}

double SasModel::risk_r4(double alpha, double mu, double x) const {
  const double ac = post_weight_compl(alpha, x);
  const double a = 1.0 - ac;
  const double mu2 = mu * mu;
  return ac * mu2 * mu2 + (a > 0.0 ? a * cond_moment(x, mu, 4) : 0.0);
}

double SasModel::threshold_t(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("threshold_t: alpha outside (0,1)");
  auto h = [&](double x) { return post_weight(alpha, x) * gamma_x_survivor(x, 0.0) - 0.5; };
  const double h0 = h(0.0);
  if (h0 >= 0.0) return 0.0;
  double lo = 0.0, flo = h0, hi = 1.0, fhi = h(hi);
  int guard = 0;
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = h(hi);
    if (++guard > 12) throw NumericalError("threshold_t: no upper bracket");
  }
  return bisect_increasing(h, lo, hi, flo, fhi, 1e-10);
}

double SasModel::threshold_t_inverse(double tval) const {
  if (!(tval > 0.0)) throw DomainError("threshold_t_inverse: threshold must be positive");
  // t(alpha) = x iff a_alpha(x) * P[gamma_x > 0] = 1/2; solve the weight
  // equation for alpha in closed form.
  const double s0 = gamma_x_survivor(tval, 0.0);
  const double target = 0.5 / s0;
  if (!(target < 1.0))
    throw DomainError("threshold_t_inverse: value below the threshold range");
  const double ratio = std::exp(md_.log_g_over_phi(tval));
  return 1.0 / (1.0 + ratio * (1.0 - target) / target);
}

double SasModel::threshold_zeta(double alpha) const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("threshold_zeta: alpha outside (0,1]");
  const double target = 1.0 / alpha;
  auto f = [&](double x) { return md_.beta(x) - target; };
  const double f0 = f(0.0);
  if (f0 >= 0.0) return 0.0;
  double lo = 0.0, flo = f0, hi = 1.0, fhi = f(hi);
  int guard = 0;
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
    if (++guard > 12 || hi > 1e4)
      throw DomainError("threshold_zeta: beta never reaches 1/alpha in range");
  }
  return bisect_increasing(f, lo, hi, flo, fhi, 1e-12);
}

double SasModel::threshold_tau(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("threshold_tau: alpha outside (0,1)");
  if (alpha >= alpha_star_) return 0.0;
  const double target = std::log((1.0 - alpha) / alpha);  // solve log(g/phi) = target
  auto f = [&](double x) { return md_.log_g_over_phi(x) - target; };
  const double f0 = f(0.0);
  double lo = 0.0, flo = f0, hi = 1.0, fhi = f(hi);
  int guard = 0;
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
    if (++guard > 12) throw DomainError("threshold_tau: no solution in range");
  }
  return bisect_increasing(f, lo, hi, flo, fhi, 1e-12);
}

double SasModel::tau_tilde(double alpha) const {
  return threshold_tau(std::min(alpha, alpha0_));
}

Thresholds SasModel::thresholds(double alpha) const {
  return {alpha, threshold_t(alpha), threshold_zeta(alpha), threshold_tau(alpha),
          tau_tilde(alpha)};
}

}  // namespace slabeb
