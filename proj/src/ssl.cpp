#include "slabeb/ssl.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"
#include "slabeb/posterior.hpp"

namespace slabeb {
namespace {

constexpr double kCalibrationCap = 1e6;

SlabSpec make_slab1(SlabFamily family, double lambda1) {
  if (family == SlabFamily::Laplace) return SlabSpec::laplace(lambda1);
  if (family == SlabFamily::Cauchy) return SlabSpec::cauchy(lambda1);
  throw ConfigError("ssl: slab1 must be Laplace or Cauchy");
}

double parse_field(std::string_view text, const char* what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || !(v > 0.0))
    throw ConfigError(std::string("ssl: bad value for ") + what);
  return v;
}

}  // namespace

SslModel::SslModel(std::int64_t n, std::optional<double> lambda0, double lambda1,
                   SlabFamily slab1)
    : n_(n),
      lambda0_(lambda0.value_or(5.0 * kSqrt2Pi * static_cast<double>(n))),
      lambda1_(lambda1),
      slab1_(slab1),
      md0_(SlabSpec::laplace(lambda0_)),
      md1_(make_slab1(slab1, lambda1)) {
  if (n_ < 2) throw ConfigError("ssl: n must be at least 2");
  sqrt_2log_n_ = std::sqrt(2.0 * std::log(static_cast<double>(n_)));
  const double b_top = beta(sqrt_2log_n_);
  const double logn = std::log(static_cast<double>(n_));
  if (b_top > 0.0) {
    const double c = std::ceil(static_cast<double>(n_) / (logn * b_top));
    C_ = std::min(std::max(c, 1.0), kCalibrationCap);
  } else {
    C_ = kCalibrationCap;
  }
  alpha_lo_ = C_ * logn / static_cast<double>(n_);
  alpha_star_ = 1.0 / (1.0 + 2.0 * std::exp(md1_.log_g_over_phi(0.0)));
  alpha0_ = 1.0 / (1.0 + 2.0 * std::exp(md1_.log_g_over_phi(lambda1_)));
}

SslModel SslModel::parse(std::string_view text, std::optional<std::int64_t> n_override) {
  if (text.rfind("ssl", 0) != 0)
    throw ConfigError("ssl model string must start with 'ssl'");
  std::string_view rest = text.substr(3);
  std::optional<std::int64_t> n = n_override;
  std::optional<double> lambda0;
  double lambda1 = kDefaultLambda1;
  SlabFamily slab1 = SlabFamily::Cauchy;
  bool first = true;
  while (!rest.empty()) {
    if (rest.front() != ':') throw ConfigError("ssl: malformed model string");
    rest.remove_prefix(1);
    const auto next = rest.find(':');
    std::string_view tok = rest.substr(0, next);
    rest = next == std::string_view::npos ? std::string_view{} : rest.substr(next);
    if (first && !tok.empty() && tok.find('=') == std::string_view::npos) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size() || v < 2)
        throw ConfigError("ssl: bad n in model string");
      n = v;
    } else if (tok.rfind("lambda0=", 0) == 0) {
      lambda0 = parse_field(tok.substr(8), "lambda0");
    } else if (tok.rfind("lambda1=", 0) == 0) {
      lambda1 = parse_field(tok.substr(8), "lambda1");
    } else if (tok == "slab1=cauchy") {
      slab1 = SlabFamily::Cauchy;
    } else if (tok == "slab1=lap") {
      slab1 = SlabFamily::Laplace;
    } else {
      throw ConfigError("ssl: unknown field '" + std::string(tok) + "'");
    }
    first = false;
  }
  if (!n) throw ConfigError("ssl: n missing from model string");
  return SslModel(*n, lambda0, lambda1, slab1);
}

std::string SslModel::str() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "ssl:%lld:lambda0=%.17g:lambda1=%.17g:slab1=%s",
                static_cast<long long>(n_), lambda0_, lambda1_,
                slab1_ == SlabFamily::Cauchy ? "cauchy" : "lap");
  return buf;
}

const MarginalDensity& SslModel::md(int k) const {
  if (k == 0) return md0_;
  if (k == 1) return md1_;
  throw DomainError("ssl: component index must be 0 or 1");
}

double SslModel::log_g1_over_g0(double x) const {
  return md1_.log_g_over_phi(x) - md0_.log_g_over_phi(x);
}

double SslModel::beta(double x) const {
  const double l = log_g1_over_g0(x);
  if (l < 690.0) return std::expm1(l);
  return std::exp(std::min(l, 705.0));
}

double SslModel::post_weight(double alpha, double x) const {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  const double q = (1.0 - alpha) / alpha * std::exp(-log_g1_over_g0(x));
  return 1.0 / (1.0 + q);
}

double SslModel::post_weight_compl(double alpha, double x) const {
  if (alpha <= 0.0) return 1.0;
  if (alpha >= 1.0) return 0.0;
  const double q = (1.0 - alpha) / alpha * std::exp(-log_g1_over_g0(x));
  return q / (1.0 + q);
}

double SslModel::component_density(int k, double x, double u) const {
  const MarginalDensity& m = md(k);
  return std::exp(log_std_normal(x - u) + m.slab().log_density(u) - m.log_g(x));
}

double SslModel::component_survivor(int k, double x, double m) const {
  const MarginalDensity& d = md(k);
  return slab_gamma_x_survivor(d.slab(), x, m, d.log_g(x), d.rel_tol());
}

double SslModel::cond_moment1(int k, double x) const { return x + md(k).dlog_g(x); }

double SslModel::cond_moment2(int k, double x, double mu) const {
  const MarginalDensity::Ratios r = md(k).ratios(x);
  const double d = x - mu;
  return d * d + 1.0 + r.g2_over_g + 2.0 * d * r.dlog_g;
}

double SslModel::risk_r2(double alpha, double mu, double x) const {
  const double ac = post_weight_compl(alpha, x);
  return ac * cond_moment2(0, x, mu) + (1.0 - ac) * cond_moment2(1, x, mu);
}

double SslModel::post_mean(double alpha, double x) const {
  const double ac = post_weight_compl(alpha, x);
  return ac * cond_moment1(0, x) + (1.0 - ac) * cond_moment1(1, x);
}

double SslModel::post_median(double alpha, double x) const {
  const double ac = post_weight_compl(alpha, x);
  auto survivor = [&](double m) {
    return ac * component_survivor(0, x, m) + (1.0 - ac) * component_survivor(1, x, m);
  };
  double lo = std::min(x, 0.0) - 1.0, hi = std::max(x, 0.0) + 1.0;
  int guard = 0;
  while (survivor(lo) < 0.5) {
    lo -= 10.0;
    if (++guard > 20) throw NumericalError("ssl post_median: no lower bracket");
  }
  guard = 0;
  while (survivor(hi) > 0.5) {
    hi += 10.0;
    if (++guard > 20) throw NumericalError("ssl post_median: no upper bracket");
  }
  while (hi - lo > 1e-10) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    (survivor(m) > 0.5 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

double SslModel::threshold_zeta(double alpha) const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("ssl threshold_zeta: alpha outside (0,1]");
  const double target = 1.0 / alpha;
  double lo = 2.0 * lambda1_, hi = sqrt_2log_n_;
  double flo = beta(lo) - target, fhi = beta(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw DomainError("ssl threshold_zeta: 1/alpha outside beta(J_n)");
  while (hi - lo > 1e-12) {
    const double x = 0.5 * (lo + hi);
    if (x <= lo || x >= hi) break;
    (beta(x) < target ? lo : hi) = x;
  }
  return 0.5 * (lo + hi);
}

double SslModel::threshold_tau(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ssl threshold_tau: alpha outside (0,1)");
  if (alpha >= alpha_star_) return 0.0;
  // Omega(x, alpha) = (alpha/(1-alpha)) (2 g1/phi)(x) = 1.
  const double target = std::log((1.0 - alpha) / alpha) - std::log(2.0);
  auto f = [&](double x) { return md1_.log_g_over_phi(x) - target; };
  double lo = 0.0, flo = f(0.0), hi = 1.0, fhi = f(hi);
  int guard = 0;
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
    if (++guard > 12) throw DomainError("ssl threshold_tau: no solution in range");
  }
  if (flo > 0.0) return 0.0;
  while (hi - lo > 1e-12) {
    const double x = 0.5 * (lo + hi);
    if (x <= lo || x >= hi) break;
    (f(x) < 0.0 ? lo : hi) = x;
  }
  return 0.5 * (lo + hi);
}

double SslModel::tau_tilde(double alpha) const {
  return threshold_tau(std::min(alpha, alpha0_));
}

Eigen::ArrayXd ssl_beta_values(const SslModel& model, const DataRef& data) {
  Eigen::ArrayXd beta(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) beta[i] = model.beta(data[i]);
  return beta;
}

EbFit ssl_fit_mmle_from_beta(const SslModel& model, const Eigen::ArrayXd& beta) {
  if (!(model.alpha_lower() < 1.0))
    throw DomainError("ssl_fit_mmle: n too small, C log n / n reaches 1");
  EbFit fit = detail::fit_from_beta(beta, model.alpha_lower());
  try {
    fit.zeta_hat = model.threshold_zeta(fit.alpha_hat);
  } catch (const DomainError&) {
    fit.zeta_hat = std::numeric_limits<double>::quiet_NaN();
  }
  fit.t_hat = std::numeric_limits<double>::quiet_NaN();  // no exact-zero median branch
  return fit;
}

EbFit ssl_fit_mmle(const SslModel& model, const DataRef& data) {
  if (data.size() != model.n())
    throw DomainError("ssl_fit_mmle: data length does not match model n");
  return ssl_fit_mmle_from_beta(model, ssl_beta_values(model, data));
}

}  // namespace slabeb
