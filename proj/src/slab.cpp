#include "slabeb/slab.hpp"

#include <charconv>
#include <cmath>

#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"

namespace slabeb {
namespace {

double parse_positive(std::string_view text, const char* what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string(what) + ": expected a positive real, got '" + std::string(text) + "'");
  return v;
}

// Quasi-Cauchy prior density c*(1 - |u| Phi-bar(|u|)/phi(u)), c = phi(0).
// The bracket cancels to O(u^-2); switch to its tail series once the direct
// form would lose more than ~1e-12 relative.
double quasi_cauchy_bracket(double au) {
  if (au < 30.0) return 1.0 - au * kSqrt2Pi * scaled_upper_tail(au);
  const double inv2 = 1.0 / (au * au);
  double term = inv2, sum = 0.0;
  for (int k = 1; k <= 12; ++k) {
    sum += term;
    term *= -(2 * k + 1) * inv2;
  }
  return sum;  // 1/u^2 - 3/u^4 + 15/u^6 - ...
}

}  // namespace

SlabSpec SlabSpec::laplace(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("Laplace slab: inverse scale must be positive");
  return {SlabFamily::Laplace, a};
}

SlabSpec SlabSpec::cauchy(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("Cauchy slab: inverse scale must be positive");
  return {SlabFamily::Cauchy, lambda};
}

SlabSpec SlabSpec::quasi_cauchy() { return {SlabFamily::QuasiCauchy, 0.0}; }

SlabSpec SlabSpec::parse(std::string_view text) {
  if (text == "quasicauchy") return quasi_cauchy();
  if (text.rfind("lap:", 0) == 0) return laplace(parse_positive(text.substr(4), "lap"));
  if (text.rfind("cauchy:", 0) == 0) return cauchy(parse_positive(text.substr(7), "cauchy"));
  throw ConfigError("unrecognized slab spec '" + std::string(text) +
                    "' (expected lap:<a>, cauchy:<lambda>, or quasicauchy)");
}

std::string SlabSpec::str() const {
  char buf[64];
  switch (family) {
    case SlabFamily::Laplace:
      std::snprintf(buf, sizeof buf, "lap:%.17g", param);
      return buf;
    case SlabFamily::Cauchy:
      std::snprintf(buf, sizeof buf, "cauchy:%.17g", param);
      return buf;
    case SlabFamily::QuasiCauchy:
      return "quasicauchy";
  }
  return "?";
}

double SlabSpec::density(double u) const {
  const double au = std::abs(u);
  switch (family) {
    case SlabFamily::Laplace:
      return 0.5 * param * std::exp(-param * au);
    case SlabFamily::Cauchy:
      return param / (M_PI * (1.0 + param * param * u * u));
    case SlabFamily::QuasiCauchy:
      return kInvSqrt2Pi * quasi_cauchy_bracket(au);
  }
  return 0.0;
}

double SlabSpec::log_density(double u) const {
  const double au = std::abs(u);
  switch (family) {
    case SlabFamily::Laplace:
      return std::log(0.5 * param) - param * au;
    case SlabFamily::Cauchy:
      return std::log(param / M_PI) - std::log1p(param * param * u * u);
    case SlabFamily::QuasiCauchy:
      return std::log(kInvSqrt2Pi) + std::log(quasi_cauchy_bracket(au));
  }
  return 0.0;
}

double SlabSpec::tail_kappa() const {
  return family == SlabFamily::Laplace ? 1.0 : 2.0;
}

}  // namespace slabeb
