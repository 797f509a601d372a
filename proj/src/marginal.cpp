#include "slabeb/marginal.hpp"

#include <cmath>
#include <vector>

#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"
#include "slabeb/quadrature.hpp"

namespace slabeb {
namespace {

// ---------------------------------------------------------------------------
// Laplace slab, closed form. With H(z) = e^{z^2/2} Phi-bar(z):
//   g(x)  = (a sqrt(2pi)/2) phi(x) [H(a-|x|) + H(a+|x|)]
//   g'(x) = (a^2 sqrt(2pi)/2) phi(x) [H(a+x) - H(a-x)]   (odd)
//   g''   = a^2 (g - phi)
// For a >= 300 and |x| << a the bracket is 1 + O(1/a^2) and the forms above
// cancel; switch to the Gaussian-smoothing series g/phi = 1 + sum_k
// He_{2k}(x)/a^{2k} (Laplace moments m_{2k} = (2k)!/a^{2k}).

bool laplace_series_regime(double a, double ax) { return a >= 300.0 && ax <= 0.05 * a; }

MarginalDensity::Ratios laplace_series(double a, double x) {
  const double x2 = x * x, ia2 = 1.0 / (a * a);
  const double he2 = x2 - 1.0;
  const double he4 = (x2 - 6.0) * x2 + 3.0;
  const double he6 = ((x2 - 15.0) * x2 + 45.0) * x2 - 15.0;
  const double he8 = (((x2 - 28.0) * x2 + 210.0) * x2 - 420.0) * x2 + 105.0;
  const double delta = ia2 * (he2 + ia2 * (he4 + ia2 * (he6 + ia2 * he8)));
  const double dhe2 = 2.0 * x;
  const double dhe4 = (4.0 * x2 - 12.0) * x;
  const double dhe6 = ((6.0 * x2 - 60.0) * x2 + 90.0) * x;
  const double dhe8 = (((8.0 * x2 - 168.0) * x2 + 840.0) * x2 - 840.0) * x;
  const double ddelta = ia2 * (dhe2 + ia2 * (dhe4 + ia2 * (dhe6 + ia2 * dhe8)));
  MarginalDensity::Ratios r;
  r.log_g_over_phi = std::log1p(delta);
  r.dlog_g = -x + ddelta / (1.0 + delta);
  r.g2_over_g = (a * a) * delta / (1.0 + delta);
  return r;
}

MarginalDensity::Ratios laplace_ratios(double a, double x) {
  const double ax = std::abs(x);
  if (laplace_series_regime(a, ax)) return laplace_series(a, x);
  const double zm = a - ax, zp = a + ax;
  MarginalDensity::Ratios r;
  if (zm > -25.0) {
    const double hm = scaled_upper_tail(zm), hp = scaled_upper_tail(zp);
    r.log_g_over_phi = std::log(0.5 * a * kSqrt2Pi * (hm + hp));
    r.dlog_g = a * (hp - hm) / (hp + hm);
  } else {
    const double lm = log_scaled_upper_tail(zm), lp = log_scaled_upper_tail(zp);
    r.log_g_over_phi = std::log(0.5 * a * kSqrt2Pi) + log_sum_exp(lm, lp);
    const double rho = std::exp(lp - lm);  // <= 1 since H decreases
    r.dlog_g = a * (rho - 1.0) / (rho + 1.0);
  }
  if (x < 0.0) r.dlog_g = -r.dlog_g;
  r.g2_over_g = a * a * -std::expm1(-r.log_g_over_phi);
  return r;
}

// ---------------------------------------------------------------------------
// Quasi-Cauchy slab, closed form (docs/quasi_cauchy.md):
//   g(x) = phi(0) x^{-2} (1 - e^{-x^2/2}),  g/phi = (e^{x^2/2} - 1)/x^2.
// With W = 1/(e^{x^2/2} - 1):  g'/g = -2/x + xW,  g''/g = 6/x^2 - (3+x^2)W.
// Near zero everything comes from the series g/phi(0) = sum_{k>=1}
// (-1)^{k+1} x^{2k-2} / (2^k k!).

MarginalDensity::Ratios quasi_cauchy_ratios(double x) {
  MarginalDensity::Ratios r;
  const double x2 = x * x;
  if (std::abs(x) < 0.5) {
    // p = g/phi(0); the k = 1 term is the constant 1/2.
    double p = 0.5, dp = 0.0, d2p = 0.0, coef = -0.125, xe = 1.0;
    for (int k = 2; k <= 10; ++k) {
      const int e = 2 * k - 2;
      d2p += coef * e * (e - 1) * xe;
      xe *= x;
      dp += coef * e * xe;
      xe *= x;
      p += coef * xe;
      coef *= -0.5 / (k + 1);
    }
    r.log_g_over_phi = std::log(p) + 0.5 * x2;
    r.dlog_g = dp / p;
    r.g2_over_g = d2p / p;
    return r;
  }
  if (0.5 * x2 > 700.0) {
    r.log_g_over_phi = 0.5 * x2 - 2.0 * std::log(std::abs(x));
    r.dlog_g = -2.0 / x;
    r.g2_over_g = 6.0 / x2;
    return r;
  }
  const double em = std::expm1(0.5 * x2);
  const double w = 1.0 / em;
  r.log_g_over_phi = std::log(em) - 2.0 * std::log(std::abs(x));
  r.dlog_g = -2.0 / x + x * w;
  r.g2_over_g = 6.0 / x2 - (3.0 + x2) * w;
  return r;
}

// ---------------------------------------------------------------------------
// Cauchy slab rational-density derivatives (for the |x| > 50 smoothing
// expansion g ~ gamma + gamma''/2 + gamma''''/8).

struct CauchyDerivs {
  double d0, d1, d2, d3, d4, d5, d6;
};

CauchyDerivs cauchy_gamma_derivs(double lambda, double x) {
  const double t = lambda * x, c = lambda / M_PI;
  const double q = 1.0 / (1.0 + t * t);
  const double t2 = t * t;
  CauchyDerivs d;
  double l = lambda;
  d.d0 = c * q;
  d.d1 = c * l * (-2.0 * t) * q * q;
  l *= lambda;
  d.d2 = c * l * (6.0 * t2 - 2.0) * q * q * q;
  l *= lambda;
  d.d3 = c * l * 24.0 * t * (1.0 - t2) * std::pow(q, 4);
  l *= lambda;
  d.d4 = c * l * ((120.0 * t2 - 240.0) * t2 + 24.0) * std::pow(q, 5);
  l *= lambda;
  d.d5 = c * l * ((-720.0 * t2 + 2400.0) * t2 - 720.0) * t * std::pow(q, 6);
  l *= lambda;
  d.d6 = c * l * (((5040.0 * t2 - 25200.0) * t2 + 15120.0) * t2 - 720.0) * std::pow(q, 7);
  return d;
}

constexpr double kTableMax = 50.0;
constexpr int kTableKnots = 4096;

}  // namespace

// Convolution moments I_m = integral K_m(x-u) gamma(u) du with K_0 = phi,
// K_1 = phi', K_2 = phi'', K_3 = phi'''; panels split at the two integrand
// peaks u = 0 and u = x.
namespace {

double kernel(int m, double t, double ph) {
  switch (m) {
    case 0: return ph;
    case 1: return -t * ph;
    case 2: return (t * t - 1.0) * ph;
    default: return (3.0 * t - t * t * t) * ph;
  }
}

double convolution_moment(const SlabSpec& slab, double x, int m, double rel_tol,
                          double abs_floor) {
  constexpr double w = 42.0;
  std::vector<double> pts = {x - w, x, x + w};
  if (x - w > -w || x + w < w) {
    for (double p : {-w, 0.0, w}) pts.push_back(p);
  } else {
    pts.push_back(0.0);
  }
  const double lo = std::min(x - w, -w), hi = std::max(x + w, w);
  std::vector<double> panels;
  for (double p : pts)
    if (p >= lo && p <= hi) panels.push_back(p);
  panels.push_back(lo);
  panels.push_back(hi);
  auto f = [&](double u) {
    const double t = x - u;
    return kernel(m, t, std_normal(t)) * slab.density(u);
  };
  return integrate_panels(f, panels, {rel_tol, abs_floor, 4096}).value;
}

}  // namespace

struct MarginalDensity::Table {
  double h;
  std::vector<double> g, g1, g2, g3;

  static Table build(const SlabSpec& slab, double rel_tol) {
    Table t;
    t.h = kTableMax / (kTableKnots - 1);
    t.g.resize(kTableKnots);
    t.g1.resize(kTableKnots);
    t.g2.resize(kTableKnots);
    t.g3.resize(kTableKnots);
    for (int i = 0; i < kTableKnots; ++i) {
      const double x = i * t.h;
      const double g0 = convolution_moment(slab, x, 0, rel_tol, 0.0);
      const double floor = rel_tol * g0 * (1.0 + x) * (1.0 + x);
      t.g[i] = g0;
      t.g1[i] = convolution_moment(slab, x, 1, rel_tol, floor);
      t.g2[i] = convolution_moment(slab, x, 2, rel_tol, floor);
      t.g3[i] = convolution_moment(slab, x, 3, rel_tol, floor);
    }
    return t;
  }

  // Cubic Hermite from the value array v and slope array d.
  static double hermite(double s, double v0, double v1, double m0, double m1) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * v1 + (s3 - s2) * m1;
  }

  Derivs eval(double ax) const {
    int i = static_cast<int>(ax / h);
    if (i >= kTableKnots - 1) i = kTableKnots - 2;
    const double s = ax / h - i;
    Derivs d;
    d.g = hermite(s, g[i], g[i + 1], h * g1[i], h * g1[i + 1]);
    d.g1 = hermite(s, g1[i], g1[i + 1], h * g2[i], h * g2[i + 1]);
    d.g2 = hermite(s, g2[i], g2[i + 1], h * g3[i], h * g3[i + 1]);
    return d;
  }
};

MarginalBackend MarginalDensity::default_backend(const SlabSpec& slab) {
  return slab.has_closed_form_marginal() ? MarginalBackend::ClosedForm
                                         : MarginalBackend::AdaptiveQuadrature;
}

MarginalDensity::MarginalDensity(SlabSpec slab)
    : MarginalDensity(slab, MarginalOptions{default_backend(slab), 1e-10, false}) {}

MarginalDensity::MarginalDensity(SlabSpec slab, MarginalOptions opt)
    : slab_(slab), opt_(opt) {
  if (opt_.backend == MarginalBackend::ClosedForm && !slab_.has_closed_form_marginal())
    throw ConfigError("no closed-form marginal for slab " + slab_.str());
  if (opt_.interpolation_table) {
    if (opt_.backend != MarginalBackend::AdaptiveQuadrature)
      throw ConfigError("interpolation table applies to the quadrature backend only");
    table_ = std::make_shared<const Table>(Table::build(slab_, opt_.rel_tol));
  }
}

MarginalDensity::Derivs MarginalDensity::eval_quadrature(double x) const {
  const double ax = std::abs(x);
  Derivs d;
  if (ax > kTableMax) {
    const CauchyDerivs cd = slab_.family == SlabFamily::Cauchy
                                ? cauchy_gamma_derivs(slab_.param, ax)
                                : CauchyDerivs{};
    if (slab_.family == SlabFamily::Cauchy) {
      d.g = cd.d0 + 0.5 * cd.d2 + 0.125 * cd.d4;
      d.g1 = cd.d1 + 0.5 * cd.d3 + 0.125 * cd.d5;
      d.g2 = cd.d2 + 0.5 * cd.d4 + 0.125 * cd.d6;
      if (x < 0.0) d.g1 = -d.g1;
      return d;
    }
  }
  if (table_) {
    d = table_->eval(ax);
  } else {
    d.g = convolution_moment(slab_, ax, 0, opt_.rel_tol, 0.0);
    const double floor = opt_.rel_tol * d.g * (1.0 + ax) * (1.0 + ax);
    d.g1 = convolution_moment(slab_, ax, 1, opt_.rel_tol, floor);
    d.g2 = convolution_moment(slab_, ax, 2, opt_.rel_tol, floor);
  }
  if (x < 0.0) d.g1 = -d.g1;
  return d;
}

MarginalDensity::Ratios MarginalDensity::ratios(double x) const {
  if (opt_.backend == MarginalBackend::ClosedForm) {
    return slab_.family == SlabFamily::Laplace ? laplace_ratios(slab_.param, x)
                                               : quasi_cauchy_ratios(x);
  }
  const Derivs d = eval_quadrature(x);
  Ratios r;
  r.log_g_over_phi = std::log(d.g) - log_std_normal(x);
  r.dlog_g = d.g1 / d.g;
  r.g2_over_g = d.g2 / d.g;
  return r;
}

double MarginalDensity::log_g_over_phi(double x) const { return ratios(x).log_g_over_phi; }

double MarginalDensity::log_g(double x) const {
  return log_g_over_phi(x) + log_std_normal(x);
}

double MarginalDensity::g(double x) const {
  if (opt_.backend == MarginalBackend::AdaptiveQuadrature) return eval_quadrature(x).g;
  return std::exp(log_g(x));
}

double MarginalDensity::beta(double x) const {
  const double l = log_g_over_phi(x);
  if (l < 690.0) return std::expm1(l);
  return std::exp(std::min(l, 705.0));  // guard far outside any data range
}

double MarginalDensity::dlog_g(double x) const { return ratios(x).dlog_g; }

double MarginalDensity::g2_over_g(double x) const { return ratios(x).g2_over_g; }

MarginalDensity::Derivs MarginalDensity::eval(double x) const {
  if (opt_.backend == MarginalBackend::AdaptiveQuadrature) return eval_quadrature(x);
  const Ratios r = ratios(x);
  Derivs d;
  d.g = std::exp(r.log_g_over_phi + log_std_normal(x));
  d.g1 = r.dlog_g * d.g;
  d.g2 = r.g2_over_g * d.g;
  return d;
}

}  // namespace slabeb
