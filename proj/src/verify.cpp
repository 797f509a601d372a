#include "slabeb/verify.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"
#include "slabeb/mmle.hpp"
#include "slabeb/theory.hpp"

namespace slabeb {
namespace {

class Tracker {
 public:
  Tracker(std::string name, double tol = 0.0) : tol_(tol) {
    r_.name = std::move(name);
    r_.worst_margin = std::numeric_limits<double>::infinity();
  }
  void note(double margin, double x, double alpha) {
    if (!(margin >= r_.worst_margin)) {
      r_.worst_margin = margin;
      r_.where_x = x;
      r_.where_alpha = alpha;
    }
    if (!(margin >= -tol_)) r_.pass = false;
  }
  CheckResult done(std::string detail = {}) {
    r_.detail = std::move(detail);
    if (!std::isfinite(r_.worst_margin)) r_.pass = false;
    return r_;
  }

 private:
  double tol_;
  CheckResult r_;
};

std::vector<double> linspace(double a, double b, int k) {
  std::vector<double> v(k);
  for (int i = 0; i < k; ++i) v[i] = a + (b - a) * i / (k - 1);
  return v;
}

const std::vector<double> kAlphaGrid = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.3};

}  // namespace

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  os << "verification report for " << model << "\n";
  for (const auto& c : checks) {
    os << (c.pass ? "  PASS  " : "  FAIL  ") << c.name << "  worst margin "
       << c.worst_margin << " at x=" << c.where_x << " alpha=" << c.where_alpha;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  os << (all_pass() ? "all checks passed" : "CHECKS FAILED") << "\n";
  return os.str();
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["model"] = model;
  j["all_pass"] = all_pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"worst_margin", c.worst_margin},
                           {"where_x", c.where_x},
                           {"where_alpha", c.where_alpha},
                           {"detail", c.detail}});
  }
  return j.dump(2);
}

VerifyReport verify_sas(const SasModel& model, const VerifyOptions& opt) {
  VerifyReport rep;
  rep.model = model.marginal().slab().str();
  const MarginalDensity& md = model.marginal();
  const std::vector<double> xs = linspace(-10.0, 10.0, 81);
  const std::vector<double> xpos = linspace(0.0, 10.0, 41);

  {  // alpha g/(g v phi) <= a <= min(1, alpha/(1-alpha) g/phi)
    Tracker t("posterior weight sandwich", 1e-12);
    for (double alpha : kAlphaGrid) {
      for (double x : xs) {
        const double l = md.log_g_over_phi(x);
        const double q =
            (1.0 - alpha) / alpha * std::exp(-l) / opt.g_scale;
        const double a = 1.0 / (1.0 + q);
        const double lower = alpha * std::exp(std::min(l, 0.0));
        const double upper =
            std::exp(std::min(0.0, std::log(alpha / (1.0 - alpha)) + l));
        t.note(a - lower, x, alpha);
        t.note(upper - a, x, alpha);
      }
    }
    rep.checks.push_back(t.done());
  }

  if (md.slab().family == SlabFamily::Cauchy) {
    // 1 - a(x) <= exp(-(|x| - tau~)^2 / 2) past the capped threshold
    Tracker t("posterior weight tail bound", 1e-12);
    for (double alpha : {1e-4, 1e-3, 1e-2, 0.1}) {
      const double tt = model.tau_tilde(alpha);
      for (double x : linspace(0.0, 12.0, 49)) {
        const double ac = model.post_weight_compl(alpha, x);
        const double bound = x <= tt ? 1.0 : std::exp(-0.5 * (x - tt) * (x - tt));
        t.note(bound - ac, x, alpha);
      }
    }
    rep.checks.push_back(t.done());
  }

  {  // tau <= t <= zeta
    Tracker t("threshold ordering", 1e-8);
    for (double alpha : kAlphaGrid) {
      const Thresholds th = model.thresholds(alpha);
      t.note(th.t - th.tau, th.t, alpha);
      t.note(th.zeta - th.t, th.zeta, alpha);
    }
    rep.checks.push_back(t.done());
  }

  {  // a(tau(alpha)) = 1/2
    Tracker t("half-weight threshold identity", 0.0);
    for (double alpha : kAlphaGrid) {
      if (alpha >= model.alpha_star()) continue;
      const double tau = model.threshold_tau(alpha);
      t.note(1e-10 - std::abs(model.post_weight(alpha, tau) - 0.5), tau, alpha);
    }
    rep.checks.push_back(t.done());
  }

  {  // 0 <= post_mean(x) <= x for x >= 0
    Tracker t("shrinkage rule", 1e-10);
    for (double alpha : kAlphaGrid) {
      for (double x : xpos) {
        const double m = model.post_mean(alpha, x);
        t.note(m, x, alpha);
        t.note(x - m, x, alpha);
      }
    }
    rep.checks.push_back(t.done());
  }

  {  // mtilde nonnegative, increasing in alpha
    Tracker t("score mean increasing", 1e-12);
    double prev = 0.0;
    for (double alpha : {1e-4, 1e-3, 1e-2, 0.1, 0.3, 0.5}) {
      const double mt = m_tilde(model, alpha);
      t.note(mt, 0.0, alpha);
      t.note(mt - prev, 0.0, alpha);
      prev = mt;
    }
    rep.checks.push_back(t.done());
  }

  {  // m1(mu, .) decreasing in alpha
    Tracker t("shifted score mean decreasing", 1e-12);
    for (double mu : {0.0, 2.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double alpha : {1e-4, 1e-3, 1e-2, 0.1, 0.3}) {
        const double v = m1(model, mu, alpha);
        t.note(prev - v, mu, alpha);
        prev = v;
      }
    }
    rep.checks.push_back(t.done());
  }

  {  // alpha_A beta(t_A) < 1
    Tracker t("capped weight score bound", 0.0);
    for (double A : {0.0, 0.5, 1.0, 2.0}) {
      const double t_A =
          std::sqrt(2.0 * (1.0 + A) * std::log(static_cast<double>(model.n())));
      const double alpha_A = model.threshold_t_inverse(t_A);
      t.note(1.0 - alpha_A * model.beta(t_A), t_A, alpha_A);
    }
    rep.checks.push_back(t.done());
  }

  return rep;
}

VerifyReport verify_ssl(const SslModel& model, const VerifyOptions&) {
  VerifyReport rep;
  rep.model = model.str();
  const double l0 = model.lambda0(), l1 = model.lambda1();
  const double s2ln = model.sqrt_2log_n();

  {  // |g0 - phi| <= 1/lambda0^2 and g0 >= phi/2
    Tracker t("spike marginal close to noise density", 0.0);
    std::vector<double> xs = {0.0, 1.0, 3.0, s2ln};
    for (double x : linspace(0.0, 5.0, 21)) xs.push_back(x);
    for (double x : xs) {
      const double dev =
          std::abs(std_normal(x) * std::expm1(model.spike_marginal().log_g_over_phi(x)));
      t.note(1.0 / (l0 * l0) - dev, x, 0.0);
      t.note(model.spike_marginal().log_g_over_phi(x) - std::log(0.5), x, 0.0);
    }
    rep.checks.push_back(t.done());
  }

  {  // g0 <= 2 phi on [0, lambda0/2]; (log g0)' >= -x
    Tracker t("spike marginal two-sided bounds", 1e-12);
    for (double x : linspace(0.0, 0.5 * l0, 101))
      t.note(std::log(2.0) - model.spike_marginal().log_g_over_phi(x), x, 0.0);
    for (double x : linspace(0.01, std::min(0.5 * l0, 40.0), 101))
      t.note(model.spike_marginal().dlog_g(x) + x, x, 0.0);
    rep.checks.push_back(t.done());
  }

  {  // g0 <= C gamma0 in the far tail, C estimated on the grid
    Tracker t("spike marginal tail comparison", 0.0);
    double c_log = -std::numeric_limits<double>::infinity();
    const SlabSpec gamma0 = SlabSpec::laplace(l0);
    for (double x : linspace(0.125 * l0, 3.0 * l0, 24)) {
      const double r = model.log_g0(x) - gamma0.log_density(x);
      c_log = std::max(c_log, r);
      t.note(std::isfinite(r) ? 1.0 : -1.0, x, 0.0);
    }
    std::ostringstream d;
    d << "grid-estimated log C = " << c_log;
    rep.checks.push_back(t.done(d.str()));
  }

  {  // beta strictly increasing on J_n = [2 lambda1, sqrt(2 log n)]
    Tracker t("mixture score increasing on J_n", 0.0);
    double prev = -std::numeric_limits<double>::infinity();
    for (double x : linspace(2.0 * l1, s2ln, 200)) {
      const double b = model.beta(x);
      t.note(b - prev, x, 0.0);
      prev = b;
    }
    rep.checks.push_back(t.done());
  }

  {  // (g1/g0)(2 lambda1) < 0.25; beta < 0 on [0, 2 lambda1]
    Tracker t("slab-to-spike ratio near zero", 0.0);
    t.note(0.25 - std::exp(model.log_g1_over_g0(2.0 * l1)), 2.0 * l1, 0.0);
    for (double x : linspace(0.0, 2.0 * l1, 21)) t.note(-model.beta(x), x, 0.0);
    rep.checks.push_back(t.done());
  }

  {  // beta(sqrt(2 log n)) >= n / (C log n)
    Tracker t("calibration constant", 0.0);
    const double n = static_cast<double>(model.n());
    t.note(model.beta(s2ln) - n / (model.calibration_constant() * std::log(n)), s2ln,
           0.0);
    rep.checks.push_back(t.done());
  }

  {  // (1-a) int gamma_{0,x} + a int gamma_{1,x} = 1
    Tracker t("posterior mixture normalization", 0.0);
    for (double alpha : {0.1, 0.5}) {
      for (double x : {0.0, 1.0, 3.0}) {
        const double lo = -(std::abs(x) + 45.0);
        const double mass = model.post_weight_compl(alpha, x) * model.component_survivor(0, x, lo) +
                            model.post_weight(alpha, x) * model.component_survivor(1, x, lo);
        t.note(1e-8 - std::abs(mass - 1.0), x, alpha);
      }
    }
    rep.checks.push_back(t.done());
  }

  {  // tau~ >= lambda1 and zeta stays inside J_n where defined
    Tracker t("ssl threshold ranges", 1e-9);
    for (double alpha : {0.01, 0.1, 0.5, 0.9}) {
      t.note(model.tau_tilde(alpha) - l1, 0.0, alpha);
      try {
        const double z = model.threshold_zeta(alpha);
        t.note(z - 2.0 * l1, z, alpha);
        t.note(s2ln - z, z, alpha);
      } catch (const DomainError&) {
        // 1/alpha outside beta(J_n); nothing to check
      }
    }
    rep.checks.push_back(t.done());
  }

  return rep;
}

}  // namespace slabeb
