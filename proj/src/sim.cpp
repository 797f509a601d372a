#include "slabeb/sim.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "slabeb/errors.hpp"
#include "slabeb/gauss.hpp"
#include "slabeb/mmle.hpp"
#include "slabeb/rng.hpp"

namespace slabeb {
namespace {

constexpr char kGeneratorName[] = "mt19937_64/box-muller/splitmix-streams";

struct RepTerms {
  double r2 = 0.0, mean = 0.0, median = 0.0, alpha = 0.0;
};

void validate(const SignalConfig& cfg, const RiskOptions& opt) {
  if (cfg.n < 1 || cfg.s < 0 || cfg.s > cfg.n)
    throw DomainError("signal config: need 0 <= s <= n, n >= 1");
  if (opt.reps < 1) throw DomainError("estimate_risks: reps must be >= 1");
  if (opt.threads < 1) throw DomainError("estimate_risks: threads must be >= 1");
}

// One SAS repetition. The beta vector doubles as the per-coordinate cache:
// the risk pass re-derives the posterior weight from it without touching the
// marginal again; only the marginal ratios are evaluated a second time.
RepTerms run_rep_sas(const SasModel& model, const SignalConfig& cfg,
                     const RiskOptions& opt, std::uint64_t rep) {
  const std::int64_t n = cfg.n, s = cfg.s;
  const double mu = cfg.resolved_value();
  const MarginalDensity& md = model.marginal();

  Eigen::ArrayXd x(n);
  NormalStream rng(opt.seed, rep);
  for (std::int64_t i = 0; i < n; ++i) x[i] = (i < s ? mu : 0.0) + rng.next();

  RepTerms out;
  double alpha;
  if (opt.forced_alpha) {
    alpha = *opt.forced_alpha;
  } else {
    Eigen::ArrayXd beta(n);
    for (std::int64_t i = 0; i < n; ++i) beta[i] = md.beta(x[i]);
    EbFit fit = fit_mmle_from_beta(model, beta);
    if (opt.modified_A) fit = fit_modified_from_fit(model, fit, *opt.modified_A);
    alpha = fit.alpha_hat;
  }
  out.alpha = alpha;

  if (alpha <= 0.0) {  // posterior is the point mass at zero
    out.r2 = out.mean = out.median = static_cast<double>(s) * mu * mu;
    return out;
  }
  const double t_hat = alpha >= 1.0 ? 0.0 : model.threshold_t(alpha);
  const double ratio = (1.0 - alpha) / alpha;
  for (std::int64_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double th = i < s ? mu : 0.0;
    const MarginalDensity::Ratios r = md.ratios(xi);
    const double q = ratio * std::exp(-r.log_g_over_phi);
    const double a = 1.0 / (1.0 + q), ac = q / (1.0 + q);
    const double d = xi - th;
    out.r2 += ac * th * th + a * (d * d + 1.0 + r.g2_over_g + 2.0 * d * r.dlog_g);
    const double pmean = a * (xi + r.dlog_g);
    out.mean += (pmean - th) * (pmean - th);
    const double pmed = std::abs(xi) <= t_hat ? 0.0 : model.post_median(alpha, xi);
    out.median += (pmed - th) * (pmed - th);
  }
  return out;
}

RepTerms run_rep_ssl(const SslModel& model, const SignalConfig& cfg,
                     const RiskOptions& opt, std::uint64_t rep) {
  const std::int64_t n = cfg.n, s = cfg.s;
  const double mu = cfg.resolved_value();

  Eigen::ArrayXd x(n);
  NormalStream rng(opt.seed, rep);
  for (std::int64_t i = 0; i < n; ++i) x[i] = (i < s ? mu : 0.0) + rng.next();

  RepTerms out;
  double alpha;
  if (opt.forced_alpha) {
    alpha = *opt.forced_alpha;
  } else {
    alpha = ssl_fit_mmle_from_beta(model, ssl_beta_values(model, x)).alpha_hat;
  }
  out.alpha = alpha;
  for (std::int64_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double th = i < s ? mu : 0.0;
    out.r2 += model.risk_r2(alpha, th, xi);
    const double pmean = model.post_mean(alpha, xi);
    out.mean += (pmean - th) * (pmean - th);
    const double pmed = model.post_median(alpha, xi);
    out.median += (pmed - th) * (pmed - th);
  }
  return out;
}

template <typename RepFn>
RiskEstimate run_reps(const SignalConfig& cfg, const RiskOptions& opt, RepFn rep_fn) {
  const auto start = std::chrono::steady_clock::now();
  const int reps = opt.reps;
  std::vector<RepTerms> terms(reps);
  std::vector<std::string> failures(reps);
  const int threads = std::min(opt.threads, reps);
  auto worker = [&](int tid) {
    for (int r = tid; r < reps; r += threads) {
      try {
        terms[r] = rep_fn(static_cast<std::uint64_t>(r));
      } catch (const std::exception& e) {
        failures[r] = e.what();
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }
  for (int r = 0; r < reps; ++r)
    if (!failures[r].empty())
      throw NumericalError("rep " + std::to_string(r) + " (seed " +
                           std::to_string(opt.seed) + "): " + failures[r]);

  RiskEstimate est;
  est.reps = reps;
  est.seed = opt.seed;
  est.rep_r2.reserve(reps);
  for (const RepTerms& t : terms) {  // fixed order: rep index
    est.rep_r2.push_back(t.r2);
    est.rep_rmean.push_back(t.mean);
    est.rep_rmedian.push_back(t.median);
    est.rep_alpha.push_back(t.alpha);
    est.r2 += t.r2;
    est.rmean += t.mean;
    est.rmedian += t.median;
  }
  est.r2 /= reps;
  est.rmean /= reps;
  est.rmedian /= reps;
  if (reps > 1) {
    double v2 = 0.0, vm = 0.0, vd = 0.0;
    for (const RepTerms& t : terms) {
      v2 += (t.r2 - est.r2) * (t.r2 - est.r2);
      vm += (t.mean - est.rmean) * (t.mean - est.rmean);
      vd += (t.median - est.rmedian) * (t.median - est.rmedian);
    }
    const double k = static_cast<double>(reps) * (reps - 1);
    est.se_r2 = std::sqrt(v2 / k);
    est.se_rmean = std::sqrt(vm / k);
    est.se_rmedian = std::sqrt(vd / k);
  }
  est.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return est;
}

void csv_headers(std::ostream& os, const std::string& model_str, std::uint64_t seed) {
  os << "# seed=" << seed << "\n";
  os << "# model=" << model_str << "\n";
  os << "# generator=" << kGeneratorName << "\n";
}

void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

double SignalConfig::resolved_value() const {
  if (value) return *value;
  if (s <= 0 || s >= n)
    throw DomainError("signal config: automatic level needs 0 < s < n");
  return std::sqrt(2.0 * std::log(static_cast<double>(n) / static_cast<double>(s)));
}

Eigen::ArrayXd gen_signal(const SignalConfig& cfg) {
  if (cfg.n < 1 || cfg.s < 0 || cfg.s > cfg.n)
    throw DomainError("signal config: need 0 <= s <= n, n >= 1");
  Eigen::ArrayXd theta = Eigen::ArrayXd::Zero(cfg.n);
  if (cfg.s > 0) theta.head(cfg.s).setConstant(cfg.resolved_value());
  return theta;
}

Eigen::ArrayXd gen_data(const Eigen::Ref<const Eigen::ArrayXd>& theta,
                        std::uint64_t seed, std::uint64_t rep) {
  Eigen::ArrayXd x(theta.size());
  NormalStream rng(seed, rep);
  for (Eigen::Index i = 0; i < theta.size(); ++i) x[i] = theta[i] + rng.next();
  return x;
}

RiskEstimate estimate_risks(const SasModel& model, const SignalConfig& cfg,
                            const RiskOptions& opt) {
  validate(cfg, opt);
  if (cfg.n != model.n())
    throw DomainError("estimate_risks: signal length does not match model n");
  return run_reps(cfg, opt,
                  [&](std::uint64_t rep) { return run_rep_sas(model, cfg, opt, rep); });
}

RiskEstimate estimate_risks(const SslModel& model, const SignalConfig& cfg,
                            const RiskOptions& opt) {
  validate(cfg, opt);
  if (cfg.n != model.n())
    throw DomainError("estimate_risks: signal length does not match model n");
  return run_reps(cfg, opt,
                  [&](std::uint64_t rep) { return run_rep_ssl(model, cfg, opt, rep); });
}

std::vector<Table1Row> table1_experiment(const std::vector<double>& a_values,
                                         std::int64_t n, std::int64_t s, int reps,
                                         std::uint64_t seed, int threads) {
  std::vector<Table1Row> rows;
  const SignalConfig cfg{n, s, std::nullopt};
  RiskOptions opt;
  opt.reps = reps;
  opt.seed = seed;
  opt.threads = threads;
  for (double a : a_values) {
    SasModel model(n, SlabSpec::laplace(a));
    rows.push_back({a, estimate_risks(model, cfg, opt)});
  }
  return rows;
}

void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows,
                      std::int64_t n, std::int64_t s, int reps, std::uint64_t seed) {
  csv_headers(os, "sas/laplace-sweep", seed);
  os << "# n=" << n << " s=" << s << " reps=" << reps << "\n";
  os << "a,second_moment,median,mean,se_second_moment,se_median,se_mean\n";
  for (const Table1Row& r : rows) {
    put(os, r.a);
    for (double v : {r.est.r2, r.est.rmedian, r.est.rmean, r.est.se_r2,
                     r.est.se_rmedian, r.est.se_rmean}) {
      os << ',';
      put(os, v);
    }
    os << "\n";
  }
}

std::vector<RateScalingRow> rate_scaling_experiment(const std::vector<SlabSpec>& slabs,
                                                    const std::vector<std::int64_t>& n_grid,
                                                    std::int64_t s, int reps,
                                                    std::uint64_t seed, int threads) {
  std::vector<RateScalingRow> rows;
  for (const SlabSpec& slab : slabs) {
    for (std::int64_t n : n_grid) {
      RateScalingRow row;
      row.slab = slab;
      row.n = n;
      row.s = s;
      MarginalOptions mopt{MarginalDensity::default_backend(slab), 1e-10,
                           slab.family == SlabFamily::Cauchy};
      SasModel model(n, slab, mopt);
      RiskOptions opt;
      opt.reps = reps;
      opt.seed = seed;
      opt.threads = threads;
      row.est = estimate_risks(model, SignalConfig{n, s, std::nullopt}, opt);
      // Deliberately restate the rate formulas instead of calling the solver
      // module, so the CSV columns cross-check it.
      const double lns = std::log(static_cast<double>(n) / static_cast<double>(s));
      row.r_n = 2.0 * static_cast<double>(s) * lns;
      row.R_n = std::exp(std::sqrt(2.0 * lns)) / lns;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_rate_scaling_csv(std::ostream& os, const std::vector<RateScalingRow>& rows,
                            int reps, std::uint64_t seed) {
  csv_headers(os, "sas/slab-by-n-sweep", seed);
  os << "# reps=" << reps << "\n";
  os << "slab,n,s,second_moment,se_second_moment,r2_over_rn,r_n,R_n\n";
  for (const RateScalingRow& r : rows) {
    os << r.slab.str() << ',' << r.n << ',' << r.s << ',';
    put(os, r.est.r2);
    os << ',';
    put(os, r.est.se_r2);
    os << ',';
    put(os, r.est.r2 / r.r_n);
    os << ',';
    put(os, r.r_n);
    os << ',';
    put(os, r.R_n);
    os << "\n";
  }
}

void write_risk_csv(std::ostream& os, const std::string& model_str,
                    const SignalConfig& cfg, const RiskEstimate& est) {
  csv_headers(os, model_str, est.seed);
  os << "n,s,signal,reps,R2_hat,se_R2,Rmean_hat,se_Rmean,Rmedian_hat,se_Rmedian,"
        "wall_seconds\n";
  os << cfg.n << ',' << cfg.s << ',';
  put(os, cfg.resolved_value());
  os << ',' << est.reps;
  for (double v : {est.r2, est.se_r2, est.rmean, est.se_rmean, est.rmedian,
                   est.se_rmedian, est.wall_seconds}) {
    os << ',';
    put(os, v);
  }
  os << "\n";
}

}  // namespace slabeb
