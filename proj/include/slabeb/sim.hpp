#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "slabeb/posterior.hpp"
#include "slabeb/ssl.hpp"

namespace slabeb {

/// Sparse mean vector: the first s coordinates carry the signal value, the
/// rest are zero. Empty value means sqrt(2 log(n/s)).
struct SignalConfig {
  std::int64_t n = 0, s = 0;
  std::optional<double> value;

  double resolved_value() const;
};

struct RiskEstimate {
  double r2 = 0.0, rmean = 0.0, rmedian = 0.0;
  double se_r2 = 0.0, se_rmean = 0.0, se_rmedian = 0.0;
  std::vector<double> rep_r2, rep_rmean, rep_rmedian, rep_alpha;
  int reps = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

struct RiskOptions {
  int reps = 100;
  std::uint64_t seed = 42;
  int threads = 1;
  std::optional<double> modified_A;
  std::optional<double> forced_alpha;  // test hook: skip the fit entirely
};

Eigen::ArrayXd gen_signal(const SignalConfig& cfg);

/// X = theta + Z with a dedicated normal stream per (seed, rep); identical
/// output regardless of thread placement.
Eigen::ArrayXd gen_data(const Eigen::Ref<const Eigen::ArrayXd>& theta,
                        std::uint64_t seed, std::uint64_t rep);

/// Per rep: simulate, fit alpha by marginal likelihood, then accumulate the
/// exact posterior second-moment / mean / median risks against theta.
RiskEstimate estimate_risks(const SasModel& model, const SignalConfig& cfg,
                            const RiskOptions& opt);
RiskEstimate estimate_risks(const SslModel& model, const SignalConfig& cfg,
                            const RiskOptions& opt);

struct Table1Row {
  double a = 0.0;
  RiskEstimate est;
};

std::vector<Table1Row> table1_experiment(const std::vector<double>& a_values,
                                         std::int64_t n, std::int64_t s, int reps,
                                         std::uint64_t seed, int threads = 1);
void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows,
                      std::int64_t n, std::int64_t s, int reps, std::uint64_t seed);

struct RateScalingRow {
  SlabSpec slab;
  std::int64_t n = 0, s = 0;
  RiskEstimate est;
  double r_n = 0.0, R_n = 0.0;  // computed from the plain formulas here,
                                // independently of the theory module
};

std::vector<RateScalingRow> rate_scaling_experiment(const std::vector<SlabSpec>& slabs,
                                                    const std::vector<std::int64_t>& n_grid,
                                                    std::int64_t s, int reps,
                                                    std::uint64_t seed, int threads = 1);
void write_rate_scaling_csv(std::ostream& os, const std::vector<RateScalingRow>& rows,
                            int reps, std::uint64_t seed);

void write_risk_csv(std::ostream& os, const std::string& model_str,
                    const SignalConfig& cfg, const RiskEstimate& est);

}  // namespace slabeb
