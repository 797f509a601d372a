#pragma once

#include <string>
#include <vector>

#include "slabeb/posterior.hpp"
#include "slabeb/ssl.hpp"

namespace slabeb {

struct CheckResult {
  std::string name;
  bool pass = true;
  double worst_margin = 0.0;  // smallest slack seen; negative means violated
  double where_x = 0.0;
  double where_alpha = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::string model;
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::string to_text() const;
  std::string to_json() const;
};

struct VerifyOptions {
  /// Fault-injection hook: scales g inside the computed posterior weight
  /// (bounds still use the true g). Leave at 1 outside tests.
  double g_scale = 1.0;
};

/// Grid checks of the provable inequalities: posterior-weight sandwich, tail
/// bound, threshold ordering and identities, shrinkage, score-moment
/// monotonicity, capped-estimator bound.
VerifyReport verify_sas(const SasModel& model, const VerifyOptions& opt = {});

/// SSL counterparts: spike-marginal bounds, beta monotonicity and sign,
/// mixture normalization.
VerifyReport verify_ssl(const SslModel& model, const VerifyOptions& opt = {});

}  // namespace slabeb
