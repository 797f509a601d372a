// Command-line front end: risk experiments, table sweeps, rate formulas,
// inequality verification, and marginal-likelihood fitting.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slabeb/errors.hpp"
#include "slabeb/mmle.hpp"
#include "slabeb/sim.hpp"
#include "slabeb/ssl.hpp"
#include "slabeb/theory.hpp"
#include "slabeb/verify.hpp"

namespace {

using namespace slabeb;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Routes output to --out if given, else stdout.
struct OutSink {
  std::ofstream file;
  std::ostream& open(const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file: " + path);
    return file;
  }
};

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw ConfigError("empty list: " + text);
  return out;
}

std::optional<double> parse_signal(const std::string& text) {
  if (text == "auto") return std::nullopt;
  return std::stod(text);
}

Eigen::ArrayXd read_data(const std::string& path, const std::string& format) {
  std::vector<double> vals;
  if (format == "txt") {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path);
    double v;
    while (in >> v) vals.push_back(v);
  } else if (format == "f64le") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file: " + path);
    double v;
    while (in.read(reinterpret_cast<char*>(&v), sizeof v)) vals.push_back(v);
  } else {
    throw ConfigError("unknown format: " + format + " (expected txt or f64le)");
  }
  if (vals.empty()) throw ConfigError("no data read from " + path);
  return Eigen::Map<const Eigen::ArrayXd>(vals.data(),
                                          static_cast<Eigen::Index>(vals.size()));
}

bool is_ssl_model(const std::string& model) {
  return model.rfind("ssl", 0) == 0;
}

nlohmann::json fit_to_json(const EbFit& fit) {
  nlohmann::json j;
  j["alpha_hat"] = fit.alpha_hat;
  j["zeta_hat"] = fit.zeta_hat;
  j["t_hat"] = fit.t_hat;
  j["at_lower_boundary"] = fit.at_lower_boundary;
  j["at_upper_boundary"] = fit.at_upper_boundary;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"empirical Bayes spike-and-slab risk toolkit"};
  app.require_subcommand(1);

  // risk
  auto* risk = app.add_subcommand("risk", "Monte-Carlo risk estimate for one model");
  std::string r_model = "sas", r_slab = "lap:1", r_signal = "auto", r_out;
  std::int64_t r_n = 0, r_s = 0;
  int r_reps = 100, r_threads = 1;
  std::uint64_t r_seed = 42;
  std::optional<double> r_modified;
  risk->add_option("--model", r_model, "sas or an ssl spec (ssl[:lambda0=..][:lambda1=..][:slab1=..])");
  risk->add_option("--slab", r_slab, "slab spec for sas: lap:<a>, cauchy:<lambda>, quasicauchy");
  risk->add_option("--n", r_n)->required();
  risk->add_option("--s", r_s)->required();
  risk->add_option("--signal", r_signal, "auto (sqrt(2 log(n/s))) or an explicit value");
  risk->add_option("--reps", r_reps);
  risk->add_option("--seed", r_seed);
  risk->add_option("--threads", r_threads);
  risk->add_option("--modified", r_modified, "use the threshold-capped estimator with this A");
  risk->add_option("--out", r_out, "output CSV path (default stdout)");

  // table1
  auto* table1 = app.add_subcommand("table1", "Laplace-slab risk sweep over rate a");
  std::string t_a = "0.5,1,1.5,2,2.5,3,3.5", t_out;
  std::int64_t t_n = 10000000, t_s = 10;
  int t_reps = 100, t_threads = 1;
  std::uint64_t t_seed = 42;
  table1->add_option("--a", t_a, "comma-separated Laplace rates");
  table1->add_option("--n", t_n);
  table1->add_option("--s", t_s);
  table1->add_option("--reps", t_reps);
  table1->add_option("--seed", t_seed);
  table1->add_option("--threads", t_threads);
  table1->add_option("--out", t_out);

  // rates
  auto* rates = app.add_subcommand("rates", "minimax rate and suboptimality factor");
  std::int64_t q_n = 0, q_s = 0;
  std::string q_slab = "cauchy:1", q_out;
  double q_d = 1.0;
  rates->add_option("--n", q_n)->required();
  rates->add_option("--s", q_s)->required();
  rates->add_option("--slab", q_slab, "slab used for the zeta1/alpha1 calibration");
  rates->add_option("--d", q_d, "calibration constant in d alpha1 mtilde(alpha1) = s/n");
  rates->add_option("--out", q_out);

  // verify
  auto* verify = app.add_subcommand("verify", "run the inequality grid checks");
  std::string v_model = "lap:1", v_json;
  std::int64_t v_n = 100000;
  verify->add_option("--model", v_model, "slab spec (sas) or ssl spec");
  verify->add_option("--n", v_n, "model size");
  verify->add_option("--json", v_json, "also write the JSON report here");

  // fit
  auto* fit = app.add_subcommand("fit", "marginal maximum likelihood fit of alpha");
  std::string f_in, f_format = "txt", f_model = "sas", f_slab = "lap:1";
  std::optional<double> f_modified;
  fit->add_option("--in", f_in)->required();
  fit->add_option("--format", f_format, "txt or f64le");
  fit->add_option("--model", f_model, "sas or an ssl spec");
  fit->add_option("--slab", f_slab, "slab spec for sas");
  fit->add_option("--modified", f_modified, "apply the threshold cap with this A");

  CLI11_PARSE(app, argc, argv);

  if (*risk) {
    SignalConfig cfg{r_n, r_s, parse_signal(r_signal)};
    RiskOptions opt;
    opt.reps = r_reps;
    opt.seed = r_seed;
    opt.threads = r_threads;
    opt.modified_A = r_modified;
    OutSink sink;
    std::ostream& os = sink.open(r_out);
    if (is_ssl_model(r_model)) {
      SslModel model = SslModel::parse(r_model, r_n);
      write_risk_csv(os, model.str(), cfg, estimate_risks(model, cfg, opt));
    } else if (r_model == "sas") {
      SlabSpec slab = SlabSpec::parse(r_slab);
      MarginalOptions mopt{MarginalDensity::default_backend(slab), 1e-10,
                           slab.family == SlabFamily::Cauchy};
      SasModel model(r_n, slab, mopt);
      write_risk_csv(os, "sas/" + slab.str(), cfg, estimate_risks(model, cfg, opt));
    } else {
      throw ConfigError("unknown model: " + r_model);
    }
    return 0;
  }

  if (*table1) {
    auto rows = table1_experiment(parse_real_list(t_a), t_n, t_s, t_reps, t_seed,
                                  t_threads);
    OutSink sink;
    write_table1_csv(sink.open(t_out), rows, t_n, t_s, t_reps, t_seed);
    return 0;
  }

  if (*rates) {
    SlabSpec slab = SlabSpec::parse(q_slab);
    SasModel model(q_n, slab);
    RateQuantities rq = solve_alpha1(model, q_n, q_s, q_d);
    OutSink sink;
    std::ostream& os = sink.open(q_out);
    os << "# model=sas/" << slab.str() << "\n";
    os << "n,s,r_n,R_n,zeta1,alpha1\n";
    os << rq.n << ',' << rq.s << ',' << fmt17(rq.r_n) << ',' << fmt17(rq.R_n) << ','
       << fmt17(rq.zeta1) << ',' << fmt17(rq.alpha1) << "\n";
    return 0;
  }

  if (*verify) {
    VerifyReport rep;
    if (is_ssl_model(v_model)) {
      rep = verify_ssl(SslModel::parse(v_model, v_n));
    } else {
      rep = verify_sas(SasModel(v_n, SlabSpec::parse(v_model)));
    }
    std::cout << rep.to_text();
    if (!v_json.empty()) {
      std::ofstream jf(v_json);
      if (!jf) throw ConfigError("cannot open output file: " + v_json);
      jf << rep.to_json() << "\n";
    }
    return rep.all_pass() ? 0 : 1;
  }

  if (*fit) {
    Eigen::ArrayXd data = read_data(f_in, f_format);
    EbFit result;
    if (is_ssl_model(f_model)) {
      SslModel model = SslModel::parse(f_model, data.size());
      result = ssl_fit_mmle(model, data);
    } else if (f_model == "sas") {
      SlabSpec slab = SlabSpec::parse(f_slab);
      SasModel model(data.size(), slab);
      result = f_modified ? fit_modified(model, data, *f_modified)
                          : fit_mmle(model, data);
    } else {
      throw ConfigError("unknown model: " + f_model);
    }
    std::cout << fit_to_json(result).dump(2) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
