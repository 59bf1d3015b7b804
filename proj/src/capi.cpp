#include "wlab.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "json.hpp"
#include "wlab/harness.hpp"
#include "wlab/multiscale.hpp"
#include "wlab/numerics.hpp"
#include "wlab/phasespace.hpp"
#include "wlab/potentials.hpp"
#include "wlab/schrodgrid.hpp"
#include "wlab/specfun.hpp"
#include "wlab/tauberian.hpp"
#include "wlab/weylquant.hpp"

using nlohmann::json;
using namespace wlab;

struct wlab_config {
  harness::ExperimentConfig cfg;
};

struct wlab_result {
  std::string csv;
  std::string report;
  std::string manifest;
  bool passed = true;
};

namespace {

thread_local std::string g_error;

wlab_status fail(wlab_status st, const std::string& msg) {
  g_error = msg;
  return st;
}

potentials::PotentialModel config_potential(const harness::ExperimentConfig& cfg) {
  auto params = cfg.potential_params;
  params["dimension"] = cfg.dimension;
  return potentials::make_library_potential(cfg.potential_name, params);
}

double first_hbar(const harness::ExperimentConfig& cfg) {
  if (cfg.hbar_schedule.empty())
    throw harness::ConfigError("command needs a non-empty hbar schedule");
  return cfg.hbar_schedule.front();
}

void cmd_sweep(const harness::ExperimentConfig& cfg, wlab_result& res) {
  auto records = harness::run_sweep(cfg);
  int valid = 0;
  for (const auto& r : records)
    if (r.valid) ++valid;
  if (!records.empty() && valid == 0)
    throw harness::GateError("sweep: every record failed a numerical gate");
  res.csv = harness::to_csv(records, cfg.deterministic_output);
  json rep;
  rep["records"] = json::parse(harness::to_json(records, cfg.deterministic_output));
  if (valid >= 4) {
    auto f = harness::fit_exponent(records, cfg.assert_field);
    rep["fit"] = {{"field", cfg.assert_field},
                  {"slope", f.slope},
                  {"intercept", f.intercept},
                  {"r_squared", f.r_squared},
                  {"points", f.points}};
    res.passed = f.slope >= cfg.assert_min;
  } else {
    res.passed = !records.empty();
  }
  res.report = rep.dump(2);
}

void cmd_weyl_term(const harness::ExperimentConfig& cfg, wlab_result& res) {
  auto V = config_potential(cfg);
  auto phi = phasespace::make_localizer(cfg.dimension, cfg.localizer_center,
                                        cfg.localizer_radius,
                                        cfg.localizer_plateau);
  phasespace::WeylTermRequest req;
  req.d = cfg.dimension;
  req.gamma = cfg.gamma;
  req.hbar = first_hbar(cfg);
  req.V = V.field;
  req.phi = phi;
  for (int j = 0; j < cfg.dimension; ++j) {
    req.lo[j] = cfg.localizer_center[j] - cfg.localizer_radius - 0.05;
    req.hi[j] = cfg.localizer_center[j] + cfg.localizer_radius + 0.05;
  }
  if (cfg.dimension >= 3) req.fixed_panels = 3;
  const double closed = phasespace::weyl_term_closed(req);
  const double direct = phasespace::weyl_term_quadrature(req, 2.0 * cfg.p_max);
  const double rel = std::abs(closed - direct) / std::max(1e-300, std::abs(closed));
  json rep = {{"closed", closed}, {"quadrature", direct}, {"rel_err", rel}};
  res.report = rep.dump(2);
  res.passed = rel <= 1e-6;
}

void cmd_mollify_rates(const harness::ExperimentConfig& cfg, wlab_result& res) {
  auto V = config_potential(cfg);
  if (cfg.dimension != 1)
    throw harness::ConfigError("mollify-rates: 1-D corpus only");
  auto kern = potentials::make_mollifier_kernel();
  json rows = json::array();
  bool ok = true;
  for (int order = 0; order <= 3; ++order) {
    std::vector<double> epss, sups;
    for (int j = 3; j <= 8; ++j) {
      const double eps = std::pow(2.0, -j);
      auto Ve = potentials::mollify(V, eps, kern, 1e-11);
      double sup = 0.0;
      const double R = V.support_radius;
      std::vector<double> xs;
      for (int i = 0; i <= 600; ++i)
        xs.push_back(-R - 0.5 + (2.0 * R + 1.0) * i / 600.0);
      for (int i = -120; i <= 120; ++i) xs.push_back(8.0 * eps * i / 120.0);
      for (double x : xs) {
        const double p[1] = {x};
        int alpha[3] = {order, 0, 0};
        double v_eps = Ve.derivative(p, alpha);
        double v = 0.0;
        if (order == 0) v = V.field.value(p);
        if (order == 1) V.field.gradient(p, &v);
        if (order == 2) {
          double h[1];
          V.field.hessian(p, h);
          v = h[0];
        }
        sup = std::max(sup, std::abs((order <= 2 ? v : 0.0) - v_eps));
      }
      epss.push_back(eps);
      sups.push_back(sup);
    }
    auto f = fit::loglog(epss, sups);
    const double expect = 2.0 + V.kappa - order;
    rows.push_back({{"order", order},
                    {"slope", f.slope},
                    {"expected", expect},
                    {"within", std::abs(f.slope - expect) <= 0.2}});
    ok = ok && std::abs(f.slope - expect) <= 0.2;
  }
  res.report = json{{"rates", rows}}.dump(2);
  res.passed = ok;
}

void cmd_quantize_check(const harness::ExperimentConfig& cfg, wlab_result& res) {
  (void)cfg;
  json rep;
  // trace formula on a Schwartz symbol, d = 1, N = 256
  {
    weylquant::PhaseGrid g;
    g.d = 1;
    g.N = 256;
    g.L = 6.0;
    g.hbar = 0.5;
    auto s = weylquant::gaussian_symbol(1, {0.4, 0, 0}, {-0.2, 0, 0}, 0.8, 0.9);
    auto tc = weylquant::trace_check(s, g);
    rep["trace"] = {{"matrix_trace", tc.matrix_trace},
                    {"integral", tc.integral},
                    {"rel_err", tc.rel_err}};
    res.passed = tc.rel_err <= 1e-6;
  }
  // composition residual slopes over the pinned sweep
  {
    auto a = weylquant::gaussian_symbol(1, {-0.35, 0, 0}, {0.15, 0, 0}, 3.0, 1.2);
    auto b = weylquant::gaussian_symbol(1, {0.35, 0, 0}, {-0.15, 0, 0}, 2.7, 1.32);
    std::vector<double> hbars = {0.4, 0.2, 0.1, 0.05}, r0s, r1s;
    for (double hb : hbars) {
      weylquant::PhaseGrid g;
      g.d = 1;
      g.N = 1024;
      g.L = 13.0;
      g.hbar = hb;
      auto r = weylquant::compose_residuals(a, b, g);
      r0s.push_back(r.r0);
      r1s.push_back(r.r1);
    }
    auto f0 = fit::loglog(hbars, r0s);
    auto f1 = fit::loglog(hbars, r1s);
    rep["composition"] = {{"r0_slope", f0.slope}, {"r1_slope", f1.slope}};
    res.passed = res.passed && std::abs(f0.slope - 1.0) <= 0.15 &&
                 std::abs(f1.slope - 2.0) <= 0.2;
  }
  res.report = rep.dump(2);
}

void cmd_spectrum(const harness::ExperimentConfig& cfg, wlab_result& res) {
  auto V = config_potential(cfg);
  const double hbar = first_hbar(cfg);
  schrodgrid::GridSpec grid;
  grid.d = cfg.dimension;
  grid.L = cfg.box_l;
  grid.N = cfg.grid_n;
  grid.boundary = cfg.boundary == "periodic"
                      ? schrodgrid::GridSpec::Boundary::periodic
                      : schrodgrid::GridSpec::Boundary::dirichlet;
  if (!grid.resolves(hbar, cfg.p_max))
    throw harness::GateError("spectrum: resolution gate failed");
  auto a = VectorField::zero(cfg.dimension);
  auto op = schrodgrid::discretize(V.field, a, cfg.mu, hbar, grid);
  auto spec = schrodgrid::eigensolve_below(op, cfg.lambda_cut, 1e-8);
  json rep;
  rep["count"] = spec.values.size();
  rep["complete"] = spec.complete;
  rep["residual_bound"] = spec.residual_bound;
  json vals = json::array();
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(spec.values.size(), 256); ++i)
    vals.push_back(spec.values[i]);
  rep["values"] = vals;
  if (!cfg.dump_matrix.empty()) {
    schrodgrid::dump_operator(op, cfg.dump_matrix);
    rep["dumped"] = cfg.dump_matrix;
  }
  res.report = rep.dump(2);
  res.passed = spec.complete;
}

void cmd_partition(const harness::ExperimentConfig& cfg, wlab_result& res) {
  auto V = config_potential(cfg);
  const double hbar = first_hbar(cfg);
  multiscale::Region region =
      multiscale::Region::ball(cfg.dimension, cfg.localizer_center,
                               cfg.localizer_radius);
  auto l = multiscale::calibrate_scale(V.field, hbar, region, 11.0);
  auto cover = multiscale::greedy_cover(region, l);
  multiscale::partition_of_unity(cover);
  json arr = json::array();
  for (size_t k = 0; k < cover.size(); ++k) {
    const double lk = cover.scales[k];
    const double fk = std::sqrt(lk);
    json row;
    row["k"] = k;
    json xk = json::array();
    for (int j = 0; j < cfg.dimension; ++j) xk.push_back(cover.centers[k][j]);
    row["x_k"] = xk;
    row["l_k"] = lk;
    row["f_k"] = fk;
    row["hbar_k"] = hbar / (lk * fk);
    row["mu_k"] = cfg.mu * lk / fk;
    row["overlap"] = cover.measured_overlap;
    arr.push_back(row);
  }
  json rep;
  rep["cover"] = arr;
  rep["A"] = l.A;
  rep["rho"] = l.rho;
  rep["overlap_bound"] = cover.overlap_bound;
  res.report = rep.dump(2);
  res.passed = cover.measured_overlap <= cover.overlap_bound;
}

void cmd_tauberian_check(const harness::ExperimentConfig& cfg, wlab_result& res) {
  auto spec = tauberian::build_mollifier(cfg.mollifier_T);
  double min_chi = 1e300;
  for (double t = 0.0; t < spec.tau_max; t += 0.19)
    min_chi = std::min(min_chi, spec.chi1(t));
  const double mass = spec.mass();
  const double outside = std::max(std::abs(spec.hat(1.0001 * spec.T)),
                                  std::abs(spec.hat(-1.37 * spec.T)));
  json rep = {{"T", spec.T},           {"T1", spec.T1},
              {"c_lower", spec.c_lower}, {"mass", mass},
              {"min_chi1", min_chi},   {"hat_outside_support", outside}};
  res.report = rep.dump(2);
  res.passed = std::abs(mass - 1.0) <= 1e-8 && min_chi >= -1e-12 &&
               spec.T1 > 0.0 && spec.c_lower > 0.0 && outside <= 1e-10;
}

void cmd_report(const harness::ExperimentConfig& cfg, wlab_result& res) {
  if (cfg.records_csv.empty())
    throw harness::ConfigError("report: config needs records_csv");
  std::ifstream in(cfg.records_csv);
  if (!in) throw harness::ConfigError("report: cannot open " + cfg.records_csv);
  std::stringstream ss;
  ss << in.rdbuf();
  auto records = harness::parse_csv(ss.str());
  auto f = harness::fit_exponent(records, cfg.assert_field);
  json rep = {{"field", cfg.assert_field},
              {"slope", f.slope},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"points", f.points},
              {"assert_min", cfg.assert_min}};
  res.report = rep.dump(2);
  res.passed = f.slope >= cfg.assert_min;
}

}  // namespace

extern "C" {

const char* wlab_version(void) { return "wlab 1.0.0"; }

const char* wlab_last_error(void) { return g_error.c_str(); }

wlab_status wlab_config_parse(const char* json_text, wlab_config** out) {
  if (!json_text || !out) return fail(WLAB_ERR_CONFIG, "null argument");
  try {
    auto* h = new wlab_config{harness::parse_config(json_text)};
    *out = h;
    return WLAB_OK;
  } catch (const harness::ConfigError& e) {
    return fail(WLAB_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(WLAB_ERR_RUNTIME, e.what());
  }
}

wlab_status wlab_config_load(const char* path, wlab_config** out) {
  if (!path || !out) return fail(WLAB_ERR_CONFIG, "null argument");
  try {
    auto* h = new wlab_config{harness::load_config(path)};
    *out = h;
    return WLAB_OK;
  } catch (const harness::ConfigError& e) {
    return fail(WLAB_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(WLAB_ERR_RUNTIME, e.what());
  }
}

void wlab_config_free(wlab_config* cfg) { delete cfg; }

wlab_status wlab_config_hash(const wlab_config* cfg, uint64_t* out) {
  if (!cfg || !out) return fail(WLAB_ERR_CONFIG, "null argument");
  *out = harness::config_hash(cfg->cfg);
  return WLAB_OK;
}

wlab_status wlab_config_set_threads(wlab_config* cfg, int threads) {
  if (!cfg || threads < 1) return fail(WLAB_ERR_CONFIG, "bad threads value");
  cfg->cfg.threads = threads;
  return WLAB_OK;
}

wlab_status wlab_config_set_seed(wlab_config* cfg, uint64_t seed) {
  if (!cfg) return fail(WLAB_ERR_CONFIG, "null argument");
  cfg->cfg.seed = seed;
  return WLAB_OK;
}

wlab_status wlab_run(const wlab_config* cfg, const char* command,
                     wlab_result** out) {
  if (!cfg || !command || !out) return fail(WLAB_ERR_CONFIG, "null argument");
  auto res = std::make_unique<wlab_result>();
  try {
    res->manifest = harness::manifest_json(cfg->cfg);
    const std::string cmd = command;
    if (cmd == "sweep")
      cmd_sweep(cfg->cfg, *res);
    else if (cmd == "weyl-term")
      cmd_weyl_term(cfg->cfg, *res);
    else if (cmd == "mollify-rates")
      cmd_mollify_rates(cfg->cfg, *res);
    else if (cmd == "quantize-check")
      cmd_quantize_check(cfg->cfg, *res);
    else if (cmd == "spectrum")
      cmd_spectrum(cfg->cfg, *res);
    else if (cmd == "partition")
      cmd_partition(cfg->cfg, *res);
    else if (cmd == "tauberian-check")
      cmd_tauberian_check(cfg->cfg, *res);
    else if (cmd == "report")
      cmd_report(cfg->cfg, *res);
    else
      return fail(WLAB_ERR_CONFIG, "unknown command: " + cmd);
  } catch (const harness::ConfigError& e) {
    return fail(WLAB_ERR_CONFIG, e.what());
  } catch (const DomainError& e) {
    return fail(WLAB_ERR_CONFIG, e.what());
  } catch (const harness::GateError& e) {
    return fail(WLAB_ERR_GATE, e.what());
  } catch (const QuadratureError& e) {
    return fail(WLAB_ERR_GATE, e.what());
  } catch (const std::exception& e) {
    return fail(WLAB_ERR_RUNTIME, e.what());
  }
  const bool passed = res->passed;
  *out = res.release();
  if (!passed) {
    g_error = "acceptance check failed";
    return WLAB_ERR_ASSERT;
  }
  return WLAB_OK;
}

const char* wlab_result_csv(const wlab_result* res) {
  return res ? res->csv.c_str() : "";
}

const char* wlab_result_json(const wlab_result* res) {
  return res ? res->report.c_str() : "";
}

const char* wlab_result_manifest(const wlab_result* res) {
  return res ? res->manifest.c_str() : "";
}

int wlab_result_passed(const wlab_result* res) {
  return res && res->passed ? 1 : 0;
}

void wlab_result_free(wlab_result* res) { delete res; }

}  // extern "C"
