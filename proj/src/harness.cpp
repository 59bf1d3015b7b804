#include "wlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"
#include "wlab/phasespace.hpp"
#include "wlab/schrodgrid.hpp"
#include "wlab/specfun.hpp"

namespace wlab::harness {

using nlohmann::json;

namespace {

const char* kCsvHeader =
    "hbar,epsilon,localized_trace,weyl_term,residual,normalized_residual,"
    "grid_n,solver_residual,wall_time_s";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

VectorField magnetic_field_1d(double amp) {
  VectorField a;
  a.dim = 1;
  if (amp == 0.0) return VectorField::zero(1);
  ScalarField c;
  c.dim = 1;
  auto prof = SmoothFunction::bump(-3.0, 3.0).scaled(amp);
  c.value = [prof](const double* x) { return prof(x[0]); };
  c.gradient = [prof](const double* x, double* g) {
    g[0] = prof.derivative(1, x[0]);
  };
  a.components.push_back(c);
  return a;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  static const std::vector<std::string> known = {
      "potential",  "mu",        "magnetic_amp", "hbar_mu_cap", "gamma",
      "dimension",  "grid",      "hbar",         "localizer",   "mollifier_T",
      "seed",       "threads",   "deterministic_output", "p_max", "lambda_cut",
      "dump_matrix", "records_csv", "assert_field", "assert_min"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("config: unknown key '" + it.key() + "'");
  }

  ExperimentConfig cfg;
  if (j.contains("potential")) {
    const auto& p = j["potential"];
    cfg.potential_name = p.value("name", cfg.potential_name);
    if (p.contains("params"))
      for (auto it = p["params"].begin(); it != p["params"].end(); ++it)
        cfg.potential_params[it.key()] = it.value().get<double>();
  }
  cfg.mu = j.value("mu", cfg.mu);
  cfg.magnetic_amp = j.value("magnetic_amp", cfg.magnetic_amp);
  cfg.hbar_mu_cap = j.value("hbar_mu_cap", cfg.hbar_mu_cap);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.dimension = j.value("dimension", cfg.dimension);
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    cfg.grid_n = g.value("n", cfg.grid_n);
    cfg.box_l = g.value("l", cfg.box_l);
    cfg.boundary = g.value("boundary", cfg.boundary);
  }
  if (j.contains("hbar"))
    cfg.hbar_schedule = j["hbar"].get<std::vector<double>>();
  if (j.contains("localizer")) {
    const auto& l = j["localizer"];
    if (l.contains("center")) {
      auto c = l["center"].get<std::vector<double>>();
      for (size_t i = 0; i < c.size() && i < 3; ++i)
        cfg.localizer_center[i] = c[i];
    }
    cfg.localizer_radius = l.value("radius", cfg.localizer_radius);
    cfg.localizer_plateau = l.value("plateau", cfg.localizer_plateau);
  }
  cfg.mollifier_T = j.value("mollifier_T", cfg.mollifier_T);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.deterministic_output =
      j.value("deterministic_output", cfg.deterministic_output);
  cfg.p_max = j.value("p_max", cfg.p_max);
  cfg.lambda_cut = j.value("lambda_cut", cfg.lambda_cut);
  cfg.dump_matrix = j.value("dump_matrix", cfg.dump_matrix);
  cfg.records_csv = j.value("records_csv", cfg.records_csv);
  cfg.assert_field = j.value("assert_field", cfg.assert_field);
  cfg.assert_min = j.value("assert_min", cfg.assert_min);

  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0))
    throw ConfigError("config: gamma must lie in [0,1]");
  if (cfg.dimension < 1 || cfg.dimension > 3)
    throw ConfigError("config: dimension must be 1..3");
  if (cfg.boundary != "dirichlet" && cfg.boundary != "periodic")
    throw ConfigError("config: boundary must be dirichlet or periodic");
  if (cfg.mu < 0.0) throw ConfigError("config: mu must be nonnegative");
  for (double hb : cfg.hbar_schedule) {
    if (!(hb > 0.0)) throw ConfigError("config: hbar values must be positive");
    if (hb * cfg.mu > cfg.hbar_mu_cap)
      throw ConfigError("config: hbar * mu exceeds the schedule cap");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_json(const ExperimentConfig& cfg) {
  json j;
  j["potential"]["name"] = cfg.potential_name;
  for (const auto& [k, v] : cfg.potential_params)
    j["potential"]["params"][k] = v;
  j["mu"] = cfg.mu;
  j["magnetic_amp"] = cfg.magnetic_amp;
  j["hbar_mu_cap"] = cfg.hbar_mu_cap;
  j["gamma"] = cfg.gamma;
  j["dimension"] = cfg.dimension;
  j["grid"]["n"] = cfg.grid_n;
  j["grid"]["l"] = cfg.box_l;
  j["grid"]["boundary"] = cfg.boundary;
  j["hbar"] = cfg.hbar_schedule;
  j["localizer"]["center"] = {cfg.localizer_center[0], cfg.localizer_center[1],
                              cfg.localizer_center[2]};
  j["localizer"]["radius"] = cfg.localizer_radius;
  j["localizer"]["plateau"] = cfg.localizer_plateau;
  j["mollifier_T"] = cfg.mollifier_T;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["deterministic_output"] = cfg.deterministic_output;
  j["p_max"] = cfg.p_max;
  j["lambda_cut"] = cfg.lambda_cut;
  j["dump_matrix"] = cfg.dump_matrix;
  j["records_csv"] = cfg.records_csv;
  j["assert_field"] = cfg.assert_field;
  j["assert_min"] = cfg.assert_min;
  return j.dump();  // nlohmann orders keys lexicographically
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string s = canonical_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

SweepRecord run_point(const ExperimentConfig& cfg,
                      const potentials::PotentialModel& V,
                      const potentials::MollifierKernel& kernel,
                      const ScalarField& phi, double hbar) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  SweepRecord rec;
  rec.hbar = hbar;
  rec.grid_n = cfg.grid_n;

  schrodgrid::GridSpec grid;
  grid.d = cfg.dimension;
  grid.L = cfg.box_l;
  grid.N = cfg.grid_n;
  grid.boundary = cfg.boundary == "periodic"
                      ? schrodgrid::GridSpec::Boundary::periodic
                      : schrodgrid::GridSpec::Boundary::dirichlet;
  if (!grid.resolves(hbar, cfg.p_max)) {
    rec.valid = false;
    rec.invalid_reason = "resolution gate: hx > hbar/(4 p_max)";
    return rec;
  }

  const double delta = cfg.delta(V.kappa);
  rec.epsilon = std::pow(hbar, 1.0 - delta);
  // symbol-class gate (eps >= hbar^{1-delta} holds by construction;
  // recorded so downstream consumers can audit it)
  if (rec.epsilon < std::pow(hbar, 1.0 - delta) - 1e-15) {
    rec.valid = false;
    rec.invalid_reason = "symbol-class gate";
    return rec;
  }

  auto Ve = potentials::mollify(V, rec.epsilon, kernel, 1e-8);
  if (cfg.dimension >= 3) {
    Ve.tensor_panels = 1;
    Ve.tensor_nodes = 10;
  }
  if (cfg.dimension >= 2) Ve.build_value_rule();
  ScalarField Vef = Ve.as_field();

  VectorField a = cfg.dimension == 1 ? magnetic_field_1d(cfg.magnetic_amp)
                                     : VectorField::zero(cfg.dimension);
  auto op = schrodgrid::discretize(Vef, a, cfg.mu, hbar, grid);

  // block-size hint from the phase-space volume
  int hint = 32;
  {
    phasespace::WeylTermRequest est;
    est.d = cfg.dimension;
    est.gamma = 0.0;
    est.hbar = hbar;
    est.V = V.field;
    est.phi = ScalarField::constant(cfg.dimension, 1.0);
    for (int j = 0; j < cfg.dimension; ++j) {
      est.lo[j] = -cfg.box_l;
      est.hi[j] = cfg.box_l;
    }
    est.fixed_panels = 3;
    const double count = phasespace::weyl_term_closed(est);
    hint = static_cast<int>(1.3 * count) + 16;
  }

  auto spec = schrodgrid::eigensolve_below(op, cfg.lambda_cut, 1e-8, 4096, hint);
  rec.solver_residual = spec.residual_bound;
  rec.localized_trace = schrodgrid::localized_trace(spec, op, phi, cfg.gamma);

  phasespace::WeylTermRequest req;
  req.d = cfg.dimension;
  req.gamma = cfg.gamma;
  req.hbar = hbar;
  req.V = V.field;  // the leading term carries the original potential
  req.phi = phi;
  for (int j = 0; j < cfg.dimension; ++j) {
    req.lo[j] = cfg.localizer_center[j] - cfg.localizer_radius;
    req.hi[j] = cfg.localizer_center[j] + cfg.localizer_radius;
  }
  if (cfg.dimension >= 2) req.fixed_panels = 4;
  rec.weyl_term = phasespace::weyl_term_closed(req);

  rec.residual = std::abs(rec.localized_trace - rec.weyl_term);
  rec.normalized_residual = rec.residual * std::pow(hbar, cfg.dimension);
  rec.wall_time_s =
      std::chrono::duration<double>(clock::now() - t0).count();
  return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const ExperimentConfig& cfg) {
  auto params = cfg.potential_params;
  params["dimension"] = cfg.dimension;
  auto V = potentials::make_library_potential(cfg.potential_name, params);
  if (!(V.kappa > cfg.gamma))
    throw ConfigError("config: potential kappa must exceed gamma");
  if (cfg.mu != 0.0 && cfg.dimension != 1)
    throw ConfigError("config: magnetic sweeps are 1-D only");
  auto kernel = potentials::make_mollifier_kernel();
  auto phi = phasespace::make_localizer(cfg.dimension, cfg.localizer_center,
                                        cfg.localizer_radius,
                                        cfg.localizer_plateau);

  std::vector<SweepRecord> records(cfg.hbar_schedule.size());
  const int workers = std::max(1, cfg.threads);
  std::vector<std::future<void>> pending;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cfg.hbar_schedule.size()) return;
      records[i] = run_point(cfg, V, kernel, phi, cfg.hbar_schedule[i]);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    for (int w = 0; w < workers; ++w)
      pending.push_back(std::async(std::launch::async, worker));
    for (auto& f : pending) f.get();
  }
  std::sort(records.begin(), records.end(),
            [](const SweepRecord& a, const SweepRecord& b) {
              return a.hbar > b.hbar;
            });
  return records;
}

FitResult fit_exponent(const std::vector<SweepRecord>& records,
                       const std::string& field) {
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (!r.valid) continue;
    double v = 0.0;
    if (field == "localized_trace")
      v = r.localized_trace;
    else if (field == "weyl_term")
      v = r.weyl_term;
    else if (field == "residual")
      v = r.residual;
    else if (field == "normalized_residual")
      v = r.normalized_residual;
    else
      throw ConfigError("fit_exponent: unknown field " + field);
    xs.push_back(r.hbar);
    ys.push_back(v);
  }
  if (xs.size() < 4)
    throw ConfigError("fit_exponent: need at least 4 valid records");
  return fit::loglog(xs, ys);
}

std::string to_csv(const std::vector<SweepRecord>& records,
                   bool deterministic_output) {
  std::string out = kCsvHeader;
  out += "\n";
  for (const auto& r : records) {
    if (!r.valid) continue;
    out += fmt(r.hbar) + "," + fmt(r.epsilon) + "," + fmt(r.localized_trace) +
           "," + fmt(r.weyl_term) + "," + fmt(r.residual) + "," +
           fmt(r.normalized_residual) + "," + std::to_string(r.grid_n) + "," +
           fmt(r.solver_residual) + "," +
           fmt(deterministic_output ? 0.0 : r.wall_time_s) + "\n";
  }
  return out;
}

std::string to_json(const std::vector<SweepRecord>& records,
                    bool deterministic_output) {
  json arr = json::array();
  for (const auto& r : records) {
    if (!r.valid) continue;
    json row;
    row["hbar"] = r.hbar;
    row["epsilon"] = r.epsilon;
    row["localized_trace"] = r.localized_trace;
    row["weyl_term"] = r.weyl_term;
    row["residual"] = r.residual;
    row["normalized_residual"] = r.normalized_residual;
    row["grid_n"] = r.grid_n;
    row["solver_residual"] = r.solver_residual;
    row["wall_time_s"] = deterministic_output ? 0.0 : r.wall_time_s;
    arr.push_back(row);
  }
  return arr.dump(2);
}

std::vector<SweepRecord> parse_csv(const std::string& text) {
  std::vector<SweepRecord> out;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) return out;
  if (line != kCsvHeader) throw ConfigError("csv: unexpected header");
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    SweepRecord r;
    std::stringstream ls(line);
    std::string cell;
    double* slots[] = {&r.hbar,     &r.epsilon,
                       &r.localized_trace, &r.weyl_term,
                       &r.residual, &r.normalized_residual};
    for (double* slot : slots) {
      if (!std::getline(ls, cell, ',')) throw ConfigError("csv: short row");
      *slot = std::strtod(cell.c_str(), nullptr);
    }
    if (!std::getline(ls, cell, ',')) throw ConfigError("csv: short row");
    r.grid_n = std::strtol(cell.c_str(), nullptr, 10);
    if (!std::getline(ls, cell, ',')) throw ConfigError("csv: short row");
    r.solver_residual = std::strtod(cell.c_str(), nullptr);
    if (!std::getline(ls, cell, ',')) throw ConfigError("csv: short row");
    r.wall_time_s = std::strtod(cell.c_str(), nullptr);
    out.push_back(r);
  }
  return out;
}

std::string manifest_json(const ExperimentConfig& cfg) {
  json j;
  j["config"] = json::parse(canonical_json(cfg));
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  j["config_hash"] = hash;
  j["seed"] = cfg.seed;
  j["version"] = "wlab 1.0.0";
  return j.dump(2);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace wlab::harness
