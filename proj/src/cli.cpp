#include "mjds/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>

namespace fs = std::filesystem;

namespace mjds {
namespace {

// ---------- config-file field extraction with named diagnostics ----------

double num_field(const Json& j, const std::string& key) {
  if (!j.at(key).is_number())
    throw ValidationError("config field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::uint64_t u64_field(const Json& j, const std::string& key) {
  if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned())
    throw ValidationError("config field '" + key + "' must be an integer");
  return j.at(key).get<std::uint64_t>();
}

int int_field(const Json& j, const std::string& key) {
  if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned())
    throw ValidationError("config field '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

bool bool_field(const Json& j, const std::string& key) {
  if (!j.at(key).is_boolean())
    throw ValidationError("config field '" + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::string str_field(const Json& j, const std::string& key) {
  if (!j.at(key).is_string())
    throw ValidationError("config field '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

double parse_plain_number(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ValidationError("cannot parse " + what + " value '" + text + "'");
  return v;
}

// "e" means Euler's number exactly; anything else must be a plain number.
double parse_c_text(const std::string& text) {
  if (text == "e") return std::numbers::e;
  return parse_plain_number(text, "c");
}

std::vector<Vector> slots_from_scalars(const std::vector<double>& vals) {
  std::vector<Vector> slots;
  for (double v : vals) slots.push_back(Vector::Constant(1, v));
  return slots;
}

// --xi0 accepts a single scalar (constant history) or a comma-separated
// slot list, oldest first.
void apply_xi0_text(RunConfig& rc, const std::string& text) {
  std::vector<double> vals;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!cur.empty()) vals.push_back(parse_plain_number(cur, "xi0"));
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  if (vals.empty()) throw ValidationError("xi0 must contain at least one number");
  if (vals.size() == 1) {
    rc.xi0_slots.clear();
    rc.xi0_constant = vals.front();
  } else {
    rc.xi0_slots = slots_from_scalars(vals);
  }
}

void apply_xi0_json(RunConfig& rc, const Json& val) {
  if (val.is_number()) {
    rc.xi0_slots.clear();
    rc.xi0_constant = val.get<double>();
    return;
  }
  if (!val.is_array() || val.empty())
    throw ValidationError("config field 'xi0' must be a number or a non-empty array");
  rc.xi0_slots.clear();
  for (const auto& slot : val) {
    if (slot.is_number()) {
      rc.xi0_slots.push_back(Vector::Constant(1, slot.get<double>()));
    } else if (slot.is_array() && !slot.empty()) {
      Vector x(static_cast<Eigen::Index>(slot.size()));
      for (std::size_t m = 0; m < slot.size(); ++m) {
        if (!slot[m].is_number())
          throw ValidationError("config field 'xi0' slot entries must be numbers");
        x(static_cast<Eigen::Index>(m)) = slot[m].get<double>();
      }
      rc.xi0_slots.push_back(std::move(x));
    } else {
      throw ValidationError("config field 'xi0' slots must be numbers or number arrays");
    }
  }
}

void apply_eta0_text(RunConfig& rc, const std::string& text) {
  if (text == "uniform") {
    rc.eta0.reset();
    return;
  }
  const double v = parse_plain_number(text, "eta0");
  const int mode = static_cast<int>(v);
  if (static_cast<double>(mode) != v) throw ValidationError("eta0 must be an integer or 'uniform'");
  rc.eta0 = mode;
}

Matrix tpm_from_json(const Json& val) {
  if (!val.is_array() || val.empty())
    throw ValidationError("config field 'tpm' must be a non-empty array of rows");
  const std::size_t s = val.size();
  Matrix rows(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  for (std::size_t i = 0; i < s; ++i) {
    if (!val[i].is_array() || val[i].size() != s)
      throw ValidationError("config field 'tpm' row " + std::to_string(i + 1) +
                            " must have " + std::to_string(s) + " entries");
    for (std::size_t j = 0; j < s; ++j) {
      if (!val[i][j].is_number())
        throw ValidationError("config field 'tpm' entries must be numbers");
      rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = val[i][j].get<double>();
    }
  }
  return rows;
}

const std::vector<std::string> kConfigKeys = {
    "seed",   "out_dir",      "threads", "system", "gamma",   "delta",  "alphabet",
    "p",      "q",            "c",       "tpm",    "xi0",     "eta0",   "horizon",
    "runs",   "trajectories", "gnuplot", "grid",   "lambda_ratio",      "alpha3",
    "sampled", "samples",     "radius",  "input",  "burn_in", "xi0_norm", "M", "zeta"};

Json load_config(const std::string& path) {
  Json cfg;
  try {
    cfg = Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw ValidationError("config " + path + " must be a JSON object");
  for (const auto& [key, val] : cfg.items()) {
    (void)val;
    bool known = false;
    for (const auto& k : kConfigKeys) known = known || k == key;
    if (!known) throw ValidationError("config " + path + ": unknown field '" + key + "'");
  }
  // The built-in model is fixed; shape fields may restate it, not change it.
  if (cfg.contains("delta") && int_field(cfg, "delta") != 2)
    throw ValidationError("config field 'delta' must be 2 for the sat system");
  if (cfg.contains("alphabet")) {
    const Json want = Json::array({Json::array({0}), Json::array({2})});
    if (cfg.at("alphabet") != want)
      throw ValidationError("config field 'alphabet' must be [[0],[2]] for the sat system");
  }
  return cfg;
}

// ---------- shared command plumbing ----------

History make_xi0(const RunConfig& rc, int dim, int delta) {
  if (rc.xi0_slots.empty())
    return History::constant(delta, Vector::Constant(dim, rc.xi0_constant));
  if (static_cast<int>(rc.xi0_slots.size()) != delta + 1)
    throw ValidationError("xi0 needs " + std::to_string(delta + 1) + " slots, got " +
                          std::to_string(rc.xi0_slots.size()));
  for (const Vector& slot : rc.xi0_slots)
    if (slot.size() != dim)
      throw ValidationError("xi0 slot dimension " + std::to_string(slot.size()) +
                            " does not match the state dimension " + std::to_string(dim));
  return History(delta, rc.xi0_slots);
}

Json xi0_json(const RunConfig& rc) {
  if (rc.xi0_slots.empty()) return rc.xi0_constant;
  Json arr = Json::array();
  for (const Vector& slot : rc.xi0_slots) {
    if (slot.size() == 1) {
      arr.push_back(slot(0));
    } else {
      Json row = Json::array();
      for (Eigen::Index m = 0; m < slot.size(); ++m) row.push_back(slot(m));
      arr.push_back(row);
    }
  }
  return arr;
}

Json tpm_json(const Matrix& rows) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < rows.cols(); ++j) row.push_back(rows(i, j));
    arr.push_back(row);
  }
  return arr;
}

fs::path prepare_out_dir(const RunConfig& rc) {
  const fs::path dir(rc.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

Json make_manifest(const char* command, const RunConfig& rc, Json config,
                   const std::vector<std::string>& outputs) {
  Json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = rc.seed;
  m["out_dir"] = rc.out_dir;
  m["config"] = std::move(config);
  m["outputs"] = outputs;
  return m;
}

void require_sat_system(const RunConfig& rc) {
  if (rc.system != "sat")
    throw ValidationError("unknown system '" + rc.system + "'; built-in systems: sat");
}

}  // namespace

Json cmd_simulate(const RunConfig& rc) {
  require_sat_system(rc);
  if (rc.runs < 1) throw ValidationError("runs must be >= 1");
  if (rc.horizon < 0) throw ValidationError("horizon must be >= 0");
  if (rc.trajectories < 0 || rc.trajectories > rc.runs)
    throw ValidationError("trajectories must lie in 0..runs");

  Matrix tpm_rows;
  if (rc.tpm) {
    if (rc.tpm->rows() != 2)
      throw ValidationError("the sat system needs a 2x2 transition matrix");
    tpm_rows = *rc.tpm;
  } else {
    if (!(rc.p > 0.0) || !(rc.p < 1.0)) throw ValidationError("p must lie in (0, 1)");
    if (!(rc.q > 0.0) || !(rc.q < 1.0)) throw ValidationError("q must lie in (0, 1)");
    tpm_rows = two_mode_tpm(rc.p, rc.q);
  }
  MarkovDelayChain chain(validate_tpm(tpm_rows),
                         build_bijection({DelayVector{{0}}, DelayVector{{2}}}));
  JumpSystem sys(sat_delay_model(rc.gamma), std::move(chain));

  const History xi0 = make_xi0(rc, sys.model.dim(), sys.model.delta());
  const InitialMode eta0 = rc.eta0 ? InitialMode::fixed(*rc.eta0) : InitialMode::uniform();
  const EnsembleStats stats = simulate_ensemble(sys, xi0, eta0, rc.horizon, rc.runs, rc.seed,
                                                rc.threads, rc.trajectories);

  const fs::path dir = prepare_out_dir(rc);
  std::vector<std::string> outputs;
  write_text(dir / "ensemble.csv", ensemble_csv(stats));
  outputs.push_back("ensemble.csv");
  for (int t = 0; t < rc.trajectories; ++t) {
    const std::string name = "trajectory_" + std::to_string(t) + ".csv";
    write_text(dir / name, trajectory_csv(stats.retained[static_cast<std::size_t>(t)]));
    outputs.push_back(name);
  }
  if (rc.gnuplot) {
    write_text(dir / "ensemble.gp", gnuplot_ensemble_script("ensemble.csv"));
    outputs.push_back("ensemble.gp");
  }

  Json config;
  config["system"] = rc.system;
  config["gamma"] = rc.gamma;
  if (!rc.tpm) {
    config["p"] = rc.p;
    config["q"] = rc.q;
  }
  config["tpm"] = tpm_json(tpm_rows);
  config["xi0"] = xi0_json(rc);
  config["eta0"] = rc.eta0 ? Json(*rc.eta0) : Json("uniform");
  config["horizon"] = rc.horizon;
  config["runs"] = rc.runs;
  config["trajectories"] = rc.trajectories;
  config["gnuplot"] = rc.gnuplot;

  Json manifest = make_manifest("simulate", rc, std::move(config), outputs);
  write_text(dir / "simulate_manifest.json", dump_json(manifest));
  return manifest;
}

Json cmd_region(const RunConfig& rc) {
  if (rc.grid < 1) throw ValidationError("grid must be >= 1");
  const std::vector<double> centers = grid_centers(rc.grid);
  const RegionGrid grid = feasible_region(rc.gamma, rc.c, centers, centers);

  const fs::path dir = prepare_out_dir(rc);
  write_text(dir / "region.csv", region_csv(grid));
  write_text(dir / "frontier.csv", frontier_csv(frontier(grid)));

  Json config;
  config["gamma"] = rc.gamma;
  config["c"] = rc.c;
  config["c_is_e"] = rc.c_is_e;
  config["grid"] = rc.grid;

  Json manifest =
      make_manifest("region", rc, std::move(config), {"region.csv", "frontier.csv"});
  write_text(dir / "region_manifest.json", dump_json(manifest));
  return manifest;
}

Json cmd_certify(const RunConfig& rc) {
  require_sat_system(rc);
  SatSystemSpec spec;
  spec.gamma = rc.gamma;
  spec.p = rc.p;
  spec.q = rc.q;
  spec.c = rc.c;
  spec.lambda_ratio = rc.lambda_ratio;
  const CertificateReport report = certify_sat(spec, rc.alpha3);
  Json j = certificate_json(report);

  if (rc.sampled) {
    if (!report.lambda_ratio)
      throw ValidationError(
          "sampled check needs a witness ratio; the spec is infeasible, pass --lambda-ratio");
    double alpha3 = 0.0;
    if (rc.alpha3)
      alpha3 = *rc.alpha3;
    else if (report.constants && report.constants->alpha3 > 0.0)
      alpha3 = report.constants->alpha3;
    else
      throw ValidationError("no positive drift rate available for the sampled check; pass --alpha3");
    if (rc.samples < 1) throw ValidationError("samples must be >= 1");
    const JumpSystem sys = build_sat_system(spec);
    const LyapunovCandidate V = sat_candidate(1.0, *report.lambda_ratio, spec.gamma, spec.c);
    const HistorySampler sampler(sys.model.delta(), sys.model.dim(), rc.radius, rc.seed);
    const ConditionReport check =
        check_stability_conditions(V, sys, alpha3, sampler, static_cast<std::size_t>(rc.samples));
    j["sampled_check"] = condition_json(check);
  } else {
    j["sampled_check"] = nullptr;
  }

  const fs::path dir = prepare_out_dir(rc);
  write_text(dir / "certificate.json", dump_json(j));

  Json config;
  config["system"] = rc.system;
  config["gamma"] = rc.gamma;
  config["p"] = rc.p;
  config["q"] = rc.q;
  config["c"] = rc.c;
  config["c_is_e"] = rc.c_is_e;
  if (rc.lambda_ratio) config["lambda_ratio"] = *rc.lambda_ratio;
  if (rc.alpha3) config["alpha3"] = *rc.alpha3;
  config["sampled"] = rc.sampled;
  if (rc.sampled) {
    config["samples"] = rc.samples;
    config["radius"] = rc.radius;
  }

  Json manifest = make_manifest("certify", rc, std::move(config), {"certificate.json"});
  write_text(dir / "certify_manifest.json", dump_json(manifest));
  std::cout << "verdict: " << report.verdict << "\n";
  return manifest;
}

Json cmd_fit(const RunConfig& rc) {
  if (rc.input.empty()) throw ValidationError("fit needs --input <ensemble csv>");
  if (!(rc.xi0_norm > 0.0)) throw ValidationError("xi0-norm must be positive");
  if (rc.emss_M.has_value() != rc.emss_zeta.has_value())
    throw ValidationError("emss check needs both --M and --zeta");

  MomentCurve curve = read_ensemble_csv(rc.input);
  curve.xi0_sup_norm = rc.xi0_norm;
  const DecayFit fit = fit_decay(curve, rc.burn_in);
  Json j = fit_json(fit);
  if (rc.emss_M) {
    const EnvelopeCheck check = emss_check(curve, *rc.emss_M, *rc.emss_zeta, rc.xi0_norm);
    j["emss"] = {{"M", *rc.emss_M},
                 {"zeta", *rc.emss_zeta},
                 {"pass", check.pass},
                 {"first_violation", check.first_violation}};
  }

  const fs::path dir = prepare_out_dir(rc);
  write_text(dir / "fit.json", dump_json(j));

  Json config;
  config["input"] = rc.input;
  config["burn_in"] = rc.burn_in;
  config["xi0_norm"] = rc.xi0_norm;
  if (rc.emss_M) {
    config["M"] = *rc.emss_M;
    config["zeta"] = *rc.emss_zeta;
  }

  Json manifest = make_manifest("fit", rc, std::move(config), {"fit.json"});
  write_text(dir / "fit_manifest.json", dump_json(manifest));
  return manifest;
}

namespace {

// Raw flag storage; merged with the config file after parsing.
struct RawFlags {
  std::string config_path;
  std::uint64_t seed = 7;
  std::string out_dir = ".";
  int threads = 1;
  std::string system = "sat";
  double gamma = 1.2;
  double p = 0.95;
  double q = 0.01;
  std::string c_text = "e";
  std::string xi0_text = "1";
  std::string eta0_text = "uniform";
  int horizon = 60;
  int runs = 1000;
  int trajectories = 0;
  bool gnuplot = false;
  int grid = 200;
  double lambda_ratio = 0.0;
  double alpha3 = 0.0;
  bool sampled = false;
  int samples = 10000;
  double radius = 10.0;
  std::string input;
  int burn_in = -1;
  double xi0_norm = 1.0;
  double emss_M = 0.0;
  double emss_zeta = 0.0;
};

// Flag beats config file beats default; --threads also falls back to the
// MJDS_THREADS environment variable (counted as given by the parser).
template <typename T, typename Get>
T pick(const CLI::Option* opt, const T& flag_value, const Json& cfg, const char* key, Get get,
       const T& def) {
  if (opt && opt->count() > 0) return flag_value;
  if (cfg.contains(key)) return get(cfg, key);
  return def;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RawFlags raw;
  CLI::App app{"stability toolbox for systems with Markov-switched delays"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* opt_seed = app.add_option("--seed", raw.seed, "RNG seed");
  auto* opt_out = app.add_option("--out-dir", raw.out_dir, "output directory");
  auto* opt_threads =
      app.add_option("--threads", raw.threads, "worker threads")->envname("MJDS_THREADS");
  app.add_option("--config", raw.config_path, "JSON config file; flags override its fields");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo ensemble and trajectory dumps");
  sim->fallthrough();
  auto* sim_system = sim->add_option("--system", raw.system, "built-in system name");
  auto* sim_gamma = sim->add_option("--gamma", raw.gamma, "feedback gain in [1, 1.2]");
  auto* sim_p = sim->add_option("--p", raw.p, "staying probability of the undelayed mode");
  auto* sim_q = sim->add_option("--q", raw.q, "staying probability of the delayed mode");
  auto* sim_xi0 = sim->add_option("--xi0", raw.xi0_text, "initial history: scalar or slot list");
  auto* sim_eta0 = sim->add_option("--eta0", raw.eta0_text, "initial mode: index or 'uniform'");
  auto* sim_horizon = sim->add_option("--horizon", raw.horizon, "number of steps K");
  auto* sim_runs = sim->add_option("--runs", raw.runs, "ensemble size");
  auto* sim_traj = sim->add_option("--trajectories", raw.trajectories, "paths to dump as CSV");
  auto* sim_gnuplot = sim->add_flag("--gnuplot", raw.gnuplot, "emit a plot script");

  auto* reg = app.add_subcommand("region", "feasibility sweep over the (p, q) square");
  reg->fallthrough();
  auto* reg_gamma = reg->add_option("--gamma", raw.gamma, "feedback gain in [1, 1.2]");
  auto* reg_c = reg->add_option("--c", raw.c_text, "scale parameter, number or 'e'");
  auto* reg_grid = reg->add_option("--grid", raw.grid, "cells per axis");

  auto* cer = app.add_subcommand("certify", "closed-form decay certificate attempt");
  cer->fallthrough();
  auto* cer_system = cer->add_option("--system", raw.system, "built-in system name");
  auto* cer_gamma = cer->add_option("--gamma", raw.gamma, "feedback gain in [1, 1.2]");
  auto* cer_p = cer->add_option("--p", raw.p, "staying probability of the undelayed mode");
  auto* cer_q = cer->add_option("--q", raw.q, "staying probability of the delayed mode");
  auto* cer_c = cer->add_option("--c", raw.c_text, "scale parameter, number or 'e'");
  auto* cer_ratio = cer->add_option("--lambda-ratio", raw.lambda_ratio, "witness weight ratio");
  auto* cer_alpha3 = cer->add_option("--alpha3", raw.alpha3, "declared drift rate");
  auto* cer_sampled = cer->add_flag("--sampled", raw.sampled, "also run the sampled check");
  auto* cer_samples = cer->add_option("--samples", raw.samples, "sampled-check history count");
  auto* cer_radius = cer->add_option("--radius", raw.radius, "sampled-check sup-norm radius");

  auto* fit = app.add_subcommand("fit", "decay-rate fit (and optional envelope check)");
  fit->fallthrough();
  auto* fit_input = fit->add_option("--input", raw.input, "ensemble CSV to read");
  auto* fit_burnin = fit->add_option("--burn-in", raw.burn_in, "first step of the fit window");
  auto* fit_xi0 = fit->add_option("--xi0-norm", raw.xi0_norm, "initial history sup norm");
  auto* fit_M = fit->add_option("--M", raw.emss_M, "envelope overshoot constant");
  auto* fit_zeta = fit->add_option("--zeta", raw.emss_zeta, "envelope decay rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    Json cfg = Json::object();
    if (!raw.config_path.empty()) cfg = load_config(raw.config_path);

    RunConfig rc;
    rc.seed = pick(opt_seed, raw.seed, cfg, "seed", u64_field, std::uint64_t{7});
    rc.out_dir = pick(opt_out, raw.out_dir, cfg, "out_dir", str_field, std::string{"."});
    rc.threads = pick(opt_threads, raw.threads, cfg, "threads", int_field, 1);

    if (sim->parsed()) {
      rc.system = pick(sim_system, raw.system, cfg, "system", str_field, std::string{"sat"});
      rc.gamma = pick(sim_gamma, raw.gamma, cfg, "gamma", num_field, 1.2);
      rc.p = pick(sim_p, raw.p, cfg, "p", num_field, 0.95);
      rc.q = pick(sim_q, raw.q, cfg, "q", num_field, 0.01);
      if (cfg.contains("tpm")) rc.tpm = tpm_from_json(cfg.at("tpm"));
      if (sim_xi0->count() > 0)
        apply_xi0_text(rc, raw.xi0_text);
      else if (cfg.contains("xi0"))
        apply_xi0_json(rc, cfg.at("xi0"));
      if (sim_eta0->count() > 0) {
        apply_eta0_text(rc, raw.eta0_text);
      } else if (cfg.contains("eta0")) {
        if (cfg.at("eta0").is_string())
          apply_eta0_text(rc, cfg.at("eta0").get<std::string>());
        else
          rc.eta0 = int_field(cfg, "eta0");
      }
      rc.horizon = pick(sim_horizon, raw.horizon, cfg, "horizon", int_field, 60);
      rc.runs = pick(sim_runs, raw.runs, cfg, "runs", int_field, 1000);
      rc.trajectories = pick(sim_traj, raw.trajectories, cfg, "trajectories", int_field, 0);
      rc.gnuplot = pick(sim_gnuplot, raw.gnuplot, cfg, "gnuplot", bool_field, false);
      cmd_simulate(rc);
      std::cout << "wrote ensemble data to " << rc.out_dir << "\n";
    } else if (reg->parsed()) {
      rc.gamma = pick(reg_gamma, raw.gamma, cfg, "gamma", num_field, 1.2);
      const std::string c_text =
          reg_c->count() > 0
              ? raw.c_text
              : (cfg.contains("c") && cfg.at("c").is_string() ? str_field(cfg, "c")
                                                              : std::string{"e"});
      rc.c = (reg_c->count() == 0 && cfg.contains("c") && cfg.at("c").is_number())
                 ? num_field(cfg, "c")
                 : parse_c_text(c_text);
      rc.c_is_e = rc.c == std::numbers::e;
      rc.grid = pick(reg_grid, raw.grid, cfg, "grid", int_field, 200);
      cmd_region(rc);
      std::cout << "wrote region data to " << rc.out_dir << "\n";
    } else if (cer->parsed()) {
      rc.system = pick(cer_system, raw.system, cfg, "system", str_field, std::string{"sat"});
      rc.gamma = pick(cer_gamma, raw.gamma, cfg, "gamma", num_field, 1.2);
      rc.p = pick(cer_p, raw.p, cfg, "p", num_field, 0.95);
      rc.q = pick(cer_q, raw.q, cfg, "q", num_field, 0.01);
      const std::string c_text =
          cer_c->count() > 0
              ? raw.c_text
              : (cfg.contains("c") && cfg.at("c").is_string() ? str_field(cfg, "c")
                                                              : std::string{"e"});
      rc.c = (cer_c->count() == 0 && cfg.contains("c") && cfg.at("c").is_number())
                 ? num_field(cfg, "c")
                 : parse_c_text(c_text);
      rc.c_is_e = rc.c == std::numbers::e;
      if (cer_ratio->count() > 0)
        rc.lambda_ratio = raw.lambda_ratio;
      else if (cfg.contains("lambda_ratio"))
        rc.lambda_ratio = num_field(cfg, "lambda_ratio");
      if (cer_alpha3->count() > 0)
        rc.alpha3 = raw.alpha3;
      else if (cfg.contains("alpha3"))
        rc.alpha3 = num_field(cfg, "alpha3");
      rc.sampled = pick(cer_sampled, raw.sampled, cfg, "sampled", bool_field, false);
      rc.samples = pick(cer_samples, raw.samples, cfg, "samples", int_field, 10000);
      rc.radius = pick(cer_radius, raw.radius, cfg, "radius", num_field, 10.0);
      cmd_certify(rc);
    } else if (fit->parsed()) {
      rc.input = pick(fit_input, raw.input, cfg, "input", str_field, std::string{});
      rc.burn_in = pick(fit_burnin, raw.burn_in, cfg, "burn_in", int_field, -1);
      rc.xi0_norm = pick(fit_xi0, raw.xi0_norm, cfg, "xi0_norm", num_field, 1.0);
      if (fit_M->count() > 0)
        rc.emss_M = raw.emss_M;
      else if (cfg.contains("M"))
        rc.emss_M = num_field(cfg, "M");
      if (fit_zeta->count() > 0)
        rc.emss_zeta = raw.emss_zeta;
      else if (cfg.contains("zeta"))
        rc.emss_zeta = num_field(cfg, "zeta");
      cmd_fit(rc);
      std::cout << "wrote fit report to " << rc.out_dir << "\n";
    }
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericFault& e) {
    std::cerr << "numeric fault: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mjds
