// Command-line front end: resolved run configuration, the four subcommands
// (simulate, region, certify, fit), and exit-code mapping.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mjds/io.hpp"

namespace mjds {

// Fully resolved options for one command after merging defaults, the
// optional JSON config file, the environment, and explicit flags (strongest
// last).  Thread count never changes results, only wall time.
struct RunConfig {
  std::uint64_t seed = 7;
  std::string out_dir = ".";
  int threads = 1;

  // system (simulate / certify / region)
  std::string system = "sat";
  double gamma = 1.2;
  double p = 0.95;
  double q = 0.01;
  double c = 0.0;  // resolved from c_text
  bool c_is_e = true;
  std::optional<Matrix> tpm;       // overrides the (p, q) two-mode matrix
  std::vector<Vector> xi0_slots;   // empty: constant initial history
  double xi0_constant = 1.0;
  std::optional<int> eta0;         // nullopt: uniform initial mode

  // simulate
  int horizon = 60;
  int runs = 1000;
  int trajectories = 0;  // how many individual paths to dump
  bool gnuplot = false;

  // region
  int grid = 200;

  // certify
  std::optional<double> lambda_ratio;
  std::optional<double> alpha3;
  bool sampled = false;
  int samples = 10000;
  double radius = 10.0;

  // fit
  std::string input;
  int burn_in = -1;
  double xi0_norm = 1.0;
  std::optional<double> emss_M;
  std::optional<double> emss_zeta;
};

// Each command writes its outputs plus a manifest into out_dir and returns
// the manifest JSON.
Json cmd_simulate(const RunConfig& rc);
Json cmd_region(const RunConfig& rc);
Json cmd_certify(const RunConfig& rc);
Json cmd_fit(const RunConfig& rc);

// Parses argv, dispatches, and maps errors to exit codes:
// 0 success (a no-certificate verdict is success), 1 validation,
// 2 numeric fault, 3 I/O.
int run_cli(int argc, const char* const* argv);

}  // namespace mjds
