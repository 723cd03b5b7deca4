// Closed-loop system: delayed dynamics driven by the Markov mode process,
// plus single-trajectory and ensemble simulation.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mjds/history.hpp"
#include "mjds/markov.hpp"

namespace mjds {

struct JumpSystem {
  DelayModel model;
  MarkovDelayChain chain;

  // Requires the model alphabet and the chain alphabet to agree elementwise.
  JumpSystem(DelayModel m, MarkovDelayChain c);

  int modes() const { return chain.size(); }
  const DelayVector& delay_of(int mode) const { return chain.bijection.delay_of(mode); }
};

// Initial mode: a fixed value, or drawn uniformly from 1..s (one draw per
// trajectory, taken before any transition draw).
struct InitialMode {
  static InitialMode uniform() { return InitialMode{}; }
  static InitialMode fixed(int mode) { return InitialMode{mode}; }

  std::optional<int> pinned;
  std::string str() const { return pinned ? std::to_string(*pinned) : "uniform"; }
};

struct Trajectory {
  std::vector<Vector> states;  // x(0..K)
  std::vector<int> modes;      // eta(0..K-1); empty when K = 0
};

// Runs one path of length horizon from history xi0 with a pinned initial
// mode, consuming draws from rng (one per transition).
Trajectory simulate(const JumpSystem& sys, const History& xi0, int eta0, int horizon, Rng& rng);

struct EnsembleStats {
  int horizon = 0;
  int n_runs = 0;
  std::uint64_t seed = 0;
  std::string eta0;
  // Per step k = 0..horizon:
  std::vector<double> mean_sq;    // mean of |x(k)|^2
  std::vector<double> min_norm;   // envelope of |x(k)|
  std::vector<double> max_norm;
  std::vector<double> std_dev;    // sample std of |x(k)|^2 (n-1 denominator)
  std::vector<double> ci99;       // 99% normal half-width, 2.5758...*std/sqrt(n)
  std::vector<Trajectory> retained;
};

// Monte Carlo over n_runs trajectories.  Trajectory t uses the substream
// seed ^ t, so the result is a pure function of (inputs, seed): identical
// bytes for any thread count.  retain keeps the first `retain` trajectories.
EnsembleStats simulate_ensemble(const JumpSystem& sys, const History& xi0, const InitialMode& eta0,
                                int horizon, int n_runs, std::uint64_t seed, int threads = 1,
                                int retain = 0);

}  // namespace mjds
