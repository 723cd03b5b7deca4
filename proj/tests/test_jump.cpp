#include <doctest.h>

#include <cmath>

#include "mjds/jump.hpp"
#include "mjds/sat.hpp"

using namespace mjds;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

JumpSystem locked_delayed(double gamma) {
  // Both rows point at mode 2, so the delayed dynamics stay active forever.
  Matrix m(2, 2);
  m << 0.0, 1.0, 0.0, 1.0;
  return JumpSystem(sat_delay_model(gamma),
                    MarkovDelayChain(validate_tpm(m),
                                     build_bijection({DelayVector{{0}}, DelayVector{{2}}})));
}

}  // namespace

TEST_SUITE("jump") {

TEST_CASE("system construction requires matching alphabets") {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(
      JumpSystem(sat_delay_model(1.0),
                 MarkovDelayChain(validate_tpm(m),
                                  build_bijection({DelayVector{{0}}, DelayVector{{1}}}))),
      ValidationError);
}

TEST_CASE("locked delayed mode reproduces the hand-computed path") {
  const JumpSystem sys = locked_delayed(1.2);
  Rng rng(1);
  const Trajectory traj = simulate(sys, History::constant(2, v1(0.1)), 2, 7, rng);
  REQUIRE(traj.states.size() == 8);
  REQUIRE(traj.modes.size() == 7);
  const double expect[8] = {0.1, -0.02, -0.14, -0.26, -0.236, -0.068, 0.244, 0.5272};
  for (int k = 0; k <= 7; ++k)
    CHECK(traj.states[static_cast<std::size_t>(k)](0) ==
          doctest::Approx(expect[k]).epsilon(1e-13));
  for (int mode : traj.modes) CHECK(mode == 2);
}

TEST_CASE("horizon zero yields a single state and no modes") {
  const JumpSystem sys = locked_delayed(1.0);
  Rng rng(1);
  const Trajectory traj = simulate(sys, History::constant(2, v1(0.3)), 1, 0, rng);
  CHECK(traj.states.size() == 1);
  CHECK(traj.modes.empty());
  CHECK_THROWS_AS(simulate(sys, History::constant(2, v1(0.3)), 1, -1, rng), ValidationError);
  CHECK_THROWS_AS(simulate(sys, History::constant(2, v1(0.3)), 3, 5, rng), ValidationError);
}

TEST_CASE("ensemble input validation") {
  const JumpSystem sys = locked_delayed(1.0);
  const History xi0 = History::constant(2, v1(1.0));
  CHECK_THROWS_AS(simulate_ensemble(sys, xi0, InitialMode::uniform(), 10, 0, 1), ValidationError);
  CHECK_THROWS_AS(simulate_ensemble(sys, xi0, InitialMode::fixed(5), 10, 4, 1), ValidationError);
  CHECK_THROWS_AS(simulate_ensemble(sys, xi0, InitialMode::uniform(), 10, 4, 1, 0),
                  ValidationError);
  CHECK_THROWS_AS(simulate_ensemble(sys, xi0, InitialMode::uniform(), 10, 4, 1, 1, 5),
                  ValidationError);
  CHECK_THROWS_AS(simulate_ensemble(sys, History::constant(1, v1(1.0)), InitialMode::uniform(),
                                    10, 4, 1),
                  ValidationError);
}

TEST_CASE("single-run ensemble agrees with simulate on the same substream") {
  SatSystemSpec spec;
  const JumpSystem sys = build_sat_system(spec);
  const History xi0 = History::constant(2, v1(1.0));
  const std::uint64_t seed = 99;

  Rng rng(seed);  // substream(seed, 0) == Rng(seed)
  const Trajectory traj = simulate(sys, xi0, 2, 25, rng);
  const EnsembleStats stats =
      simulate_ensemble(sys, xi0, InitialMode::fixed(2), 25, 1, seed, 1, 1);

  REQUIRE(stats.mean_sq.size() == 26);
  for (int k = 0; k <= 25; ++k) {
    const double x = traj.states[static_cast<std::size_t>(k)](0);
    CHECK(stats.mean_sq[static_cast<std::size_t>(k)] == x * x);
    CHECK(stats.min_norm[static_cast<std::size_t>(k)] == std::abs(x));
    CHECK(stats.max_norm[static_cast<std::size_t>(k)] == std::abs(x));
    CHECK(stats.std_dev[static_cast<std::size_t>(k)] == 0.0);
    CHECK(stats.ci99[static_cast<std::size_t>(k)] == 0.0);
  }
  REQUIRE(stats.retained.size() == 1);
  CHECK(stats.retained[0].states.size() == 26);
  CHECK(stats.retained[0].states[25](0) == traj.states[25](0));
  CHECK(stats.retained[0].modes == traj.modes);
}

TEST_CASE("thread count never changes any output bit") {
  SatSystemSpec spec;
  const JumpSystem sys = build_sat_system(spec);
  const History xi0 = History::constant(2, v1(1.0));
  const EnsembleStats a =
      simulate_ensemble(sys, xi0, InitialMode::uniform(), 40, 333, 7, 1, 3);
  const EnsembleStats b =
      simulate_ensemble(sys, xi0, InitialMode::uniform(), 40, 333, 7, 8, 3);
  CHECK(a.mean_sq == b.mean_sq);
  CHECK(a.min_norm == b.min_norm);
  CHECK(a.max_norm == b.max_norm);
  CHECK(a.std_dev == b.std_dev);
  CHECK(a.ci99 == b.ci99);
  REQUIRE(a.retained.size() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(a.retained[t].modes == b.retained[t].modes);
    REQUIRE(a.retained[t].states.size() == b.retained[t].states.size());
    for (std::size_t k = 0; k < a.retained[t].states.size(); ++k)
      CHECK(a.retained[t].states[k] == b.retained[t].states[k]);
  }
}

TEST_CASE("envelopes bracket the mean and the CI uses the 99% quantile") {
  SatSystemSpec spec;
  const JumpSystem sys = build_sat_system(spec);
  const EnsembleStats stats = simulate_ensemble(sys, History::constant(2, v1(1.0)),
                                                InitialMode::uniform(), 30, 200, 11, 4);
  for (std::size_t k = 0; k < stats.mean_sq.size(); ++k) {
    CHECK(stats.min_norm[k] <= stats.max_norm[k]);
    CHECK(stats.mean_sq[k] >= stats.min_norm[k] * stats.min_norm[k] - 1e-15);
    CHECK(stats.mean_sq[k] <= stats.max_norm[k] * stats.max_norm[k] + 1e-15);
    CHECK(stats.ci99[k] ==
          doctest::Approx(2.5758293035489004 * stats.std_dev[k] / std::sqrt(200.0))
              .epsilon(1e-15));
  }
  CHECK(stats.eta0 == "uniform");
  CHECK(stats.n_runs == 200);
}

TEST_CASE("mean square decays far below the start under the stable mix") {
  SatSystemSpec spec;  // gamma 1.2, p 0.95, q 0.01
  const JumpSystem sys = build_sat_system(spec);
  const EnsembleStats stats = simulate_ensemble(sys, History::constant(2, v1(1.0)),
                                                InitialMode::uniform(), 60, 400, 3, 4);
  CHECK(stats.mean_sq[60] < 1e-3);
  CHECK(stats.mean_sq[60] < stats.mean_sq[10]);
  // window maxima keep shrinking once saturation effects die out
  double early = 0.0, late = 0.0;
  for (int k = 5; k <= 15; ++k) early = std::max(early, stats.mean_sq[static_cast<std::size_t>(k)]);
  for (int k = 50; k <= 60; ++k) late = std::max(late, stats.mean_sq[static_cast<std::size_t>(k)]);
  CHECK(late < early);
}

}  // TEST_SUITE
