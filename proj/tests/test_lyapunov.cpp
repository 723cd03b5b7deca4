#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mjds/lyapunov.hpp"
#include "mjds/sat.hpp"

using namespace mjds;

namespace {

constexpr double kE = std::numbers::e;

Vector v1(double x) { return Vector::Constant(1, x); }

// oldest first: (phi(-2), phi(-1), phi(0))
History h3(double old2, double old1, double head) {
  return History(2, {v1(old2), v1(old1), v1(head)});
}

JumpSystem sat_sys(double gamma, double p, double q) {
  SatSystemSpec spec;
  spec.gamma = gamma;
  spec.p = p;
  spec.q = q;
  return build_sat_system(spec);
}

}  // namespace

TEST_SUITE("lyapunov") {

TEST_CASE("sat_candidate evaluates the weighted supremum") {
  const LyapunovCandidate V = sat_candidate(1.0, 3.0, 1.0, kE);
  CHECK(V.eval(h3(0, 0, 1), 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(V.eval(h3(0, 0, 1), 2) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(V.eval(h3(0, 1, 0), 1) == doctest::Approx(1.0 / kE).epsilon(1e-15));
  CHECK(V.eval(h3(1, 0, 0), 1) == doctest::Approx(2.0 / (kE * kE)).epsilon(1e-15));
  // the largest weighted tap wins
  CHECK(V.eval(h3(1, 1, 1), 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(V.alpha1 == 0.5);
  CHECK(V.alpha2 == doctest::Approx(6.0).epsilon(1e-15));

  CHECK_THROWS_AS(V.eval(h3(0, 0, 1), 3), ValidationError);
  CHECK_THROWS_AS(V.eval(History::zero(1, 1), 1), ValidationError);
  CHECK_THROWS_AS(sat_candidate(0.0, 1.0, 1.0, kE), ValidationError);
  CHECK_THROWS_AS(sat_candidate(1.0, 1.0, 0.9, kE), ValidationError);
  CHECK_THROWS_AS(sat_candidate(1.0, 1.0, 1.3, kE), ValidationError);
  CHECK_THROWS_AS(sat_candidate(1.0, 1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("declared envelope is tight at the head and loose above") {
  const LyapunovCandidate V = sat_candidate(2.0, 5.0, 1.2, 5.2);
  CHECK(V.alpha1 == 1.0);  // min(lambda)/2, attained at histories like (0,0,a)
  CHECK(V.eval(h3(0, 0, 1), 1) == doctest::Approx(V.alpha1).epsilon(1e-15));
  for (double a : {0.1, 1.0, 7.0})
    for (int mode : {1, 2}) {
      const History phi = h3(a, -0.5 * a, 0.25 * a);
      const double v = V.eval(phi, mode);
      CHECK(v + 1e-12 >= V.alpha1 * phi.at(0).squaredNorm());
      CHECK(v <= V.alpha2 * sup_norm(phi) * sup_norm(phi) + 1e-12);
    }
}

TEST_CASE("eval_LV matches the hand-computed drift") {
  const JumpSystem sys = sat_sys(1.0, 0.95, 0.5);
  const LyapunovCandidate V = sat_candidate(1.0, 1.0, 1.0, kE);
  // head 1, both delayed slots 0, stable mode: drift is 1/e - 1/2
  CHECK(eval_LV(V, sys, h3(0, 0, 1), 1) ==
        doctest::Approx(1.0 / kE - 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(eval_LV(V, sys, h3(0, 0, 1), 3), ValidationError);
}

TEST_CASE("eval_LV skips zero-probability successors") {
  // staying probability one in the delayed mode: only mode 2 is summed
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.0, 1.0;
  const JumpSystem sys(sat_delay_model(1.0),
                       MarkovDelayChain(validate_tpm(m),
                                        build_bijection({DelayVector{{0}}, DelayVector{{2}}})));
  const LyapunovCandidate V = sat_candidate(1.0, 1.0, 1.0, kE);
  // drift at a pure aged impulse is positive: the candidate cannot descend
  const double drift = eval_LV(V, sys, h3(1, 0, 0), 2);
  CHECK(drift == doctest::Approx(0.5 - 2.0 / (kE * kE)).epsilon(1e-14));
  CHECK(drift > 0.0);
}

TEST_CASE("omega margins in closed form") {
  // frozen values for gamma 1.2, c 5.2, p 0.95, q 0.01 at the witness ratio
  const OmegaBounds ob =
      omega_bounds(0.95, 0.01, 1.0, 19.82789906076753, 1.2, 5.2);
  CHECK(ob.omega1 == doctest::Approx(0.02631576201459851).epsilon(1e-12));
  CHECK(ob.omega2 == doctest::Approx(0.8373726693328636).epsilon(1e-12));
  CHECK(ob.alpha3 == doctest::Approx(0.013157881007299255).epsilon(1e-12));

  // p = 1 keeps the chain in the stable mode: omega1 = lambda1*(1 - A)
  const OmegaBounds stay = omega_bounds(1.0, 0.5, 1.0, 1.0, 1.0, kE);
  CHECK(stay.omega1 == doctest::Approx(1.0 - 2.0 / kE).epsilon(1e-14));
  CHECK_THROWS_AS(omega_bounds(-0.1, 0.5, 1.0, 1.0, 1.0, kE), ValidationError);
  CHECK_THROWS_AS(omega_bounds(0.5, 1.5, 1.0, 1.0, 1.0, kE), ValidationError);
}

TEST_CASE("ratio interval endpoints match the frozen oracle values") {
  CHECK(region_upper_bound(1.2, kE, 0.95) ==
        doctest::Approx(2.670569961513182).epsilon(1e-12));
  CHECK(region_lower_bound(1.2, kE, 0.01) ==
        doctest::Approx(6.970119670408693).epsilon(1e-12));
  CHECK(region_q_cap(1.2, kE) == doctest::Approx(0.15203486407887618).epsilon(1e-12));

  CHECK(region_upper_bound(1.0, kE, 0.95) ==
        doctest::Approx(8.182818284590445).epsilon(1e-12));
  CHECK(region_lower_bound(1.0, kE, 0.01) ==
        doctest::Approx(6.803466478357929).epsilon(1e-12));
  CHECK(region_lower_bound(1.0, kE, 0.05) ==
        doctest::Approx(9.003539801496792).epsilon(1e-12));

  CHECK(region_upper_bound(1.2, 5.2, 0.95) ==
        doctest::Approx(20.877300613496917).epsilon(1e-12));
  CHECK(region_lower_bound(1.2, 5.2, 0.01) ==
        doctest::Approx(18.831245880026373).epsilon(1e-12));
  CHECK(region_q_cap(1.2, 5.2) == doctest::Approx(0.06257219869079707).epsilon(1e-12));

  // with no unstable visits at all the interval opens at 1/A
  CHECK(region_upper_bound(1.0, kE, 0.0) == doctest::Approx(kE / 2.0).epsilon(1e-14));
}

TEST_CASE("feasibility needs a nonempty interval below the q cap") {
  const std::vector<double> p95 = {0.95};
  const std::vector<double> q_grid = {0.01, 0.05};

  const RegionGrid tight = feasible_region(1.2, kE, p95, q_grid);
  CHECK_FALSE(tight.cell(0, 0).feasible);  // interval empty: lower > upper
  CHECK_FALSE(tight.cell(0, 1).feasible);

  const RegionGrid open = feasible_region(1.0, kE, p95, q_grid);
  CHECK(open.cell(0, 0).feasible);
  CHECK_FALSE(open.cell(0, 1).feasible);
  const RegionCell& good = open.cell(0, 0);
  CHECK(good.lambda_ratio ==
        doctest::Approx(std::sqrt(good.lower * good.upper)).epsilon(1e-15));
  CHECK(good.omega1 > 0.0);
  CHECK(good.omega2 > 0.0);
  CHECK(good.alpha3 == doctest::Approx(0.5 * std::min(good.omega1, good.omega2)).epsilon(1e-15));

  const RegionGrid wide = feasible_region(1.2, 5.2, p95, {0.01});
  CHECK(wide.cell(0, 0).feasible);
  CHECK(wide.cell(0, 0).lambda_ratio == doctest::Approx(19.82789906076753).epsilon(1e-12));

  CHECK_THROWS_AS(feasible_region(1.0, kE, {0.0}, {0.5}), ValidationError);
  CHECK_THROWS_AS(feasible_region(1.0, kE, {}, {0.5}), ValidationError);
}

TEST_CASE("grid centers subdivide the open unit interval") {
  const auto g4 = grid_centers(4);
  REQUIRE(g4.size() == 4);
  CHECK(g4[0] == 0.125);
  CHECK(g4[3] == 0.875);
  CHECK(grid_centers(1) == std::vector<double>{0.5});
  CHECK_THROWS_AS(grid_centers(0), ValidationError);
}

TEST_CASE("frontier reports the largest feasible q per column") {
  const RegionGrid grid = feasible_region(1.0, kE, {0.9, 0.95}, {0.01, 0.2});
  const auto front = frontier(grid);
  REQUIRE(front.size() == 2);
  CHECK(front[0].one_minus_p == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(front[0].max_q == 0.01);
  CHECK(front[1].one_minus_p == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(std::isnan(front[1].max_q));  // no feasible cell in the p = 0.9 column
}

TEST_CASE("history sampler starts with corners and stays inside the ball") {
  const HistorySampler sampler(2, 1, 10.0, 42);
  CHECK(sup_norm(sampler.sample(0)) == 0.0);  // the zero history comes first
  bool saw_head_impulse = false, saw_aged_impulse = false;
  for (std::size_t t = 0; t < sampler.corner_count(); ++t) {
    const History phi = sampler.sample(t);
    CHECK(sup_norm(phi) <= 10.0 + 1e-12);
    if (phi.at(0)(0) == 10.0 && phi.at(-1)(0) == 0.0 && phi.at(-2)(0) == 0.0)
      saw_head_impulse = true;
    if (phi.at(-2)(0) == 10.0 && phi.at(-1)(0) == 0.0 && phi.at(0)(0) == 0.0)
      saw_aged_impulse = true;
  }
  CHECK(saw_head_impulse);
  CHECK(saw_aged_impulse);
  for (std::size_t t = sampler.corner_count(); t < sampler.corner_count() + 500; ++t) {
    const History phi = sampler.sample(t);
    CHECK(sup_norm(phi) <= 10.0 + 1e-12);
    CHECK(phi.at(0) == sampler.sample(t).at(0));  // pure function of the index
  }
  const HistorySampler vec(1, 3, 2.0, 0);
  for (std::size_t t = 0; t < vec.corner_count() + 200; ++t)
    CHECK(sup_norm(vec.sample(t)) <= 2.0 + 1e-12);
  CHECK_THROWS_AS(HistorySampler(2, 1, 0.0), ValidationError);
}

TEST_CASE("check_stability_conditions passes at a feasible point") {
  const JumpSystem sys = sat_sys(1.0, 0.95, 0.01);
  const double ratio =
      std::sqrt(region_lower_bound(1.0, kE, 0.01) * region_upper_bound(1.0, kE, 0.95));
  const LyapunovCandidate V = sat_candidate(1.0, ratio, 1.0, kE);
  const OmegaBounds ob = omega_bounds(0.95, 0.01, 1.0, ratio, 1.0, kE);
  REQUIRE(ob.alpha3 > 0.0);
  const HistorySampler sampler(2, 1, 10.0, 7);
  const ConditionReport report = check_stability_conditions(V, sys, ob.alpha3, sampler, 2000);
  CHECK(report.passed());
  CHECK(report.verdict() == "no-violation-found");
  CHECK(report.checked_samples == 2000);
  CHECK(report.total_violations == 0);
  CHECK(report.min_slack_lower >= -1e-9);
  CHECK(report.min_slack_upper >= -1e-9);
  CHECK(report.min_slack_descent >= -1e-9);
}

TEST_CASE("check_stability_conditions falsifies an absorbing unstable mode") {
  Matrix m(2, 2);
  m << 0.95, 0.05, 0.0, 1.0;  // q = 1: the delayed mode is absorbing
  const JumpSystem sys(sat_delay_model(1.0),
                       MarkovDelayChain(validate_tpm(m),
                                        build_bijection({DelayVector{{0}}, DelayVector{{2}}})));
  const LyapunovCandidate V = sat_candidate(1.0, 1.0, 1.0, kE);
  const HistorySampler sampler(2, 1, 10.0, 7);
  const ConditionReport report = check_stability_conditions(V, sys, 0.01, sampler, 500);
  CHECK_FALSE(report.passed());
  CHECK(report.verdict() == "falsified");
  CHECK(report.total_violations > 0);
  CHECK(report.violations.size() <= ConditionReport::kMaxRecorded);
  REQUIRE(!report.violations.empty());
  bool saw_descent = false;
  for (const auto& v : report.violations) saw_descent = saw_descent || v.condition == "descent";
  CHECK(saw_descent);
  CHECK(report.min_slack_descent < 0.0);
}

TEST_CASE("check_stability_conditions validates its inputs") {
  const JumpSystem sys = sat_sys(1.0, 0.95, 0.01);
  LyapunovCandidate V = sat_candidate(1.0, 2.0, 1.0, kE);
  const HistorySampler sampler(2, 1, 1.0, 0);
  CHECK_THROWS_AS(check_stability_conditions(V, sys, 0.0, sampler, 10), ValidationError);
  V.alpha1 = 0.0;
  CHECK_THROWS_AS(check_stability_conditions(V, sys, 0.1, sampler, 10), ValidationError);
}

TEST_CASE("lift adds a discounted penalty on the aged slots") {
  const LyapunovCandidate V = sat_candidate(1.0, 1.0, 1.0, kE);
  const WLift lift = lift_to_W(V, 1.0, 2);
  CHECK(lift.beta1 == V.alpha1);
  CHECK(lift.beta2 == V.alpha2 + 1.0);
  CHECK(lift.beta3 ==
        doctest::Approx((1.0 - std::exp(-1.0)) * std::exp(-2.0)).epsilon(1e-15));
  // a pure aged impulse picks up exactly e^-2 * alpha3
  CHECK(lift.W.eval(h3(1, 0, 0), 1) - V.eval(h3(1, 0, 0), 1) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(lift.W.eval(h3(0, 1, 0), 1) - V.eval(h3(0, 1, 0), 1) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(lift.W.eval(h3(0, 0, 1), 1) == V.eval(h3(0, 0, 1), 1));
  CHECK_THROWS_AS(lift_to_W(V, 0.0, 2), ValidationError);
  CHECK_THROWS_AS(lift_to_W(V, 1.0, 0), ValidationError);
}

TEST_CASE("lifted drift condition holds at a feasible point") {
  const double gamma = 1.2, c = 5.2, p = 0.95, q = 0.01;
  const JumpSystem sys = sat_sys(gamma, p, q);
  const double ratio =
      std::sqrt(region_lower_bound(gamma, c, q) * region_upper_bound(gamma, c, p));
  const LyapunovCandidate V = sat_candidate(1.0, ratio, gamma, c);
  const OmegaBounds ob = omega_bounds(p, q, 1.0, ratio, gamma, c);
  const WLift lift = lift_to_W(V, ob.alpha3, 2);
  const HistorySampler sampler(2, 1, 10.0, 21);
  for (std::size_t t = 0; t < 300; ++t) {
    const History phi = sampler.sample(t);
    const double sup2 = sup_norm(phi) * sup_norm(phi);
    for (int mode : {1, 2}) {
      CHECK(lift.W.eval(phi, mode) + 1e-9 >= lift.beta1 * phi.at(0).squaredNorm());
      CHECK(lift.W.eval(phi, mode) <= lift.beta2 * sup2 + 1e-9);
      CHECK(eval_LV(lift.W, sys, phi, mode) <= -lift.beta3 * sup2 + 1e-9);
    }
  }
}

TEST_CASE("decay certificate clips the drift fraction") {
  const DecayCertificate cert = decay_certificate(1.0, 1.0, 0.5);
  CHECK(cert.M == 1.0);
  CHECK(cert.gamma4 == 0.5);
  CHECK(cert.zeta == 0.5);

  // drift faster than the envelope: rate clipped just below one
  const DecayCertificate fast = decay_certificate(1.0, 1.0, 2.0);
  CHECK(fast.gamma4 == doctest::Approx(1.0 - 1e-9).epsilon(1e-15));
  CHECK(fast.zeta == doctest::Approx(1e-9).epsilon(1e-6));
  CHECK(fast.zeta > 0.0);

  const DecayCertificate chain = decay_certificate(0.5, 57.1, 0.0011);
  CHECK(chain.M == doctest::Approx(57.1 / 0.5).epsilon(1e-15));
  CHECK(chain.M >= 1.0);
  CHECK(chain.zeta > 0.0);
  CHECK(chain.zeta < 1.0);

  CHECK_THROWS_AS(decay_certificate(2.0, 1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(decay_certificate(0.0, 1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(decay_certificate(1.0, 1.0, -0.5), ValidationError);
}

}  // TEST_SUITE
