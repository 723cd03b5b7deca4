// Mode-indexed Lyapunov candidates on histories, the one-step expected
// drift operator, sampled condition checks, and the closed-form certificate
// chain for the saturated two-mode benchmark family.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mjds/jump.hpp"

namespace mjds {

// V(phi, i) >= 0 with declared envelope constants:
//   alpha1*|phi(0)|^2 <= V(phi,i) <= alpha2*|phi|_sup^2.
struct LyapunovCandidate {
  std::function<double(const History&, int mode)> eval;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

// Expected drift sum_j p_ij V(F(phi, d_i), j) - V(phi, i).  The successor
// history is computed once; terms with p_ij = 0 are skipped, so V is never
// evaluated at unreachable modes.
double eval_LV(const LyapunovCandidate& V, const JumpSystem& sys, const History& phi, int mode);

// Deterministic history generator for falsification runs: a fixed list of
// structured corner histories first (zero, one-hot slots, constant and
// alternating segments at the boundary radius), then pseudorandom histories
// uniform on the sup-norm ball of the given radius.  sample(t) is a pure
// function of (seed, t).
class HistorySampler {
 public:
  HistorySampler(int delta, int dim, double radius, std::uint64_t seed = 0);

  std::size_t corner_count() const { return corners_.size(); }
  double radius() const { return radius_; }
  History sample(std::size_t index) const;

 private:
  int delta_;
  int dim_;
  double radius_;
  std::uint64_t seed_;
  std::vector<History> corners_;
};

struct ConditionViolation {
  std::size_t sample = 0;
  int mode = 0;
  std::string condition;  // "lower", "upper" or "descent"
  double lhs = 0.0;
  double rhs = 0.0;
};

// Outcome of a sampled check.  A clean report is a falsification failure:
// no sampled history violated the conditions.  It is evidence, not a proof.
struct ConditionReport {
  std::size_t checked_samples = 0;
  double tol = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
  std::size_t total_violations = 0;
  std::vector<ConditionViolation> violations;  // first kMaxRecorded only
  double min_slack_lower = std::numeric_limits<double>::infinity();
  double min_slack_upper = std::numeric_limits<double>::infinity();
  double min_slack_descent = std::numeric_limits<double>::infinity();

  static constexpr std::size_t kMaxRecorded = 100;
  static constexpr const char* kPassCaveat =
      "no sampled violation found; this is falsification failure, not a proof";

  bool passed() const { return total_violations == 0; }
  std::string verdict() const { return passed() ? "no-violation-found" : "falsified"; }
};

// Samples n histories and checks, for every mode, the envelope conditions
// with the candidate's declared alpha1/alpha2 and the drift condition
// LV <= -alpha3*|phi(0)|^2, each up to +tol.
ConditionReport check_stability_conditions(const LyapunovCandidate& V, const JumpSystem& sys, double alpha3,
                               const HistorySampler& sampler, std::size_t n_samples,
                               double tol = 1e-9);

// Weighted-supremum candidate for the saturated benchmark (two modes, max
// delay 2): V(phi,i) = lambda_i * max_j 2^(j-1) gamma^j c^-j |phi(-j)|^2.
// Declared envelope: alpha1 = min(lambda)/2 (the j = 0 weight is 1/2),
// alpha2 = 2 gamma^2 max(lambda) (coarse upper bound on the weights).
LyapunovCandidate sat_candidate(double lambda1, double lambda2, double gamma, double c);

struct OmegaBounds {
  double omega1 = 0.0;  // drift margin in the stable mode
  double omega2 = 0.0;  // drift margin in the unstable mode
  double alpha3 = 0.0;  // min(omega1, omega2) / 2
};

// Closed-form drift margins of sat_candidate under the two-mode chain with
// staying probabilities p (stable) and q (unstable).
OmegaBounds omega_bounds(double p, double q, double lambda1, double lambda2, double gamma,
                         double c);

// Decision boundaries treat anything within this of zero as inconclusive.
inline constexpr double kBoundaryTol = 1e-12;

// Interval of weight ratios lambda2/lambda1 that makes both margins
// positive: ratio must lie in (lower, upper), and q must stay below q_cap.
double region_upper_bound(double gamma, double c, double p);
double region_lower_bound(double gamma, double c, double q);
double region_q_cap(double gamma, double c);

struct RegionCell {
  double p = 0.0, q = 0.0;
  bool feasible = false;
  double lambda_ratio = std::numeric_limits<double>::quiet_NaN();
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  double omega1 = std::numeric_limits<double>::quiet_NaN();
  double omega2 = std::numeric_limits<double>::quiet_NaN();
  double alpha3 = std::numeric_limits<double>::quiet_NaN();
};

struct RegionGrid {
  double gamma = 0.0, c = 0.0;
  std::vector<double> p_values, q_values;
  std::vector<RegionCell> cells;  // p-major: cells[ip * q_values.size() + iq]

  const RegionCell& cell(std::size_t ip, std::size_t iq) const {
    return cells[ip * q_values.size() + iq];
  }
};

// Cell midpoints (i + 0.5)/n of an n-cell subdivision of (0, 1).
std::vector<double> grid_centers(int n);

// Sweeps the (p, q) grid; feasible cells carry the geometric-mean witness
// ratio sqrt(lower*upper) and its margins.
RegionGrid feasible_region(double gamma, double c, const std::vector<double>& p_grid,
                           const std::vector<double>& q_grid);

struct FrontierPoint {
  double one_minus_p = 0.0;
  double max_q = std::numeric_limits<double>::quiet_NaN();  // NaN: no feasible q
};

// Largest feasible q per p column, ordered by increasing 1-p.
std::vector<FrontierPoint> frontier(const RegionGrid& grid);

struct WLift {
  LyapunovCandidate W;
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
};

// Augments V with an exponentially discounted penalty on the aged slots:
//   W = V + alpha3 * max_{theta=1..delta} e^-theta |phi(-theta)|^2.
// Envelope: beta1 = alpha1, beta2 = alpha2 + alpha3.  Drift of W is bounded
// by -beta3*|phi|_sup^2 with beta3 = (1 - 1/e) alpha3 e^-delta.
WLift lift_to_W(const LyapunovCandidate& V, double alpha3, int delta);

struct DecayCertificate {
  double gamma1 = 0.0, gamma2 = 0.0, gamma3 = 0.0;  // envelope and drift rates
  double gamma4 = 0.0;                              // clipped drift fraction
  double M = 0.0;                                   // >= 1
  double zeta = 0.0;                                // in (0, 1)
};

// Mean-square decay constants from the three comparison rates:
//   gamma4 = min(gamma3/gamma2, 1 - 1e-9),  M = gamma2/gamma1,
//   zeta = 1 - gamma4.
DecayCertificate decay_certificate(double gamma1, double gamma2, double gamma3);

}  // namespace mjds
