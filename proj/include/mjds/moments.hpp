// Second-moment curves: envelope checks against a decay bound and
// log-linear rate recovery.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mjds/jump.hpp"

namespace mjds {

struct MomentCurve {
  std::vector<double> values;          // mean |x(k)|^2, k = 0..K
  std::vector<double> ci_halfwidths;   // 99% half-widths, same length (may be empty)
  int n_runs = 0;
  std::uint64_t seed = 0;
  double xi0_sup_norm = 1.0;

  int horizon() const { return static_cast<int>(values.size()) - 1; }
};

MomentCurve curve_from_stats(const EnsembleStats& stats, double xi0_sup_norm);

struct EnvelopeCheck {
  bool pass = false;
  int first_violation = -1;  // smallest violating k, or -1
};

// Tests values[k] <= M zeta^k xi0^2 + 3 * ci[k] for every k.  A missing CI
// column counts as zero slack.
EnvelopeCheck emss_check(const MomentCurve& curve, double M, double zeta, double xi0_sup_norm);

// Values at or below this are treated as numerically dead when fitting.
inline constexpr double kZeroFloor = 1e-300;

struct DecayFit {
  double M_hat = std::numeric_limits<double>::quiet_NaN();
  double zeta_hat = std::numeric_limits<double>::quiet_NaN();
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  int k0 = 0, k1 = 0;      // fit window [k0, k1]
  int n_points = 0;        // usable points inside the window
  bool decayed_below_floor = false;  // too few live points to fit
};

// Least squares on (k, log values[k]) over k in [burn_in, K]; points at or
// below kZeroFloor are excluded.  zeta_hat = exp(slope) and M_hat rescales
// the intercept by the initial history norm.  burn_in < 0 selects the
// default ceil(K/5).
DecayFit fit_decay(const MomentCurve& curve, int burn_in = -1);

}  // namespace mjds
