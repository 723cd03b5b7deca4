#include "mjds/moments.hpp"

#include <algorithm>
#include <cmath>

namespace mjds {

MomentCurve curve_from_stats(const EnsembleStats& stats, double xi0_sup_norm) {
  if (!(xi0_sup_norm > 0.0)) throw ValidationError("initial history norm must be positive");
  MomentCurve curve;
  curve.values = stats.mean_sq;
  curve.ci_halfwidths = stats.ci99;
  curve.n_runs = stats.n_runs;
  curve.seed = stats.seed;
  curve.xi0_sup_norm = xi0_sup_norm;
  return curve;
}

static void require_curve(const MomentCurve& curve) {
  if (curve.values.empty()) throw ValidationError("moment curve is empty");
  if (!curve.ci_halfwidths.empty() && curve.ci_halfwidths.size() != curve.values.size())
    throw ValidationError("CI column length does not match the curve");
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    if (!std::isfinite(curve.values[k]) || curve.values[k] < 0.0)
      throw ValidationError("moment curve entry " + std::to_string(k) +
                            " must be finite and >= 0");
  }
}

EnvelopeCheck emss_check(const MomentCurve& curve, double M, double zeta, double xi0_sup_norm) {
  require_curve(curve);
  if (!(M >= 1.0)) throw ValidationError("overshoot constant M must be >= 1");
  if (!(zeta > 0.0) || !(zeta < 1.0)) throw ValidationError("rate zeta must lie in (0, 1)");
  if (!(xi0_sup_norm > 0.0)) throw ValidationError("initial history norm must be positive");

  EnvelopeCheck out;
  out.pass = true;
  const double scale = M * xi0_sup_norm * xi0_sup_norm;
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    const double bound = scale * std::pow(zeta, static_cast<double>(k));
    const double slack = curve.ci_halfwidths.empty() ? 0.0 : 3.0 * curve.ci_halfwidths[k];
    if (curve.values[k] > bound + slack) {
      out.pass = false;
      out.first_violation = static_cast<int>(k);
      break;
    }
  }
  return out;
}

DecayFit fit_decay(const MomentCurve& curve, int burn_in) {
  require_curve(curve);
  const int K = curve.horizon();
  const int k0 = burn_in < 0 ? (K + 4) / 5 : burn_in;
  if (k0 > K) throw ValidationError("burn-in " + std::to_string(k0) + " exceeds horizon " +
                                    std::to_string(K));

  DecayFit fit;
  fit.k0 = k0;
  fit.k1 = K;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  int n = 0;
  for (int k = k0; k <= K; ++k) {
    const double v = curve.values[static_cast<std::size_t>(k)];
    if (v <= kZeroFloor) continue;  // decayed past double precision
    const double x = static_cast<double>(k);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  fit.n_points = n;
  if (n < 2) {
    fit.decayed_below_floor = true;
    return fit;
  }

  const double dn = static_cast<double>(n);
  const double sxx_c = sxx - sx * sx / dn;
  const double sxy_c = sxy - sx * sy / dn;
  const double syy_c = syy - sy * sy / dn;
  const double slope = sxy_c / sxx_c;
  const double intercept = (sy - slope * sx) / dn;
  fit.zeta_hat = std::exp(slope);
  fit.M_hat = std::exp(intercept) / (curve.xi0_sup_norm * curve.xi0_sup_norm);
  fit.r_squared =
      syy_c > 0.0 ? std::clamp((sxy_c * sxy_c) / (sxx_c * syy_c), 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace mjds
