#include "mjds/lyapunov.hpp"

#include <cmath>
#include <numbers>

namespace mjds {
namespace {

void require_sat_params(double lambda1, double lambda2, double gamma, double c) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw ValidationError("candidate weights lambda must be positive");
  if (!(gamma >= 1.0) || !(gamma <= 1.2))
    throw ValidationError("gamma must lie in [1, 1.2]");
  if (!(c > 1.0)) throw ValidationError("scale c must be > 1");
}

// Discount factors of the saturated-benchmark candidate terms.
double tap_weight(int j, double gamma, double c) {
  return std::pow(2.0, j - 1) * std::pow(gamma / c, j);
}

double stable_gain(double gamma, double c) {
  return (1.0 - gamma) * (1.0 - gamma) + 2.0 * gamma / c;
}

double unstable_gain(double gamma, double c) { return 2.0 + 0.5 * c * c + 2.0 * gamma / c; }

}  // namespace

double eval_LV(const LyapunovCandidate& V, const JumpSystem& sys, const History& phi, int mode) {
  if (!V.eval) throw ValidationError("candidate has no evaluator");
  const History succ = lift_step(sys.model, phi, sys.delay_of(mode));
  double expected = 0.0;
  for (int j = 1; j <= sys.modes(); ++j) {
    const double pij = sys.chain.tpm.p(mode, j);
    if (pij > 0.0) expected += pij * V.eval(succ, j);
  }
  const double out = expected - V.eval(phi, mode);
  if (!std::isfinite(out)) throw NumericFault("drift evaluation produced a non-finite value");
  return out;
}

HistorySampler::HistorySampler(int delta, int dim, double radius, std::uint64_t seed)
    : delta_(delta), dim_(dim), radius_(radius), seed_(seed) {
  if (delta_ < 0) throw ValidationError("history horizon must be >= 0");
  if (dim_ <= 0) throw ValidationError("history dimension must be positive");
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw ValidationError("sampling radius must be positive and finite");

  const double unit = radius_ / std::sqrt(static_cast<double>(dim_));
  corners_.push_back(History::zero(delta_, dim_));
  for (int theta = 0; theta <= delta_; ++theta)
    for (int m = 0; m < dim_; ++m)
      for (double sign : {1.0, -1.0}) {
        std::vector<Vector> slots(static_cast<std::size_t>(delta_) + 1, Vector::Zero(dim_));
        slots[static_cast<std::size_t>(delta_ - theta)](m) = sign * radius_;
        corners_.push_back(History(delta_, std::move(slots)));
      }
  for (double sign : {1.0, -1.0})
    corners_.push_back(History::constant(delta_, Vector::Constant(dim_, sign * unit)));
  for (double sign : {1.0, -1.0}) {
    std::vector<Vector> slots;
    for (int theta = delta_; theta >= 0; --theta)
      slots.push_back(Vector::Constant(dim_, sign * (theta % 2 == 0 ? unit : -unit)));
    corners_.push_back(History(delta_, std::move(slots)));
  }
}

History HistorySampler::sample(std::size_t index) const {
  if (index < corners_.size()) return corners_[index];
  Rng rng = Rng::substream(seed_, static_cast<std::uint64_t>(index));
  std::vector<Vector> slots;
  slots.reserve(static_cast<std::size_t>(delta_) + 1);
  for (int s = 0; s <= delta_; ++s) {
    Vector x(dim_);
    if (dim_ == 1) {
      x(0) = radius_ * (2.0 * rng.uniform01() - 1.0);
    } else {
      // Direction from normalized gaussians, length from the ball-volume CDF.
      Vector g(dim_);
      for (int m = 0; m < dim_; m += 2) {
        const double u1 = 1.0 - rng.uniform01();
        const double u2 = rng.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        g(m) = r * std::cos(2.0 * std::numbers::pi * u2);
        if (m + 1 < dim_) g(m + 1) = r * std::sin(2.0 * std::numbers::pi * u2);
      }
      const double gn = g.norm();
      if (gn == 0.0) g(0) = 1.0;
      const double len =
          radius_ * std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim_));
      x = g * (len / (gn == 0.0 ? 1.0 : gn));
    }
    slots.push_back(std::move(x));
  }
  return History(delta_, std::move(slots));
}

ConditionReport check_stability_conditions(const LyapunovCandidate& V, const JumpSystem& sys, double alpha3,
                               const HistorySampler& sampler, std::size_t n_samples, double tol) {
  if (!V.eval) throw ValidationError("candidate has no evaluator");
  if (!(V.alpha1 > 0.0) || !(V.alpha2 > 0.0))
    throw ValidationError("candidate must declare positive envelope constants");
  if (!(alpha3 > 0.0)) throw ValidationError("drift rate alpha3 must be positive");
  if (!(tol >= 0.0)) throw ValidationError("tolerance must be >= 0");

  ConditionReport report;
  report.tol = tol;
  report.alpha1 = V.alpha1;
  report.alpha2 = V.alpha2;
  report.alpha3 = alpha3;

  auto note = [&report](std::size_t t, int mode, const char* cond, double lhs, double rhs,
                        double& min_slack) {
    const double slack = rhs - lhs;
    min_slack = std::min(min_slack, slack);
    if (slack < -report.tol) {
      ++report.total_violations;
      if (report.violations.size() < ConditionReport::kMaxRecorded)
        report.violations.push_back({t, mode, cond, lhs, rhs});
    }
  };

  for (std::size_t t = 0; t < n_samples; ++t) {
    const History phi = sampler.sample(t);
    const double head_sq = phi.at(0).squaredNorm();
    const double sup = sup_norm(phi);
    const double sup_sq = sup * sup;
    for (int i = 1; i <= sys.modes(); ++i) {
      const double v = V.eval(phi, i);
      if (!std::isfinite(v)) throw NumericFault("candidate evaluated to a non-finite value");
      note(t, i, "lower", V.alpha1 * head_sq, v, report.min_slack_lower);
      note(t, i, "upper", v, V.alpha2 * sup_sq, report.min_slack_upper);
      note(t, i, "descent", eval_LV(V, sys, phi, i), -alpha3 * head_sq,
           report.min_slack_descent);
    }
    ++report.checked_samples;
  }
  return report;
}

LyapunovCandidate sat_candidate(double lambda1, double lambda2, double gamma, double c) {
  require_sat_params(lambda1, lambda2, gamma, c);
  const double w0 = tap_weight(0, gamma, c);
  const double w1 = tap_weight(1, gamma, c);
  const double w2 = tap_weight(2, gamma, c);
  LyapunovCandidate V;
  V.eval = [lambda1, lambda2, w0, w1, w2](const History& phi, int mode) {
    if (mode != 1 && mode != 2)
      throw ValidationError("mode " + std::to_string(mode) + " outside 1..2");
    if (phi.delta() != 2)
      throw ValidationError("candidate needs history horizon 2, got " +
                            std::to_string(phi.delta()));
    const double lambda = mode == 1 ? lambda1 : lambda2;
    const double term = std::max({w0 * phi.at(0).squaredNorm(), w1 * phi.at(-1).squaredNorm(),
                                  w2 * phi.at(-2).squaredNorm()});
    return lambda * term;
  };
  // The newest-slot weight is exactly 1/2, so the tight head lower bound is
  // min(lambda)/2.  All weights stay below 2*gamma^2 for c > 1.
  V.alpha1 = 0.5 * std::min(lambda1, lambda2);
  V.alpha2 = 2.0 * gamma * gamma * std::max(lambda1, lambda2);
  return V;
}

OmegaBounds omega_bounds(double p, double q, double lambda1, double lambda2, double gamma,
                         double c) {
  require_sat_params(lambda1, lambda2, gamma, c);
  if (!(p >= 0.0) || !(p <= 1.0) || !(q >= 0.0) || !(q <= 1.0))
    throw ValidationError("staying probabilities must lie in [0, 1]");
  const double a = stable_gain(gamma, c);
  const double b = unstable_gain(gamma, c);
  OmegaBounds out;
  out.omega1 = lambda1 - (p * lambda1 + (1.0 - p) * lambda2) * a;
  out.omega2 = lambda2 - (q * lambda2 + (1.0 - q) * lambda1) * b;
  out.alpha3 = 0.5 * std::min(out.omega1, out.omega2);
  return out;
}

double region_upper_bound(double gamma, double c, double p) {
  require_sat_params(1.0, 1.0, gamma, c);
  if (!(p >= 0.0) || !(p < 1.0)) throw ValidationError("p must lie in [0, 1)");
  const double a = stable_gain(gamma, c);
  return (1.0 - a * p) / (a * (1.0 - p));
}

double region_lower_bound(double gamma, double c, double q) {
  require_sat_params(1.0, 1.0, gamma, c);
  if (!(q >= 0.0) || !(q <= 1.0)) throw ValidationError("q must lie in [0, 1]");
  const double b = 4.0 + c * c + 4.0 * gamma / c;  // twice the unstable gain
  return b * (1.0 - q) / (2.0 - b * q);
}

double region_q_cap(double gamma, double c) {
  require_sat_params(1.0, 1.0, gamma, c);
  return 2.0 / (4.0 + c * c + 4.0 * gamma / c);
}

std::vector<double> grid_centers(int n) {
  if (n < 1) throw ValidationError("grid resolution must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return out;
}

RegionGrid feasible_region(double gamma, double c, const std::vector<double>& p_grid,
                           const std::vector<double>& q_grid) {
  require_sat_params(1.0, 1.0, gamma, c);
  if (p_grid.empty() || q_grid.empty()) throw ValidationError("grids must be non-empty");
  for (double v : p_grid)
    if (!(v > 0.0) || !(v < 1.0)) throw ValidationError("p grid values must lie in (0, 1)");
  for (double v : q_grid)
    if (!(v > 0.0) || !(v < 1.0)) throw ValidationError("q grid values must lie in (0, 1)");

  RegionGrid grid;
  grid.gamma = gamma;
  grid.c = c;
  grid.p_values = p_grid;
  grid.q_values = q_grid;
  grid.cells.reserve(p_grid.size() * q_grid.size());
  const double cap = region_q_cap(gamma, c);
  for (double p : p_grid) {
    const double upper = region_upper_bound(gamma, c, p);
    for (double q : q_grid) {
      RegionCell cell;
      cell.p = p;
      cell.q = q;
      cell.upper = upper;
      cell.lower = region_lower_bound(gamma, c, q);
      cell.feasible = (cap - q > kBoundaryTol) && (upper > kBoundaryTol) &&
                      (upper - cell.lower > kBoundaryTol);
      if (cell.feasible) {
        cell.lambda_ratio = std::sqrt(cell.lower * cell.upper);
        const OmegaBounds ob = omega_bounds(p, q, 1.0, cell.lambda_ratio, gamma, c);
        cell.omega1 = ob.omega1;
        cell.omega2 = ob.omega2;
        cell.alpha3 = ob.alpha3;
      }
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

std::vector<FrontierPoint> frontier(const RegionGrid& grid) {
  std::vector<FrontierPoint> out;
  out.reserve(grid.p_values.size());
  for (std::size_t ip = grid.p_values.size(); ip-- > 0;) {
    FrontierPoint pt;
    pt.one_minus_p = 1.0 - grid.p_values[ip];
    for (std::size_t iq = 0; iq < grid.q_values.size(); ++iq) {
      const RegionCell& cell = grid.cell(ip, iq);
      if (cell.feasible && !(pt.max_q >= cell.q)) pt.max_q = cell.q;
    }
    out.push_back(pt);
  }
  return out;
}

WLift lift_to_W(const LyapunovCandidate& V, double alpha3, int delta) {
  if (!V.eval) throw ValidationError("candidate has no evaluator");
  if (!(V.alpha1 > 0.0) || !(V.alpha2 > 0.0))
    throw ValidationError("candidate must declare positive envelope constants");
  if (!(alpha3 > 0.0) || !std::isfinite(alpha3))
    throw ValidationError("drift rate alpha3 must be positive and finite");
  if (delta < 1) throw ValidationError("lift needs history horizon >= 1");

  WLift lift;
  auto base = V.eval;
  lift.W.eval = [base, alpha3, delta](const History& phi, int mode) {
    if (phi.delta() != delta)
      throw ValidationError("lifted candidate needs history horizon " + std::to_string(delta) +
                            ", got " + std::to_string(phi.delta()));
    double penalty = 0.0;
    for (int theta = 1; theta <= delta; ++theta)
      penalty = std::max(penalty, std::exp(-theta) * phi.at(-theta).squaredNorm());
    return base(phi, mode) + alpha3 * penalty;
  };
  lift.beta1 = V.alpha1;
  lift.beta2 = V.alpha2 + alpha3;
  lift.beta3 = (1.0 - std::exp(-1.0)) * alpha3 * std::exp(-delta);
  lift.W.alpha1 = lift.beta1;
  lift.W.alpha2 = lift.beta2;
  return lift;
}

DecayCertificate decay_certificate(double gamma1, double gamma2, double gamma3) {
  for (double g : {gamma1, gamma2, gamma3})
    if (!(g > 0.0) || !std::isfinite(g))
      throw ValidationError("comparison rates must be positive and finite");
  if (gamma1 > gamma2)
    throw ValidationError("envelope rates must satisfy gamma1 <= gamma2");
  DecayCertificate cert;
  cert.gamma1 = gamma1;
  cert.gamma2 = gamma2;
  cert.gamma3 = gamma3;
  cert.gamma4 = std::min(gamma3 / gamma2, 1.0 - 1e-9);
  cert.M = gamma2 / gamma1;
  cert.zeta = 1.0 - cert.gamma4;
  return cert;
}

}  // namespace mjds
