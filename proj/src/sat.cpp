#include "mjds/sat.hpp"

#include <cmath>

namespace mjds {

void SatSystemSpec::validate() const {
  if (!(gamma >= 1.0) || !(gamma <= 1.2))
    throw ValidationError("gamma must lie in [1, 1.2]");
  if (!(p > 0.0) || !(p < 1.0)) throw ValidationError("p must lie in (0, 1)");
  if (!(q > 0.0) || !(q < 1.0)) throw ValidationError("q must lie in (0, 1)");
  if (!(c > 1.0) || !std::isfinite(c)) throw ValidationError("scale c must be finite and > 1");
  if (lambda_ratio && !(*lambda_ratio > 0.0))
    throw ValidationError("lambda ratio override must be positive");
}

DelayModel sat_delay_model(double gamma) {
  if (!(gamma >= 1.0) || !(gamma <= 1.2))
    throw ValidationError("gamma must lie in [1, 1.2]");
  Dynamics f = [gamma](const std::vector<Vector>& args) {
    Vector out(1);
    out(0) = sat(args[0](0)) - gamma * sat(args[1](0));
    return out;
  };
  return DelayModel(1, 2, {DelayVector{{0}}, DelayVector{{2}}}, std::move(f));
}

Matrix two_mode_tpm(double p, double q) {
  Matrix rows(2, 2);
  rows << p, 1.0 - p, 1.0 - q, q;
  return rows;
}

JumpSystem build_sat_system(const SatSystemSpec& spec) {
  spec.validate();
  MarkovDelayChain chain(validate_tpm(two_mode_tpm(spec.p, spec.q)),
                         build_bijection({DelayVector{{0}}, DelayVector{{2}}}));
  return JumpSystem(sat_delay_model(spec.gamma), std::move(chain));
}

CertificateReport certify_sat(const SatSystemSpec& spec, std::optional<double> alpha3_override) {
  spec.validate();
  if (alpha3_override && !(*alpha3_override > 0.0))
    throw ValidationError("alpha3 override must be positive");

  CertificateReport report;
  report.spec = spec;
  report.c_exceeds_e = spec.c > std::numbers::e;
  report.q_cap = region_q_cap(spec.gamma, spec.c);
  report.upper = region_upper_bound(spec.gamma, spec.c, spec.p);
  report.lower = region_lower_bound(spec.gamma, spec.c, spec.q);
  report.feasible = (report.q_cap - spec.q > kBoundaryTol) && (report.upper > kBoundaryTol) &&
                    (report.upper - report.lower > kBoundaryTol);
  report.alpha3_provenance = alpha3_override ? "declared" : "analytic";
  report.caveat =
      "one-sided test: no-certificate does not witness instability, it only means "
      "this candidate family produced no decay bound here";
  report.verdict = "no-certificate";

  if (spec.lambda_ratio)
    report.lambda_ratio = *spec.lambda_ratio;
  else if (report.feasible)
    report.lambda_ratio = std::sqrt(report.lower * report.upper);
  if (!report.lambda_ratio) return report;

  const double lambda1 = 1.0;
  const double lambda2 = *report.lambda_ratio;
  const OmegaBounds ob = omega_bounds(spec.p, spec.q, lambda1, lambda2, spec.gamma, spec.c);

  ChainConstants cc;
  cc.lambda1 = lambda1;
  cc.lambda2 = lambda2;
  cc.omega1 = ob.omega1;
  cc.omega2 = ob.omega2;
  const LyapunovCandidate V = sat_candidate(lambda1, lambda2, spec.gamma, spec.c);
  cc.alpha1 = V.alpha1;
  cc.alpha2 = V.alpha2;
  cc.alpha3 = std::numeric_limits<double>::quiet_NaN();
  cc.beta1 = cc.beta2 = cc.beta3 = std::numeric_limits<double>::quiet_NaN();

  const double alpha3 = alpha3_override ? *alpha3_override : ob.alpha3;
  if (alpha3 > 0.0) {
    cc.alpha3 = alpha3;
    const WLift lift = lift_to_W(V, alpha3, 2);
    cc.beta1 = lift.beta1;
    cc.beta2 = lift.beta2;
    cc.beta3 = lift.beta3;
    report.certificate = decay_certificate(lift.beta1, lift.beta2, lift.beta3);
    report.verdict = "certificate";
  }
  report.constants = cc;
  return report;
}

}  // namespace mjds
