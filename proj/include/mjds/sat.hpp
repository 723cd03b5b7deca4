// The two-mode saturated benchmark: scalar dynamics
//   x(k+1) = sat(x(k)) - gamma * sat(x(k - d))
// where the active delay d switches between 0 and 2 under a two-state chain
// with staying probabilities p (mode 1, undelayed) and q (mode 2, delayed).
#pragma once

#include <algorithm>
#include <numbers>
#include <optional>

#include "mjds/lyapunov.hpp"

namespace mjds {

inline double sat(double x) { return std::clamp(x, -1.0, 1.0); }

struct SatSystemSpec {
  double gamma = 1.2;
  double p = 0.95;
  double q = 0.01;
  double c = std::numbers::e;
  std::optional<double> lambda_ratio;  // override for the witness lambda2/lambda1

  void validate() const;
};

// Scalar delay model with alphabet {[0], [2]} and horizon 2.
DelayModel sat_delay_model(double gamma);

// Two-state staying-probability matrix [[p, 1-p], [1-q, q]].
Matrix two_mode_tpm(double p, double q);

JumpSystem build_sat_system(const SatSystemSpec& spec);

struct ChainConstants {
  double lambda1 = 0.0, lambda2 = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
  double omega1 = 0.0, omega2 = 0.0;
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
};

struct CertificateReport {
  SatSystemSpec spec;
  bool c_exceeds_e = false;
  double q_cap = 0.0;
  double lower = 0.0, upper = 0.0;  // admissible ratio interval endpoints
  bool feasible = false;
  std::optional<double> lambda_ratio;      // witness actually used
  std::optional<ChainConstants> constants;  // present whenever a ratio was tried
  std::optional<DecayCertificate> certificate;
  std::string verdict;             // "certificate" or "no-certificate"
  std::string alpha3_provenance;   // "analytic" or "declared"
  std::string caveat;

  bool certified() const { return certificate.has_value(); }
};

// Full closed-form certificate attempt: ratio interval, witness ratio (the
// geometric mean unless overridden), drift margins, lifted envelope, and the
// resulting (M, zeta).  Never throws for an infeasible spec; the report then
// carries verdict "no-certificate".  The check is one-sided: that outcome
// does not witness instability.
CertificateReport certify_sat(const SatSystemSpec& spec,
                              std::optional<double> alpha3_override = std::nullopt);

}  // namespace mjds
