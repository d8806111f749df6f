#pragma once

// Closed-form material laws: water content, conductivity, diffusivity,
// surfactant scaling and reaction rate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "grw/errors.hpp"

namespace grw {

// ---------------------------------------------------------------------------
// Exponential model
// ---------------------------------------------------------------------------

struct ExpModelParams {
  double theta_res{0.06};
  double theta_sat{0.36};
  double k_sat{2.77e-6};
  double alpha{10.0};

  void validate() const {
    require(theta_res >= 0.0 && theta_res < theta_sat && theta_sat <= 1.0,
            "exponential model: need 0 <= theta_res < theta_sat <= 1");
    require(k_sat > 0.0, "exponential model: k_sat must be positive");
    require(alpha > 0.0, "exponential model: alpha must be positive");
  }
};

inline double theta_exp(double psi, const ExpModelParams& p) {
  if (psi >= 0.0) return p.theta_sat;
  return p.theta_res + (p.theta_sat - p.theta_res) * std::exp(p.alpha * psi);
}

inline double dtheta_exp(double psi, const ExpModelParams& p) {
  if (psi >= 0.0) return 0.0;
  return p.alpha * (p.theta_sat - p.theta_res) * std::exp(p.alpha * psi);
}

inline double k_exp(double theta, const ExpModelParams& p) {
  const double tol = 1e-12 * std::max(1.0, p.theta_sat);
  if (theta < p.theta_res - tol || theta > p.theta_sat + tol)
    throw DomainError("k_exp: water content outside [theta_res, theta_sat]");
  const double s = std::clamp((theta - p.theta_res) / (p.theta_sat - p.theta_res), 0.0, 1.0);
  return p.k_sat * s;
}

// K(psi) = k_exp(theta_exp(psi)), evaluated without the range round trip.
inline double k_exp_psi(double psi, const ExpModelParams& p) {
  if (psi >= 0.0) return p.k_sat;
  return p.k_sat * std::exp(p.alpha * psi);
}

// ---------------------------------------------------------------------------
// van Genuchten-Mualem model
// ---------------------------------------------------------------------------

struct VgmParams {
  double theta_res{0.1};
  double theta_sat{0.45};
  double k_sat{6e-4};
  double alpha{0.01};
  double n{1.5};

  double m() const { return 1.0 - 1.0 / n; }

  void validate() const {
    require(n > 1.0, "van Genuchten model: n must exceed 1");
    require(theta_res >= 0.0 && theta_res < theta_sat && theta_sat <= 1.0,
            "van Genuchten model: need 0 <= theta_res < theta_sat <= 1");
    require(k_sat > 0.0 && alpha > 0.0, "van Genuchten model: k_sat and alpha must be positive");
  }
};

// Effective saturation.
inline double saturation_vgm(double psi, const VgmParams& p) {
  if (psi >= 0.0) return 1.0;
  return std::pow(1.0 + std::pow(-p.alpha * psi, p.n), -p.m());
}

inline double theta_vgm(double psi, const VgmParams& p) {
  return p.theta_res + (p.theta_sat - p.theta_res) * saturation_vgm(psi, p);
}

inline double psi_vgm(double theta, const VgmParams& p) {
  if (!(theta > p.theta_res && theta < p.theta_sat))
    throw DomainError("psi_vgm: inverse unbounded outside (theta_res, theta_sat)");
  const double se = (theta - p.theta_res) / (p.theta_sat - p.theta_res);
  return -std::pow(std::pow(se, -1.0 / p.m()) - 1.0, 1.0 / p.n) / p.alpha;
}

inline double dtheta_vgm(double psi, const VgmParams& p) {
  if (psi >= 0.0) return 0.0;
  const double m = p.m();
  const double a = std::pow(-p.alpha * psi, p.n);
  const double da = p.n * p.alpha * std::pow(-p.alpha * psi, p.n - 1.0);
  return (p.theta_sat - p.theta_res) * m * std::pow(1.0 + a, -m - 1.0) * da;
}

// Conductivity as a function of effective saturation.
inline double k_vgm_of_se(double se, const VgmParams& p) {
  if (se <= 0.0) return 0.0;
  if (se >= 1.0) return p.k_sat;
  const double m = p.m();
  const double b = 1.0 - std::pow(1.0 - std::pow(se, 1.0 / m), m);
  return p.k_sat * std::sqrt(se) * b * b;
}

inline double k_vgm(double psi, const VgmParams& p) {
  if (psi >= 0.0) return p.k_sat;
  return k_vgm_of_se(saturation_vgm(psi, p), p);
}

// dK/dSe, closed form. Singular as Se -> 1 for m < 1.
inline double dk_dse_vgm(double se, const VgmParams& p) {
  if (se <= 0.0) return 0.0;
  if (se >= 1.0) return std::numeric_limits<double>::infinity();
  const double m = p.m();
  const double a = 1.0 - std::pow(se, 1.0 / m);
  const double b = 1.0 - std::pow(a, m);
  const double db = std::pow(a, m - 1.0) * std::pow(se, 1.0 / m - 1.0);
  return p.k_sat * (0.5 / std::sqrt(se) * b * b + std::sqrt(se) * 2.0 * b * db);
}

// ---------------------------------------------------------------------------
// Fujita diffusivity for the normalized-content equation
// ---------------------------------------------------------------------------

struct FujitaParams {
  double d0{2.75862};
  double v{0.85};

  void validate() const {
    require(d0 > 0.0, "Fujita model: d0 must be positive");
    require(v > 0.0 && v < 1.0, "Fujita model: v must lie in (0,1)");
  }
};

inline double fujita_diffusivity(double big_theta, const FujitaParams& p) {
  const double den = 1.0 - p.v * big_theta;
  if (den <= 0.0) throw DomainError("fujita_diffusivity: v*Theta >= 1");
  return p.d0 / (den * den);
}

// ---------------------------------------------------------------------------
// Surfactant coupling and reaction
// ---------------------------------------------------------------------------

struct SurfactantParams {
  double a_gamma{0.44};
  double b_gamma{0.0046};
};

inline double gamma_surfactant(double c, const SurfactantParams& p) {
  if (p.a_gamma <= 0.0) throw DomainError("gamma_surfactant: a must be positive");
  const double arg = c / p.a_gamma + 1.0;
  if (arg <= 0.0) throw DomainError("gamma_surfactant: c/a + 1 must be positive");
  const double den = 1.0 - p.b_gamma * std::log(arg);
  if (den <= 0.0) throw DomainError("gamma_surfactant: nonpositive denominator");
  return 1.0 / den;
}

inline double reaction_rate(double c, double rate_max = 1e-3) {
  if (c <= -1.0) throw DomainError("reaction_rate: c must exceed -1");
  return rate_max * c / (1.0 + c);
}

// ---------------------------------------------------------------------------
// Laws consumed by the solvers: theta(psi, c), conductivity(psi, c), dtheta(psi, c)
// ---------------------------------------------------------------------------

struct ExponentialLaw {
  ExpModelParams p;
  double theta(double psi, double = 0.0) const { return theta_exp(psi, p); }
  double conductivity(double psi, double = 0.0) const { return k_exp_psi(psi, p); }
  double dtheta(double psi, double = 0.0) const { return dtheta_exp(psi, p); }
};

struct VanGenuchtenLaw {
  VgmParams p;
  double theta(double psi, double = 0.0) const { return theta_vgm(psi, p); }
  double conductivity(double psi, double = 0.0) const { return k_vgm(psi, p); }
  double dtheta(double psi, double = 0.0) const { return dtheta_vgm(psi, p); }
};

// Smooth manufactured law: theta = 1/(1 - psi - c/10), K = psi^2.
struct ManufacturedLaw {
  double theta(double psi, double c = 0.0) const {
    const double den = 1.0 - psi - c / 10.0;
    if (den <= 0.0) throw DomainError("manufactured law: denominator must stay positive");
    return 1.0 / den;
  }
  double conductivity(double psi, double = 0.0) const { return psi * psi; }
  double dtheta(double psi, double c = 0.0) const {
    const double den = 1.0 - psi - c / 10.0;
    return 1.0 / (den * den);
  }
};

// Degenerate manufactured law with a saturated branch; K = 1.
struct DegenerateManufacturedLaw {
  static constexpr double kShift = 3.4333;
  static constexpr double kThetaSat = 0.3;
  double theta(double psi, double c = 0.0) const {
    if (psi >= 0.0) return kThetaSat;
    return 1.0 / (kShift - psi - c / 10.0);
  }
  double conductivity(double, double = 0.0) const { return 1.0; }
  double dtheta(double psi, double c = 0.0) const {
    if (psi >= 0.0) return 0.0;
    const double den = kShift - psi - c / 10.0;
    return 1.0 / (den * den);
  }
};

// Constant water content; used by the saturated steady-state mode.
struct SaturatedLaw {
  double theta_const{1.0};
  double k{1.0};
  double theta(double, double = 0.0) const { return theta_const; }
  double conductivity(double, double = 0.0) const { return k; }
  double dtheta(double, double = 0.0) const { return 0.0; }
};

// Evaluates a base law at gamma(c)*psi.
template <class Law>
struct SurfactantLaw {
  Law base;
  SurfactantParams s;
  double theta(double psi, double c) const { return base.theta(gamma_surfactant(c, s) * psi); }
  double conductivity(double psi, double c) const {
    return base.conductivity(gamma_surfactant(c, s) * psi);
  }
  double dtheta(double psi, double c) const {
    const double g = gamma_surfactant(c, s);
    return g * base.dtheta(g * psi);
  }
};

// sup |dtheta/dpsi| over a log-spaced grid of negative heads. Reporting aid only.
template <class DTheta>
double l_theta_diagnostic(DTheta&& dtheta, double psi_min = -1e4, double psi_max = -1e-8,
                          int points = 4000) {
  require(psi_min < psi_max && psi_max < 0.0, "l_theta_diagnostic: need psi_min < psi_max < 0");
  const double lo = std::log(-psi_max), hi = std::log(-psi_min);
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double psi = -std::exp(lo + (hi - lo) * i / (points - 1));
    best = std::max(best, std::abs(dtheta(psi)));
  }
  return best;
}

}  // namespace grw
