#pragma once

// Manufactured solutions and their analytically derived source terms.
// Coordinates: x horizontal, z vertical (up); 1D problems use z only.

#include <utility>

namespace grw::mms {

// psi = -t x(x-1) z(z-1) - 1, theta = 1/(1 - psi), K = psi^2.
struct Flow2D {
  static double psi(double x, double z, double t) { return -t * x * (x - 1.0) * z * (z - 1.0) - 1.0; }

  static double source(double x, double z, double t) {
    const double xx = x * (x - 1.0), zz = z * (z - 1.0);
    const double p = -t * xx * zz - 1.0;
    const double pt = -xx * zz;
    const double px = -t * (2.0 * x - 1.0) * zz, pz = -t * xx * (2.0 * z - 1.0);
    const double pxx = -2.0 * t * zz, pzz = -2.0 * t * xx;
    const double den = 1.0 - p;
    const double theta_t = pt / (den * den);
    const double div = 2.0 * p * (px * px + pz * pz) + p * p * (pxx + pzz) + 2.0 * p * pz;
    return theta_t - div;
  }

  static std::pair<double, double> flux(double x, double z, double t) {
    const double xx = x * (x - 1.0), zz = z * (z - 1.0);
    const double p = -t * xx * zz - 1.0;
    const double px = -t * (2.0 * x - 1.0) * zz, pz = -t * xx * (2.0 * z - 1.0);
    const double k = p * p;
    return {-k * px, -k * (pz + 1.0)};
  }
};

// Adds c = t x(x-1) z(z-1) + 1 with theta = 1/(1 - psi - c/10), D, R = 0.
struct Coupled2D {
  double d{1.0};

  static double psi(double x, double z, double t) { return Flow2D::psi(x, z, t); }
  static double c(double x, double z, double t) { return t * x * (x - 1.0) * z * (z - 1.0) + 1.0; }

  struct Terms {
    double fp, fc;
  };

  Terms sources(double x, double z, double t) const {
    const double xx = x * (x - 1.0), zz = z * (z - 1.0);
    const double p = -t * xx * zz - 1.0, cc = t * xx * zz + 1.0;
    const double pt = -xx * zz, ct = xx * zz;
    const double px = -t * (2.0 * x - 1.0) * zz, pz = -t * xx * (2.0 * z - 1.0);
    const double pxx = -2.0 * t * zz, pzz = -2.0 * t * xx;
    const double cx = -px, cz = -pz, cxx = -pxx, czz = -pzz;
    const double den = 1.0 - p - cc / 10.0;
    const double th = 1.0 / den;
    const double th_t = (pt + ct / 10.0) / (den * den);
    const double k = p * p;
    const double div = 2.0 * p * (px * px + pz * pz) + k * (pxx + pzz) + 2.0 * p * pz;
    const double qx = -k * px, qz = -k * (pz + 1.0);
    const double divq = -div;
    return {th_t - div, th_t * cc + th * ct - d * (cxx + czz) + cc * divq + qx * cx + qz * cz};
  }
  double fp(double x, double z, double t) const { return sources(x, z, t).fp; }
  double fc(double x, double z, double t) const { return sources(x, z, t).fc; }
  static std::pair<double, double> flux(double x, double z, double t) { return Flow2D::flux(x, z, t); }
};

// 1D coupled: psi = -t z(z-1) - 1, c = t z(z-1) + 1, theta = 1/(1 - psi - c/10), K = psi^2.
struct Coupled1D {
  double d{1.0};

  static double psi(double z, double t) { return -t * z * (z - 1.0) - 1.0; }
  static double c(double z, double t) { return t * z * (z - 1.0) + 1.0; }

  struct Terms {
    double fp, fc;
  };

  Terms sources(double z, double t) const {
    const double zz = z * (z - 1.0);
    const double p = -t * zz - 1.0, cc = t * zz + 1.0;
    const double pt = -zz, ct = zz;
    const double pz = -t * (2.0 * z - 1.0), pzz = -2.0 * t;
    const double cz = -pz, czz = -pzz;
    const double den = 1.0 - p - cc / 10.0;
    const double th = 1.0 / den;
    const double th_t = (pt + ct / 10.0) / (den * den);
    const double k = p * p, kz = 2.0 * p * pz;
    const double div = kz * (pz + 1.0) + k * pzz;
    const double q = -k * (pz + 1.0);
    return {th_t - div, th_t * cc + th * ct - d * czz - cc * div + q * cz};
  }
  static double flux(double z, double t) {
    const double p = psi(z, t), pz = -t * (2.0 * z - 1.0);
    return -p * p * (pz + 1.0);
  }
};

// Degenerate 1D: psi = -t z(1-z) + z/4, theta = 1/(3.4333 - psi - c/10) for psi < 0
// and 0.3 otherwise, K = 1; c as in Coupled1D.
struct Degenerate1D {
  double d{1.0};
  static constexpr double kShift = 3.4333;

  static double psi(double z, double t) { return -t * z * (1.0 - z) + z / 4.0; }
  static double c(double z, double t) { return t * z * (z - 1.0) + 1.0; }

  struct Terms {
    double fp, fc;
  };

  Terms sources(double z, double t) const {
    const double p = psi(z, t), cc = c(z, t);
    const double pt = -z * (1.0 - z), ct = z * (z - 1.0);
    const double pz = -t * (1.0 - 2.0 * z) + 0.25, pzz = 2.0 * t;
    const double cz = t * (2.0 * z - 1.0), czz = 2.0 * t;
    double th, th_t;
    if (p < 0.0) {
      const double den = kShift - p - cc / 10.0;
      th = 1.0 / den;
      th_t = (pt + ct / 10.0) / (den * den);
    } else {
      th = 0.3;
      th_t = 0.0;
    }
    const double div = pzz;  // K = 1
    const double q = -(pz + 1.0);
    return {th_t - div, th_t * cc + th * ct - d * czz - cc * div + q * cz};
  }
  static double flux(double z, double t) {
    const double pz = -t * (1.0 - 2.0 * z) + 0.25;
    return -(pz + 1.0);
  }
};

}  // namespace grw::mms
