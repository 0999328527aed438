#pragma once

#include <vector>

#include "phclab/surfaces.hpp"

namespace phc {

enum class FormTag { Omega, DphiDh, DtDf, Area };

/// Integration regions.  Ball4 is the metric ball of radius r about the
/// circle point (t0, 0) (t measured along the circle); Tube is
/// S^1 x {rho^2 + z^2 <= r^2}; OmegaRegion is the slab
/// {|h| <= s^3, rho <= sqrt(delta), |z| <= delta} used by the mu profile.
struct Region {
  enum class Kind { All, Ball4, Shell4, Tube, OmegaRegion } kind = Kind::All;
  double t0 = 0.0;
  double radius = 1.0;
  double radius_lo = 0.0;  // Shell4 inner radius
  double s = 0.0;
  double delta = 0.125;

  static Region all();
  static Region ball4(double t0, double r);
  static Region shell4(double t0, double r_lo, double r_hi);
  static Region tube(double r);
  static Region omega_region(double s, double delta = 0.125);

  /// Negative inside, positive outside.  `t_unwrapped` suppresses the mod-L
  /// reduction of t - t0 (dilated surfaces).
  double level(const CartesianPoint4& p, double circle_length, bool t_unwrapped = false) const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

struct IntegrateOptions {
  int columns = 1024;        // midpoint columns in the periodic parameter
  int scan = 96;             // boundary scan points per column
  bool with_orientation = true;
  double smooth_cutoff_s = 0.0;  // > 0: multiply integrand by chi(r4 / s)
  double cutoff_t0 = 0.0;
};

/// Pull a 2-form back to the parameter rectangle and integrate over the part
/// of the surface inside the region.  Column-wise clipping: the region
/// boundary is located along each s2 line by scanning + bisection, then each
/// inside interval is integrated with composite Gauss-Legendre.  The error
/// estimate compares against a half-resolution pass.
IntegralResult integrate_form(const Surface& surface, FormTag form, const Region& region,
                              IntegrateOptions opts = {});

/// The cubic smoothstep bump: 1 on [0,1], 0 on [2, inf), C^1 monotone between.
double smooth_bump(double x);

struct DeltaC {
  double delta = 0.0;
  double dtdf_part = 0.0;
  double dphidh_part = 0.0;
};

/// Energy constant of the cone: integral of omega over Sigma_+ cap B_1 equals
/// delta_c, split as
///   dphidh_part = 2 pi winding c            (Stokes, h = c s^3 on the cone)
///   dtdf_part   = (1/6) int_0^{2 pi a} u^{-1} (2u^2 - c/u)^2 dtau.
/// The lower bounds (144 sqrt3)^{-1} (1 - 12 sqrt3 c)^2 (c < sqrt3/36) and
/// (576 sqrt3)^{-1} (c < 1/(24 sqrt3)) apply to dtdf_part.
DeltaC delta_c(const ConeSolution& cone);

struct EnergyReport {
  std::vector<double> s;
  std::vector<double> sigma;
  std::vector<double> scaled;  // s^{-3} sigma(s)
  std::vector<double> error;
  bool monotone = false;       // scaled non-decreasing within error bars
  double zeta_sigma = 0.0;     // fitted sup sigma / s^3
  double zeta_area = 0.0;      // fitted sup area / s^2 (sharp cutoff only)
};

enum class Cutoff { Sharp, Smooth };

/// Local energy sigma(s) = int_C chi(r/s) omega about the circle point
/// (t0, 0); sharp: ball indicator, smooth: cubic smoothstep bump.
EnergyReport sigma_profile(const Surface& surface, double t0, const std::vector<double>& s_grid,
                           Cutoff cutoff = Cutoff::Sharp, IntegrateOptions opts = {});

struct MuReport {
  std::vector<double> s;
  std::vector<double> mu;
  std::vector<double> scaled;  // s^{-3} mu(s)
  std::vector<double> error;
  double sup_scaled = 0.0;
};

/// mu(s) = int d(phi)^d(h) over C cap (S^1 x Omega(s)), delta in [1/16, 1/8].
MuReport mu_profile(const Surface& surface, const std::vector<double>& s_grid,
                    double delta = 0.125, IntegrateOptions opts = {});

}  // namespace phc
