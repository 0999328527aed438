#pragma once

#include <vector>

#include "phclab/surfaces.hpp"

namespace phc {

/// Rescaling (t, x, y, z) -> ((t - t0)/s, x/s, y/s, z/s) of a base surface.
/// The dilated t coordinate is the unwrapped real representative around t0,
/// so dilated samples live in R^4; meaningful for scale * R < L/2.
SurfacePtr dilate(SurfacePtr base, double scale, double t0);

/// Compact region for the geometric-convergence distance: the annulus
/// lo <= rho^2 + z^2 <= hi inside the 4-ball of radius R (avoids Z).
struct AnnulusRegion {
  double lo = 0.25;
  double hi = 1.0;
  double ball = 2.0;
  bool contains(const Eigen::Vector4d& p) const {
    const double a = p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
    return a >= lo && a <= hi && p.squaredNorm() <= ball * ball;
  }
};

/// Dense point cloud of a surface (n1 x n2 parameter grid).
std::vector<Eigen::Vector4d> sample_cloud(const Surface& surface, int n1 = 128, int n2 = 128);

/// Two-sided sup distance of Definition-3.1 type:
///   sup_{x in A cap K} dist(x, B)  +  sup_{y in B cap K} dist(y, A),
/// evaluated on point clouds (distances to the full clouds).  Throws
/// EmptyIntersection when either cloud misses K.
double geometric_distance(const std::vector<Eigen::Vector4d>& cloud_a,
                          const std::vector<Eigen::Vector4d>& cloud_b, const AnnulusRegion& K);

double geometric_distance(const Surface& a, const Surface& b, const AnnulusRegion& K = {},
                          int n1 = 128, int n2 = 128);

/// Test surfaces for the intersection-number characterization of the limit
/// data: the pseudo-holomorphic cylinder {t = t0, f = level > 0, |z| < delta},
/// the disks {t = t0, f = level <= 0, rho < delta, sign z > 0}, and the
/// slices {phi = phi0, h = level}.
struct TestSurfaceSpec {
  enum class Kind { Cylinder, Disk, HSlice } kind = Kind::Cylinder;
  double t0 = 0.0;      // Cylinder/Disk
  double phi0 = 0.0;    // HSlice
  double level = 0.01;  // f level or h level
  double delta = 0.125;
  int sign = +1;  // Disk: which z half
  static TestSurfaceSpec cylinder(double t0, double f_level, double delta);
  static TestSurfaceSpec disk(double t0, double f_level, double delta, int sign);
  static TestSurfaceSpec h_slice(double phi0, double h_level);
};

struct IntersectionRoot {
  double s1 = 0.0;
  double s2 = 0.0;
  CartesianPoint4 p;
  int sign = +1;
};

struct IntersectionCount {
  int count = 0;
  std::vector<IntersectionRoot> roots;
  bool refine_stable = true;  // unchanged under seed-grid refinement
};

/// Number of parameter-space solutions of surface(s1, s2) in `test`, inside
/// the 4-ball of radius `window` about (t0_window, 0).  Grid seeding + Newton
/// polishing (exact Jacobians from the tangent frames) + dedup.  Throws
/// NonTransverse if a root's Jacobian falls below 1e-8.
IntersectionCount count_intersections(const Surface& surface, const TestSurfaceSpec& test,
                                      double window = 1.0, double t0_window = 0.0,
                                      int seeds = 64);

/// Signed count against the linking 2-sphere {t = t_slice, rho^2 + z^2 =
/// delta^2}; the sphere is oriented by the outward normal of its t-slice, and
/// surface crossings carry the omega-orientation.  Equals p - (q+ + q-).
int linking_sphere_count(const Surface& surface, double t_slice, double delta, int seeds = 64);

/// The dilation-limit data at a circle point: multiplicities of planes (p),
/// axis half-lines (q+/-), and cones (n+/-, with their c constants).
struct LimitData {
  int p = 0;
  int q_plus = 0;
  int q_minus = 0;
  int n_plus = 0;
  int n_minus = 0;
  std::vector<double> cone_constants;  // recovered c per cone component (+ then -)
  std::vector<double> s_used;
  std::vector<double> dk_sequence;  // d_K between successive dilations
  int linking_count = 0;
  bool scale_stable = true;  // p - q invariant across the scales
};

struct ClassifyOptions {
  std::vector<double> scales = {0.3, 0.1, 0.03};
  double f_level = 0.01;  // rescaled test level
  int seeds = 96;
  bool with_dk = true;
};

LimitData classify_limit(SurfacePtr surface, double t0, ClassifyOptions opts = {});

}  // namespace phc
