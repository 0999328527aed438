#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "phclab/cone.hpp"
#include "phclab/geometry.hpp"
#include "phclab/types.hpp"

namespace phc {

enum class Family { E13, E14, E15, E16a, E16b, E16c, E17, Custom };

std::string family_name(Family f);

/// One sample of a parametrized surface: the point and the exact partial
/// derivatives of the parametrization.
struct SurfaceSample {
  CartesianPoint4 p;
  TangentVector4 t1;
  TangentVector4 t2;
};

/// A parametrized surface patch over a rectangle in (s1, s2).  The first
/// parameter is periodic for every built-in family (a circle or angle
/// coordinate); samplers are pure and safe for concurrent use.
class Surface {
 public:
  virtual ~Surface() = default;
  virtual SurfaceSample eval(double s1, double s2) const = 0;

  Family family() const { return family_; }
  double s1_min() const { return s1_min_; }
  double s1_max() const { return s1_max_; }
  double s2_min() const { return s2_min_; }
  double s2_max() const { return s2_max_; }
  bool s1_periodic() const { return s1_periodic_; }
  double circle_length() const { return circle_length_; }

  /// True when sampled t values are unwrapped reals (dilated surfaces)
  /// rather than circle representatives; consumers must then not reduce
  /// t differences mod L.
  virtual bool t_unwrapped() const { return false; }

  /// Circle-aware t difference for points of this surface.
  double t_diff(double t, double t_ref) const {
    return t_unwrapped() ? t - t_ref
                         : CartesianPoint4::centered_mod(t - t_ref, circle_length_);
  }

  /// +1/-1 such that orientation() * omega(T1, T2) >= 0; fixed per surface
  /// (pseudo-holomorphic surfaces carry the omega-orientation).
  double orientation() const { return orientation_; }

 protected:
  Surface(Family f, double s1_min, double s1_max, double s2_min, double s2_max, bool s1_periodic,
          double circle_length)
      : family_(f),
        s1_min_(s1_min),
        s1_max_(s1_max),
        s2_min_(s2_min),
        s2_max_(s2_max),
        s1_periodic_(s1_periodic),
        circle_length_(circle_length) {}
  void init_orientation();

  Family family_;
  double s1_min_, s1_max_, s2_min_, s2_max_;
  bool s1_periodic_;
  double circle_length_;
  double orientation_ = 1.0;
};

using SurfacePtr = std::shared_ptr<const Surface>;

/// S^1 x (ray at angle nu in the z = 0 plane); parameters (t, s).
SurfacePtr make_e13(double nu_angle, double s_min = 1e-3,
                    double circle_length = kDefaultCircleLength);

/// S^1 x (z-axis ray, sign z > 0 or < 0); parameters (t, s).
SurfacePtr make_e14(int sign, double s_min = 1e-3, double circle_length = kDefaultCircleLength);

/// The cone Sigma_{+/-} built from a rational-period oscillator solution;
/// parameters (tau, s) with tau in [0, 2 pi winding], s in [s_min, s_max]:
///   t = t0 +/- s (3/2) u'(tau),  z = +/- s u(tau),
///   rho = s sqrt(c / u(tau)),    phi = tau.
SurfacePtr make_e15(const ConeSolution& cone, int sign, double t0, double s_min = 1e-3,
                    double s_max = 1.0, double circle_length = kDefaultCircleLength);

enum class E16Variant { PhiH, TF, TFDisk };

/// The level-set families
///   {phi = cst, h = cst2}                  (PhiH; parameters (t, rho))
///   {t = cst, f = cst2 > 0}                (TF; parameters (phi, z))
///   {t = cst, f = cst2 <= 0, sign z > 0}   (TFDisk; parameters (phi, rho))
SurfacePtr make_e16(E16Variant variant, double cst, double cst2, int sign = +1,
                    double circle_length = kDefaultCircleLength);

/// The multi-sheet spiral family: parameters (psi, s), psi in [0, 2 pi),
///   ( q psi L / 2 pi,  s cos(p psi + alpha),  s sin(p psi + alpha),  z(s) )
/// with (a + 2 p z) s z' + 2 a z = p s^2, a = q L / (2 pi), which is the
/// pseudo-holomorphy condition for this ansatz; z = (p / 4a) s^2 + O(s^4).
SurfacePtr make_e17(int q, int p, double alpha, double s_min = 1e-3,
                    double circle_length = kDefaultCircleLength);

/// Arbitrary sampler with the same contract (used for negative controls).
SurfacePtr make_custom(std::function<SurfaceSample(double, double)> sampler, double s1_min,
                       double s1_max, double s2_min, double s2_max, bool s1_periodic,
                       double circle_length = kDefaultCircleLength);

struct ResidualReport {
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double worst_s1 = 0.0;
  double worst_s2 = 0.0;
  std::size_t samples = 0;
};

/// Pointwise pseudo-holomorphicity defect on an n1 x n2 tensor grid:
///   || J T1 - Proj_span(T1,T2) (J T1) || / || J T1 ||.
/// Zero iff the tangent plane is J-invariant.  Throws DegenerateFrame if the
/// frame degenerates, SingularPoint if a sample touches Z.
ResidualReport holomorphy_residual(const Surface& surface, int n1 = 64, int n2 = 64);

/// Defect of T1, T2 against centered finite differences of the sampler
/// (frame consistency; second order in the probe step).
ResidualReport frame_consistency(const Surface& surface, int n1 = 16, int n2 = 16,
                                 double probe = 1e-5);

/// Residual of tangency of the radial cone field t d/dt + rho d/drho + z d/dz
/// (centered at (t0, 0)) to the sampled tangent planes; zero on dilation
/// invariant surfaces.
ResidualReport cone_field_residual(const Surface& surface, double t0 = 0.0, int n1 = 64,
                                   int n2 = 64);

}  // namespace phc
