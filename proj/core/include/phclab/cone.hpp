#pragma once

#include <memory>
#include <vector>

#include "phclab/ode.hpp"
#include "phclab/types.hpp"

namespace phc {

/// Upper end of the admissible parameter range: c in (0, 2/3^(3/2)].
/// At c_max the oscillator degenerates to the constant solution
/// u = 1/sqrt(3).
inline double cone_c_max() { return 2.0 / std::pow(3.0, 1.5); }

/// Parameter of the cone-generating oscillator
///   u'' + (4/9) u - (2/9) c u^{-2} = 0
/// on the energy level (9/4) u'^2 + u^2 + c/u = 1.
struct ConeParam {
  double c;
  explicit ConeParam(double c_) : c(c_) {
    if (!(c > 0.0) || c > cone_c_max() * (1.0 + 1e-12))
      fail(ErrorKind::OutOfRange, "ConeParam: c must lie in (0, 2/3^{3/2}]");
  }
};

/// Roots of x^3 - x + c: two positive (the turning points of u) and one
/// negative.
struct CubicRoots {
  double u_min;
  double u_max;
  double u_neg;
};

CubicRoots cubic_roots(const ConeParam& c);

/// Conserved energy (9/4) p^2 + u^2 + c/u.
double cone_energy(double c, double u, double p);

/// A solved stretch of the oscillator: dense (u, u') samples with quintic
/// Hermite evaluation between nodes.
class Trajectory {
 public:
  Trajectory(double c, DenseTrajectory dense);

  double c() const { return c_; }
  double tau_front() const { return dense_.t_front(); }
  double tau_back() const { return dense_.t_back(); }
  double u(double tau) const { return dense_.value(tau, 0); }
  double up(double tau) const { return dense_.value(tau, 1); }
  double upp(double tau) const;  // from the equation of motion, not differencing

  const std::vector<OdeNode>& nodes() const { return dense_.nodes(); }
  /// max |E(tau) - E(0)| over the stored nodes.
  double energy_drift() const;

 private:
  double c_;
  DenseTrajectory dense_;
};

/// Integrate from (u0, p0); BlowUp if u reaches 0.
Trajectory integrate_cone(double c, double u0, double p0, double tau_span, OdeOptions opts = {});

enum class PeriodMethod { Quadrature, Ode, Series };

struct PeriodResult {
  double value = 0.0;  // period (or half period for half_period_quad)
  PeriodMethod method = PeriodMethod::Quadrature;
  double error_estimate = 0.0;
  bool endpoint_degenerate = false;  // analytic limit returned at c = c_max
};

/// Half period (3/2) int_{u_min}^{u_max} (1 - x^2 - c/x)^{-1/2} dx via the
/// y = (x - lambda)/delta substitution and Gauss-Chebyshev quadrature.
/// At c = c_max returns the analytic limit sqrt(3) pi / 2 with the
/// endpoint flag set.
PeriodResult half_period_quad(const ConeParam& c, double tol = 1e-12);

/// Full period from the ODE return map to the section u' = 0, u = u_min.
PeriodResult period_from_ode(const ConeParam& c, OdeOptions opts = {});

/// Small-alpha expansion of the full period at c = c_max - alpha:
///   T = sqrt(3) pi (1 - alpha / (4 sqrt(3))),    error O(alpha^{3/2}).
PeriodResult period_series(double alpha);

/// Scan table of T(c) used for bracketing rational-period targets.
struct PeriodScan {
  std::vector<double> c;
  std::vector<double> period;
  double t_min = 0.0;
  double t_max = 0.0;
};
const PeriodScan& period_scan_table();

/// Solve T(c) = 2 pi a / b (gcd(a,b) = 1) by bracketing in the scan table
/// and bisection on the quadrature period; |T(c) - 2 pi a/b| < 1e-9.
ConeParam find_c_for_period(int a, int b);

/// A closed cone datum: rational period T = 2 pi a / b.  Over the closure
/// domain tau in [0, 2 pi a] the angle phi = tau makes `a` full turns while
/// u runs through `b` periods; `winding` hence multiplies 2 pi c in the
/// d(phi)^d(h) energy.
class ConeSolution {
 public:
  ConeSolution(int a, int b);                       // c located from the period
  ConeSolution(const ConeParam& c, int a, int b);   // c supplied, period verified

  double c() const { return c_; }
  double period() const { return period_; }
  int winding() const { return winding_; }        // phi turns over the closure
  int u_periods() const { return u_periods_; }    // oscillator periods over the closure
  double closure_span() const { return 2.0 * M_PI * winding_; }
  const CubicRoots& roots() const { return roots_; }

  /// u, u', u'' at any tau (periodic extension of the stored period).
  double u(double tau) const { return traj_->u(wrap(tau)); }
  double up(double tau) const { return traj_->up(wrap(tau)); }
  double upp(double tau) const { return traj_->upp(wrap(tau)); }

  /// |u(tau + span) - u(tau)| + |u'(tau + span) - u'(tau)| phase defect of the
  /// closure; NonPeriodic is thrown at construction when above tol.
  double closure_defect() const { return closure_defect_; }

 private:
  void build();
  double wrap(double tau) const;

  double c_;
  int winding_;
  int u_periods_;
  double period_;
  double closure_defect_ = 0.0;
  CubicRoots roots_;
  std::shared_ptr<Trajectory> traj_;  // one period from (u_min, 0)
};

}  // namespace phc
