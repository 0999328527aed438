#include "phclab/cone.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "phclab/quadrature.hpp"

namespace phc {

namespace {

double cubic(double x, double c) { return x * x * x - x + c; }
double cubic_deriv(double x) { return 3.0 * x * x - 1.0; }

double polish_root(double x, double c) {
  for (int it = 0; it < 4; ++it) {
    const double fp = cubic_deriv(x);
    if (std::abs(fp) < 1e-8) break;  // double root; trig value is already best
    x -= cubic(x, c) / fp;
  }
  return x;
}

double accel(double u, double c) { return -(4.0 / 9.0) * u + (2.0 / 9.0) * c / (u * u); }
double accel_deriv(double u, double c) { return -(4.0 / 9.0) - (4.0 / 9.0) * c / (u * u * u); }

}  // namespace

CubicRoots cubic_roots(const ConeParam& cp) {
  const double c = cp.c;
  // Trigonometric solution of the depressed cubic x^3 - x + c.
  const double arg = std::clamp(-1.5 * std::sqrt(3.0) * c, -1.0, 1.0);
  const double A = std::acos(arg) / 3.0;
  const double s = 2.0 / std::sqrt(3.0);
  CubicRoots r;
  r.u_max = polish_root(s * std::cos(A), c);
  r.u_min = polish_root(s * std::cos(A - 2.0 * M_PI / 3.0), c);
  r.u_neg = polish_root(s * std::cos(A - 4.0 * M_PI / 3.0), c);
  if (r.u_min > r.u_max) std::swap(r.u_min, r.u_max);
  return r;
}

double cone_energy(double c, double u, double p) { return 2.25 * p * p + u * u + c / u; }

Trajectory::Trajectory(double c, DenseTrajectory dense) : c_(c), dense_(std::move(dense)) {}

double Trajectory::upp(double tau) const { return accel(u(tau), c_); }

double Trajectory::energy_drift() const {
  const auto& nds = dense_.nodes();
  const double e0 = cone_energy(c_, nds.front().y[0], nds.front().y[1]);
  double drift = 0.0;
  for (const auto& n : nds) drift = std::max(drift, std::abs(cone_energy(c_, n.y[0], n.y[1]) - e0));
  return drift;
}

Trajectory integrate_cone(double c, double u0, double p0, double tau_span, OdeOptions opts) {
  if (!(u0 > 0.0)) fail(ErrorKind::BlowUp, "integrate_cone: u0 must be positive");
  auto rhs = [c](const std::vector<double>& y, std::vector<double>& d) {
    if (y[0] < 1e-12) fail(ErrorKind::BlowUp, "integrate_cone: u reached 0");
    d[0] = y[1];
    d[1] = accel(y[0], c);
  };
  Dopri5 solver(rhs, opts);
  auto nodes = solver.integrate(0.0, {u0, p0}, tau_span);
  auto second = [c](const OdeNode& n) {
    return std::vector<double>{accel(n.y[0], c), accel_deriv(n.y[0], c) * n.y[1]};
  };
  return Trajectory(c, DenseTrajectory(std::move(nodes), second));
}

PeriodResult half_period_quad(const ConeParam& cp, double tol) {
  PeriodResult res;
  res.method = PeriodMethod::Quadrature;
  const double c = cp.c;
  if (c >= cone_c_max() * (1.0 - 1e-14)) {
    res.value = std::sqrt(3.0) * M_PI / 2.0;
    res.endpoint_degenerate = true;
    res.error_estimate = 0.0;
    return res;
  }
  const CubicRoots r = cubic_roots(cp);
  const double lam = 0.5 * (r.u_max + r.u_min);
  const double del = 0.5 * (r.u_max - r.u_min);
  // Half period = (3/2) int (1-y^2)^{-1/2} sqrt((lam+del y)/(lam+del y-u_neg)) dy.
  auto f = [&](double y) {
    const double x = lam + del * y;
    return 1.5 * std::sqrt(x / (x - r.u_neg));
  };
  res.value = chebyshev_adaptive(f, tol, &res.error_estimate);
  return res;
}

PeriodResult period_from_ode(const ConeParam& cp, OdeOptions opts) {
  const double c = cp.c;
  if (c >= cone_c_max() * (1.0 - 1e-14))
    fail(ErrorKind::OutOfRange, "period_from_ode: constant solution at the endpoint");
  const CubicRoots r = cubic_roots(cp);
  const double T_guess = 2.0 * half_period_quad(cp).value;

  // Start at the lower turning point (exactly on the unit energy level) and
  // integrate past one full period; the return to the section p = 0 with
  // p' > 0 happens once, at tau = T.
  Trajectory traj = integrate_cone(c, r.u_min, 0.0, 1.25 * T_guess, opts);

  const auto& nodes = traj.nodes();
  double t_lo = 0.0, t_hi = 0.0;
  int crossings = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i - 1].y[1] < 0.0 && nodes[i].y[1] >= 0.0) {
      ++crossings;
      t_lo = nodes[i - 1].t;
      t_hi = nodes[i].t;
      break;
    }
  }
  if (crossings == 0) fail(ErrorKind::BlowUp, "period_from_ode: no return to the section");

  // Bisection on the interpolated p(tau).
  for (int it = 0; it < 200 && (t_hi - t_lo) > 1e-15 * t_hi; ++it) {
    const double tm = 0.5 * (t_lo + t_hi);
    (traj.up(tm) < 0.0 ? t_lo : t_hi) = tm;
  }
  PeriodResult res;
  res.method = PeriodMethod::Ode;
  res.value = 0.5 * (t_lo + t_hi);
  res.error_estimate = 10.0 * opts.abs_tol * res.value;
  return res;
}

PeriodResult period_series(double alpha) {
  if (alpha < 0.0) fail(ErrorKind::OutOfRange, "period_series: alpha must be >= 0");
  PeriodResult res;
  res.method = PeriodMethod::Series;
  res.value = std::sqrt(3.0) * M_PI * (1.0 - alpha / (4.0 * std::sqrt(3.0)));
  res.error_estimate = std::pow(alpha, 1.5);
  return res;
}

const PeriodScan& period_scan_table() {
  static PeriodScan table;
  static std::once_flag flag;
  std::call_once(flag, [] {
    const int n = 200;
    const double c_lo = 1e-4;
    const double c_hi = cone_c_max() - 1e-6;
    table.c.resize(n);
    table.period.resize(n);
    for (int i = 0; i < n; ++i) {
      const double c = c_lo + (c_hi - c_lo) * i / (n - 1);
      table.c[i] = c;
      table.period[i] = 2.0 * half_period_quad(ConeParam(c)).value;
    }
    table.t_min = *std::min_element(table.period.begin(), table.period.end());
    table.t_max = *std::max_element(table.period.begin(), table.period.end());
  });
  return table;
}

ConeParam find_c_for_period(int a, int b) {
  if (a <= 0 || b <= 0) fail(ErrorKind::BadArgument, "find_c_for_period: a, b must be positive");
  if (std::gcd(a, b) != 1) fail(ErrorKind::BadArgument, "find_c_for_period: gcd(a, b) must be 1");
  const double target = 2.0 * M_PI * a / b;
  const PeriodScan& scan = period_scan_table();

  std::size_t ib = scan.c.size();
  for (std::size_t i = 0; i + 1 < scan.c.size(); ++i) {
    if ((scan.period[i] - target) * (scan.period[i + 1] - target) <= 0.0) {
      ib = i;
      break;
    }
  }
  if (ib == scan.c.size())
    fail(ErrorKind::TargetOutOfRange,
         "find_c_for_period: target " + std::to_string(target) + " outside scanned range [" +
             std::to_string(scan.t_min) + ", " + std::to_string(scan.t_max) + "]");

  double c_lo = scan.c[ib], c_hi = scan.c[ib + 1];
  double f_lo = scan.period[ib] - target;
  double c_mid = 0.5 * (c_lo + c_hi);
  for (int it = 0; it < 200; ++it) {
    c_mid = 0.5 * (c_lo + c_hi);
    const double f_mid = 2.0 * half_period_quad(ConeParam(c_mid)).value - target;
    if (std::abs(f_mid) < 1e-10 || (c_hi - c_lo) < 1e-16) break;
    if (f_lo * f_mid <= 0.0) {
      c_hi = c_mid;
    } else {
      c_lo = c_mid;
      f_lo = f_mid;
    }
  }
  return ConeParam(c_mid);
}

ConeSolution::ConeSolution(int a, int b)
    : c_(find_c_for_period(a, b).c), winding_(a), u_periods_(b) {
  build();
}

ConeSolution::ConeSolution(const ConeParam& c, int a, int b)
    : c_(c.c), winding_(a), u_periods_(b) {
  if (a <= 0 || b <= 0 || std::gcd(a, b) != 1)
    fail(ErrorKind::BadArgument, "ConeSolution: (a, b) must be positive and coprime");
  build();
}

void ConeSolution::build() {
  roots_ = cubic_roots(ConeParam(c_));
  period_ = period_from_ode(ConeParam(c_)).value;

  OdeOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-12;
  opts.max_step = period_ / 8192.0;
  opts.initial_step = opts.max_step;
  traj_ = std::make_shared<Trajectory>(integrate_cone(c_, roots_.u_min, 0.0, period_, opts));

  // Phase defect of the closure: after 2 pi a the oscillator must have
  // completed exactly b periods.
  const double span = closure_span();
  const double phase = span - u_periods_ * period_;
  const double up_max = (2.0 / 3.0);  // |u'| <= 2/3 on the unit level
  closure_defect_ = std::abs(phase) * up_max;
  if (closure_defect_ > 1e-6)
    fail(ErrorKind::NonPeriodic,
         "ConeSolution: trajectory is not 2*pi*winding periodic (defect " +
             std::to_string(closure_defect_) + ")");
}

double ConeSolution::wrap(double tau) const {
  double w = std::fmod(tau, period_);
  if (w < 0.0) w += period_;
  return w;
}

}  // namespace phc
