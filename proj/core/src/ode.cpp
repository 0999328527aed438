#include "phclab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace phc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

using Vec = std::vector<double>;

void axpy(Vec& out, const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> ks) {
  out = y;
  for (auto& [c, k] : ks)
    for (std::size_t i = 0; i < y.size(); ++i) out[i] += h * c * (*k)[i];
}

}  // namespace

std::vector<OdeNode> Dopri5::integrate_until(
    double t0, std::vector<double> y0, double t_max,
    const std::function<bool(const OdeNode&)>& stop) const {
  const std::size_t n = y0.size();
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);

  std::vector<OdeNode> out;
  double t = t0;
  Vec y = std::move(y0);
  rhs_(y, k1);
  out.push_back({t, y, k1});
  if (stop && stop(out.back())) return out;

  double h = opts_.initial_step;
  if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
  h = std::min(h, t_max - t0);

  std::size_t steps = 0;
  double prev_err = 1.0;
  while (t < t_max) {
    if (++steps > opts_.max_steps) fail(ErrorKind::BlowUp, "Dopri5: step budget exhausted");
    h = std::min(h, t_max - t);

    axpy(ytmp, y, h, {{a21, &k1}});
    rhs_(ytmp, k2);
    axpy(ytmp, y, h, {{a31, &k1}, {a32, &k2}});
    rhs_(ytmp, k3);
    axpy(ytmp, y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    rhs_(ytmp, k4);
    axpy(ytmp, y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    rhs_(ytmp, k5);
    axpy(ytmp, y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    rhs_(ytmp, k6);
    axpy(y5, y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    rhs_(y5, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      const double sc = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0 || h <= 1e-14 * std::max(1.0, std::abs(t))) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      out.push_back({t, y, k1});
      if (stop && stop(out.back())) return out;
      // PI controller (0.7/5, 0.4/5).
      const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.14) * std::pow(prev_err, 0.08);
      prev_err = std::max(err, 1e-10);
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
    if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
  }
  return out;
}

std::vector<OdeNode> Dopri5::integrate(double t0, std::vector<double> y0, double t1) const {
  return integrate_until(t0, std::move(y0), t1, nullptr);
}

DenseTrajectory::DenseTrajectory(std::vector<OdeNode> nodes,
                                 const std::function<std::vector<double>(const OdeNode&)>& second)
    : nodes_(std::move(nodes)) {
  d2_.reserve(nodes_.size());
  for (const auto& nd : nodes_) d2_.push_back(second ? second(nd) : std::vector<double>());
}

std::size_t DenseTrajectory::locate(double t) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                             [](double v, const OdeNode& n) { return v < n.t; });
  std::size_t i = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  if (i == 0) return 0;
  if (i >= nodes_.size()) return nodes_.size() - 2;
  return i - 1;
}

namespace {

// Quintic Hermite basis on [0,1] for (value, slope, curvature) data at both
// endpoints; evaluated via the Taylor-style representation.
struct Quintic {
  double c0, c1, c2, c3, c4, c5;
  Quintic(double y0, double d0, double s0, double y1, double d1, double s1, double h) {
    // y(x) = sum c_k x^k on x in [0,1]; slopes/curvatures scaled by h.
    const double D0 = d0 * h, S0 = s0 * h * h, D1 = d1 * h, S1 = s1 * h * h;
    c0 = y0;
    c1 = D0;
    c2 = 0.5 * S0;
    const double r0 = y1 - (c0 + c1 + c2);
    const double r1 = D1 - (c1 + 2 * c2);
    const double r2 = S1 - 2 * c2;
    // Solve for c3..c5 from the endpoint conditions at x=1.
    c3 = 10 * r0 - 4 * r1 + 0.5 * r2;
    c4 = -15 * r0 + 7 * r1 - r2;
    c5 = 6 * r0 - 3 * r1 + 0.5 * r2;
  }
  double value(double x) const { return c0 + x * (c1 + x * (c2 + x * (c3 + x * (c4 + x * c5)))); }
  double deriv(double x) const {
    return c1 + x * (2 * c2 + x * (3 * c3 + x * (4 * c4 + x * 5 * c5)));
  }
};

}  // namespace

double DenseTrajectory::value(double t, int k) const {
  const std::size_t i = locate(t);
  const OdeNode& a = nodes_[i];
  const OdeNode& b = nodes_[i + 1];
  const double h = b.t - a.t;
  const double x = std::clamp((t - a.t) / h, 0.0, 1.0);
  if (!d2_[i].empty()) {
    Quintic q(a.y[k], a.f[k], d2_[i][k], b.y[k], b.f[k], d2_[i + 1][k], h);
    return q.value(x);
  }
  // cubic Hermite fallback
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  return h00 * a.y[k] + h10 * h * a.f[k] + h01 * b.y[k] + h11 * h * b.f[k];
}

double DenseTrajectory::derivative(double t, int k) const {
  const std::size_t i = locate(t);
  const OdeNode& a = nodes_[i];
  const OdeNode& b = nodes_[i + 1];
  const double h = b.t - a.t;
  const double x = std::clamp((t - a.t) / h, 0.0, 1.0);
  if (!d2_[i].empty()) {
    Quintic q(a.y[k], a.f[k], d2_[i][k], b.y[k], b.f[k], d2_[i + 1][k], h);
    return q.deriv(x) / h;
  }
  const double g00 = 6 * x * (x - 1) / h, g10 = (1 - x) * (1 - 3 * x);
  const double g01 = -6 * x * (x - 1) / h, g11 = x * (3 * x - 2);
  return g00 * a.y[k] + g10 * a.f[k] + g01 * b.y[k] + g11 * b.f[k];
}

}  // namespace phc
