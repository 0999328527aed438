#include "phclab/surfaces.hpp"

#include <cmath>
#include <numeric>

#include "phclab/parallel.hpp"

namespace phc {

std::string family_name(Family f) {
  switch (f) {
    case Family::E13: return "e13";
    case Family::E14: return "e14";
    case Family::E15: return "e15";
    case Family::E16a: return "e16a";
    case Family::E16b: return "e16b";
    case Family::E16c: return "e16c";
    case Family::E17: return "e17";
    case Family::Custom: return "custom";
  }
  return "?";
}

void Surface::init_orientation() {
  const SurfaceSample s =
      eval(0.5 * (s1_min_ + s1_max_), s2_min_ + 0.75 * (s2_max_ - s2_min_));
  const double w = omega_at(s.p).apply(s.t1, s.t2);
  orientation_ = w < 0.0 ? -1.0 : 1.0;
}

namespace {

class E13Surface final : public Surface {
 public:
  E13Surface(double nu, double s_min, double L)
      : Surface(Family::E13, 0.0, L, s_min, 1.0, true, L), cos_(std::cos(nu)), sin_(std::sin(nu)) {
    init_orientation();
  }
  SurfaceSample eval(double t, double s) const override {
    SurfaceSample out;
    out.p = {t, s * cos_, s * sin_, 0.0};
    out.t1 = {1.0, 0.0, 0.0, 0.0};
    out.t2 = {0.0, cos_, sin_, 0.0};
    return out;
  }

 private:
  double cos_, sin_;
};

class E14Surface final : public Surface {
 public:
  E14Surface(int sign, double s_min, double L)
      : Surface(Family::E14, 0.0, L, s_min, 1.0, true, L), sign_(sign >= 0 ? 1.0 : -1.0) {
    init_orientation();
  }
  SurfaceSample eval(double t, double s) const override {
    SurfaceSample out;
    out.p = {t, 0.0, 0.0, sign_ * s};
    out.t1 = {1.0, 0.0, 0.0, 0.0};
    out.t2 = {0.0, 0.0, 0.0, sign_};
    return out;
  }

 private:
  double sign_;
};

class E15Surface final : public Surface {
 public:
  E15Surface(ConeSolution cone, int sign, double t0, double s_min, double s_max, double L)
      : Surface(Family::E15, 0.0, cone.closure_span(), s_min, s_max, true, L),
        cone_(std::move(cone)),
        sign_(sign >= 0 ? 1.0 : -1.0),
        t0_(t0) {
    init_orientation();
  }

  SurfaceSample eval(double tau, double s) const override {
    const double c = cone_.c();
    const double u = cone_.u(tau);
    const double up = cone_.up(tau);
    const double upp = cone_.upp(tau);
    const double rho = s * std::sqrt(c / u);
    const double cphi = std::cos(tau), sphi = std::sin(tau);

    SurfaceSample out;
    out.p = {t0_ + sign_ * 1.5 * s * up, rho * cphi, rho * sphi, sign_ * s * u};

    const double rho_tau = -0.5 * rho * up / u;  // d rho / d tau at fixed s
    out.t1 = {sign_ * 1.5 * s * upp, rho_tau * cphi - rho * sphi, rho_tau * sphi + rho * cphi,
              sign_ * s * up};
    const double rho_s = rho / s;
    out.t2 = {sign_ * 1.5 * up, rho_s * cphi, rho_s * sphi, sign_ * u};
    return out;
  }

  const ConeSolution& cone() const { return cone_; }

 private:
  ConeSolution cone_;
  double sign_;
  double t0_;
};

class E16PhiH final : public Surface {
 public:
  // {phi = phi0, h = h0}; parameters (t, rho).  h0 = 0 gives the z = 0 leaf
  // (the Example 1.3 plane at angle phi0).
  E16PhiH(double phi0, double h0, double L)
      : Surface(Family::E16a, 0.0, L, rho_lo(h0), 0.95, true, L),
        cphi_(std::cos(phi0)),
        sphi_(std::sin(phi0)),
        h0_(h0) {
    init_orientation();
  }
  SurfaceSample eval(double t, double rho) const override {
    const double z = h0_ == 0.0 ? 0.0 : h0_ / (rho * rho);
    SurfaceSample out;
    out.p = {t, rho * cphi_, rho * sphi_, z};
    out.t1 = {1.0, 0.0, 0.0, 0.0};
    const double dz = h0_ == 0.0 ? 0.0 : -2.0 * h0_ / (rho * rho * rho);
    out.t2 = {0.0, cphi_, sphi_, dz};
    return out;
  }

 private:
  static double rho_lo(double h0) {
    // keep |z| = |h0|/rho^2 <= 0.7 and stay away from the axis
    return h0 == 0.0 ? 1e-3 : std::max(1e-3, std::sqrt(std::abs(h0) / 0.7));
  }
  double cphi_, sphi_, h0_;
};

class E16TF final : public Surface {
 public:
  // {t = t0, f = f0 > 0}; parameters (phi, z), rho = sqrt(2 f0 + 2 z^2).
  E16TF(double t0, double f0, double L)
      : Surface(Family::E16b, 0.0, 2.0 * M_PI, -z_span(f0), z_span(f0), true, L),
        t0_(t0),
        f0_(f0) {
    if (!(f0 > 0.0)) fail(ErrorKind::EmptyLevel, "E16 {t, f}: requires f > 0");
    init_orientation();
  }
  SurfaceSample eval(double phi, double z) const override {
    const double rho = std::sqrt(2.0 * f0_ + 2.0 * z * z);
    const double c = std::cos(phi), s = std::sin(phi);
    SurfaceSample out;
    out.p = {t0_, rho * c, rho * s, z};
    out.t1 = {0.0, -rho * s, rho * c, 0.0};
    const double drho = 2.0 * z / rho;
    out.t2 = {0.0, drho * c, drho * s, 1.0};
    return out;
  }

 private:
  static double z_span(double f0) {
    // stay inside the unit ball: rho^2 + z^2 = 2 f0 + 3 z^2 < 0.9
    const double m = (0.9 - 2.0 * f0) / 3.0;
    if (m <= 0.0) fail(ErrorKind::EmptyLevel, "E16 {t, f}: level misses the ball");
    return std::sqrt(m);
  }
  double t0_, f0_;
};

class E16TFDisk final : public Surface {
 public:
  // {t = t0, f = f0 <= 0, sign z > 0}; parameters (phi, rho),
  // z = sign sqrt(rho^2/2 - f0).
  E16TFDisk(double t0, double f0, int sign, double L)
      : Surface(Family::E16c, 0.0, 2.0 * M_PI, 1e-3, rho_hi(f0), true, L),
        t0_(t0),
        f0_(f0),
        sign_(sign >= 0 ? 1.0 : -1.0) {
    if (f0 > 0.0) fail(ErrorKind::EmptyLevel, "E16 disk: requires f <= 0");
    init_orientation();
  }
  SurfaceSample eval(double phi, double rho) const override {
    const double z = sign_ * std::sqrt(0.5 * rho * rho - f0_);
    const double c = std::cos(phi), s = std::sin(phi);
    SurfaceSample out;
    out.p = {t0_, rho * c, rho * s, z};
    out.t1 = {0.0, -rho * s, rho * c, 0.0};
    const double dz = sign_ * 0.5 * rho / std::sqrt(0.5 * rho * rho - f0_);
    out.t2 = {0.0, c, s, dz};
    return out;
  }

 private:
  static double rho_hi(double f0) {
    // rho^2 + z^2 = (3/2) rho^2 - f0 < 0.9
    const double m = (0.9 + f0) / 1.5;
    if (m <= 0.0) fail(ErrorKind::EmptyLevel, "E16 disk: level misses the ball");
    return std::sqrt(m);
  }
  double t0_, f0_, sign_;
};

class E17Surface final : public Surface {
 public:
  E17Surface(int q, int p, double alpha, double s_min, double L)
      : Surface(Family::E17, 0.0, 2.0 * M_PI, s_min, 1.0, true, L),
        p_(p),
        alpha_(alpha),
        a_(q * L / (2.0 * M_PI)) {
    if (q <= 0) fail(ErrorKind::BadArgument, "E17: q must be positive");
    if (std::gcd(std::abs(p), q) != 1 && p != 0)
      fail(ErrorKind::BadArgument, "E17: p, q must be coprime");
    if (p == 0 && q != 1) fail(ErrorKind::BadArgument, "E17: p = 0 requires q = 1");
    if (p_ != 0) solve_profile();
    init_orientation();
  }

  SurfaceSample eval(double psi, double s) const override {
    const double beta = p_ * psi + alpha_;
    const double cb = std::cos(beta), sb = std::sin(beta);
    const auto [z, zp] = profile(s);
    SurfaceSample out;
    out.p = {a_ * psi, s * cb, s * sb, z};
    out.t1 = {a_, -s * p_ * sb, s * p_ * cb, 0.0};
    out.t2 = {0.0, cb, sb, zp};
    return out;
  }

  /// z(s) and z'(s) of the profile equation.
  std::pair<double, double> profile(double s) const {
    if (p_ == 0) return {0.0, 0.0};
    if (s <= s_seed_) {
      const double z = 0.25 * p_ / a_ * s * s;
      return {z, 0.5 * p_ / a_ * s};
    }
    return {dense_.value(s, 0), dense_.derivative(s, 0)};
  }

 private:
  void solve_profile() {
    const double a = a_, p = p_;
    auto rhs = [a, p](const std::vector<double>& y, std::vector<double>& d) {
      // (a + 2 p z) s z' + 2 a z = p s^2, s tracked as y[1] with s' = 1
      const double s = y[1];
      d[0] = (p * s * s - 2.0 * a * y[0]) / ((a + 2.0 * p * y[0]) * s);
      d[1] = 1.0;
    };
    OdeOptions opts;
    opts.abs_tol = opts.rel_tol = 1e-13;
    opts.max_step = 1e-3;
    opts.initial_step = 1e-6;
    Dopri5 solver(rhs, opts);
    const double z0 = 0.25 * p / a * s_seed_ * s_seed_;
    auto nodes = solver.integrate(s_seed_, {z0, s_seed_}, 1.05);
    auto second = [a, p](const OdeNode& n) {
      // z'' from differentiating the profile equation
      const double s = n.y[1], z = n.y[0], zp = n.f[0];
      const double zpp =
          (2.0 * p * s - 2.0 * p * s * zp * zp - (a + 2.0 * p * z) * zp - 2.0 * a * zp) /
          ((a + 2.0 * p * z) * s);
      return std::vector<double>{zpp, 0.0};
    };
    // reindex by s: node times are s - s_seed_; rebuild with t = s
    for (auto& n : nodes) n.t = n.y[1];
    dense_ = DenseTrajectory(std::move(nodes), second);
  }

  int p_;
  double alpha_;
  double a_;
  double s_seed_ = 1e-7;
  DenseTrajectory dense_;
};

class CustomSurface final : public Surface {
 public:
  CustomSurface(std::function<SurfaceSample(double, double)> f, double a0, double a1, double b0,
                double b1, bool per, double L)
      : Surface(Family::Custom, a0, a1, b0, b1, per, L), f_(std::move(f)) {
    init_orientation();
  }
  SurfaceSample eval(double s1, double s2) const override { return f_(s1, s2); }

 private:
  std::function<SurfaceSample(double, double)> f_;
};

}  // namespace

SurfacePtr make_e13(double nu_angle, double s_min, double L) {
  return std::make_shared<E13Surface>(nu_angle, s_min, L);
}

SurfacePtr make_e14(int sign, double s_min, double L) {
  return std::make_shared<E14Surface>(sign, s_min, L);
}

SurfacePtr make_e15(const ConeSolution& cone, int sign, double t0, double s_min, double s_max,
                    double L) {
  return std::make_shared<E15Surface>(cone, sign, t0, s_min, s_max, L);
}

SurfacePtr make_e16(E16Variant variant, double cst, double cst2, int sign, double L) {
  switch (variant) {
    case E16Variant::PhiH: return std::make_shared<E16PhiH>(cst, cst2, L);
    case E16Variant::TF: return std::make_shared<E16TF>(cst, cst2, L);
    case E16Variant::TFDisk: return std::make_shared<E16TFDisk>(cst, cst2, sign, L);
  }
  fail(ErrorKind::BadArgument, "make_e16: unknown variant");
}

SurfacePtr make_e17(int q, int p, double alpha, double s_min, double L) {
  return std::make_shared<E17Surface>(q, p, alpha, s_min, L);
}

SurfacePtr make_custom(std::function<SurfaceSample(double, double)> sampler, double s1_min,
                       double s1_max, double s2_min, double s2_max, bool s1_periodic, double L) {
  return std::make_shared<CustomSurface>(std::move(sampler), s1_min, s1_max, s2_min, s2_max,
                                         s1_periodic, L);
}

namespace {

struct GridEval {
  double s1, s2, value;
};

ResidualReport reduce_grid(const std::vector<GridEval>& vals) {
  ResidualReport rep;
  rep.samples = vals.size();
  double sum = 0.0;
  for (const auto& v : vals) {
    sum += v.value;
    if (v.value >= rep.max_residual) {
      rep.max_residual = v.value;
      rep.worst_s1 = v.s1;
      rep.worst_s2 = v.s2;
    }
  }
  rep.mean_residual = vals.empty() ? 0.0 : sum / vals.size();
  return rep;
}

template <typename F>
ResidualReport grid_residual(const Surface& surf, int n1, int n2, F&& fn) {
  std::vector<GridEval> vals(static_cast<std::size_t>(n1) * n2);
  const double d1 = (surf.s1_max() - surf.s1_min()) / (surf.s1_periodic() ? n1 : n1 - 1);
  const double d2 = (surf.s2_max() - surf.s2_min()) / (n2 - 1);
  parallel_for(vals.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) / n2;
    const int j = static_cast<int>(k) % n2;
    const double s1 = surf.s1_min() + (surf.s1_periodic() ? (i + 0.5) : double(i)) * d1;
    const double s2 = surf.s2_min() + j * d2;
    vals[k] = {s1, s2, fn(s1, s2)};
  });
  return reduce_grid(vals);
}

}  // namespace

ResidualReport holomorphy_residual(const Surface& surface, int n1, int n2) {
  return grid_residual(surface, n1, n2, [&](double s1, double s2) {
    const SurfaceSample s = surface.eval(s1, s2);
    const Eigen::Matrix4d J = jay_at(s.p);
    const TangentVector4 e1 = s.t1.normalized();
    TangentVector4 r2 = s.t2 - s.t2.dot(e1) * e1;
    const double n2v = r2.norm();
    if (n2v < 1e-10 * s.t2.norm())
      fail(ErrorKind::DegenerateFrame, "holomorphy_residual: T1, T2 linearly dependent");
    const TangentVector4 e2 = r2 / n2v;
    const TangentVector4 v = J * s.t1;
    const TangentVector4 proj = v.dot(e1) * e1 + v.dot(e2) * e2;
    return (v - proj).norm() / v.norm();
  });
}

ResidualReport frame_consistency(const Surface& surface, int n1, int n2, double probe) {
  // keep probes inside the domain
  auto clamp2 = [&](double v) {
    return std::clamp(v, surface.s2_min() + probe, surface.s2_max() - probe);
  };
  return grid_residual(surface, n1, n2, [&](double s1, double s2) {
    s2 = clamp2(s2);
    const SurfaceSample c = surface.eval(s1, s2);
    const auto pos = [&](double a, double b) { return surface.eval(a, b).p.as_vector(); };
    const Eigen::Vector4d d1 =
        (pos(s1 + probe, s2) - pos(s1 - probe, s2)) / (2.0 * probe);
    const Eigen::Vector4d d2 =
        (pos(s1, s2 + probe) - pos(s1, s2 - probe)) / (2.0 * probe);
    const double sc = std::max({c.t1.norm(), c.t2.norm(), 1.0});
    return std::max((d1 - c.t1).norm(), (d2 - c.t2).norm()) / sc;
  });
}

ResidualReport cone_field_residual(const Surface& surface, double t0, int n1, int n2) {
  return grid_residual(surface, n1, n2, [&](double s1, double s2) {
    const SurfaceSample s = surface.eval(s1, s2);
    TangentVector4 v{surface.t_diff(s.p.t, t0), s.p.x, s.p.y, s.p.z};
    const double vn = v.norm();
    if (vn == 0.0) return 0.0;
    const TangentVector4 e1 = s.t1.normalized();
    TangentVector4 r2 = s.t2 - s.t2.dot(e1) * e1;
    const double n2v = r2.norm();
    if (n2v < 1e-10 * s.t2.norm())
      fail(ErrorKind::DegenerateFrame, "cone_field_residual: degenerate frame");
    const TangentVector4 e2 = r2 / n2v;
    const TangentVector4 proj = v.dot(e1) * e1 + v.dot(e2) * e2;
    return (v - proj).norm() / vn;
  });
}

}  // namespace phc
