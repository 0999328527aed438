#include "phclab/limits.hpp"

#include <algorithm>
#include <cmath>

#include "phclab/parallel.hpp"

namespace phc {

namespace {

class DilatedSurface final : public Surface {
 public:
  DilatedSurface(SurfacePtr base, double scale, double t0)
      : Surface(base->family(), base->s1_min(), base->s1_max(), base->s2_min(), base->s2_max(),
                base->s1_periodic(), base->circle_length()),
        base_(std::move(base)),
        scale_(scale),
        t0_(t0) {
    if (!(scale > 0.0)) fail(ErrorKind::BadArgument, "dilate: scale must be positive");
    orientation_ = base_->orientation();
    clip_domain();
  }

  SurfaceSample eval(double s1, double s2) const override {
    SurfaceSample s = base_->eval(s1, s2);
    const double dt = base_->t_diff(s.p.t, t0_);
    s.p = {dt / scale_, s.p.x / scale_, s.p.y / scale_, s.p.z / scale_};
    s.t1 /= scale_;
    s.t2 /= scale_;
    return s;
  }

  bool t_unwrapped() const override { return true; }

 private:
  // Shrink the s2 range to the part whose image can reach the ball of radius
  // kClip, so parameter grids stay dense where the dilation is examined.
  void clip_domain() {
    constexpr double kClip = 3.0;
    const int n1 = 24, n2 = 512;
    double hi = s2_min_;
    for (int j = 0; j < n2; ++j) {
      const double s2 = s2_min_ + (s2_max_ - s2_min_) * (j + 1.0) / n2;
      double rmin = 1e300;
      for (int i = 0; i < n1; ++i) {
        const double s1 = s1_min_ + (s1_max_ - s1_min_) * (i + 0.5) / n1;
        rmin = std::min(rmin, eval(s1, s2).p.as_vector().norm());
      }
      if (rmin <= kClip) hi = s2;
    }
    if (hi > s2_min_) s2_max_ = std::min(s2_max_, hi + (s2_max_ - s2_min_) / n2);
  }

  SurfacePtr base_;
  double scale_;
  double t0_;
};

}  // namespace

SurfacePtr dilate(SurfacePtr base, double scale, double t0) {
  return std::make_shared<DilatedSurface>(std::move(base), scale, t0);
}

std::vector<Eigen::Vector4d> sample_cloud(const Surface& surface, int n1, int n2) {
  std::vector<Eigen::Vector4d> cloud(static_cast<std::size_t>(n1) * n2);
  const double d1 = (surface.s1_max() - surface.s1_min()) / n1;
  const double d2 = (surface.s2_max() - surface.s2_min()) / (n2 - 1);
  parallel_for(cloud.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) / n2;
    const int j = static_cast<int>(k) % n2;
    const SurfaceSample s =
        surface.eval(surface.s1_min() + (i + 0.5) * d1, surface.s2_min() + j * d2);
    cloud[k] = s.p.as_vector();
  });
  return cloud;
}

namespace {

double one_sided_sup(const std::vector<Eigen::Vector4d>& from,
                     const std::vector<Eigen::Vector4d>& to, const AnnulusRegion& K,
                     bool* hit_region) {
  std::vector<double> best(from.size(), -1.0);
  parallel_for(from.size(), [&](std::size_t i) {
    if (!K.contains(from[i])) return;
    double d2 = std::numeric_limits<double>::max();
    for (const auto& q : to) d2 = std::min(d2, (from[i] - q).squaredNorm());
    best[i] = std::sqrt(d2);
  });
  double sup = -1.0;
  for (double b : best) sup = std::max(sup, b);
  *hit_region = sup >= 0.0;
  return std::max(sup, 0.0);
}

}  // namespace

double geometric_distance(const std::vector<Eigen::Vector4d>& cloud_a,
                          const std::vector<Eigen::Vector4d>& cloud_b, const AnnulusRegion& K) {
  bool hit_a = false, hit_b = false;
  const double da = one_sided_sup(cloud_a, cloud_b, K, &hit_a);
  const double db = one_sided_sup(cloud_b, cloud_a, K, &hit_b);
  if (!hit_a || !hit_b)
    fail(ErrorKind::EmptyIntersection, "geometric_distance: a sampler misses the region K");
  return da + db;
}

double geometric_distance(const Surface& a, const Surface& b, const AnnulusRegion& K, int n1,
                          int n2) {
  return geometric_distance(sample_cloud(a, n1, n2), sample_cloud(b, n1, n2), K);
}

TestSurfaceSpec TestSurfaceSpec::cylinder(double t0, double f_level, double delta) {
  TestSurfaceSpec s;
  s.kind = Kind::Cylinder;
  s.t0 = t0;
  s.level = f_level;
  s.delta = delta;
  if (!(f_level > 0.0)) fail(ErrorKind::BadArgument, "cylinder test: f level must be positive");
  return s;
}

TestSurfaceSpec TestSurfaceSpec::disk(double t0, double f_level, double delta, int sign) {
  TestSurfaceSpec s;
  s.kind = Kind::Disk;
  s.t0 = t0;
  s.level = f_level;
  s.delta = delta;
  s.sign = sign >= 0 ? +1 : -1;
  if (f_level > 0.0) fail(ErrorKind::BadArgument, "disk test: f level must be <= 0");
  return s;
}

TestSurfaceSpec TestSurfaceSpec::h_slice(double phi0, double h_level) {
  TestSurfaceSpec s;
  s.kind = Kind::HSlice;
  s.phi0 = phi0;
  s.level = h_level;
  return s;
}

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

struct ConstraintEval {
  Eigen::Vector2d F;
  Eigen::Matrix2d J;
};

class IntersectionProblem {
 public:
  IntersectionProblem(const Surface& surf, const TestSurfaceSpec& test, double window,
                      double t0_window)
      : surf_(surf), test_(test), window_(window), t0_window_(t0_window) {}

  double t_diff(const CartesianPoint4& p, double t_ref) const { return surf_.t_diff(p.t, t_ref); }

  ConstraintEval eval(double s1, double s2) const {
    const SurfaceSample s = surf_.eval(s1, s2);
    ConstraintEval ce;
    switch (test_.kind) {
      case TestSurfaceSpec::Kind::Cylinder:
      case TestSurfaceSpec::Kind::Disk: {
        ce.F[0] = t_diff(s.p, test_.t0);
        ce.F[1] = f_coord(s.p) - test_.level;
        const OneFormValue df = df_at(s.p);
        ce.J(0, 0) = s.t1[0];
        ce.J(0, 1) = s.t2[0];
        ce.J(1, 0) = df.dot(s.t1);
        ce.J(1, 1) = df.dot(s.t2);
        break;
      }
      case TestSurfaceSpec::Kind::HSlice: {
        if (s.p.rho_sq() < 1e-20) {
          ce.F.setConstant(1.0);
          ce.J.setIdentity();
          break;
        }
        ce.F[0] = wrap_angle(std::atan2(s.p.y, s.p.x) - test_.phi0);
        ce.F[1] = h_coord(s.p) - test_.level;
        const OneFormValue dphi = dphi_at(s.p);
        const OneFormValue dh = dh_at(s.p);
        ce.J(0, 0) = dphi.dot(s.t1);
        ce.J(0, 1) = dphi.dot(s.t2);
        ce.J(1, 0) = dh.dot(s.t1);
        ce.J(1, 1) = dh.dot(s.t2);
        break;
      }
    }
    return ce;
  }

  bool accept(const CartesianPoint4& p) const {
    const double dt = t_diff(p, t0_window_);
    if (dt * dt + p.x * p.x + p.y * p.y + p.z * p.z > window_ * window_) return false;
    switch (test_.kind) {
      case TestSurfaceSpec::Kind::Cylinder:
        return std::abs(p.z) < test_.delta;
      case TestSurfaceSpec::Kind::Disk:
        return p.rho() < test_.delta && test_.sign * p.z > 0.0;
      case TestSurfaceSpec::Kind::HSlice:
        return true;
    }
    return false;
  }

 private:
  const Surface& surf_;
  const TestSurfaceSpec& test_;
  double window_;
  double t0_window_;
};

struct RawRoot {
  double s1, s2;
  double jac;
};

std::vector<RawRoot> newton_roots(const Surface& surf, const IntersectionProblem& prob,
                                  int seeds) {
  const double a0 = surf.s1_min(), a1 = surf.s1_max();
  const double b0 = surf.s2_min(), b1 = surf.s2_max();
  const double span1 = a1 - a0, span2 = b1 - b0;

  std::vector<RawRoot> found(static_cast<std::size_t>(seeds) * seeds, RawRoot{0, 0, -1.0});
  parallel_for(found.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) / seeds;
    const int j = static_cast<int>(k) % seeds;
    double s1 = a0 + span1 * (i + 0.5) / seeds;
    double s2 = b0 + span2 * (j + 0.5) / seeds;
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      const ConstraintEval ce = prob.eval(s1, s2);
      if (ce.F.norm() < 1e-12) {
        ok = true;
        break;
      }
      const double det = ce.J.determinant();
      if (std::abs(det) < 1e-14) break;
      Eigen::Vector2d d = ce.J.inverse() * ce.F;
      // keep steps bounded to stabilize far seeds
      const double lim = 0.25 * std::max(span1, span2);
      if (d.norm() > lim) d *= lim / d.norm();
      s1 -= d[0];
      s2 -= d[1];
      if (surf.s1_periodic()) {
        s1 = a0 + std::fmod(s1 - a0, span1);
        if (s1 < a0) s1 += span1;
      }
      if (s2 < b0 - 0.1 * span2 || s2 > b1 + 0.1 * span2) break;
      if (s1 < a0 - 0.1 * span1 || s1 > a1 + 0.1 * span1) break;
    }
    if (!ok) return;
    if (s2 < b0 - 1e-9 * span2 || s2 > b1 + 1e-9 * span2) return;
    const ConstraintEval ce = prob.eval(s1, s2);
    const double scale = std::max(1e-30, ce.J.row(0).norm() * ce.J.row(1).norm());
    found[k] = RawRoot{s1, s2, std::abs(ce.J.determinant()) / scale};
  });

  // dedup in parameter space (s1 periodic)
  std::vector<RawRoot> roots;
  const double tol1 = 1e-6 * span1, tol2 = 1e-6 * span2;
  for (const auto& r : found) {
    if (r.jac < 0.0) continue;
    bool dup = false;
    for (const auto& q : roots) {
      double d1 = std::abs(r.s1 - q.s1);
      if (surf.s1_periodic()) d1 = std::min(d1, span1 - d1);
      if (d1 < tol1 * 1e3 && std::abs(r.s2 - q.s2) < tol2 * 1e3) {
        dup = true;
        break;
      }
    }
    if (!dup) roots.push_back(r);
  }
  return roots;
}

std::vector<IntersectionRoot> solve_intersections(const Surface& surf,
                                                  const TestSurfaceSpec& test, double window,
                                                  double t0_window, int seeds) {
  IntersectionProblem prob(surf, test, window, t0_window);
  std::vector<IntersectionRoot> out;
  for (const auto& r : newton_roots(surf, prob, seeds)) {
    const SurfaceSample s = surf.eval(r.s1, r.s2);
    if (!prob.accept(s.p)) continue;
    if (r.jac < 1e-8)
      fail(ErrorKind::NonTransverse, "count_intersections: Jacobian below tolerance at a root");
    out.push_back({r.s1, r.s2, s.p, +1});
  }
  return out;
}

}  // namespace

IntersectionCount count_intersections(const Surface& surface, const TestSurfaceSpec& test,
                                      double window, double t0_window, int seeds) {
  IntersectionCount res;
  res.roots = solve_intersections(surface, test, window, t0_window, seeds);
  res.count = static_cast<int>(res.roots.size());
  const auto refined = solve_intersections(surface, test, window, t0_window, 2 * seeds);
  res.refine_stable = (static_cast<int>(refined.size()) == res.count);
  return res;
}

int linking_sphere_count(const Surface& surface, double t_slice, double delta, int seeds) {
  // Roots of (t = t_slice, rho^2 + z^2 = delta^2), then signed by the
  // orientation of (T1, T2, S1, S2) against dt^dx^dy^dz, where (T1, T2) is
  // the omega-oriented frame and (S1, S2) orients the sphere by the outward
  // normal of its t-slice.
  const double a0 = surface.s1_min(), a1 = surface.s1_max();
  const double b0 = surface.s2_min(), b1 = surface.s2_max();
  const double span1 = a1 - a0, span2 = b1 - b0;

  struct Root {
    double s1, s2;
  };
  std::vector<Root> roots;
  {
    std::vector<Root> found(static_cast<std::size_t>(seeds) * seeds, Root{1e300, 1e300});
    parallel_for(found.size(), [&](std::size_t k) {
      const int i = static_cast<int>(k) / seeds;
      const int j = static_cast<int>(k) % seeds;
      double s1 = a0 + span1 * (i + 0.5) / seeds;
      double s2 = b0 + span2 * (j + 0.5) / seeds;
      for (int it = 0; it < 40; ++it) {
        const SurfaceSample s = surface.eval(s1, s2);
        Eigen::Vector2d F(surface.t_diff(s.p.t, t_slice),
                          s.p.rho_sq() + s.p.z * s.p.z - delta * delta);
        if (F.norm() < 1e-12) {
          found[k] = Root{s1, s2};
          return;
        }
        Eigen::Matrix2d J;
        J(0, 0) = s.t1[0];
        J(0, 1) = s.t2[0];
        const OneFormValue dr2{0.0, 2.0 * s.p.x, 2.0 * s.p.y, 2.0 * s.p.z};
        J(1, 0) = dr2.dot(s.t1);
        J(1, 1) = dr2.dot(s.t2);
        if (std::abs(J.determinant()) < 1e-14) return;
        Eigen::Vector2d d = J.inverse() * F;
        const double lim = 0.25 * std::max(span1, span2);
        if (d.norm() > lim) d *= lim / d.norm();
        s1 -= d[0];
        s2 -= d[1];
        if (surface.s1_periodic()) {
          s1 = a0 + std::fmod(s1 - a0, span1);
          if (s1 < a0) s1 += span1;
        }
        if (s2 < b0 - 0.1 * span2 || s2 > b1 + 0.1 * span2) return;
      }
    });
    for (const auto& r : found) {
      if (r.s1 > 1e299) continue;
      if (r.s2 < b0 - 1e-9 * span2 || r.s2 > b1 + 1e-9 * span2) continue;
      bool dup = false;
      for (const auto& q : roots) {
        double d1 = std::abs(r.s1 - q.s1);
        if (surface.s1_periodic()) d1 = std::min(d1, span1 - d1);
        if (d1 < 1e-3 * span1 && std::abs(r.s2 - q.s2) < 1e-3 * span2) {
          dup = true;
          break;
        }
      }
      if (!dup) roots.push_back(r);
    }
  }

  int total = 0;
  for (const auto& r : roots) {
    const SurfaceSample s = surface.eval(r.s1, r.s2);
    TangentVector4 c1 = s.t1, c2 = s.t2;
    if (surface.orientation() < 0.0) std::swap(c1, c2);
    const Eigen::Vector3d n = Eigen::Vector3d(s.p.x, s.p.y, s.p.z).normalized();
    Eigen::Vector3d a1v = Eigen::Vector3d(-s.p.y, s.p.x, 0.0);
    if (a1v.norm() < 1e-12) a1v = Eigen::Vector3d(1.0, 0.0, 0.0);
    a1v.normalize();
    const Eigen::Vector3d a2v = n.cross(a1v);
    TangentVector4 S1{0.0, a1v[0], a1v[1], a1v[2]};
    TangentVector4 S2{0.0, a2v[0], a2v[1], a2v[2]};
    Eigen::Matrix4d M;
    M.col(0) = c1;
    M.col(1) = c2;
    M.col(2) = S1;
    M.col(3) = S2;
    const double det = M.determinant();
    total += det > 0.0 ? +1 : -1;
  }
  return total;
}

namespace {

/// Step-function cluster detection of |h| / r^3 values on the dilated
/// surface; cones give exact constants carried by a large sample population,
/// everything else spreads (or bunches only in thin extreme-value tails).
struct ConeCandidates {
  std::vector<double> plus;
  std::vector<double> minus;
};

ConeCandidates detect_cone_constants(const Surface& dilated, int n1 = 96, int n2 = 96) {
  std::vector<double> vals;
  const double d1 = (dilated.s1_max() - dilated.s1_min()) / n1;
  const double d2 = (dilated.s2_max() - dilated.s2_min()) / (n2 - 1);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const SurfaceSample s =
          dilated.eval(dilated.s1_min() + (i + 0.5) * d1, dilated.s2_min() + j * d2);
      const double r2 = s.p.t * s.p.t + s.p.x * s.p.x + s.p.y * s.p.y + s.p.z * s.p.z;
      if (r2 < 0.09 || r2 > 1.0) continue;
      const double v = h_coord(s.p) / std::pow(r2, 1.5);
      if (std::abs(v) > 1e-4) vals.push_back(v);
    }
  }
  std::sort(vals.begin(), vals.end());
  ConeCandidates out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= vals.size(); ++i) {
    const bool brk =
        i == vals.size() || (i > start && vals[i] - vals[i - 1] > 1e-3 * std::abs(vals[i]) + 1e-6);
    if (!brk) continue;
    if (i - start >= 25) {
      const double lo = vals[start], hi = vals[i - 1];
      const double mid = 0.5 * (lo + hi);
      // a genuine cone constant has negligible spread within its cluster
      if (std::abs(hi - lo) <= 1e-6 * std::max(1.0, std::abs(mid))) {
        (mid > 0.0 ? out.plus : out.minus).push_back(mid);
      }
    }
    start = i;
  }
  return out;
}

/// Candidates must reappear at an independent dilation scale: cone constants
/// are scale invariant, while level bunching of non-conical content drifts
/// with the scale.
std::vector<double> scale_stable_candidates(const std::vector<double>& fine,
                                            const std::vector<double>& other) {
  std::vector<double> out;
  for (double c : fine)
    for (double d : other)
      if (std::abs(c - d) < 1e-6 * std::max(1.0, std::abs(c))) {
        out.push_back(c);
        break;
      }
  return out;
}

int stable_count(const std::vector<IntersectionRoot>& roots,
                 const std::function<bool(const CartesianPoint4&, double)>& pass) {
  // descend delta until two consecutive values agree
  int prev = -1;
  for (double delta = 0.125; delta > 1e-4; delta *= 0.5) {
    int n = 0;
    for (const auto& r : roots)
      if (pass(r.p, delta)) ++n;
    if (prev == n) return n;
    prev = n;
  }
  return prev < 0 ? 0 : prev;
}

}  // namespace

LimitData classify_limit(SurfacePtr surface, double t0, ClassifyOptions opts) {
  LimitData data;
  data.s_used = opts.scales;

  std::vector<int> pq_diffs;
  SurfacePtr finest;
  for (double scale : opts.scales) {
    SurfacePtr D = dilate(surface, scale, t0);
    finest = D;

    // All candidate roots are collected with the delta side conditions
    // disabled (delta = infinity), then counted under descending delta.
    TestSurfaceSpec cyl = TestSurfaceSpec::cylinder(0.0, opts.f_level, 1e9);
    TestSurfaceSpec dp = TestSurfaceSpec::disk(0.0, -opts.f_level, 1e9, +1);
    TestSurfaceSpec dm = TestSurfaceSpec::disk(0.0, -opts.f_level, 1e9, -1);

    const auto roots_p = count_intersections(*D, cyl, 1.0, 0.0, opts.seeds);
    const auto roots_qp = count_intersections(*D, dp, 1.0, 0.0, opts.seeds);
    const auto roots_qm = count_intersections(*D, dm, 1.0, 0.0, opts.seeds);

    const int p = stable_count(roots_p.roots, [](const CartesianPoint4& q, double delta) {
      return std::abs(q.z) < delta;
    });
    const int qp = stable_count(roots_qp.roots, [](const CartesianPoint4& q, double delta) {
      return q.rho() < delta;
    });
    const int qm = stable_count(roots_qm.roots, [](const CartesianPoint4& q, double delta) {
      return q.rho() < delta;
    });

    data.p = p;
    data.q_plus = qp;
    data.q_minus = qm;
    pq_diffs.push_back(p - qp - qm);
    if (!(roots_p.refine_stable && roots_qp.refine_stable && roots_qm.refine_stable))
      data.scale_stable = false;
  }
  data.scale_stable =
      data.scale_stable && std::all_of(pq_diffs.begin(), pq_diffs.end(),
                                       [&](int d) { return d == pq_diffs.front(); });

  // Cone content: clusters of h / r^3 that persist across two dilation
  // scales, each verified by the jump of the {phi = 0, h = level}
  // intersection count across the candidate level.
  const ConeCandidates cand = detect_cone_constants(*finest);
  ConeCandidates other;
  if (opts.scales.size() >= 2) {
    other = detect_cone_constants(
        *dilate(surface, opts.scales[opts.scales.size() - 2], t0));
  } else {
    other = cand;
  }
  auto verify = [&](double c_hat) {
    const auto below = count_intersections(
        *finest, TestSurfaceSpec::h_slice(0.0, 0.9 * c_hat), 1.0, 0.0, opts.seeds);
    const auto above = count_intersections(
        *finest, TestSurfaceSpec::h_slice(0.0, 1.1 * c_hat), 1.0, 0.0, opts.seeds);
    return below.count - above.count;
  };
  for (double c_hat : scale_stable_candidates(cand.plus, other.plus)) {
    if (verify(c_hat) > 0) {
      ++data.n_plus;
      data.cone_constants.push_back(std::abs(c_hat));
    }
  }
  for (double c_hat : scale_stable_candidates(cand.minus, other.minus)) {
    if (verify(c_hat) > 0) {
      ++data.n_minus;
      data.cone_constants.push_back(std::abs(c_hat));
    }
  }

  data.linking_count = linking_sphere_count(*finest, 0.0, 0.45, opts.seeds);

  if (opts.with_dk) {
    for (std::size_t i = 0; i + 1 < opts.scales.size(); ++i) {
      data.dk_sequence.push_back(geometric_distance(*dilate(surface, opts.scales[i], t0),
                                                    *dilate(surface, opts.scales[i + 1], t0)));
    }
  }
  return data;
}

}  // namespace phc
