#include "phclab/local_graphs.hpp"

#include <algorithm>
#include <cmath>

#include "phclab/ode.hpp"
#include "phclab/parallel.hpp"

namespace phc {

Kappas kappas(double nu) {
  if (std::abs(nu) > kappa_nu_max())
    fail(ErrorKind::OutOfRadius, "kappas: |nu| beyond the graph-regime radius");
  // invert nu = w (1 + 2 w^2); monotone, so plain Newton from w = nu converges
  double w = nu;
  for (int it = 0; it < 50; ++it) {
    const double fv = w * (1.0 + 2.0 * w * w) - nu;
    const double fp = 1.0 + 6.0 * w * w;
    const double step = fv / fp;
    w -= step;
    if (std::abs(step) < 1e-17) break;
  }
  Kappas k;
  k.w = w;
  const double w2 = w * w;
  k.kappa1 = 2.0 * w2;
  k.kappa2 = 8.0 * w2 + 12.0 * w2 * w2;
  return k;
}

double GraphGrid::nu_over_u_bound() const {
  double bound = 0.0;
  for (const auto& sh : sheets)
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        bound = std::max(bound, std::abs(sh.nu[i][j]) / u[j]);
  return bound;
}

namespace {

struct Fields {
  // per node: geometric factors recovered from nu
  std::vector<std::vector<double>> h, rho2, g2, k1, k2;
};

Fields make_fields(const GraphGrid& grid, const GraphGrid::Sheet& sh) {
  const std::size_t nt = grid.t.size(), nu = grid.u.size();
  Fields f;
  f.h.assign(nt, std::vector<double>(nu));
  f.rho2 = f.g2 = f.k1 = f.k2 = f.h;
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < nu; ++j) {
      const double u = grid.u[j];
      const double nuv = sh.nu[i][j];
      const Kappas k = kappas(nuv);
      f.h[i][j] = nuv * u * u * u;
      f.rho2[i][j] = u * u * (1.0 + k.kappa1);
      f.g2[i][j] = u * u * (1.0 + 6.0 * k.w * k.w);
      f.k1[i][j] = k.kappa1;
      f.k2[i][j] = k.kappa2;
    }
  }
  return f;
}

ResidualReport reduce(const std::vector<std::array<double, 3>>& vals) {
  ResidualReport rep;
  rep.samples = vals.size();
  double sum = 0.0;
  for (const auto& v : vals) {
    sum += v[0];
    if (v[0] >= rep.max_residual) {
      rep.max_residual = v[0];
      rep.worst_s1 = v[1];
      rep.worst_s2 = v[2];
    }
  }
  rep.mean_residual = vals.empty() ? 0.0 : sum / vals.size();
  return rep;
}

using Field = std::vector<std::vector<double>>;

double d_t(const Field& f, std::size_t i, std::size_t j, double dt) {
  return (f[i + 1][j] - f[i - 1][j]) / (2.0 * dt);
}
double d_u(const Field& f, std::size_t i, std::size_t j, double du) {
  return (f[i][j + 1] - f[i][j - 1]) / (2.0 * du);
}

}  // namespace

namespace {

void require_grid(const GraphGrid& grid, std::size_t min_nodes) {
  if (grid.t.size() < min_nodes || grid.u.size() < min_nodes)
    fail(ErrorKind::GridTooCoarse, "graph residual: grid too coarse for the stencil");
}

}  // namespace

ResidualReport residual_8_1(const GraphGrid& grid) {
  require_grid(grid, 3);
  const double dt = grid.dt(), du = grid.du();
  std::vector<std::array<double, 3>> vals;
  for (const auto& sh : grid.sheets) {
    const Fields f = make_fields(grid, sh);
    for (std::size_t i = 1; i + 1 < grid.t.size(); ++i) {
      for (std::size_t j = 1; j + 1 < grid.u.size(); ++j) {
        const double u = grid.u[j];
        const double r1 = d_u(f.h, i, j, du) - f.rho2[i][j] * u * d_t(sh.phi, i, j, dt);
        const double r2 =
            d_t(f.h, i, j, dt) + f.g2[i][j] * f.rho2[i][j] / u * d_u(sh.phi, i, j, du);
        vals.push_back({std::max(std::abs(r1), std::abs(r2)), grid.t[i], u});
      }
    }
  }
  return reduce(vals);
}

ResidualReport residual_8_3(const GraphGrid& grid) {
  require_grid(grid, 3);
  const double dt = grid.dt(), du = grid.du();
  std::vector<std::array<double, 3>> vals;
  for (const auto& sh : grid.sheets) {
    const Fields f = make_fields(grid, sh);
    for (std::size_t i = 1; i + 1 < grid.t.size(); ++i) {
      for (std::size_t j = 1; j + 1 < grid.u.size(); ++j) {
        const double u = grid.u[j];
        const double r1 = d_u(sh.nu, i, j, du) + 3.0 * sh.nu[i][j] / u -
                          (1.0 + f.k1[i][j]) * d_t(sh.phi, i, j, dt);
        const double r2 = d_t(sh.nu, i, j, dt) + (1.0 + f.k2[i][j]) * d_u(sh.phi, i, j, du);
        vals.push_back({std::max(std::abs(r1), std::abs(r2)), grid.t[i], u});
      }
    }
  }
  return reduce(vals);
}

ResidualReport residual_8_5(const GraphGrid& grid) {
  require_grid(grid, 5);
  const double dt = grid.dt(), du = grid.du();
  std::vector<std::array<double, 3>> vals;
  for (const auto& sh : grid.sheets) {
    const Fields f = make_fields(grid, sh);
    const std::size_t nt = grid.t.size(), nu = grid.u.size();
    // A = (1+k1)^{-1} (nu_u + 3 nu/u), B = (1+k2)^{-1} nu_t on interior nodes
    Field A(nt, std::vector<double>(nu, 0.0)), B = A;
    for (std::size_t i = 1; i + 1 < nt; ++i) {
      for (std::size_t j = 1; j + 1 < nu; ++j) {
        A[i][j] = (d_u(sh.nu, i, j, du) + 3.0 * sh.nu[i][j] / grid.u[j]) / (1.0 + f.k1[i][j]);
        B[i][j] = d_t(sh.nu, i, j, dt) / (1.0 + f.k2[i][j]);
      }
    }
    for (std::size_t i = 2; i + 2 < nt; ++i)
      for (std::size_t j = 2; j + 2 < nu; ++j)
        vals.push_back(
            {std::abs(d_u(A, i, j, du) + d_t(B, i, j, dt)), grid.t[i], grid.u[j]});
  }
  return reduce(vals);
}

ResidualReport residual_8_26(const GraphGrid& grid) {
  require_grid(grid, 5);
  const double dt = grid.dt(), du = grid.du();
  std::vector<std::array<double, 3>> vals;
  for (const auto& sh : grid.sheets) {
    const Fields f = make_fields(grid, sh);
    const std::size_t nt = grid.t.size(), nu = grid.u.size();
    // P = (1+k2) u^3 phi_u, Q = (1+k1) phi_t on interior nodes
    Field P(nt, std::vector<double>(nu, 0.0)), Q = P;
    for (std::size_t i = 1; i + 1 < nt; ++i) {
      for (std::size_t j = 1; j + 1 < nu; ++j) {
        const double u3 = grid.u[j] * grid.u[j] * grid.u[j];
        P[i][j] = (1.0 + f.k2[i][j]) * u3 * d_u(sh.phi, i, j, du);
        Q[i][j] = (1.0 + f.k1[i][j]) * d_t(sh.phi, i, j, dt);
      }
    }
    for (std::size_t i = 2; i + 2 < nt; ++i) {
      for (std::size_t j = 2; j + 2 < nu; ++j) {
        const double u3 = grid.u[j] * grid.u[j] * grid.u[j];
        vals.push_back(
            {std::abs(d_u(P, i, j, du) / u3 + d_t(Q, i, j, dt)), grid.t[i], grid.u[j]});
      }
    }
  }
  return reduce(vals);
}

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

struct NodeRoot {
  double s1, s2;
  double phi_raw;  // atan2 in (-pi, pi]
  double nu;
};

std::vector<NodeRoot> solve_node(const Surface& surf, double t_target, double u_target,
                                 const std::vector<std::pair<double, double>>& warm, int seeds) {
  const double a0 = surf.s1_min(), a1 = surf.s1_max();
  const double b0 = surf.s2_min(), b1 = surf.s2_max();
  const double span1 = a1 - a0, span2 = b1 - b0;

  std::vector<std::pair<double, double>> starts = warm;
  const int g = std::max(4, seeds);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      starts.emplace_back(a0 + span1 * (i + 0.5) / g, b0 + span2 * (j + 0.5) / g);

  std::vector<NodeRoot> roots;
  for (auto [s1, s2] : starts) {
    bool ok = false;
    double best1 = s1, best2 = s2, best_f = 1e300;
    for (int it = 0; it < 50; ++it) {
      const SurfaceSample s = surf.eval(s1, s2);
      const double fv = f_coord(s.p);
      if (fv <= 0.0) break;
      const double uv = std::sqrt(2.0 * fv);
      const Eigen::Vector2d F(surf.t_diff(s.p.t, t_target), uv - u_target);
      if (F.norm() < best_f) {
        best_f = F.norm();
        best1 = s1;
        best2 = s2;
        ok = best_f < 1e-12;
      }
      if (F.norm() < 1e-15) break;
      const OneFormValue df = df_at(s.p);
      Eigen::Matrix2d J;
      J(0, 0) = s.t1[0];
      J(0, 1) = s.t2[0];
      J(1, 0) = df.dot(s.t1) / uv;
      J(1, 1) = df.dot(s.t2) / uv;
      const double det = J.determinant();
      if (std::abs(det) < 1e-14) break;
      Eigen::Vector2d d = J.inverse() * F;
      const double lim = 0.2 * std::max(span1, span2);
      if (d.norm() > lim) d *= lim / d.norm();
      s1 -= d[0];
      s2 -= d[1];
      if (surf.s1_periodic()) {
        s1 = a0 + std::fmod(s1 - a0, span1);
        if (s1 < a0) s1 += span1;
      }
      if (s2 < b0 - 0.1 * span2 || s2 > b1 + 0.1 * span2) break;
    }
    if (!ok) continue;
    s1 = best1;
    s2 = best2;
    if (s2 < b0 - 1e-9 * span2 || s2 > b1 + 1e-9 * span2) continue;
    bool dup = false;
    for (const auto& r : roots) {
      double d1 = std::abs(s1 - r.s1);
      if (surf.s1_periodic()) d1 = std::min(d1, span1 - d1);
      if (d1 < 1e-5 * span1 && std::abs(s2 - r.s2) < 1e-5 * span2) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    const SurfaceSample s = surf.eval(s1, s2);
    NodeRoot r;
    r.s1 = s1;
    r.s2 = s2;
    r.phi_raw = std::atan2(s.p.y, s.p.x);
    r.nu = h_coord(s.p) / (u_target * u_target * u_target);
    // only sheets in the graph regime; |nu| beyond the inversion radius means
    // the branch is far from Z and not described by the (t, u) system
    if (std::abs(r.nu) > kappa_nu_max()) continue;
    roots.push_back(r);
  }
  return roots;
}

}  // namespace

GraphGrid extract_graph(const Surface& surface, double t_lo, double t_hi, double u_lo,
                        double u_hi, int nt, int nu, int sheets_expected, int seeds) {
  if (sheets_expected <= 0) fail(ErrorKind::BadArgument, "extract_graph: sheets_expected");
  GraphGrid grid;
  grid.t.resize(nt);
  grid.u.resize(nu);
  for (int i = 0; i < nt; ++i) grid.t[i] = t_lo + (t_hi - t_lo) * i / (nt - 1);
  for (int j = 0; j < nu; ++j) grid.u[j] = u_lo + (u_hi - u_lo) * j / (nu - 1);
  grid.sheets.assign(sheets_expected,
                     {Field(nt, std::vector<double>(nu, 0.0)),
                      Field(nt, std::vector<double>(nu, 0.0))});

  // Unwrapped reference phi per sheet, carried along the scan.
  std::vector<double> ref_phi(sheets_expected, 0.0);
  std::vector<std::pair<double, double>> warm, top_warm;

  for (int i = 0; i < nt; ++i) {
    if (i > 0) warm = top_warm;  // continue from the top of the previous column
    for (int jj = 0; jj < nu; ++jj) {
      const int j = nu - 1 - jj;  // sweep from the largest u toward the axis
      auto roots = solve_node(surface, grid.t[i], grid.u[j], warm,
                              (i == 0 && jj == 0) ? seeds : 16);
      if (static_cast<int>(roots.size()) != sheets_expected)
        fail(ErrorKind::SheetCountMismatch,
             "extract_graph: found " + std::to_string(roots.size()) + " sheets, expected " +
                 std::to_string(sheets_expected) + " at (t, u) = (" + std::to_string(grid.t[i]) +
                 ", " + std::to_string(grid.u[j]) + ")");

      if (i == 0 && jj == 0) {
        std::sort(roots.begin(), roots.end(),
                  [](const NodeRoot& a, const NodeRoot& b) { return a.phi_raw < b.phi_raw; });
        for (int k = 0; k < sheets_expected; ++k) ref_phi[k] = roots[k].phi_raw;
      }

      // assign each sheet the circularly-closest root
      std::vector<bool> used(roots.size(), false);
      warm.clear();
      for (int k = 0; k < sheets_expected; ++k) {
        int best = -1;
        double best_d = 1e300;
        for (std::size_t r = 0; r < roots.size(); ++r) {
          if (used[r]) continue;
          const double d = std::abs(wrap_angle(roots[r].phi_raw - ref_phi[k]));
          if (d < best_d) {
            best_d = d;
            best = static_cast<int>(r);
          }
        }
        if (best_d > 0.5 * M_PI)
          fail(ErrorKind::FoldDetected, "extract_graph: phi jump above pi/2 between neighbors");
        used[best] = true;
        const double phi_unwrapped = ref_phi[k] + wrap_angle(roots[best].phi_raw - ref_phi[k]);
        ref_phi[k] = phi_unwrapped;
        grid.sheets[k].phi[i][j] = phi_unwrapped;
        grid.sheets[k].nu[i][j] = roots[best].nu;
        warm.emplace_back(roots[best].s1, roots[best].s2);
      }
      if (jj == 0) top_warm = warm;
    }
    // re-anchor the reference at the top of the next t-column
    if (i + 1 < nt) {
      for (int k = 0; k < sheets_expected; ++k) ref_phi[k] = grid.sheets[k].phi[i][nu - 1];
    }
  }
  return grid;
}

TaylorFitReport taylor_fit(const GraphGrid& grid) {
  if (grid.u.front() > 0.01 + 1e-12)
    fail(ErrorKind::BadArgument, "taylor_fit: grid must reach u <= 0.01");
  if (grid.u.size() < 5 || grid.t.size() < 5)
    fail(ErrorKind::FitIllConditioned, "taylor_fit: grid too small");
  const std::size_t nt = grid.t.size(), nu = grid.u.size();
  const double dt = grid.dt();

  TaylorFitReport rep;
  for (const auto& sh : grid.sheets) {
    std::vector<double> phi0(nt), cphi(nt), cnu(nt);
    for (std::size_t i = 0; i < nt; ++i) {
      Eigen::MatrixXd A(nu, 3);
      Eigen::VectorXd yphi(nu);
      Eigen::MatrixXd B(nu, 2);
      Eigen::VectorXd ynu(nu);
      for (std::size_t j = 0; j < nu; ++j) {
        const double u = grid.u[j], u2 = u * u;
        A(j, 0) = 1.0;
        A(j, 1) = u2;
        A(j, 2) = u2 * u2;
        yphi[j] = sh.phi[i][j];
        B(j, 0) = u;
        B(j, 1) = u2 * u;
        ynu[j] = sh.nu[i][j];
      }
      const Eigen::Vector3d ca = A.colPivHouseholderQr().solve(yphi);
      const Eigen::Vector2d cb = B.colPivHouseholderQr().solve(ynu);
      phi0[i] = ca[0];
      cphi[i] = ca[1];
      cnu[i] = cb[0];
    }
    // 4th-order centered derivatives of phi0 on interior columns
    std::vector<double> p1(nt, 0.0), p2(nt, 0.0);
    for (std::size_t i = 2; i + 2 < nt; ++i) {
      p1[i] = (-phi0[i + 2] + 8 * phi0[i + 1] - 8 * phi0[i - 1] + phi0[i - 2]) / (12 * dt);
      p2[i] = (-phi0[i + 2] + 16 * phi0[i + 1] - 30 * phi0[i] + 16 * phi0[i - 1] - phi0[i - 2]) /
              (12 * dt * dt);
    }
    std::vector<double> phi0_i, cphi_i, cnu_i, p1_i, p2_i;
    for (std::size_t i = 2; i + 2 < nt; ++i) {
      phi0_i.push_back(phi0[i]);
      cphi_i.push_back(cphi[i]);
      cnu_i.push_back(cnu[i]);
      p1_i.push_back(p1[i]);
      p2_i.push_back(p2[i]);
      rep.max_cphi_defect = std::max(rep.max_cphi_defect, std::abs(cphi[i] + p2[i] / 8.0));
      rep.err_phi_prime = std::max(rep.err_phi_prime, std::abs(4.0 * cnu[i] - p1[i]));
      rep.err_phi_dblprime = std::max(rep.err_phi_dblprime, std::abs(4.0 * cnu[i] - p2[i]));
    }
    rep.phi0.push_back(std::move(phi0_i));
    rep.c_phi.push_back(std::move(cphi_i));
    rep.c_nu.push_back(std::move(cnu_i));
    rep.phi0_p.push_back(std::move(p1_i));
    rep.phi0_pp.push_back(std::move(p2_i));
  }
  rep.law_ratio = rep.err_phi_dblprime > 0.0 ? rep.err_phi_prime / rep.err_phi_dblprime
                                             : (rep.err_phi_prime == 0.0 ? 0.0 : 1e300);
  return rep;
}

// ---------------------------------------------------------------------------
// vertex model

namespace {

/// Chebyshev series utilities on Lobatto samples x_k = cos(k pi / M).
struct ChebSeries {
  std::vector<double> a;  // coefficients, a[0..M]

  static ChebSeries from_samples(const std::vector<double>& f) {
    const std::size_t M = f.size() - 1;
    ChebSeries s;
    s.a.assign(M + 1, 0.0);
    for (std::size_t m = 0; m <= M; ++m) {
      double acc = 0.5 * (f[0] + ((m % 2 == 0) ? f[M] : -f[M]));
      for (std::size_t k = 1; k < M; ++k) acc += f[k] * std::cos(m * k * M_PI / M);
      s.a[m] = 2.0 * acc / M;
    }
    s.a[0] *= 0.5;
    s.a[M] *= 0.5;
    return s;
  }

  ChebSeries derivative() const {
    const std::size_t n = a.size();
    ChebSeries d;
    d.a.assign(n, 0.0);
    if (n < 2) return d;
    // b_{k-1} = b_{k+1} + 2 k a_k
    std::vector<double> b(n + 1, 0.0);
    for (std::size_t k = n - 1; k >= 1; --k) b[k - 1] = b[k + 1] + 2.0 * k * a[k];
    b[0] *= 0.5;
    d.a.assign(b.begin(), b.begin() + n);
    return d;
  }

  double eval(double x) const {
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = a.size(); k-- > 1;) {
      const double b0 = 2.0 * x * b1 - b2 + a[k];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + a[0];
  }
};

std::vector<double> cheb_lobatto(int M) {
  std::vector<double> x(M + 1);
  for (int k = 0; k <= M; ++k) x[k] = std::cos(k * M_PI / M);
  return x;
}

Eigen::MatrixXd cheb_diff_matrix(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  const int M = n - 1;
  Eigen::MatrixXd D(n, n);
  auto c = [&](int i) { return (i == 0 || i == M) ? 2.0 : 1.0; };
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (c(i) / c(j)) * ((i + j) % 2 == 0 ? 1.0 : -1.0) / (x[i] - x[j]);
      row += D(i, j);
    }
    D(i, i) = -row;
  }
  return D;
}

/// Collocation solve of (1-x^2) f'' - 4 x f' + E f = 0 with f(x=1) = 1 and
/// the regular endpoint condition 4 f'(-1) + E f(-1) = 0.
std::vector<double> vertex_collocation(int N, int M = 128) {
  const double E = (N + 1.0) * (N + 4.0);
  const auto x = cheb_lobatto(M);
  const Eigen::MatrixXd D = cheb_diff_matrix(x);
  const Eigen::MatrixXd D2 = D * D;
  const int n = M + 1;
  Eigen::MatrixXd L(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      L(i, j) = (1.0 - x[i] * x[i]) * D2(i, j) - 4.0 * x[i] * D(i, j);
    L(i, i) += E;
  }
  // x[0] = 1: normalization; x[M] = -1: regular series condition.
  L.row(0).setZero();
  L(0, 0) = 1.0;
  rhs[0] = 1.0;
  L.row(M) = 4.0 * D.row(M);
  L(M, M) += E;
  rhs[M] = 0.0;
  Eigen::VectorXd f = L.colPivHouseholderQr().solve(rhs);
  return std::vector<double>(f.data(), f.data() + n);
}

/// Barycentric evaluation on Lobatto nodes.
double bary_eval(const std::vector<double>& x, const std::vector<double>& f, double xv) {
  const int M = static_cast<int>(x.size()) - 1;
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= M; ++k) {
    if (std::abs(xv - x[k]) < 1e-14) return f[k];
    double w = (k % 2 == 0 ? 1.0 : -1.0);
    if (k == 0 || k == M) w *= 0.5;
    const double r = w / (xv - x[k]);
    num += r * f[k];
    den += r;
  }
  return num / den;
}

double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  double s = y[0] + y[n - 1];
  for (std::size_t i = 1; i + 1 < n; ++i) s += y[i] * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

VertexModeSolution vertex_mode(int N, int grid_points) {
  if (N < 0) fail(ErrorKind::BadArgument, "vertex_mode: N must be >= 0");
  if (grid_points % 2 != 0) ++grid_points;
  const double E = (N + 1.0) * (N + 4.0);
  const double parity = (N % 2 == 0) ? -1.0 : +1.0;  // f(pi - theta) = parity * f(theta)

  // Shoot from the regular Frobenius start f = 1 - E theta^2 / 8.
  const double eps = 1e-6;
  auto rhs = [E](const std::vector<double>& y, std::vector<double>& d) {
    // theta carried as y[2]
    const double ct = std::cos(y[2]), st = std::sin(y[2]);
    d[0] = y[1];
    d[1] = -3.0 * (ct / st) * y[1] - E * y[0];
    d[2] = 1.0;
  };
  OdeOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-13;
  opts.max_step = M_PI / 1024.0;
  opts.initial_step = 1e-5;
  Dopri5 solver(rhs, opts);
  auto nodes = solver.integrate(eps, {1.0 - E * eps * eps / 8.0, -E * eps / 4.0, eps}, M_PI / 2.0);
  auto second = [E](const OdeNode& n) {
    const double ct = std::cos(n.y[2]), st = std::sin(n.y[2]);
    const double fpp = -3.0 * (ct / st) * n.y[1] - E * n.y[0];
    const double fppp =
        -3.0 * (ct / st) * fpp + 3.0 / (st * st) * n.y[1] - E * n.y[1];
    return std::vector<double>{fpp, fppp, 0.0};
  };
  DenseTrajectory dense(std::move(nodes), second);

  // Far boundary condition at pi/2 by parity.
  const double f_mid = dense.value(M_PI / 2.0, 0);
  const double fp_mid = dense.value(M_PI / 2.0, 1);
  const double defect = (parity < 0.0) ? std::abs(f_mid) : std::abs(fp_mid);
  if (defect > 1e-7)
    fail(ErrorKind::NoSolution,
         "vertex_mode: shooting misses the far boundary condition (defect " +
             std::to_string(defect) + ")");

  VertexModeSolution sol;
  sol.N = N;
  const int M = grid_points;
  sol.theta.resize(M + 1);
  sol.f.resize(M + 1);
  sol.g.resize(M + 1);
  auto eval_f = [&](double th) {
    if (th < eps) return 1.0 - E * th * th / 8.0;
    return dense.value(th, 0);
  };
  auto eval_fp = [&](double th) {
    if (th < eps) return -E * th / 4.0;
    return dense.value(th, 1);
  };
  for (int k = 0; k <= M; ++k) {
    const double th = M_PI * k / M;
    sol.theta[k] = th;
    if (th <= M_PI / 2.0) {
      sol.f[k] = eval_f(th);
      sol.g[k] = eval_fp(th) / (N + 4.0);
    } else {
      sol.f[k] = parity * eval_f(M_PI - th);
      sol.g[k] = -parity * eval_fp(M_PI - th) / (N + 4.0);
    }
  }

  // Cross-check against collocation (barycentric resample onto the grid).
  {
    const int Mc = 128;
    const auto xc = cheb_lobatto(Mc);
    const auto fc = vertex_collocation(N, Mc);
    double gap = 0.0;
    for (int k = 0; k <= M; k += 8) {
      const double xv = std::cos(sol.theta[k]);
      gap = std::max(gap, std::abs(bary_eval(xc, fc, xv) - sol.f[k]));
    }
    sol.shoot_colloc_gap = gap;
    if (gap > 1e-7)
      fail(ErrorKind::NoSolution, "vertex_mode: shooting and collocation disagree");
  }

  // Spectral residual of the solved mode: fit a Chebyshev series on Lobatto
  // samples of f(theta(x)) and apply (1-x^2) f'' - 4 x f' + E f.
  {
    const int Mr = 256;
    std::vector<double> samples(Mr + 1);
    for (int k = 0; k <= Mr; ++k) {
      const double th = k * M_PI / Mr;
      samples[k] = th <= M_PI / 2.0 ? eval_f(th) : parity * eval_f(M_PI - th);
    }
    const ChebSeries s = ChebSeries::from_samples(samples);
    const ChebSeries d1 = s.derivative();
    const ChebSeries d2 = d1.derivative();
    double worst = 0.0;
    for (int k = 1; k < Mr; ++k) {
      const double xv = std::cos(k * M_PI / Mr);
      const double r = (1.0 - xv * xv) * d2.eval(xv) - 4.0 * xv * d1.eval(xv) + E * s.eval(xv);
      worst = std::max(worst, std::abs(r) / E);
    }
    sol.eigen_residual = worst;
  }

  // zeros of f_theta: both endpoints plus interior sign changes of g
  {
    int zeros = 2;
    double gmax = 0.0;
    for (double gv : sol.g) gmax = std::max(gmax, std::abs(gv));
    double prev = 0.0;
    bool have_prev = false;
    for (int k = 1; k < M; ++k) {
      const double gv = sol.g[k];
      if (std::abs(gv) < 1e-9 * gmax) continue;
      if (have_prev && (gv > 0.0) != (prev > 0.0)) ++zeros;
      prev = gv;
      have_prev = true;
    }
    sol.f_theta_zero_count = zeros;
  }
  return sol;
}

double mode_orthogonality(const VertexModeSolution& a, const VertexModeSolution& b) {
  if (a.theta.size() != b.theta.size())
    fail(ErrorKind::BadArgument, "mode_orthogonality: grids differ");
  const std::size_t n = a.theta.size();
  const double h = M_PI / (n - 1);
  std::vector<double> w(n), na(n), nb(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s3 = std::pow(std::sin(a.theta[k]), 3);
    const double fa = a.g[k] * (a.N + 4.0);
    const double fb = b.g[k] * (b.N + 4.0);
    w[k] = fa * fb * s3;
    na[k] = fa * fa * s3;
    nb[k] = fb * fb * s3;
  }
  const double norm = std::sqrt(simpson(na, h) * simpson(nb, h));
  return simpson(w, h) / norm;
}

double mode_sin4_moment(const VertexModeSolution& m) {
  const std::size_t n = m.theta.size();
  const double h = M_PI / (n - 1);
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k)
    w[k] = m.g[k] * (m.N + 4.0) * std::pow(std::sin(m.theta[k]), 4);
  return simpson(w, h);
}

}  // namespace phc
