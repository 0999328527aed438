// phc-lab: command-line front end for the S^1 x B^3 pseudo-holomorphic
// geometry toolkit.  Subcommands: period, surface, verify, energy, limit,
// graph, vertex, identities.  Exit code 0 iff all checked contracts hold,
// 1 on a contract failure, 2 on usage errors.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "phclab/cone.hpp"
#include "phclab/energetics.hpp"
#include "phclab/geometry.hpp"
#include "phclab/limits.hpp"
#include "phclab/local_graphs.hpp"
#include "phclab/parallel.hpp"
#include "phclab/run_config.hpp"
#include "phclab/surfaces.hpp"

using nlohmann::json;
using namespace phc;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvFile {
 public:
  CsvFile(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) fail(ErrorKind::BadArgument, "cannot open output file " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
      out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }
  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) out_ << (i ? "," : "") << fmt(vals[i]);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

struct FamilyOptions {
  std::string family = "e13";
  double nu = 0.0;       // e13 ray angle
  int sign = +1;         // e14 / e15 / e16c
  int a = 6, b = 7;      // e15 rational period target
  double t0 = 0.0;       // e15 vertex / e16 levels
  double cst = 0.0;      // e16 first level
  double cst2 = 0.0;     // e16 second level
  int q = 2, p = 1;      // e17
  double alpha = 0.0;    // e17 phase
  double s_min = 1e-3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "e13|e14|e15|e16a|e16b|e16c|e17")->required();
    cmd->add_option("--nu", nu, "e13: ray angle in the (x,y) plane");
    cmd->add_option("--sign", sign, "e14/e15/e16c: +1 or -1 branch");
    cmd->add_option("--a", a, "e15: period numerator, T = 2 pi a / b");
    cmd->add_option("--b", b, "e15: period denominator");
    cmd->add_option("--t0", t0, "e15: vertex circle coordinate / e16: t level");
    cmd->add_option("--cst", cst, "e16: first level (phi or t)");
    cmd->add_option("--cst2", cst2, "e16: second level (h or f)");
    cmd->add_option("--q", q, "e17: circle winding");
    cmd->add_option("--p", p, "e17: angular winding");
    cmd->add_option("--alpha", alpha, "e17: phase");
    cmd->add_option("--smin", s_min, "lower bound of the radial parameter");
  }

  SurfacePtr build(const RunConfig& cfg) const {
    const double L = cfg.circle_length;
    if (family == "e13") return make_e13(nu, s_min, L);
    if (family == "e14") return make_e14(sign, s_min, L);
    if (family == "e15") return make_e15(ConeSolution(a, b), sign, t0, s_min, 1.0, L);
    if (family == "e16a") return make_e16(E16Variant::PhiH, cst, cst2, sign, L);
    if (family == "e16b") return make_e16(E16Variant::TF, cst, cst2, sign, L);
    if (family == "e16c") return make_e16(E16Variant::TFDisk, cst, cst2, sign, L);
    if (family == "e17") return make_e17(q, p, alpha, s_min, L);
    fail(ErrorKind::BadArgument, "unknown family '" + family + "'");
  }
};

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

// ---------------------------------------------------------------------------

int cmd_identities(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(-0.45, 0.45);
  std::uniform_real_distribution<double> comp(-1.0, 1.0);
  const int n = 10000;
  double worst_wedge = 0.0, worst_jj = 0.0, worst_compat = 0.0, worst_norm = 0.0,
         worst_dtheta = 0.0, worst_action = 0.0;
  for (int i = 0; i < n; ++i) {
    CartesianPoint4 pt{coord(rng), coord(rng), coord(rng), coord(rng)};
    if (pt.g_norm() < 0.05) {
      --i;
      continue;
    }
    const TwoFormValue w = omega_at(pt);
    worst_wedge =
        std::max(worst_wedge, std::abs(w.wedge_square_coeff() - 2.0 * pt.g_sq()));
    const Eigen::Matrix4d J = jay_at(pt);
    worst_jj = std::max(worst_jj, (J * J + Eigen::Matrix4d::Identity()).norm());
    TangentVector4 v{comp(rng), comp(rng), comp(rng), comp(rng)};
    TangentVector4 u{comp(rng), comp(rng), comp(rng), comp(rng)};
    worst_compat = std::max(worst_compat, compatibility_residual(pt, v, u));
    worst_norm = std::max(worst_norm, norm_identity_residual(pt));
    worst_dtheta = std::max(worst_dtheta, dtheta_check(pt));
    worst_action = std::max(worst_action, action_form_residual(pt));
  }
  const double tol = 1e-12;
  json rep = {{"samples", n},
              {"wedge_square", worst_wedge},
              {"j_squared", worst_jj},
              {"compatibility", worst_compat},
              {"norm_identity", worst_norm},
              {"dtheta_minus_omega", worst_dtheta},
              {"action_coordinates_form", worst_action},
              {"tolerance", tol}};
  const bool ok = worst_wedge < tol && worst_jj < tol && worst_compat < tol &&
                  worst_norm < tol && worst_dtheta < 1e-13 && worst_action < tol;
  rep["pass"] = ok;
  if (cfg.json) {
    std::cout << rep.dump(2) << "\n";
  } else {
    std::cout << "identity suite over " << n << " points:\n"
              << "  omega wedge coefficient  " << fmt(worst_wedge) << "\n"
              << "  J*J + I                  " << fmt(worst_jj) << "\n"
              << "  compatibility            " << fmt(worst_compat) << "\n"
              << "  norm identity            " << fmt(worst_norm) << "\n"
              << "  d(theta) - omega         " << fmt(worst_dtheta) << "\n"
              << "  action-coordinate form   " << fmt(worst_action) << "\n"
              << (ok ? "PASS" : "FAIL") << " (tolerance " << tol << ")\n";
  }
  return ok ? 0 : 1;
}

int cmd_period(const RunConfig& cfg, double c_opt, int scan_n, std::vector<int> rational) {
  if (!rational.empty()) {
    const int a = rational[0], b = rational[1];
    const ConeParam c = find_c_for_period(a, b);
    const double target = 2.0 * M_PI * a / b;
    const double t_ode = period_from_ode(c).value;
    json rep = {{"a", a},          {"b", b},      {"target", target},
                {"c", c.c},        {"T_ode", t_ode}, {"residual", std::abs(t_ode - target)}};
    if (cfg.json)
      std::cout << rep.dump(2) << "\n";
    else
      std::cout << "c = " << fmt(c.c) << "  T_ode = " << fmt(t_ode) << "  target = "
                << fmt(target) << "  residual = " << fmt(std::abs(t_ode - target)) << "\n";
    return std::abs(t_ode - target) < 1e-6 ? 0 : 1;
  }
  if (scan_n > 0) {
    // independent c values: solve in parallel, write from a single pass
    std::vector<std::array<double, 4>> rows(scan_n);
    const double c_lo = 1e-3, c_hi = cone_c_max() - 1e-6;
    parallel_for(scan_n, [&](std::size_t i) {
      const double c = c_lo + (c_hi - c_lo) * i / (scan_n - 1);
      const PeriodResult q = half_period_quad(ConeParam(c), cfg.quad_tol);
      OdeOptions opts;
      opts.abs_tol = opts.rel_tol = cfg.ode_tol;
      const PeriodResult o = period_from_ode(ConeParam(c), opts);
      rows[i] = {c, 2.0 * q.value, o.value, std::abs(2.0 * q.value - o.value)};
    });
    CsvFile csv(out_path(cfg, "periods.csv"), {"c", "T_quad", "T_ode", "err"});
    double worst = 0.0;
    for (const auto& r : rows) {
      csv.row({r[0], r[1], r[2], r[3]});
      worst = std::max(worst, r[3]);
    }
    std::cout << "scan of " << scan_n
              << " c values written to periods.csv, max |T_quad - T_ode| = " << fmt(worst)
              << "\n";
    return worst < 1e-6 ? 0 : 1;
  }
  const ConeParam c(c_opt);
  const PeriodResult q = half_period_quad(c, cfg.quad_tol);
  json rep = {{"c", c.c},
              {"half_period", q.value},
              {"period", 2.0 * q.value},
              {"err", q.error_estimate},
              {"endpoint_degenerate", q.endpoint_degenerate}};
  if (!q.endpoint_degenerate) {
    const double alpha = cone_c_max() - c.c;
    rep["series"] = period_series(alpha).value;
    rep["T_ode"] = period_from_ode(c).value;
  }
  if (cfg.json)
    std::cout << rep.dump(2) << "\n";
  else
    std::cout << "c = " << fmt(c.c) << "  T = " << fmt(2.0 * q.value)
              << (q.endpoint_degenerate ? "  (analytic endpoint limit)" : "") << "\n";
  return 0;
}

int cmd_surface(const RunConfig& cfg, const FamilyOptions& fam, const std::string& out,
                bool frames) {
  SurfacePtr surf = fam.build(cfg);
  std::vector<std::string> header = {"s1", "s2", "t", "x", "y", "z"};
  if (frames)
    for (const char* nm : {"t1t", "t1x", "t1y", "t1z", "t2t", "t2x", "t2y", "t2z"})
      header.push_back(nm);
  CsvFile csv(out.empty() ? out_path(cfg, fam.family + ".csv") : out, header);
  const int n1 = cfg.grid_n1, n2 = cfg.grid_n2;
  for (int i = 0; i < n1; ++i) {
    const double s1 = surf->s1_min() +
                      (surf->s1_max() - surf->s1_min()) * (i + 0.5) / n1;
    for (int j = 0; j < n2; ++j) {
      const double s2 =
          surf->s2_min() + (surf->s2_max() - surf->s2_min()) * j / (n2 - 1);
      const SurfaceSample s = surf->eval(s1, s2);
      std::vector<double> row = {s1, s2, s.p.t, s.p.x, s.p.y, s.p.z};
      if (frames)
        for (int k = 0; k < 4; ++k) row.push_back(s.t1[k]);
      if (frames)
        for (int k = 0; k < 4; ++k) row.push_back(s.t2[k]);
      csv.row(row);
    }
  }
  std::cout << "wrote " << n1 * n2 << " samples\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg, const FamilyOptions& fam) {
  SurfacePtr surf = fam.build(cfg);
  const ResidualReport rep = holomorphy_residual(*surf, cfg.grid_n1, cfg.grid_n2);
  const ResidualReport frame = frame_consistency(*surf);
  const bool ok = rep.max_residual < cfg.residual_tol && frame.max_residual < 1e-6;
  json j = {{"family", fam.family},
            {"max_residual", rep.max_residual},
            {"mean_residual", rep.mean_residual},
            {"worst_s1", rep.worst_s1},
            {"worst_s2", rep.worst_s2},
            {"frame_consistency", frame.max_residual},
            {"tolerance", cfg.residual_tol},
            {"pass", ok}};
  if (cfg.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << fam.family << ": holomorphy residual max " << fmt(rep.max_residual)
              << " mean " << fmt(rep.mean_residual) << " (tol " << fmt(cfg.residual_tol)
              << ") -> " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

int cmd_energy(const RunConfig& cfg, const FamilyOptions& fam, double center, bool smooth,
               double s_lo, double s_hi, int ns) {
  SurfacePtr surf = fam.build(cfg);
  std::vector<double> grid(ns);
  for (int i = 0; i < ns; ++i) grid[i] = s_lo + (s_hi - s_lo) * i / (ns - 1);
  IntegrateOptions opts;
  opts.columns = cfg.energy_columns;
  const EnergyReport rep =
      sigma_profile(*surf, center, grid, smooth ? Cutoff::Smooth : Cutoff::Sharp, opts);
  const MuReport mu = mu_profile(*surf, grid, 0.125, opts);
  CsvFile csv(out_path(cfg, "energy_" + fam.family + ".csv"),
              {"s", "sigma", "sigma_scaled", "mu", "mu_scaled", "err"});
  for (int i = 0; i < ns; ++i)
    csv.row({grid[i], rep.sigma[i], rep.scaled[i], mu.mu[i], mu.scaled[i],
             rep.error[i] + mu.error[i]});
  std::cout << "sigma/s^3 monotone: " << (rep.monotone ? "yes" : "no")
            << ", sup sigma/s^3 = " << fmt(rep.zeta_sigma)
            << ", sup mu/s^3 = " << fmt(mu.sup_scaled) << "\n";
  return rep.monotone ? 0 : 1;
}

int cmd_limit(const RunConfig& cfg, const FamilyOptions& fam, double t0) {
  SurfacePtr surf = fam.build(cfg);
  const LimitData d = classify_limit(surf, t0);
  json j = {{"p", d.p},
            {"q_plus", d.q_plus},
            {"q_minus", d.q_minus},
            {"n_plus", d.n_plus},
            {"n_minus", d.n_minus},
            {"cone_constants", d.cone_constants},
            {"s_used", d.s_used},
            {"dK_sequence", d.dk_sequence},
            {"linking_count", d.linking_count},
            {"scale_stable", d.scale_stable}};
  std::cout << j.dump(2) << "\n";
  const bool ok = d.scale_stable && d.linking_count == d.p - d.q_plus - d.q_minus;
  return ok ? 0 : 1;
}

struct GraphWindow {
  double t_lo = 0.05, t_hi = 0.45;
  double u_lo = 0.01, u_hi = 0.10;
};

int cmd_graph(const RunConfig& cfg, const FamilyOptions& fam, int nt, int nu, int sheets,
              const GraphWindow& win) {
  SurfacePtr surf = fam.build(cfg);
  if (sheets <= 0) sheets = fam.family == "e17" ? fam.q : 1;
  const GraphGrid g = extract_graph(*surf, win.t_lo, win.t_hi, win.u_lo, win.u_hi, nt, nu, sheets);
  CsvFile csv(out_path(cfg, "graph_" + fam.family + ".csv"), {"t", "u", "sheet", "phi", "nu"});
  for (std::size_t k = 0; k < g.sheets.size(); ++k)
    for (std::size_t i = 0; i < g.t.size(); ++i)
      for (std::size_t j = 0; j < g.u.size(); ++j)
        csv.row({g.t[i], g.u[j], double(k), g.sheets[k].phi[i][j], g.sheets[k].nu[i][j]});
  const ResidualReport r1 = residual_8_1(g), r3 = residual_8_3(g), r5 = residual_8_5(g),
                       r26 = residual_8_26(g);
  json j = {{"sheets", g.sheets.size()},
            {"nu_over_u", g.nu_over_u_bound()},
            {"residual_first_order_h", r1.max_residual},
            {"residual_first_order_nu", r3.max_residual},
            {"residual_second_order_nu", r5.max_residual},
            {"residual_second_order_phi", r26.max_residual}};
  if (g.u.front() <= 0.01) {
    const TaylorFitReport fit = taylor_fit(g);
    j["taylor_err_phi_prime"] = fit.err_phi_prime;
    j["taylor_err_phi_dblprime"] = fit.err_phi_dblprime;
    j["taylor_law_ratio"] = fit.law_ratio;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_vertex(const RunConfig& cfg, int N) {
  const VertexModeSolution m = vertex_mode(N);
  CsvFile csv(out_path(cfg, "vertex_N" + std::to_string(N) + ".csv"), {"theta", "f", "g"});
  for (std::size_t k = 0; k < m.theta.size(); ++k) csv.row({m.theta[k], m.f[k], m.g[k]});
  const bool ok = m.eigen_residual < 1e-8;
  if (cfg.json) {
    json j = {{"N", N},
              {"eigen_residual", m.eigen_residual},
              {"shooting_vs_collocation", m.shoot_colloc_gap},
              {"f_theta_zero_count", m.f_theta_zero_count},
              {"pass", ok}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "N = " << N << ": residual " << fmt(m.eigen_residual) << ", shooting vs collocation "
              << fmt(m.shoot_colloc_gap) << ", f_theta zeros " << m.f_theta_zero_count << " -> "
              << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-holomorphic geometry lab on S^1 x B^3"};
  app.require_subcommand(1);

  std::string config_file;
  RunConfig cfg;
  bool json_flag = false;
  app.add_option("--config", config_file, "flat key=value configuration file");
  app.add_flag("--json", json_flag, "machine-readable diagnostics");
  auto* out_opt = app.add_option("--out", cfg.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", cfg.seed, "seed for random sample points");
  auto* threads_opt = app.add_option("--threads", cfg.threads, "worker thread cap");

  // period
  auto* period = app.add_subcommand("period", "cone oscillator periods");
  double c_opt = 0.2;
  int scan_n = 0;
  std::vector<int> rational;
  period->add_option("--c", c_opt, "single parameter value");
  period->add_option("--scan", scan_n, "emit an N-point period table");
  period->add_option("--rational", rational, "a b: solve T(c) = 2 pi a / b")->expected(2);

  // surface
  auto* surface = app.add_subcommand("surface", "sample a family to CSV");
  FamilyOptions fam_surface;
  fam_surface.attach(surface);
  std::string surface_out;
  bool frames = false;
  surface->add_option("--out-file", surface_out, "CSV path (default <family>.csv)");
  surface->add_flag("--frames", frames, "append tangent frame columns");

  // verify
  auto* verify = app.add_subcommand("verify", "holomorphy residual report");
  FamilyOptions fam_verify;
  fam_verify.attach(verify);

  // energy
  auto* energy = app.add_subcommand("energy", "local energy and mu profiles");
  FamilyOptions fam_energy;
  fam_energy.attach(energy);
  double center = 0.0, s_lo = 0.1, s_hi = 0.45;
  int ns = 8;
  bool smooth = false;
  energy->add_option("--center", center, "profile center t0 on the circle");
  energy->add_flag("--smooth", smooth, "smooth cutoff instead of the sharp ball");
  energy->add_option("--s-lo", s_lo, "profile grid start");
  energy->add_option("--s-hi", s_hi, "profile grid end");
  energy->add_option("--ns", ns, "profile grid size");

  // limit
  auto* limit = app.add_subcommand("limit", "dilation limit classification");
  FamilyOptions fam_limit;
  fam_limit.attach(limit);  // --t0 doubles as the classification center

  // graph
  auto* graph = app.add_subcommand("graph", "(t,u) graph extraction and residuals");
  FamilyOptions fam_graph;
  fam_graph.attach(graph);
  int nt = 64, nu = 64, sheets = 0;
  GraphWindow win;
  graph->add_option("--grid-t", nt, "grid size in t");
  graph->add_option("--grid-u", nu, "grid size in u");
  graph->add_option("--sheets", sheets, "expected sheet count (default: family)");
  graph->add_option("--t-lo", win.t_lo, "window start in t");
  graph->add_option("--t-hi", win.t_hi, "window end in t");
  graph->add_option("--u-lo", win.u_lo, "window start in u");
  graph->add_option("--u-hi", win.u_hi, "window end in u");

  // vertex
  auto* vertex = app.add_subcommand("vertex", "vertex-model eigenfunction");
  int N = 0;
  vertex->add_option("--N", N, "mode index")->required();

  // identities
  app.add_subcommand("identities", "geometry identity suite at random points");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (!config_file.empty()) {
      const RunConfig file_cfg = RunConfig::from_file(config_file);
      const std::string out_dir = cfg.out_dir;
      const auto seed = cfg.seed;
      const int threads = cfg.threads;
      cfg = file_cfg;
      if (out_opt->count()) cfg.out_dir = out_dir;
      if (seed_opt->count()) cfg.seed = seed;
      if (threads_opt->count()) cfg.threads = threads;
    }
    cfg.json = cfg.json || json_flag;
    if (cfg.threads > 0) setenv("PHC_LAB_THREADS", std::to_string(cfg.threads).c_str(), 1);

    if (period->parsed()) return cmd_period(cfg, c_opt, scan_n, rational);
    if (surface->parsed()) return cmd_surface(cfg, fam_surface, surface_out, frames);
    if (verify->parsed()) return cmd_verify(cfg, fam_verify);
    if (energy->parsed()) return cmd_energy(cfg, fam_energy, center, smooth, s_lo, s_hi, ns);
    if (limit->parsed()) return cmd_limit(cfg, fam_limit, fam_limit.t0);
    if (graph->parsed()) return cmd_graph(cfg, fam_graph, nt, nu, sheets, win);
    if (vertex->parsed()) return cmd_vertex(cfg, N);
    return cmd_identities(cfg);
  } catch (const Error& e) {
    json diag = {{"error", e.what()}};
    std::cerr << (cfg.json ? diag.dump() : std::string(e.what())) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
