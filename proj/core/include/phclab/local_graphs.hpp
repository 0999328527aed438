#pragma once

#include <vector>

#include "phclab/surfaces.hpp"

namespace phc {

/// Inversion radius of nu = (1 + 2 w^2) w with w = z/u, at |z|/rho = 1/4
/// (w^2 = 1/14): the graph description applies for |nu| below this.
inline double kappa_nu_max() { return 8.0 / (7.0 * std::sqrt(14.0)); }

struct Kappas {
  double w = 0.0;       // z/u recovered from nu
  double kappa1 = 0.0;  // rho^2/u^2 - 1  = 2 w^2
  double kappa2 = 0.0;  // g^2 rho^2/u^4 - 1 = 8 w^2 + 12 w^4
};

/// Exact algebraic functionals of nu (from u^2 = rho^2 - 2 z^2 and
/// g^2 = rho^2 + 4 z^2; no series truncation): invert nu = (1 + 2 w^2) w by
/// Newton, then kappa1 = 2 w^2, kappa2 = 8 w^2 + 12 w^4.  Throws OutOfRadius
/// beyond |nu| = kappa_nu_max().
Kappas kappas(double nu);

/// Multi-sheet graph data over a rectangular (t, u) grid, u > 0.  Per sheet,
/// phi is unwrapped (continuous) and nu = h / u^3.
struct GraphGrid {
  std::vector<double> t;
  std::vector<double> u;
  struct Sheet {
    std::vector<std::vector<double>> phi;  // [it][iu]
    std::vector<std::vector<double>> nu;
  };
  std::vector<Sheet> sheets;

  double dt() const { return t[1] - t[0]; }
  double du() const { return u[1] - u[0]; }
  /// sup over the grid of |nu| / u (the linear-bound constant of the graph
  /// estimate sup |nu_j| <= c u).
  double nu_over_u_bound() const;
};

/// Centered finite-difference residuals of the first-order systems
///   h_u = rho^2 u phi_t,   h_t = -g^2 rho^2 u^{-1} phi_u        (order 1a)
///   nu_u + 3 nu/u - (1 + kappa1) phi_t = 0,
///   nu_t + (1 + kappa2) phi_u = 0                               (order 1b)
/// and of the divergence-form second-order equations
///   ((1+kappa1)^{-1} (nu_u + 3 nu/u))_u + ((1+kappa2)^{-1} nu_t)_t = 0
///   u^{-3} ((1+kappa2) u^3 phi_u)_u + ((1+kappa1) phi_t)_t = 0.
/// All are evaluated on interior nodes; truncation is O(h^2) on exact data.
ResidualReport residual_8_1(const GraphGrid& grid);
ResidualReport residual_8_3(const GraphGrid& grid);
ResidualReport residual_8_5(const GraphGrid& grid);
ResidualReport residual_8_26(const GraphGrid& grid);

/// Read a multi-sheet graph off a surface: for every grid node solve
/// surface(s1, s2) = (t, u) by seeded Newton (u = sqrt(2 f)).  The root
/// count must equal `sheets_expected` at every node (SheetCountMismatch
/// otherwise); sheets are continued by nearest-phi matching and unwrapped,
/// with FoldDetected on jumps above pi/2.
GraphGrid extract_graph(const Surface& surface, double t_lo, double t_hi, double u_lo,
                        double u_hi, int nt, int nu, int sheets_expected, int seeds = 96);

struct TaylorFitReport {
  // per sheet, per interior t-column
  std::vector<std::vector<double>> phi0;    // fitted phi(t, 0)
  std::vector<std::vector<double>> c_phi;   // u^2 coefficient of phi
  std::vector<std::vector<double>> c_nu;    // u coefficient of nu
  std::vector<std::vector<double>> phi0_p;  // phi0'(t)
  std::vector<std::vector<double>> phi0_pp; // phi0''(t)
  double max_cphi_defect = 0.0;   // sup |c_phi + phi0''/8|
  double err_phi_prime = 0.0;     // sup |4 c_nu - phi0'|
  double err_phi_dblprime = 0.0;  // sup |4 c_nu - phi0''|
  /// err_phi_prime / err_phi_dblprime (small iff the z = phi0' rho^2 / 4 law
  /// matches, as Example 1.7 forces; both comparisons are always reported).
  double law_ratio = 0.0;
};

/// Least-squares Taylor coefficients per t-column: phi ~ phi0 + c_phi u^2
/// (+u^4), nu ~ c_nu u (+u^3); phi0 derivatives by 4th-order differences.
/// Requires the grid to reach u <= 0.01.
TaylorFitReport taylor_fit(const GraphGrid& grid);

/// Solution of the vertex-model angular problem
///   sin^{-3}(theta) (sin^3(theta) f_theta)_theta + (N+1)(N+4) f = 0,
///   f_theta(0) = f_theta(pi) = 0,  f(0) = 1,  g = f_theta / (N + 4),
/// by shooting from a Frobenius start, cross-checked against Chebyshev
/// collocation in x = cos(theta).
struct VertexModeSolution {
  int N = 0;
  std::vector<double> theta;  // uniform grid on [0, pi]
  std::vector<double> f;
  std::vector<double> g;
  double eigen_residual = 0.0;       // spectral residual of the ODE
  double shoot_colloc_gap = 0.0;     // max |f_shoot - f_colloc|
  int f_theta_zero_count = 0;        // zeros of f_theta on [0, pi]
};

VertexModeSolution vertex_mode(int N, int grid_points = 4096);

/// int_0^pi f_theta^(N) f_theta^(N') sin^3(theta) dtheta with each factor
/// normalized to unit L^2(sin^3) norm; diagonal entries are 1.
double mode_orthogonality(const VertexModeSolution& a, const VertexModeSolution& b);

/// int_0^pi f_theta sin^4(theta) dtheta (vanishes for N > 0).
double mode_sin4_moment(const VertexModeSolution& m);

}  // namespace phc
