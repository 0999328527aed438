#include "phclab/geometry.hpp"

namespace phc {

TwoFormValue omega_at(const CartesianPoint4& p) {
  TwoFormValue w;
  w.set(0, 1, p.x);
  w.set(0, 2, p.y);
  w.set(0, 3, -2.0 * p.z);
  w.set(2, 3, p.x);
  w.set(1, 3, -p.y);
  w.set(1, 2, -2.0 * p.z);
  return w;
}

Eigen::Matrix4d jay_at(const CartesianPoint4& p) {
  const double g = p.g_norm();
  if (g == 0.0) fail(ErrorKind::SingularPoint, "jay_at: J is undefined on the vanishing circle");
  Eigen::Matrix4d J;
  const double x = p.x, y = p.y, z = p.z;
  // Columns are the images of (d/dt, d/dx, d/dy, d/dz).
  J.col(0) << 0.0, -x, -y, 2.0 * z;
  J.col(1) << x, 0.0, 2.0 * z, y;
  J.col(2) << y, -2.0 * z, 0.0, -x;
  J.col(3) << -2.0 * z, -y, x, 0.0;
  J /= g;
  return J;
}

double compatibility_residual(const CartesianPoint4& p, const TangentVector4& v,
                              const TangentVector4& w) {
  const double g = p.g_norm();
  if (g == 0.0) fail(ErrorKind::SingularPoint, "compatibility_residual: point on Z");
  const Eigen::Matrix4d J = jay_at(p);
  const TwoFormValue om = omega_at(p);
  return std::abs(om.apply(J * v, w) / g - v.dot(w));
}

double f_coord(const CartesianPoint4& p) { return 0.5 * (p.x * p.x + p.y * p.y - 2.0 * p.z * p.z); }

double h_coord(const CartesianPoint4& p) { return p.z * (p.x * p.x + p.y * p.y); }

OneFormValue dt_form() { return {1.0, 0.0, 0.0, 0.0}; }

OneFormValue df_at(const CartesianPoint4& p) { return {0.0, p.x, p.y, -2.0 * p.z}; }

OneFormValue dh_at(const CartesianPoint4& p) {
  return {0.0, 2.0 * p.z * p.x, 2.0 * p.z * p.y, p.rho_sq()};
}

OneFormValue dphi_at(const CartesianPoint4& p) {
  const double r2 = p.rho_sq();
  if (r2 == 0.0) fail(ErrorKind::AxisPoint, "dphi_at: phi undefined on the z-axis");
  return {0.0, -p.y / r2, p.x / r2, 0.0};
}

ActionCoords to_action_coords(const CartesianPoint4& p, double circle_length) {
  ActionCoords a;
  a.t = CartesianPoint4::reduce_mod(p.t, circle_length);
  a.f = f_coord(p);
  a.h = h_coord(p);
  a.rho = p.rho();
  a.g = p.g_norm();
  a.on_axis = (a.rho == 0.0);
  a.phi = a.on_axis ? 0.0 : std::atan2(p.y, p.x);
  return a;
}

CartesianPoint4 from_action_coords(const ActionCoords& a) {
  if (a.on_axis || a.rho <= 0.0)
    fail(ErrorKind::AxisPoint, "from_action_coords: phi meaningless at rho = 0");
  // f = (rho^2 - 2 z^2)/2 pins z^2; h = z rho^2 pins the sign.
  const double z_sq = 0.5 * (a.rho * a.rho - 2.0 * a.f);
  if (z_sq < -1e-12) fail(ErrorKind::OutOfRange, "from_action_coords: inconsistent (f, rho)");
  double z = std::sqrt(std::max(z_sq, 0.0));
  if (a.h < 0.0) z = -z;
  return {a.t, a.rho * std::cos(a.phi), a.rho * std::sin(a.phi), z};
}

OneFormValue theta_at(const CartesianPoint4& p, double circle_length) {
  if (p.rho_sq() == 0.0) fail(ErrorKind::AxisPoint, "theta_at: dphi term undefined at rho = 0");
  const double t = CartesianPoint4::centered_mod(p.t, circle_length);
  const double f = f_coord(p);
  return OneFormValue{-2.0 * f, t * p.x + 3.0 * p.y * p.z, t * p.y - 3.0 * p.x * p.z,
                      -2.0 * t * p.z} /
         3.0;
}

double dtheta_check(const CartesianPoint4& p) {
  // theta = (theta_t, theta_x, theta_y, theta_z)/3 with
  //   theta_t = -(x^2 + y^2 - 2 z^2), theta_x = t x + 3 y z,
  //   theta_y = t y - 3 x z,          theta_z = -2 t z,
  // differentiated coefficient by coefficient.
  const double x = p.x, y = p.y, z = p.z;
  TwoFormValue dth;
  dth.set(0, 1, (x - (-2.0 * x)) / 3.0);             // d_t theta_x - d_x theta_t
  dth.set(0, 2, (y - (-2.0 * y)) / 3.0);             // d_t theta_y - d_y theta_t
  dth.set(0, 3, (-2.0 * z - 4.0 * z) / 3.0);         // d_t theta_z - d_z theta_t
  dth.set(1, 2, (-3.0 * z - 3.0 * z) / 3.0);         // d_x theta_y - d_y theta_x
  dth.set(1, 3, (0.0 - 3.0 * y) / 3.0);              // d_x theta_z - d_z theta_x
  dth.set(2, 3, (0.0 - (-3.0 * x)) / 3.0);           // d_y theta_z - d_z theta_y
  return (dth - omega_at(p)).frobenius_norm();
}

double norm_identity_residual(const CartesianPoint4& p, double circle_length) {
  const double t = CartesianPoint4::centered_mod(p.t, circle_length);
  const double f = f_coord(p);
  const double rho_sq = p.rho_sq();
  const double g_sq = p.g_sq();
  // |df|^2 = g^2, |dt|^2 = 1, h^2 |dphi|^2 = z^2 rho^2 (continuous across the axis).
  const double lhs = t * t * g_sq + 4.0 * f * f + 9.0 * p.z * p.z * rho_sq;
  const double rhs = (t * t + rho_sq + p.z * p.z) * g_sq;
  return std::abs(lhs - rhs);
}

double action_form_residual(const CartesianPoint4& p) {
  if (p.rho_sq() == 0.0) fail(ErrorKind::AxisPoint, "action_form_residual: rho = 0");
  const OneFormValue dt = dt_form();
  const OneFormValue df = df_at(p);
  const OneFormValue dphi = dphi_at(p);
  const OneFormValue dh = dh_at(p);
  TwoFormValue w;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      w.set(i, j, dt[i] * df[j] - dt[j] * df[i] + dphi[i] * dh[j] - dphi[j] * dh[i]);
  return (w - omega_at(p)).frobenius_norm();
}

}  // namespace phc
