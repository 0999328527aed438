#pragma once

#include <optional>

#include "phclab/types.hpp"

namespace phc {

/// The model 2-form
///   omega = dt ^ (x dx + y dy - 2 z dz) + x dy^dz - y dx^dz - 2 z dx^dy,
/// closed and self-dual for the flat product metric; it vanishes exactly on
/// the circle Z = {x = y = z = 0}.
TwoFormValue omega_at(const CartesianPoint4& p);

/// The compatible almost complex structure off Z, as a matrix acting on
/// (d/dt, d/dx, d/dy, d/dz) components.  Satisfies J*J = -I and
/// omega(J v, w) = g <v, w>_flat.  Throws SingularPoint on Z.
Eigen::Matrix4d jay_at(const CartesianPoint4& p);

/// | omega(J v, w) / g - <v, w>_flat |.  The combination omega(J., .) / g
/// (equivalently sqrt(2) omega(J., .) / |omega|) reproduces the flat product
/// metric; this returns the defect.  Throws SingularPoint on Z.
double compatibility_residual(const CartesianPoint4& p, const TangentVector4& v,
                              const TangentVector4& w);

/// f = (x^2 + y^2 - 2 z^2) / 2 and h = z (x^2 + y^2); in the coordinates
/// (t, f, h, phi) the form reads omega = dt^df + dphi^dh.
double f_coord(const CartesianPoint4& p);
double h_coord(const CartesianPoint4& p);

/// Differentials of the coordinate functions, in Cartesian components.
OneFormValue dt_form();
OneFormValue df_at(const CartesianPoint4& p);
OneFormValue dh_at(const CartesianPoint4& p);
/// dphi = (x dy - y dx) / rho^2; throws AxisPoint at rho = 0.
OneFormValue dphi_at(const CartesianPoint4& p);

/// (t, f, h, phi, rho, g) at p.  phi is flagged rather than invented on the
/// rho = 0 axis.
ActionCoords to_action_coords(const CartesianPoint4& p,
                              double circle_length = kDefaultCircleLength);

/// Inverse of to_action_coords away from the axis; uses (f, rho) to pin z^2
/// and the sign of h to pin the sign of z.
CartesianPoint4 from_action_coords(const ActionCoords& a);

/// The primitive theta = (t df - 2 f dt - 3 h dphi) / 3 of omega, expanded in
/// Cartesian components:
///   theta = ( -2 f dt + (t x + 3 y z) dx + (t y - 3 x z) dy - 2 t z dz ) / 3.
/// Requires rho > 0 (the dphi term); t enters through its centered circle
/// representative.
OneFormValue theta_at(const CartesianPoint4& p, double circle_length = kDefaultCircleLength);

/// || d theta - omega || with d theta computed from the hand-differentiated
/// polynomial coefficients of theta_at.  Identically zero in exact
/// arithmetic.
double dtheta_check(const CartesianPoint4& p);

/// Residual of the norm identity
///   t^2 |df|^2 + 4 f^2 |dt|^2 + 9 h^2 |dphi|^2 = (t^2 + rho^2 + z^2) g^2,
/// which holds on all of S^1 x R^3 (the |dphi|^2 term extends by continuity
/// across the axis).
double norm_identity_residual(const CartesianPoint4& p,
                              double circle_length = kDefaultCircleLength);

/// Pointwise check that dt^df + dphi^dh assembled by the chain rule equals
/// omega_at(p); returns the Frobenius norm of the difference.
double action_form_residual(const CartesianPoint4& p);

}  // namespace phc
