#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phc {

/// Circle coordinate convention: t lives on R mod L, with L = 1 by default.
/// Identities involving t as a value (the primitive theta, 4-ball radii)
/// use the representative in (-L/2, L/2] around the chosen center.
inline constexpr double kDefaultCircleLength = 1.0;

/// Tangent vector at a point of S^1 x B^3, components along
/// (d/dt, d/dx, d/dy, d/dz).
using TangentVector4 = Eigen::Vector4d;

/// A point of S^1 x B^3 in the product coordinates (t, x, y, z).
struct CartesianPoint4 {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double rho_sq() const { return x * x + y * y; }
  double rho() const { return std::sqrt(rho_sq()); }
  /// |omega| / sqrt(2) = (x^2 + y^2 + 4 z^2)^(1/2); vanishes exactly on Z.
  double g_sq() const { return x * x + y * y + 4.0 * z * z; }
  double g_norm() const { return std::sqrt(g_sq()); }
  bool on_vanishing_circle(double tol = 0.0) const { return g_sq() <= tol * tol; }

  Eigen::Vector4d as_vector() const { return {t, x, y, z}; }

  /// t reduced to [0, L).
  static double reduce_mod(double t, double circle_length = kDefaultCircleLength) {
    double r = std::fmod(t, circle_length);
    return r < 0.0 ? r + circle_length : r;
  }
  /// Signed circle distance representative in (-L/2, L/2].
  static double centered_mod(double t, double circle_length = kDefaultCircleLength) {
    double r = reduce_mod(t, circle_length);
    return r > 0.5 * circle_length ? r - circle_length : r;
  }
};

/// Value of a 2-form at a point, in the (t, x, y, z) coframe.
/// Only the upper triangle is stored so antisymmetry is exact.
class TwoFormValue {
 public:
  TwoFormValue() { c_.setZero(); }

  /// Coefficient of e_i ^ e_j  (i, j in {0..3} for (t, x, y, z)).
  double operator()(int i, int j) const {
    if (i == j) return 0.0;
    return i < j ? c_[index(i, j)] : -c_[index(j, i)];
  }
  void set(int i, int j, double v) {
    if (i == j) throw std::invalid_argument("TwoFormValue: diagonal entry");
    if (i < j)
      c_[index(i, j)] = v;
    else
      c_[index(j, i)] = -v;
  }

  /// Pairing with two tangent vectors.
  double apply(const TangentVector4& v, const TangentVector4& w) const {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) s += c_[index(i, j)] * (v[i] * w[j] - v[j] * w[i]);
    return s;
  }

  /// Coefficient of dt^dx^dy^dz in (this)^(this).
  double wedge_square_coeff() const {
    return 2.0 * ((*this)(0, 1) * (*this)(2, 3) - (*this)(0, 2) * (*this)(1, 3) +
                  (*this)(0, 3) * (*this)(1, 2));
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return std::sqrt(2.0 * s);
  }

  TwoFormValue operator-(const TwoFormValue& o) const {
    TwoFormValue r;
    for (int k = 0; k < 6; ++k) r.c_[k] = c_[k] - o.c_[k];
    return r;
  }

 private:
  static int index(int i, int j) {
    // (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
    static constexpr int lut[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return lut[i][j];
  }
  Eigen::Matrix<double, 6, 1> c_;
};

/// Value of a 1-form at a point, components along (dt, dx, dy, dz).
using OneFormValue = Eigen::Vector4d;

/// The action-type coordinates (t, f, h, phi) together with the auxiliary
/// radii rho and g.  phi is meaningless on the rho = 0 axis; `on_axis`
/// flags that case instead of inventing an angle.
struct ActionCoords {
  double t = 0.0;
  double f = 0.0;
  double h = 0.0;
  double phi = 0.0;
  double rho = 0.0;
  double g = 0.0;
  bool on_axis = false;
};

enum class ErrorKind {
  SingularPoint,
  AxisPoint,
  OutOfRange,
  EndpointDegenerate,
  BlowUp,
  TargetOutOfRange,
  NonPeriodic,
  EmptyLevel,
  DegenerateFrame,
  RegionClipFailure,
  NonTransverse,
  IncompleteSearch,
  EmptyIntersection,
  SheetCountMismatch,
  FoldDetected,
  FitIllConditioned,
  NoSolution,
  OutOfRadius,
  GridTooCoarse,
  BadArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace phc
