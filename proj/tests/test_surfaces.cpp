#include <doctest.h>

#include <cmath>

#include "phclab/geometry.hpp"
#include "phclab/surfaces.hpp"

using namespace phc;

namespace {

const ConeSolution& shared_cone() {
  static ConeSolution cone(6, 7);
  return cone;
}

SurfacePtr perturbed_e13(double nu, double tilt) {
  // z = tilt * s breaks J-invariance of the tangent planes
  return make_custom(
      [nu, tilt](double t, double s) {
        SurfaceSample out;
        out.p = {t, s * std::cos(nu), s * std::sin(nu), tilt * s};
        out.t1 = {1.0, 0.0, 0.0, 0.0};
        out.t2 = {0.0, std::cos(nu), std::sin(nu), tilt};
        return out;
      },
      0.0, 1.0, 1e-3, 1.0, true);
}

}  // namespace

TEST_SUITE("surfaces") {
  TEST_CASE("E13/E14 omega pullback") {
    auto e13 = make_e13(0.7);
    auto s = e13->eval(0.3, 0.5);
    // pull-back of omega is dt ^ s ds
    CHECK(e13->orientation() * omega_at(s.p).apply(s.t1, s.t2) == doctest::Approx(0.5));
    auto e14 = make_e14(+1);
    auto s4 = e14->eval(0.3, 0.5);
    CHECK(e14->orientation() * omega_at(s4.p).apply(s4.t1, s4.t2) == doctest::Approx(1.0));
  }

  TEST_CASE("holomorphy residuals of the closed-form families") {
    CHECK(holomorphy_residual(*make_e13(0.7)).max_residual < 1e-12);
    CHECK(holomorphy_residual(*make_e14(-1)).max_residual < 1e-12);
    CHECK(holomorphy_residual(*make_e16(E16Variant::PhiH, 0.2, 0.05)).max_residual < 1e-10);
    CHECK(holomorphy_residual(*make_e16(E16Variant::TF, 0.3, 0.1)).max_residual < 1e-10);
    CHECK(holomorphy_residual(*make_e16(E16Variant::TFDisk, 0.3, -0.1, +1)).max_residual < 1e-10);
  }

  TEST_CASE("E15 cone identities and residual") {
    const ConeSolution& cone = shared_cone();
    auto e15 = make_e15(cone, +1, 0.25);
    CHECK(holomorphy_residual(*e15, 48, 48).max_residual < 1e-8);
    // h = c s^3 and unit distance normalization on Sigma_+
    for (double tau : {0.0, 1.7, 9.4}) {
      for (double s : {0.3, 1.0}) {
        const SurfaceSample smp = e15->eval(tau, s);
        CHECK(h_coord(smp.p) == doctest::Approx(cone.c() * s * s * s).epsilon(1e-10));
        const double dt = CartesianPoint4::centered_mod(smp.p.t - 0.25);
        CHECK(dt * dt + smp.p.rho_sq() + smp.p.z * smp.p.z ==
              doctest::Approx(s * s).epsilon(1e-10));
      }
    }
    // Sigma_- carries h = -c s^3
    auto e15m = make_e15(cone, -1, 0.25);
    CHECK(holomorphy_residual(*e15m, 48, 48).max_residual < 1e-8);
    const SurfaceSample smp = e15m->eval(2.0, 0.5);
    CHECK(h_coord(smp.p) == doctest::Approx(-cone.c() * 0.125).epsilon(1e-10));
    // a non-periodic trajectory is rejected at construction
    CHECK_THROWS_AS(ConeSolution(ConeParam(0.25), 6, 7), Error);
  }

  TEST_CASE("E16 level sets") {
    // {phi = c, h = 0} is the plane ray of Example 1.3
    auto flat = make_e16(E16Variant::PhiH, 0.7, 0.0);
    auto e13 = make_e13(0.7);
    const SurfaceSample a = flat->eval(0.3, 0.5);
    const SurfaceSample b = e13->eval(0.3, 0.5);
    CHECK((a.p.as_vector() - b.p.as_vector()).norm() < 1e-15);
    // {t = c, f = 0, z > 0} lies on the cone x^2 + y^2 - 2 z^2 = 0
    auto conec = make_e16(E16Variant::TFDisk, 0.3, 0.0, +1);
    const SurfaceSample c = conec->eval(1.0, 0.4);
    CHECK(c.p.rho_sq() - 2.0 * c.p.z * c.p.z == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(c.p.z > 0.0);
    // inconsistent levels
    CHECK_THROWS_AS((void)make_e16(E16Variant::TF, 0.3, -0.1), Error);
    CHECK_THROWS_AS((void)make_e16(E16Variant::TF, 0.3, 0.5), Error);
    CHECK_THROWS_AS((void)make_e16(E16Variant::TFDisk, 0.3, 0.1), Error);
  }

  TEST_CASE("E16 foliations are mutually orthogonal") {
    const CartesianPoint4 pt{0.3, 0.35, 0.15, 0.12};
    auto A = make_e16(E16Variant::PhiH, std::atan2(pt.y, pt.x), h_coord(pt));
    auto B = make_e16(E16Variant::TF, pt.t, f_coord(pt));
    const SurfaceSample sa = A->eval(pt.t, pt.rho());
    const SurfaceSample sb = B->eval(std::atan2(pt.y, pt.x), pt.z);
    CHECK((sa.p.as_vector() - pt.as_vector()).norm() < 1e-12);
    CHECK((sb.p.as_vector() - pt.as_vector()).norm() < 1e-12);
    for (const TangentVector4& v : {sa.t1, sa.t2})
      for (const TangentVector4& w : {sb.t1, sb.t2}) CHECK(std::abs(v.dot(w)) < 1e-12);
  }

  TEST_CASE("E17 spiral family") {
    auto e17 = make_e17(2, 1, 0.3);
    CHECK(holomorphy_residual(*e17, 48, 48).max_residual < 1e-8);
    // z(s)/s^2 approaches the quarter slope of phi0' = 2 pi p / (q L)
    const double phi0p = 2.0 * M_PI * 1.0 / (2.0 * 1.0);
    const SurfaceSample s = e17->eval(0.0, 1e-3);
    CHECK(std::abs(s.p.z / 1e-6 - 0.25 * phi0p) < 1e-5 * 0.25 * phi0p);
    // p = 0 degenerates to Example 1.3
    auto e170 = make_e17(1, 0, 0.4);
    auto e13 = make_e13(0.4);
    const SurfaceSample s0 = e170->eval(0.77, 0.5);
    const SurfaceSample s13 = e13->eval(0.77 / (2.0 * M_PI), 0.5);
    CHECK((s0.p.as_vector() - s13.p.as_vector()).norm() < 1e-15);
    CHECK_THROWS_AS((void)make_e17(0, 1, 0.0), Error);
    CHECK_THROWS_AS((void)make_e17(4, 2, 0.0), Error);
  }

  TEST_CASE("E17 profile solves its equation pointwise") {
    // (a + 2 p z) s z' + 2 a z = p s^2 with a = q L / (2 pi), checked from the
    // sampled tangent frame (z' = dz/ds along the radial parameter)
    const int q = 3, p = 2;
    auto e17 = make_e17(q, p, 0.1);
    const double a = q * 1.0 / (2.0 * M_PI);
    for (double s = 0.01; s <= 1.0; s += 0.0613) {
      const SurfaceSample smp = e17->eval(0.77, s);
      const double z = smp.p.z;
      const double zp = smp.t2[3];
      CHECK(std::abs((a + 2.0 * p * z) * s * zp + 2.0 * a * z - p * s * s) < 1e-10);
    }
  }

  TEST_CASE("negative control fails the residual oracle") {
    CHECK(holomorphy_residual(*perturbed_e13(0.4, 0.1)).max_residual > 1e-3);
  }

  TEST_CASE("frames match centered differences of the samplers") {
    CHECK(frame_consistency(*make_e13(0.7)).max_residual < 1e-8);
    CHECK(frame_consistency(*make_e15(shared_cone(), +1, 0.25)).max_residual < 1e-8);
    CHECK(frame_consistency(*make_e17(3, 2, 0.1)).max_residual < 1e-8);
    CHECK(frame_consistency(*make_e16(E16Variant::TF, 0.3, 0.1)).max_residual < 1e-8);
  }

  TEST_CASE("degenerate frames are reported") {
    auto bad = make_custom(
        [](double t, double s) {
          SurfaceSample out;
          out.p = {t, s, 0.1, 0.1};
          out.t1 = {0.0, 1.0, 0.0, 0.0};
          out.t2 = {0.0, 2.0, 0.0, 0.0};
          return out;
        },
        0.0, 1.0, 0.1, 1.0, true);
    CHECK_THROWS_AS((void)holomorphy_residual(*bad, 8, 8), Error);
  }
}
