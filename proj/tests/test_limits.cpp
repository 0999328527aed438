#include <doctest.h>

#include <cmath>

#include "phclab/energetics.hpp"
#include "phclab/limits.hpp"

using namespace phc;

namespace {

const ConeSolution& shared_cone() {
  static ConeSolution cone(6, 7);
  return cone;
}

SurfacePtr flat_plane(double ang, double extent = 2.2) {
  // a limit plane in dilated (unwrapped) coordinates
  return make_custom(
      [ang](double t, double s) {
        SurfaceSample out;
        out.p = {t, s * std::cos(ang), s * std::sin(ang), 0.0};
        out.t1 = {1.0, 0.0, 0.0, 0.0};
        out.t2 = {0.0, std::cos(ang), std::sin(ang), 0.0};
        return out;
      },
      -extent, extent, 1e-4, extent, false);
}

}  // namespace

TEST_SUITE("limits") {
  TEST_CASE("dilation basics") {
    CHECK_THROWS_AS((void)dilate(make_e13(0.1), 0.0, 0.0), Error);
    // cones are fixed points of dilation: distance between two dilations stays small
    auto e15 = make_e15(shared_cone(), +1, 0.25, 1e-4);
    const double d = geometric_distance(*dilate(e15, 0.1, 0.25), *dilate(e15, 0.03, 0.25), {},
                                        256, 192);
    CHECK(d < 0.05);
    // scales small enough that both unwrapped charts cover the ball of the
    // comparison region
    auto e13 = make_e13(0.4, 1e-4);
    const double d13 =
        geometric_distance(*dilate(e13, 0.1, 0.0), *dilate(e13, 0.05, 0.0), {}, 512, 192);
    CHECK(d13 < 0.05);
  }

  TEST_CASE("dilation rescales the omega energy homogeneously") {
    auto e15 = make_e15(shared_cone(), +1, 0.25, 2e-4);
    IntegrateOptions opts;
    opts.columns = 1024;
    const double s = 0.25, R = 1.0;
    const double lhs =
        integrate_form(*dilate(e15, s, 0.25), FormTag::Omega, Region::ball4(0.0, R), opts).value;
    const double rhs =
        integrate_form(*e15, FormTag::Omega, Region::ball4(0.25, R * s), opts).value;
    CHECK(lhs == doctest::Approx(rhs / (s * s * s)).epsilon(1e-7));
  }

  TEST_CASE("geometric distance") {
    auto e13 = make_e13(0.4, 1e-4);
    CHECK(geometric_distance(*e13, *e13) < 0.03);  // self distance ~ sampling resolution
    // rotated cone is geometrically distinct
    auto e15a = make_e15(shared_cone(), +1, 0.0, 1e-4);
    auto rot = make_custom(
        [&](double tau, double s) {
          SurfaceSample smp = e15a->eval(tau, s);
          const double dphi = M_PI / shared_cone().winding();
          const double c = std::cos(dphi), sn = std::sin(dphi);
          SurfaceSample out = smp;
          out.p.x = c * smp.p.x - sn * smp.p.y;
          out.p.y = sn * smp.p.x + c * smp.p.y;
          for (int k : {0, 1}) {
            TangentVector4& v = k ? out.t2 : out.t1;
            const TangentVector4 w = k ? smp.t2 : smp.t1;
            v[1] = c * w[1] - sn * w[2];
            v[2] = sn * w[1] + c * w[2];
          }
          return out;
        },
        e15a->s1_min(), e15a->s1_max(), e15a->s2_min(), e15a->s2_max(), true);
    CHECK(geometric_distance(*e15a, *rot) > 1e-3);
    // a sampler that misses the test region K entirely
    auto far = make_custom(
        [](double t, double s) {
          SurfaceSample out;
          out.p = {t, 0.05 * s, 0.0, 0.0};
          out.t1 = {1, 0, 0, 0};
          out.t2 = {0, 0.05, 0, 0};
          return out;
        },
        0.0, 1.0, 0.5, 1.0, true);
    CHECK_THROWS_AS((void)geometric_distance(*far, *e13), Error);
  }

  TEST_CASE("intersection counts against the test families") {
    // one plane ray meets the cylinder {t = t0, f = 1/100} once
    auto e13 = make_e13(0.4, 1e-4);
    const auto c13 =
        count_intersections(*e13, TestSurfaceSpec::cylinder(0.3, 0.01, 0.125));
    CHECK(c13.count == 1);
    CHECK(c13.refine_stable);
    // the spiral family meets it q times
    auto e17 = make_e17(2, 1, 0.3, 1e-4);
    const auto c17 =
        count_intersections(*e17, TestSurfaceSpec::cylinder(0.3, 0.01, 0.125));
    CHECK(c17.count == 2);
    CHECK(c17.refine_stable);
    // the axis line meets the +disk once and the -disk never
    auto e14 = make_e14(+1, 1e-4);
    CHECK(count_intersections(*e14, TestSurfaceSpec::disk(0.3, -0.01, 0.125, +1)).count == 1);
    CHECK(count_intersections(*e14, TestSurfaceSpec::disk(0.3, -0.01, 0.125, -1)).count == 0);
    // h-slice count of the cone equals its winding below c and zero above
    auto e15 = make_e15(shared_cone(), +1, 0.0, 1e-4);
    const double c = shared_cone().c();
    CHECK(count_intersections(*e15, TestSurfaceSpec::h_slice(0.0, 0.9 * c)).count ==
          shared_cone().winding());
    CHECK(count_intersections(*e15, TestSurfaceSpec::h_slice(0.0, 1.1 * c)).count == 0);
  }

  TEST_CASE("signed linking-sphere counts") {
    CHECK(linking_sphere_count(*make_e13(0.4, 1e-4), 0.2, 0.45) == 1);
    CHECK(linking_sphere_count(*make_e14(+1, 1e-4), 0.2, 0.45) == -1);
    CHECK(linking_sphere_count(*make_e17(2, 1, 0.3, 1e-4), 0.2, 0.45) == 2);
    CHECK(linking_sphere_count(*make_e15(shared_cone(), +1, 0.0, 1e-4), 0.37, 0.45) == 0);
  }

  TEST_CASE("limit classification of the model families") {
    const LimitData d13 = classify_limit(make_e13(0.7, 1e-4), 0.3);
    CHECK(d13.p == 1);
    CHECK(d13.q_plus == 0);
    CHECK(d13.q_minus == 0);
    CHECK(d13.n_plus == 0);
    CHECK(d13.n_minus == 0);
    CHECK(d13.linking_count == 1);
    CHECK(d13.scale_stable);

    const LimitData d14 = classify_limit(make_e14(-1, 1e-4), 0.0);
    CHECK(d14.q_minus == 1);
    CHECK(d14.p == 0);
    CHECK(d14.linking_count == -1);

    const LimitData d15 = classify_limit(make_e15(shared_cone(), +1, 0.25, 1e-4), 0.25);
    CHECK(d15.p == 0);
    CHECK(d15.q_plus == 0);
    CHECK(d15.n_plus == 1);
    CHECK(d15.n_minus == 0);
    REQUIRE(d15.cone_constants.size() == 1);
    CHECK(std::abs(d15.cone_constants[0] - shared_cone().c()) < 1e-6);
    CHECK(d15.linking_count == 0);

    ClassifyOptions fast;
    fast.with_dk = false;
    const LimitData d15m = classify_limit(make_e15(shared_cone(), -1, 0.25, 1e-4), 0.25, fast);
    CHECK(d15m.n_minus == 1);
    CHECK(d15m.n_plus == 0);
    REQUIRE(d15m.cone_constants.size() == 1);
    CHECK(std::abs(d15m.cone_constants[0] - shared_cone().c()) < 1e-6);

    // steeper spiral: multiplicities must stay free of spurious cone content
    const LimitData d32 = classify_limit(make_e17(3, 2, 0.1, 1e-4), 0.0, fast);
    CHECK(d32.p == 3);
    CHECK(d32.q_plus == 0);
    CHECK(d32.n_plus == 0);
    CHECK(d32.n_minus == 0);
    CHECK(d32.linking_count == 3);
  }

  TEST_CASE("cone field tangency") {
    CHECK(cone_field_residual(*make_e13(0.4)).max_residual < 1e-14);
    CHECK(cone_field_residual(*make_e14(+1)).max_residual < 1e-14);
    CHECK(cone_field_residual(*make_e15(shared_cone(), +1, 0.25), 0.25).max_residual < 1e-8);
    CHECK(cone_field_residual(*make_e17(2, 1, 0.3), 0.0, 48, 48).max_residual > 1e-3);
    CHECK(cone_field_residual(*make_e16(E16Variant::PhiH, 0.2, 0.05), 0.0).max_residual > 1e-3);
  }

  TEST_CASE("dilated spirals approach the union of flat planes") {
    auto e17 = make_e17(2, 1, 0.3, 1e-4);
    auto pa = sample_cloud(*flat_plane(0.3), 192, 192);
    auto pb = sample_cloud(*flat_plane(0.3 + M_PI), 192, 192);
    std::vector<Eigen::Vector4d> planes = pa;
    planes.insert(planes.end(), pb.begin(), pb.end());
    double prev = 1e9;
    for (double s : {0.3, 0.1, 0.03}) {
      const double d =
          geometric_distance(sample_cloud(*dilate(e17, s, 0.0), 256, 192), planes, {});
      CHECK(d < prev);
      prev = d;
    }
  }
}
