#include <doctest.h>

#include <cmath>

#include "phclab/energetics.hpp"

using namespace phc;

namespace {

const ConeSolution& shared_cone() {
  static ConeSolution cone(6, 7);
  return cone;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_SUITE("energetics") {
  TEST_CASE("tube energies of the straight families") {
    IntegrateOptions opts;
    opts.columns = 2048;
    auto e13 = make_e13(0.4, 1e-5);
    auto e14 = make_e14(+1, 1e-5);
    for (double r : {0.3, 0.5}) {
      CHECK(std::abs(integrate_form(*e13, FormTag::Omega, Region::tube(r), opts).value -
                     0.5 * r * r) < 1e-6);
      CHECK(std::abs(integrate_form(*e14, FormTag::Omega, Region::tube(r), opts).value -
                     r * r) < 1e-6);
    }
  }

  TEST_CASE("omega restricts positively to pseudo-holomorphic samplers") {
    for (SurfacePtr s : {make_e13(0.3), make_e14(-1), make_e15(shared_cone(), -1, 0.1),
                         make_e17(2, 1, 0.5)}) {
      for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
          const double s1 =
              s->s1_min() + (s->s1_max() - s->s1_min()) * (i + 0.5) / 16.0;
          const double s2 = s->s2_min() + (s->s2_max() - s->s2_min()) * j / 15.0;
          const SurfaceSample smp = s->eval(s1, s2);
          CHECK(s->orientation() * omega_at(smp.p).apply(smp.t1, smp.t2) >= -1e-14);
        }
      }
    }
  }

  TEST_CASE("cone energy constant and its decomposition") {
    const ConeSolution& cone = shared_cone();
    const DeltaC dc = delta_c(cone);
    CHECK(dc.dphidh_part == doctest::Approx(2.0 * M_PI * cone.winding() * cone.c()));
    CHECK(dc.delta == doctest::Approx(dc.dtdf_part + dc.dphidh_part));

    auto e15 = make_e15(cone, +1, 0.25, 2e-4);
    IntegrateOptions opts;
    opts.columns = 2048;
    // direct d(phi)^d(h) integral over Sigma_+ cap B_1
    const double dphidh =
        integrate_form(*e15, FormTag::DphiDh, Region::ball4(0.25, 1.0), opts).value;
    CHECK(std::abs(dphidh / dc.dphidh_part - 1.0) < 1e-5);
    // r^3 delta_c scaling of the full omega energy
    for (double r : {0.3, 0.6, 1.0}) {
      const double e = integrate_form(*e15, FormTag::Omega, Region::ball4(0.25, r), opts).value;
      CHECK(std::abs(e / (r * r * r * dc.delta) - 1.0) < 1e-5);
    }
    // the dt^df part agrees with the trajectory quadrature
    const double dtdf =
        integrate_form(*e15, FormTag::DtDf, Region::ball4(0.25, 1.0), opts).value;
    CHECK(std::abs(dtdf / dc.dtdf_part - 1.0) < 1e-5);
  }

  TEST_CASE("small-c lower bounds of the dt^df part") {
    const ConeSolution cone(10, 13);  // c ~ 0.0202 < 1/(24 sqrt 3)
    CHECK(cone.c() < 1.0 / (24.0 * std::sqrt(3.0)));
    const DeltaC dc = delta_c(cone);
    const double b144 =
        std::pow(1.0 - 12.0 * std::sqrt(3.0) * cone.c(), 2) / (144.0 * std::sqrt(3.0));
    CHECK(dc.dtdf_part >= b144);
    CHECK(dc.dtdf_part >= 1.0 / (576.0 * std::sqrt(3.0)));
  }

  TEST_CASE("sharp sigma profiles") {
    IntegrateOptions opts;
    opts.columns = 2048;
    // cones: s^{-3} sigma exactly constant
    auto e15 = make_e15(shared_cone(), +1, 0.25, 2e-4);
    const EnergyReport rep = sigma_profile(*e15, 0.25, linspace(0.1, 0.45, 6), Cutoff::Sharp, opts);
    CHECK(rep.monotone);
    const DeltaC dc = delta_c(shared_cone());
    for (double v : rep.scaled) CHECK(std::abs(v / dc.delta - 1.0) < 1e-6);
    // shifted center: sigma vanishes for small s
    auto e16 = make_e16(E16Variant::TF, 0.3, 0.02);
    const EnergyReport far = sigma_profile(*e16, 0.0, linspace(0.05, 0.25, 3), Cutoff::Sharp, opts);
    for (double v : far.sigma) CHECK(v == 0.0);
    // monotone scaled profile on a family that is not a cone
    auto e17 = make_e17(2, 1, 0.3, 1e-4);
    const EnergyReport r17 = sigma_profile(*e17, 0.0, linspace(0.1, 0.45, 6), Cutoff::Sharp, opts);
    CHECK(r17.monotone);
    CHECK(r17.zeta_sigma > 0.0);
    CHECK(r17.zeta_area > 0.0);
  }

  TEST_CASE("smooth cutoff") {
    CHECK(smooth_bump(0.5) == 1.0);
    CHECK(smooth_bump(1.0) == 1.0);
    CHECK(smooth_bump(2.0) == 0.0);
    CHECK(smooth_bump(1.5) == doctest::Approx(0.5));
    for (double x : {1.1, 1.3, 1.7, 1.9})
      CHECK(smooth_bump(x) > smooth_bump(x + 0.05));  // non-increasing

    IntegrateOptions opts;
    opts.columns = 4096;
    auto e13 = make_e13(0.4, 2e-4);
    const EnergyReport rep =
        sigma_profile(*e13, 0.0, linspace(0.06, 0.24, 5), Cutoff::Smooth, opts);
    CHECK(rep.monotone);
  }

  TEST_CASE("unresolved region boundaries are reported") {
    // tube membership oscillates ~12 times along each column; halved-scan
    // passes alias and the disagreement trips the clip check
    auto wiggly = make_custom(
        [](double t, double s) {
          SurfaceSample out;
          const double z = 0.35 * std::sin(24 * M_PI * s);
          const double zp = 0.35 * 24 * M_PI * std::cos(24 * M_PI * s);
          out.p = {t, s, 0.0, z};
          out.t1 = {1.0, 0.0, 0.0, 0.0};
          out.t2 = {0.0, 1.0, 0.0, zp};
          return out;
        },
        0.0, 1.0, 1e-3, 1.0, true);
    IntegrateOptions coarse;
    coarse.columns = 32;
    coarse.scan = 24;
    CHECK_THROWS_AS((void)integrate_form(*wiggly, FormTag::Area, Region::tube(0.35), coarse),
                    Error);
    IntegrateOptions fine;
    fine.columns = 32;
    fine.scan = 512;
    CHECK_NOTHROW((void)integrate_form(*wiggly, FormTag::Area, Region::tube(0.35), fine));
  }

  TEST_CASE("mu profiles") {
    IntegrateOptions opts;
    opts.columns = 1024;
    const std::vector<double> grid = linspace(0.02, 0.10, 5);
    // h = 0 families contribute nothing
    for (SurfacePtr s : {make_e13(0.4, 2e-4), make_e14(+1, 2e-4)}) {
      const MuReport rep = mu_profile(*s, grid);
      for (double v : rep.mu) CHECK(std::abs(v) < 1e-12);
    }
    // the cone carries mu(s) = 2 pi winding s^3
    auto e15 = make_e15(shared_cone(), +1, 0.25, 2e-4);
    const MuReport rep = mu_profile(*e15, grid);
    for (double v : rep.scaled)
      CHECK(std::abs(v - 2.0 * M_PI * shared_cone().winding()) < 1e-3);
    // a level set with h != 0 misses the slab for s^3 < |h|
    auto e16 = make_e16(E16Variant::PhiH, 0.2, 0.05);
    const MuReport off = mu_profile(*e16, linspace(0.1, 0.3, 3));
    for (double v : off.mu) CHECK(v == 0.0);
    // delta outside [1/16, 1/8] is rejected
    CHECK_THROWS_AS((void)mu_profile(*e15, grid, 0.3), Error);
  }
}
