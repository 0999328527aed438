#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "phclab/parallel.hpp"
#include "phclab/run_config.hpp"

using namespace phc;

TEST_SUITE("run_config") {
  TEST_CASE("key=value parsing with comments and overrides") {
    const char* path = "phclab_test_config.txt";
    {
      std::ofstream out(path);
      out << "# tolerances\n"
          << "quad_tol = 1e-9\n"
          << "grid_n1=128\n"
          << "\n"
          << "out_dir = results\n"
          << "json = true\n";
    }
    const RunConfig cfg = RunConfig::from_file(path);
    CHECK(cfg.quad_tol == doctest::Approx(1e-9));
    CHECK(cfg.grid_n1 == 128);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.json);
    CHECK(cfg.ode_tol == doctest::Approx(1e-11));  // default untouched
    std::remove(path);
  }

  TEST_CASE("errors") {
    RunConfig cfg;
    CHECK_THROWS_AS(cfg.apply_line("no_such_key = 1"), Error);
    CHECK_THROWS_AS(cfg.apply_line("just a line"), Error);
    CHECK_THROWS_AS(cfg.apply_line("quad_tol = -1"), Error);
    CHECK_THROWS_AS((void)RunConfig::from_file("does_not_exist.cfg"), Error);
  }

  TEST_CASE("worker count is positive and capped") {
    CHECK(worker_count() >= 1);
    CHECK(worker_count(2) <= 2);
  }
}
