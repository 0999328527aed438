#pragma once

#include <cstdint>
#include <string>

#include "phclab/types.hpp"

namespace phc {

/// Run-wide knobs shared by the CLI subcommands.  Defaults are the documented
/// contract tolerances; a flat key=value config file can override them, and
/// command-line flags override the file.
struct RunConfig {
  double quad_tol = 1e-10;
  double ode_tol = 1e-11;
  double residual_tol = 1e-8;
  int grid_n1 = 64;
  int grid_n2 = 64;
  int energy_columns = 1024;
  double circle_length = kDefaultCircleLength;
  std::string out_dir = ".";
  std::uint64_t seed = 20259;
  int threads = 0;  // 0 = hardware (capped by PHC_LAB_THREADS)
  bool json = false;

  /// Parse `key=value` lines ('#' comments, blank lines ignored); unknown
  /// keys are an error.
  static RunConfig from_file(const std::string& path);
  void apply_line(const std::string& line);
};

}  // namespace phc
