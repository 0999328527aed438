#include "phclab/run_config.hpp"

#include <fstream>

namespace phc {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void RunConfig::apply_line(const std::string& raw) {
  const std::string line = trim(raw);
  if (line.empty() || line[0] == '#') return;
  const auto eq = line.find('=');
  if (eq == std::string::npos)
    fail(ErrorKind::BadArgument, "config: expected key=value, got '" + line + "'");
  const std::string key = trim(line.substr(0, eq));
  const std::string val = trim(line.substr(eq + 1));
  if (key == "quad_tol")
    quad_tol = std::stod(val);
  else if (key == "ode_tol")
    ode_tol = std::stod(val);
  else if (key == "residual_tol")
    residual_tol = std::stod(val);
  else if (key == "grid_n1")
    grid_n1 = std::stoi(val);
  else if (key == "grid_n2")
    grid_n2 = std::stoi(val);
  else if (key == "energy_columns")
    energy_columns = std::stoi(val);
  else if (key == "circle_length")
    circle_length = std::stod(val);
  else if (key == "out_dir")
    out_dir = val;
  else if (key == "seed")
    seed = std::stoull(val);
  else if (key == "threads")
    threads = std::stoi(val);
  else if (key == "json")
    json = (val == "1" || val == "true");
  else
    fail(ErrorKind::BadArgument, "config: unknown key '" + key + "'");
  if (quad_tol <= 0.0 || ode_tol <= 0.0 || residual_tol <= 0.0)
    fail(ErrorKind::BadArgument, "config: tolerances must be positive");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::BadArgument, "config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  while (std::getline(in, line)) cfg.apply_line(line);
  return cfg;
}

}  // namespace phc
