#pragma once

#include <functional>
#include <vector>

#include "phclab/types.hpp"

namespace phc {

/// Right-hand side of an autonomous system y' = f(y), y in R^n (n small).
using OdeRhs = std::function<void(const std::vector<double>& y, std::vector<double>& dydt)>;

struct OdeOptions {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  double max_step = 0.0;    // 0 = unrestricted
  double initial_step = 1e-4;
  std::size_t max_steps = 50'000'000;
};

/// One accepted step of the integrator; f is the derivative at y.
struct OdeNode {
  double t;
  std::vector<double> y;
  std::vector<double> f;
};

/// Dormand-Prince 5(4) with PI step-size control.  Nodes of every accepted
/// step are stored; sampling between nodes uses quintic Hermite interpolation
/// when the caller supplies second derivatives, cubic Hermite otherwise.
class Dopri5 {
 public:
  Dopri5(OdeRhs rhs, OdeOptions opts = {}) : rhs_(std::move(rhs)), opts_(opts) {}

  /// Integrate from (t0, y0) to t1 (t1 > t0), recording every accepted node.
  std::vector<OdeNode> integrate(double t0, std::vector<double> y0, double t1) const;

  /// Single adaptive run that stops when `stop` returns true (checked at
  /// accepted nodes); returns all nodes.
  std::vector<OdeNode> integrate_until(double t0, std::vector<double> y0, double t_max,
                                       const std::function<bool(const OdeNode&)>& stop) const;

 private:
  OdeRhs rhs_;
  OdeOptions opts_;
};

/// Densely sampled scalar-component trajectory with quintic Hermite
/// evaluation.  `second` maps a node to the second derivative of the selected
/// components, enabling O(h^6) interpolation between stored nodes.
class DenseTrajectory {
 public:
  DenseTrajectory() = default;
  DenseTrajectory(std::vector<OdeNode> nodes,
                  const std::function<std::vector<double>(const OdeNode&)>& second);

  double t_front() const { return nodes_.front().t; }
  double t_back() const { return nodes_.back().t; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<OdeNode>& nodes() const { return nodes_; }

  /// Component k and its first derivative at time t (clamped to the span).
  double value(double t, int k) const;
  double derivative(double t, int k) const;

 private:
  std::size_t locate(double t) const;
  std::vector<OdeNode> nodes_;
  std::vector<std::vector<double>> d2_;  // second derivatives per node
};

}  // namespace phc
