#pragma once

#include <functional>
#include <vector>

namespace phc {

/// Gauss-Chebyshev rule of the first kind:
///   int_{-1}^{1} f(y) (1-y^2)^{-1/2} dy  ~=~ (pi/n) sum f(cos((2k-1)pi/2n)),
/// exact handling of the inverse-square-root endpoint weight.
double chebyshev_weighted_integral(const std::function<double(double)>& f, int n);

/// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1]
/// (Newton iteration on P_n; accurate to machine precision).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// int_a^b f dx by composite 16-point Gauss-Legendre on `cells` equal cells.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int cells = 1);

/// Adaptive doubling of `n` until two successive Chebyshev-weighted values
/// agree to tol; returns the last value, writes the achieved error estimate.
double chebyshev_adaptive(const std::function<double(double)>& f, double tol, double* err_est,
                          int n0 = 32, int n_max = 1 << 20);

}  // namespace phc
