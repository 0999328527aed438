#include "phclab/quadrature.hpp"

#include <cmath>

namespace phc {

double chebyshev_weighted_integral(const std::function<double(double)>& f, int n) {
  double s = 0.0;
  const double c = M_PI / (2.0 * n);
  for (int k = 1; k <= n; ++k) s += f(std::cos((2 * k - 1) * c));
  return s * M_PI / n;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / pp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = -xi;
    x[n - 1 - i] = xi;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
  }
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int cells) {
  static std::vector<double> xg, wg;
  if (xg.empty()) gauss_legendre(16, xg, wg);
  double total = 0.0;
  const double h = (b - a) / cells;
  for (int c = 0; c < cells; ++c) {
    const double lo = a + c * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (std::size_t k = 0; k < xg.size(); ++k) s += wg[k] * f(mid + 0.5 * h * xg[k]);
    total += 0.5 * h * s;
  }
  return total;
}

double chebyshev_adaptive(const std::function<double(double)>& f, double tol, double* err_est,
                          int n0, int n_max) {
  double prev = chebyshev_weighted_integral(f, n0);
  for (int n = 2 * n0; n <= n_max; n *= 2) {
    const double cur = chebyshev_weighted_integral(f, n);
    const double diff = std::abs(cur - prev);
    if (diff <= tol * std::max(1.0, std::abs(cur))) {
      if (err_est) *err_est = diff;
      return cur;
    }
    prev = cur;
  }
  if (err_est) *err_est = std::abs(prev);
  return prev;
}

}  // namespace phc
