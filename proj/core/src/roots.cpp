#include "ppgw/roots.hpp"

#include <cmath>

#include "ppgw/error.hpp"

namespace ppgw {

BisectResult bisect(const ScalarFn& f, double lo, double hi) {
  double f_lo = f(lo), f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};
  if (std::signbit(f_lo) == std::signbit(f_hi)) throw DomainError("bisect: no sign change on bracket");

  int it = 0;
  for (; it < 2000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return {mid, 0.0, it + 1};
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? BisectResult{lo, f_lo, it} : BisectResult{hi, f_hi, it};
}

double brent_zeroin(const ScalarFn& f, double ax, double bx, double fa, double fb, double tol, int max_iter) {
  double a = ax, b = bx;
  double c = a, fc = fa;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;

  for (int left = max_iter + 1; left-- > 0;) {
    const double prev_step = b - a;
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol_act = 2.0 * DBL_EPSILON * std::abs(b) + tol / 2.0;
    double new_step = (c - b) / 2.0;

    if (std::abs(new_step) <= tol_act || fb == 0.0) return b;

    if (std::abs(prev_step) >= tol_act && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double cb = c - b;
      if (a == c) {
        const double t1 = fb / fa;
        p = cb * t1;
        q = 1.0 - t1;
      } else {
        // Inverse quadratic interpolation.
        q = fa / fc;
        const double t1 = fb / fc;
        const double t2 = fb / fa;
        p = t2 * (cb * q * (q - t1) - (b - a) * (t1 - 1.0));
        q = (q - 1.0) * (t1 - 1.0) * (t2 - 1.0);
      }
      if (p > 0.0) q = -q;
      else p = -p;

      if (p < (0.75 * cb * q - std::abs(tol_act * q) / 2.0) && p < std::abs(prev_step * q / 2.0)) {
        new_step = p / q;
      }
    }

    if (std::abs(new_step) < tol_act) new_step = new_step > 0.0 ? tol_act : -tol_act;

    a = b;
    fa = fb;
    b += new_step;
    fb = f(b);
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
    }
  }
  throw NonConvergenceError("brent_zeroin: no convergence within iteration cap");
}

std::vector<double> grid_brent_roots(const ScalarFn& f, double lo, double hi, double tol, int cells) {
  if (!(lo < hi) || cells < 1) throw DomainError("grid_brent_roots: need lo < hi and cells >= 1");
  std::vector<double> xs(static_cast<std::size_t>(cells) + 1);
  const double step = (hi - lo) / cells;
  xs.front() = lo;
  for (int i = 1; i < cells; ++i) xs[static_cast<std::size_t>(i)] = lo + i * step;
  xs.back() = hi;

  std::vector<double> fx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f(xs[i]);

  std::vector<double> roots;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (fx[i] == 0.0) roots.push_back(xs[i]);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (fx[i] * fx[i + 1] < 0.0) roots.push_back(brent_zeroin(f, xs[i], xs[i + 1], fx[i], fx[i + 1], tol));
  }
  return roots;
}

}  // namespace ppgw
