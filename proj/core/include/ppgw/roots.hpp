#pragma once

#include <cfloat>
#include <cmath>
#include <functional>
#include <vector>

namespace ppgw {

using ScalarFn = std::function<double(double)>;

struct BisectResult {
  double root;
  double residual;  // f(root)
  int iterations;
};

/// Bisection on [lo, hi] with f(lo) and f(hi) of opposite sign (or zero).
/// Runs until the bracket cannot be split in double precision, so the
/// returned root is the bracket endpoint with the smaller |f|.
BisectResult bisect(const ScalarFn& f, double lo, double hi);

/// Brent's zeroin with R's exact step logic and stopping rule
/// (|c - b| / 2 <= 2 eps |b| + tol / 2). f_lo and f_hi are f(lo) and f(hi).
double brent_zeroin(const ScalarFn& f, double lo, double hi, double f_lo, double f_hi, double tol,
                    int max_iter = 1000);

/// R's default root tolerance in rootSolve::uniroot.all, DBL_EPSILON^0.2.
inline double r_default_root_tol() { return std::pow(DBL_EPSILON, 0.2); }

/// Scan [lo, hi] on a grid of `cells` equal cells; grid points where f is
/// exactly zero are returned first, then one zeroin root per sign-changing
/// cell, in grid order. This is the rootSolve::uniroot.all procedure.
std::vector<double> grid_brent_roots(const ScalarFn& f, double lo, double hi,
                                     double tol = r_default_root_tol(), int cells = 100);

}  // namespace ppgw
