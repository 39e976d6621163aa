#pragma once

// Galton-Watson analysis on top of an offspring law, with X_0 = 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ppgw/offspring.hpp"

namespace ppgw {

inline constexpr double kCriticalTol = 1e-12;
/// Upper end of the extinction-root bracket; keeps the trivial root s = 1 out.
inline constexpr double kRootBracketTop = 1.0 - 1e-9;
inline constexpr long kMaxFixedPointIterations = 1'000'000;
inline constexpr std::uint64_t kDefaultPopulationCap = 1'000'000'000;

enum class CriticalityClass { Subcritical, Critical, Supercritical };

std::string_view to_string(CriticalityClass c);

struct Criticality {
  CriticalityClass cls;
  double mean_offspring;
  /// g(lambda) for Janardan models with lambda >= 1.
  std::optional<double> threshold_mu;
};

Criticality classify(const OffspringModel& model);

/// g(lambda) = lambda e^-lambda / (e^-lambda - (1 - lambda)), the mu at which
/// a Janardan process with this lambda is critical. Requires lambda >= 1.
double critical_mu(double lambda);

struct ExtinctionRoot {
  double probability;
  /// P(q) - q at the returned root.
  double residual;
  /// Limit of s <- P(s) from s = P(0), the independent cross-check.
  double fixed_point;
  long fixed_point_iterations;
  bool fixed_point_converged;
};

/// Smallest root of P(s) = s in [0, 1], with diagnostics. 1 for sub- and
/// critical laws; otherwise bisection on P(s) - s over [0, 1 - 1e-9],
/// cross-checked against fixed-point iteration. Requires 0 < tol <= 1e-6.
ExtinctionRoot solve_extinction(const OffspringModel& model, double tol = 1e-12);

double extinction_probability(const OffspringModel& model, double tol = 1e-12);

/// Fractional root of P(s) = s located the way rootSolve::uniroot.all does it:
/// a 100-cell grid over [0, 1] and Brent's zeroin at tolerance `tol` (R's
/// default DBL_EPSILON^0.2 unless given). Accurate only to about tol; used to
/// reproduce reference tables computed that way. Returns 1 when the only
/// root is s = 1.
double extinction_probability_grid_brent(const OffspringModel& model, double tol);
double extinction_probability_grid_brent(const OffspringModel& model);

/// q_n = Pr(X_n = 0) for n = 1..N, plus the limit q*.
struct ExtinctionCurve {
  OffspringModel model;
  std::vector<double> q;  // q[0] is q_1
  double limit;

  std::size_t generations() const { return q.size(); }
  /// 1-based access with q_0 = 0.
  double at(std::size_t n) const { return n == 0 ? 0.0 : q.at(n - 1); }
};

ExtinctionCurve extinction_curve(const OffspringModel& model, std::size_t n_generations);

/// Pr(T = n) = q_n - q_{n-1}, n = 1..N.
///
/// The differences and their running sum are exact in floating point: the
/// chord bound P(s) <= p_0 + s (1 - p_0) gives q_{n-1} <= q_n <= 2 q_{n-1}, so
/// each subtraction is exact, and sum_{k<=n} pt[k] reproduces q_n bit for bit.
struct ExtinctionTimeDist {
  std::vector<double> pt;          // pt[0] is Pr(T = 1)
  std::vector<double> cumulative;  // equals the extinction curve's q
};

ExtinctionTimeDist extinction_time_pmf(const OffspringModel& model, std::size_t n_generations);

struct GenerationTrace {
  std::vector<std::uint64_t> sizes;  // X_0 .. X_K
  bool extinct = false;
  /// Stopped because X_K exceeded the population cap; not extinct.
  bool truncated = false;
  std::uint64_t seed = 0;
};

/// X_0 = 1, X_{n+1} = sum of X_n independent offspring draws. Stops at
/// extinction, after max_generations steps, or once X_n > population_cap.
GenerationTrace simulate_generations(const OffspringModel& model, std::uint64_t seed,
                                     std::size_t max_generations,
                                     std::uint64_t population_cap = kDefaultPopulationCap);

struct SimulationSummary {
  std::size_t traces = 0;
  std::size_t extinct = 0;
  std::size_t truncated = 0;
  /// Traces still alive and below the cap after max_generations.
  std::size_t censored = 0;
  /// extinct_by[n-1] = number of traces with X_n = 0, n = 1..max_generations.
  std::vector<std::size_t> extinct_by;

  double extinct_fraction() const { return traces ? double(extinct) / double(traces) : 0.0; }
  double extinct_by_fraction(std::size_t n) const;
};

/// Runs `traces` independent traces, trace i seeded with derive_seed(seed, i).
/// Work is split over `threads` workers; the result does not depend on it.
SimulationSummary simulate_many(const OffspringModel& model, std::uint64_t seed, std::size_t traces,
                                std::size_t max_generations,
                                std::uint64_t population_cap = kDefaultPopulationCap,
                                unsigned threads = 1);

}  // namespace ppgw
