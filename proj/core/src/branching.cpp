#include "ppgw/branching.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "ppgw/error.hpp"
#include "ppgw/rng.hpp"
#include "ppgw/roots.hpp"

namespace ppgw {

namespace {

constexpr std::uint64_t kPerIndividualLimit = 64;
constexpr std::uint64_t kMaxPopulationCap = 1'000'000'000'000'000ULL;

std::uint64_t offspring_total(const PmfTable& table, Rng& rng, std::uint64_t parents) {
  std::uint64_t total = 0;
  if (parents <= kPerIndividualLimit) {
    for (std::uint64_t i = 0; i < parents; ++i) total += table.quantile(rng.uniform01());
    return total;
  }
  // Multinomial class counts via sequential conditional binomials.
  const auto probs = table.probs();
  const auto cum = table.cum();
  const std::size_t top = table.max_class();
  std::uint64_t remaining = parents;
  for (std::size_t j = 0; j < top && remaining > 0; ++j) {
    const double mass_left = 1.0 - (j == 0 ? 0.0 : cum[j - 1]);
    if (mass_left <= 0.0) break;
    const double p = std::clamp(probs[j] / mass_left, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> binom(remaining, p);
    const std::uint64_t k = binom(rng);
    total += j * k;
    remaining -= k;
  }
  // The last class absorbs whatever is left, including the truncated tail.
  return total + top * remaining;
}

GenerationTrace run_trace(const PmfTable& table, std::uint64_t seed, std::size_t max_generations,
                          std::uint64_t population_cap) {
  Rng rng(seed);
  GenerationTrace trace;
  trace.seed = seed;
  trace.sizes.reserve(max_generations + 1);
  trace.sizes.push_back(1);
  std::uint64_t x = 1;
  for (std::size_t g = 0; g < max_generations; ++g) {
    x = offspring_total(table, rng, x);
    trace.sizes.push_back(x);
    if (x == 0) {
      trace.extinct = true;
      break;
    }
    if (x > population_cap) {
      trace.truncated = true;
      break;
    }
  }
  return trace;
}

void check_sim_args(std::size_t max_generations, std::uint64_t population_cap) {
  if (max_generations == 0) throw DomainError("simulate: max_generations must be at least 1");
  if (population_cap == 0 || population_cap > kMaxPopulationCap) {
    throw DomainError("simulate: population_cap must lie in [1, 1e18]");
  }
}

}  // namespace

std::string_view to_string(CriticalityClass c) {
  switch (c) {
    case CriticalityClass::Subcritical: return "subcritical";
    case CriticalityClass::Critical: return "critical";
    case CriticalityClass::Supercritical: return "supercritical";
  }
  return "unknown";
}

double critical_mu(double lambda) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
    throw DomainError("critical_mu: lambda = " + std::to_string(lambda) +
                      " < 1, the process is subcritical for every admissible mu; no supercritical mu exists");
  }
  // e^-lambda - (1 - lambda) = expm1(-lambda) + lambda, same grouping as mean().
  return lambda * std::exp(-lambda) / (std::expm1(-lambda) + lambda);
}

Criticality classify(const OffspringModel& model) {
  Criticality c{CriticalityClass::Supercritical, mean(model), std::nullopt};
  if (std::abs(c.mean_offspring - 1.0) < kCriticalTol) c.cls = CriticalityClass::Critical;
  else if (c.mean_offspring < 1.0) c.cls = CriticalityClass::Subcritical;
  if (const auto* j = model.as_janardan(); j && j->lambda() >= 1.0) c.threshold_mu = critical_mu(j->lambda());
  return c;
}

ExtinctionRoot solve_extinction(const OffspringModel& model, double tol) {
  if (!(tol > 0.0 && tol <= 1e-6)) throw DomainError("extinction_probability: tol must lie in (0, 1e-6]");
  if (classify(model).cls != CriticalityClass::Supercritical) return {1.0, 0.0, 1.0, 0, true};

  const auto h = [&model](double s) { return pgf(model, s) - s; };
  if (h(kRootBracketTop) >= 0.0) {
    throw ConsistencyError("extinction_probability: " + model.label() +
                           " classifies as supercritical but P(s) - s has no sign change on [0, 1 - 1e-9]");
  }
  const BisectResult root = bisect(h, 0.0, kRootBracketTop);
  if (std::abs(root.residual) > tol) {
    throw NonConvergenceError("extinction_probability: residual " + std::to_string(root.residual) +
                              " above tolerance for " + model.label());
  }

  ExtinctionRoot out{root.root, root.residual, 0.0, 0, false};
  // s_k = P(s_{k-1}) increases monotonically to q*; in floating point it
  // stalls once P(s) rounds back to s.
  double s = pgf(model, 0.0);
  for (long k = 1; k <= kMaxFixedPointIterations; ++k) {
    const double next = pgf(model, s);
    out.fixed_point_iterations = k;
    if (next <= s) {
      out.fixed_point_converged = true;
      break;
    }
    s = next;
  }
  out.fixed_point = s;
  if (out.fixed_point_converged && std::abs(out.fixed_point - out.probability) > 1e-9) {
    throw ConsistencyError("extinction_probability: bisection root and fixed point disagree for " + model.label());
  }
  return out;
}

double extinction_probability(const OffspringModel& model, double tol) {
  return solve_extinction(model, tol).probability;
}

double extinction_probability_grid_brent(const OffspringModel& model, double tol) {
  if (!(tol > 0.0)) throw DomainError("extinction_probability_grid_brent: tol must be positive");
  const auto h = [&model](double s) { return pgf(model, s) - s; };
  double best = 1.0;
  for (double r : grid_brent_roots(h, 0.0, 1.0, tol)) best = std::min(best, r);
  return best;
}

double extinction_probability_grid_brent(const OffspringModel& model) {
  return extinction_probability_grid_brent(model, r_default_root_tol());
}

ExtinctionCurve extinction_curve(const OffspringModel& model, std::size_t n_generations) {
  if (n_generations == 0) throw DomainError("extinction_curve: n_generations must be at least 1");
  std::vector<double> q;
  q.reserve(n_generations);
  double s = pgf(model, 0.0);
  q.push_back(s);
  for (std::size_t n = 2; n <= n_generations; ++n) {
    // Near q* the rounded P(s) can dip an ulp below s; q_n never decreases.
    s = std::max(s, pgf(model, s));
    q.push_back(s);
  }
  return ExtinctionCurve{model, std::move(q), extinction_probability(model, 1e-12)};
}

ExtinctionTimeDist extinction_time_pmf(const OffspringModel& model, std::size_t n_generations) {
  ExtinctionCurve curve = extinction_curve(model, n_generations);
  ExtinctionTimeDist dist;
  dist.pt.reserve(n_generations);
  double prev = 0.0;
  for (double qn : curve.q) {
    dist.pt.push_back(qn - prev);
    prev = qn;
  }
  dist.cumulative = std::move(curve.q);
  return dist;
}

GenerationTrace simulate_generations(const OffspringModel& model, std::uint64_t seed,
                                     std::size_t max_generations, std::uint64_t population_cap) {
  check_sim_args(max_generations, population_cap);
  return run_trace(pmf_table(model, kDefaultTailEps), seed, max_generations, population_cap);
}

double SimulationSummary::extinct_by_fraction(std::size_t n) const {
  if (n == 0 || n > extinct_by.size() || traces == 0) return 0.0;
  return double(extinct_by[n - 1]) / double(traces);
}

SimulationSummary simulate_many(const OffspringModel& model, std::uint64_t seed, std::size_t traces,
                                std::size_t max_generations, std::uint64_t population_cap, unsigned threads) {
  check_sim_args(max_generations, population_cap);
  if (traces == 0) throw DomainError("simulate: traces must be at least 1");
  const PmfTable table = pmf_table(model, kDefaultTailEps);
  threads = std::clamp<unsigned>(threads, 1u, 64u);
  if (threads > traces) threads = static_cast<unsigned>(traces);

  std::vector<SimulationSummary> parts(threads);
  auto work = [&](unsigned w) {
    SimulationSummary& part = parts[w];
    part.extinct_by.assign(max_generations, 0);
    for (std::size_t i = w; i < traces; i += threads) {
      const GenerationTrace t = run_trace(table, derive_seed(seed, i), max_generations, population_cap);
      ++part.traces;
      if (t.extinct) {
        ++part.extinct;
        // Extinct at generation K = sizes.size() - 1 and at every later one.
        for (std::size_t n = t.sizes.size() - 1; n <= max_generations; ++n) ++part.extinct_by[n - 1];
      } else if (t.truncated) {
        ++part.truncated;
      } else {
        ++part.censored;
      }
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  SimulationSummary total;
  total.extinct_by.assign(max_generations, 0);
  for (const auto& p : parts) {
    total.traces += p.traces;
    total.extinct += p.extinct;
    total.truncated += p.truncated;
    total.censored += p.censored;
    for (std::size_t n = 0; n < max_generations; ++n) total.extinct_by[n] += p.extinct_by[n];
  }
  return total;
}

}  // namespace ppgw
