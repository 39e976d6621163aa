#include "ppgw/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "ppgw/error.hpp"
#include "ppgw/rng.hpp"

namespace ppgw {

namespace {

constexpr double kSeriesRelTol = 1e-18;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// sum_k weight(k) * e^-d d^k / k!, summed outward from the mode so that no
// intermediate over- or underflows. weight must be positive and bounded by 1.
template <class Weight>
double poisson_weighted(double d, Weight weight) {
  if (d == 0.0) return weight(0);
  const double mode = std::floor(d);
  const double p_mode = std::exp(mode * std::log(d) - d - std::lgamma(mode + 1.0));
  const auto k_mode = static_cast<std::size_t>(mode);

  double sum = weight(k_mode) * p_mode;
  double t = p_mode;
  for (std::size_t k = k_mode + 1;; ++k) {
    t *= d / static_cast<double>(k);
    sum += weight(k) * t;
    if (t < kSeriesRelTol * sum) break;
  }
  t = p_mode;
  for (std::size_t k = k_mode; k-- > 0;) {
    t *= static_cast<double>(k + 1) / d;
    sum += weight(k) * t;
    if (t < kSeriesRelTol * sum) break;
  }
  return sum;
}

double poisson_log_pmf(double lambda, std::size_t m) {
  if (m == 0) return -lambda;
  const double md = static_cast<double>(m);
  return md * std::log(lambda) - lambda - std::lgamma(md + 1.0);
}

double janardan_mean(const JanardanParams& p) {
  const double lambda = p.lambda();
  // (mu/lambda)(e^-lambda + lambda - 1) + (1 - e^-lambda)
  const double em1 = std::expm1(-lambda);
  return p.mu() / lambda * (em1 + lambda) - em1;
}

void check_unit_interval(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DomainError(std::string(what) + ": argument " + fmt_g(s) + " outside [0, 1]");
  }
}

}  // namespace

JanardanParams::JanardanParams(double lambda, double mu) : lambda_(lambda), mu_(mu) {
  if (!finite_positive(lambda)) throw DomainError("Janardan: lambda must be > 0, got " + fmt_g(lambda));
  if (!finite_positive(mu) || !(mu < lambda)) {
    throw DomainError("Janardan: mu must satisfy 0 < mu < lambda, got mu=" + fmt_g(mu) +
                      ", lambda=" + fmt_g(lambda));
  }
}

PoissonParams::PoissonParams(double lambda) : lambda_(lambda) {
  if (!finite_positive(lambda)) throw DomainError("Poisson: lambda must be > 0, got " + fmt_g(lambda));
}

BernoulliParams::BernoulliParams(double p) : p_(p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("Bernoulli: p must lie in (0, 1), got " + fmt_g(p));
}

std::string OffspringModel::label() const {
  return std::visit(Overloaded{
                        [](const JanardanParams& p) { return "JM(" + fmt_g(p.lambda()) + "," + fmt_g(p.mu()) + ")"; },
                        [](const PoissonParams& p) { return "PM(" + fmt_g(p.lambda()) + ")"; },
                        [](const BernoulliParams& p) { return "BM(" + fmt_g(p.p()) + ")"; },
                    },
                    v_);
}

// ---------------------------------------------------------------------------
// PmfTable

PmfTable::PmfTable(std::vector<double> probs, double tail_eps) : probs_(std::move(probs)) {
  if (probs_.empty()) throw DomainError("pmf table: empty probability vector");
  cum_.reserve(probs_.size());
  double sum = 0.0, comp = 0.0;  // Neumaier
  for (double p : probs_) {
    if (!(p >= 0.0)) throw DomainError("pmf table: negative or NaN probability");
    const double t = sum + p;
    comp += std::abs(sum) >= p ? (sum - t) + p : (p - t) + sum;
    sum = t;
    // Rounding can push the running sum a hair past 1.
    cum_.push_back(std::min(sum + comp, 1.0));
  }
  tail_bound_ = std::max(0.0, 1.0 - cum_.back());
  if (tail_bound_ > tail_eps) throw DomainError("pmf table: tail mass exceeds tail_eps");
}

std::size_t PmfTable::quantile(double u) const {
  const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) return max_class();
  return static_cast<std::size_t>(it - cum_.begin());
}

double PmfTable::raw_moment(int k) const {
  long double acc = 0;
  for (std::size_t m = 1; m < probs_.size(); ++m) {
    const long double x = static_cast<long double>(m);
    acc += (k == 1 ? x : x * x) * probs_[m];
  }
  return static_cast<double>(acc);
}

// ---------------------------------------------------------------------------
// Janardan pmf

RemainderWeights remainder_weights(std::size_t m, double gap) {
  if (m == 0) return {0.0, 0.0};
  const double md = static_cast<double>(m);
  return {
      poisson_weighted(gap, [md](std::size_t k) { return md / (md + static_cast<double>(k)); }),
      poisson_weighted(gap, [md](std::size_t k) { return md / (md + static_cast<double>(k) + 1.0); }),
  };
}

double janardan_log_pmf(const JanardanParams& params, std::size_t m) {
  const double lambda = params.lambda();
  if (m == 0) return -lambda;
  if (params.near_poisson()) return poisson_log_pmf(lambda, m);
  const double mu = params.mu();
  const double md = static_cast<double>(m);
  const double w = remainder_weights(m, params.gap()).value;
  return std::log(lambda) + (md - 1.0) * std::log(mu) - mu - std::lgamma(md + 1.0) + std::log(w);
}

double janardan_pmf(const JanardanParams& params, std::size_t m) {
  if (m == 0) return std::exp(-params.lambda());
  return std::exp(janardan_log_pmf(params, m));
}

double log_pmf(const OffspringModel& model, std::size_t m) {
  return std::visit(Overloaded{
                        [m](const JanardanParams& p) { return janardan_log_pmf(p, m); },
                        [m](const PoissonParams& p) { return poisson_log_pmf(p.lambda(), m); },
                        [m](const BernoulliParams& p) {
                          if (m == 0) return std::log1p(-p.p());
                          if (m == 1) return std::log(p.p());
                          return -std::numeric_limits<double>::infinity();
                        },
                    },
                    model.variant());
}

double pmf(const OffspringModel& model, std::size_t m) {
  if (const auto* b = model.as_bernoulli()) return m == 0 ? 1.0 - b->p() : (m == 1 ? b->p() : 0.0);
  return std::exp(log_pmf(model, m));
}

PmfTable pmf_table(const OffspringModel& model, double tail_eps) {
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) throw DomainError("pmf_table: tail_eps must lie in (0, 1)");
  if (const auto* b = model.as_bernoulli()) return PmfTable({1.0 - b->p(), b->p()}, tail_eps);

  std::vector<double> probs;
  const double target = 1.0 - tail_eps;
  double sum = 0.0, comp = 0.0;
  for (std::size_t m = 0; m < kMaxPmfTerms; ++m) {
    const double p = pmf(model, m);
    probs.push_back(p);
    const double t = sum + p;
    comp += std::abs(sum) >= p ? (sum - t) + p : (p - t) + sum;
    sum = t;
    if (sum + comp >= target) return PmfTable(std::move(probs), tail_eps);
  }
  throw NonConvergenceError("pmf_table: " + model.label() + " did not reach cumulative mass 1 - " +
                            fmt_g(tail_eps) + " within " + std::to_string(kMaxPmfTerms) + " terms");
}

// ---------------------------------------------------------------------------
// pgf and moments

double pgf(const OffspringModel& model, double s) {
  check_unit_interval(s, "pgf");
  return std::visit(Overloaded{
                        [s](const JanardanParams& p) {
                          const double lambda = p.lambda(), mu = p.mu();
                          if (p.near_poisson()) return std::exp(-lambda * (1.0 - s));
                          // Both numerator terms and both denominator terms are
                          // nonnegative on [0, 1].
                          const double num = (1.0 - s) * p.gap() * std::exp(-lambda) +
                                             s * lambda * std::exp(-mu * (1.0 - s));
                          const double den = p.gap() + mu * s;
                          return num / den;
                        },
                        [s](const PoissonParams& p) { return std::exp(-p.lambda() * (1.0 - s)); },
                        [s](const BernoulliParams& p) { return 1.0 - p.p() + s * p.p(); },
                    },
                    model.variant());
}

double mean(const OffspringModel& model) {
  return std::visit(Overloaded{
                        [](const JanardanParams& p) {
                          return p.near_poisson() ? p.lambda() : janardan_mean(p);
                        },
                        [](const PoissonParams& p) { return p.lambda(); },
                        [](const BernoulliParams& p) { return p.p(); },
                    },
                    model.variant());
}

double variance(const OffspringModel& model) {
  return std::visit(Overloaded{
                        [](const JanardanParams& p) {
                          const double lambda = p.lambda(), mu = p.mu();
                          if (p.near_poisson()) return lambda;
                          const double e = janardan_mean(p);
                          const double r = mu / lambda;
                          return mu * mu - e * e + (-std::expm1(-lambda)) * (1.0 - r) * (1.0 - 2.0 * r) +
                                 mu * (3.0 - 2.0 * r);
                        },
                        [](const PoissonParams& p) { return p.lambda(); },
                        [](const BernoulliParams& p) { return p.p() * (1.0 - p.p()); },
                    },
                    model.variant());
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<std::uint32_t> draw(const OffspringModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample: n must be at least 1");
  const PmfTable table = pmf_table(model, kDefaultTailEps);
  Rng rng(seed);
  std::vector<std::uint32_t> xs(n);
  for (auto& x : xs) x = static_cast<std::uint32_t>(table.quantile(rng.uniform01()));
  return xs;
}

FrequencyTable sample(const OffspringModel& model, std::size_t n, std::uint64_t seed) {
  const auto xs = draw(model, n, seed);
  return FrequencyTable::from_observations(xs);
}

}  // namespace ppgw
