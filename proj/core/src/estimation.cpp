#include "ppgw/estimation.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "ppgw/error.hpp"

namespace ppgw {

namespace {

const double kLogMinNormal = std::log(DBL_MIN);

}  // namespace

Estimates repeated_moment_estimate(std::uint64_t n, std::uint64_t f0, double sample_mean) {
  if (n == 0) throw DomainError("estimate: sample size must be at least 1");
  if (f0 == 0) throw DomainError("estimate: zero class is empty (f0 = 0), lambda_hat = log n - log f0 is undefined");
  if (f0 > n) throw DomainError("estimate: f0 exceeds the sample size");
  if (f0 == n) throw DomainError("estimate: every observation is zero (f0 = n, sample mean 0); the sample is degenerate");

  Estimates e{};
  e.sample_mean = sample_mean;
  e.zero_fraction = static_cast<double>(f0) / static_cast<double>(n);
  e.lambda_hat = std::log(static_cast<double>(n)) - std::log(static_cast<double>(f0));
  const double em1 = std::expm1(-e.lambda_hat);  // e^-lambda_hat - 1
  e.mu_hat = e.lambda_hat * (sample_mean + em1) / (em1 + e.lambda_hat);
  e.admissible = e.mu_hat > 0.0 && e.mu_hat < e.lambda_hat;
  return e;
}

Estimates repeated_moment_estimate(const FrequencyTable& freq) {
  return repeated_moment_estimate(freq.n(), freq.count(0), freq.sample_mean());
}

double log_likelihood(const JanardanParams& params, const FrequencyTable& freq) {
  double total = 0.0;
  for (std::size_t m = 0; m <= freq.max_class(); ++m) {
    const auto f = freq.count(m);
    if (f == 0) continue;
    const double lp = janardan_log_pmf(params, m);
    if (lp < kLogMinNormal) return -std::numeric_limits<double>::infinity();
    total += static_cast<double>(f) * lp;
  }
  return total;
}

// log p_m = log lambda + (m-1) log mu - lambda - log m! + log S_m(lambda - mu),
// S_m(d) = sum_k m/(m+k) d^k/k!, so with W = e^-d S:
//   d/dlambda log p_m = 1/lambda - 1 + S'/S
//   d/dmu     log p_m = (m-1)/mu   - S'/S
// and S'/S = shifted / value from remainder_weights. p_0 = e^-lambda gives (-1, 0).
Score score(const JanardanParams& params, const FrequencyTable& freq) {
  const double lambda = params.lambda(), mu = params.mu();
  Score g{0.0, 0.0};
  for (std::size_t m = 0; m <= freq.max_class(); ++m) {
    const auto count = freq.count(m);
    if (count == 0) continue;
    const double f = static_cast<double>(count);
    if (janardan_log_pmf(params, m) < kLogMinNormal) {
      throw EvaluationError("score: p_" + std::to_string(m) + " underflows at (lambda, mu) = (" +
                            std::to_string(lambda) + ", " + std::to_string(mu) + ")");
    }
    if (m == 0) {
      g.d_lambda -= f;
      continue;
    }
    const auto w = remainder_weights(m, params.gap());
    const double ratio = w.shifted / w.value;
    g.d_lambda += f * (1.0 / lambda - 1.0 + ratio);
    g.d_mu += f * ((static_cast<double>(m) - 1.0) / mu - ratio);
  }
  return g;
}

double poisson_mle(const FrequencyTable& freq) { return freq.sample_mean(); }

}  // namespace ppgw
