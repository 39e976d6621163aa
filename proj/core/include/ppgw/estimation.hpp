#pragma once

#include <cstdint>

#include "ppgw/frequency.hpp"
#include "ppgw/offspring.hpp"

namespace ppgw {

/// Repeated-moment estimates of (lambda, mu) for the Janardan family.
struct Estimates {
  double lambda_hat;
  double mu_hat;
  double sample_mean;    // x-bar
  double zero_fraction;  // f_0 / n
  /// 0 < mu_hat < lambda_hat. Inadmissible estimates are reported, not clamped.
  bool admissible;
};

/// lambda_hat = log n - log f_0 matches E[Z] = e^-lambda for the zero-class
/// indicator Z; mu_hat then solves E[xi] = x-bar at lambda_hat:
///
///   mu_hat = lambda_hat (x-bar - 1 + e^-lambda_hat) / (e^-lambda_hat + lambda_hat - 1)
///
/// Throws DomainError when f_0 = 0 (lambda_hat undefined) or f_0 = n (x-bar = 0).
Estimates repeated_moment_estimate(const FrequencyTable& freq);

/// Same estimator from the sufficient statistics (n, f_0, x-bar).
Estimates repeated_moment_estimate(std::uint64_t n, std::uint64_t f0, double sample_mean);

/// sum_m f_m log p_m over observed classes. Returns -infinity when an observed
/// class has p_m below the smallest normal double.
double log_likelihood(const JanardanParams& params, const FrequencyTable& freq);

struct Score {
  double d_lambda;
  double d_mu;
};

/// Gradient of log_likelihood in (lambda, mu). Throws EvaluationError naming
/// the class if an observed class underflows.
Score score(const JanardanParams& params, const FrequencyTable& freq);

/// Poisson maximum-likelihood estimate, the sample mean.
double poisson_mle(const FrequencyTable& freq);

}  // namespace ppgw
