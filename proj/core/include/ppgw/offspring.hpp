#pragma once

// Offspring laws for the Galton-Watson process: the Janardan (perturbed
// Poisson) family together with its two limits, Poisson(lambda) as mu -> lambda
// and Bernoulli(1 - e^-lambda) as mu -> 0.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ppgw/frequency.hpp"

namespace ppgw {

inline constexpr double kDefaultTailEps = 1e-12;
inline constexpr std::size_t kMaxPmfTerms = 1'000'000;
/// |lambda - mu| / lambda below this is treated as the Poisson limit.
inline constexpr double kPoissonLimitRelGap = 1e-9;

/// Janardan parameters, lambda > 0 and 0 < mu < lambda.
class JanardanParams {
 public:
  JanardanParams(double lambda, double mu);

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  /// lambda - mu, always > 0.
  double gap() const { return lambda_ - mu_; }
  bool near_poisson() const { return gap() < kPoissonLimitRelGap * lambda_; }

  friend bool operator==(const JanardanParams&, const JanardanParams&) = default;

 private:
  double lambda_;
  double mu_;
};

class PoissonParams {
 public:
  explicit PoissonParams(double lambda);
  double lambda() const { return lambda_; }
  friend bool operator==(const PoissonParams&, const PoissonParams&) = default;

 private:
  double lambda_;
};

class BernoulliParams {
 public:
  explicit BernoulliParams(double p);
  double p() const { return p_; }
  friend bool operator==(const BernoulliParams&, const BernoulliParams&) = default;

 private:
  double p_;
};

/// One of the three offspring laws. Construction validates parameters.
class OffspringModel {
 public:
  using Variant = std::variant<JanardanParams, PoissonParams, BernoulliParams>;

  static OffspringModel janardan(double lambda, double mu) { return OffspringModel(JanardanParams(lambda, mu)); }
  static OffspringModel poisson(double lambda) { return OffspringModel(PoissonParams(lambda)); }
  static OffspringModel bernoulli(double p) { return OffspringModel(BernoulliParams(p)); }

  explicit OffspringModel(Variant v) : v_(v) {}

  const Variant& variant() const { return v_; }
  const JanardanParams* as_janardan() const { return std::get_if<JanardanParams>(&v_); }
  const PoissonParams* as_poisson() const { return std::get_if<PoissonParams>(&v_); }
  const BernoulliParams* as_bernoulli() const { return std::get_if<BernoulliParams>(&v_); }

  /// Short label such as "JM(2,1)", "PM(0.8)" or "BM(0.55)".
  std::string label() const;

  friend bool operator==(const OffspringModel&, const OffspringModel&) = default;

 private:
  Variant v_;
};

/// Truncated pmf p_0..p_M with running sums.
///
/// Invariants: p_i >= 0, cum nondecreasing with cum.back() <= 1, and
/// tail_bound = 1 - cum.back() in [0, tail_eps].
class PmfTable {
 public:
  PmfTable(std::vector<double> probs, double tail_eps);

  std::span<const double> probs() const { return probs_; }
  std::span<const double> cum() const { return cum_; }
  double tail_bound() const { return tail_bound_; }
  std::size_t max_class() const { return probs_.size() - 1; }
  double operator[](std::size_t m) const { return m < probs_.size() ? probs_[m] : 0.0; }

  /// Inverse CDF: smallest m with u <= cum[m]; u above cum[M] maps to M.
  std::size_t quantile(double u) const;

  /// Sum of m^k p_m over the table (k = 1, 2).
  double raw_moment(int k) const;

 private:
  std::vector<double> probs_;
  std::vector<double> cum_;
  double tail_bound_;
};

/// p_m of the Janardan law.
///
/// Uses p_m = lambda mu^(m-1) e^-mu / m! * W_m(lambda - mu) where
/// W_m(d) = sum_k m/(m+k) * e^-d d^k/k! is a Poisson(d)-weighted mean of
/// m/(m+k). This equals the exponential-series remainder
/// e^-mu sum_{j>=m} (mu-lambda)^j/j! scaled by (mu-lambda)^-m, but every term
/// is positive, so there is no cancellation and p_m > 0 whenever it is
/// representable.
double janardan_pmf(const JanardanParams& params, std::size_t m);
double janardan_log_pmf(const JanardanParams& params, std::size_t m);

/// W_m(d) and its derivative dW_m/dd + W_m, i.e. sum_k m/(m+k+1) e^-d d^k/k!.
/// The score needs d/dd log(e^d W_m(d)) = second / first.
struct RemainderWeights {
  double value;
  double shifted;
};
RemainderWeights remainder_weights(std::size_t m, double gap);

double pmf(const OffspringModel& model, std::size_t m);
double log_pmf(const OffspringModel& model, std::size_t m);

PmfTable pmf_table(const OffspringModel& model, double tail_eps = kDefaultTailEps);

/// Probability generating function P(s), s in [0, 1].
double pgf(const OffspringModel& model, double s);

double mean(const OffspringModel& model);
double variance(const OffspringModel& model);

/// n inverse-CDF draws over pmf_table(model, 1e-12).
std::vector<std::uint32_t> draw(const OffspringModel& model, std::size_t n, std::uint64_t seed);

/// Class frequencies of draw(model, n, seed).
FrequencyTable sample(const OffspringModel& model, std::size_t n, std::uint64_t seed);

}  // namespace ppgw
