#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gen.hpp"
#include "ppgw/branching.hpp"
#include "ppgw/error.hpp"
#include "ppgw/rng.hpp"

using namespace ppgw;

namespace {

struct RootCase {
  OffspringModel model;
  double q;
};

// Smallest root of P(s) = s, 60-digit evaluation.
const RootCase kRoots[] = {
    {OffspringModel::poisson(2), 0.20318786997997995},
    {OffspringModel::poisson(1.5), 0.41718835613418861},
    {OffspringModel::poisson(3), 0.059520209292640369},
    {OffspringModel::poisson(6), 0.0025164622662342625},
    {OffspringModel::janardan(2, 1.9999), 0.20319273170444329},
    {OffspringModel::janardan(2, 1), 0.30605839227870024},
    {OffspringModel::janardan(2, 1.9), 0.20833248869633267},
    {OffspringModel::janardan(8, 4), 0.00034798986278993423},
    {OffspringModel::janardan(1.5, 1.4999), 0.41720503464413738},
    {OffspringModel::janardan(3, 1), 0.10165821609576955},
};

std::vector<OffspringModel> supercritical_grid() {
  std::vector<OffspringModel> out;
  for (double l : {1.2, 1.5, 2.0, 3.0, 4.5, 6.0, 8.0}) {
    out.push_back(OffspringModel::poisson(l));
    for (double r : {0.3, 0.5, 0.7, 0.9, 0.99}) {
      const auto m = OffspringModel::janardan(l, r * l);
      if (mean(m) > 1.01) out.push_back(m);
    }
  }
  return out;
}

}  // namespace

TEST(Classify, Examples) {
  EXPECT_EQ(classify(OffspringModel::janardan(0.8, 0.4)).cls, CriticalityClass::Subcritical);
  EXPECT_FALSE(classify(OffspringModel::janardan(0.8, 0.4)).threshold_mu.has_value());

  const Criticality sub = classify(OffspringModel::janardan(2, 0.2));
  EXPECT_EQ(sub.cls, CriticalityClass::Subcritical);
  ASSERT_TRUE(sub.threshold_mu.has_value());
  EXPECT_NEAR(*sub.threshold_mu, 0.2384, 5e-5);

  const Criticality sup = classify(OffspringModel::janardan(2, 1));
  EXPECT_EQ(sup.cls, CriticalityClass::Supercritical);
  EXPECT_NEAR(sup.mean_offspring, 1.43233235838169, 1e-13);

  EXPECT_EQ(classify(OffspringModel::poisson(1)).cls, CriticalityClass::Critical);
  EXPECT_EQ(classify(OffspringModel::poisson(1.5)).cls, CriticalityClass::Supercritical);
  EXPECT_EQ(classify(OffspringModel::bernoulli(0.9)).cls, CriticalityClass::Subcritical);
}

TEST(Classify, SubcriticalForEverySmallLambda) {
  gen::Source src(3);
  for (int i = 0; i < 200; ++i) {
    const auto [l, mu] = src.janardan(0.05, 0.999);
    EXPECT_EQ(classify(OffspringModel::janardan(l, mu)).cls, CriticalityClass::Subcritical);
  }
}

TEST(CriticalMu, Values) {
  const double g[][2] = {{1.5, 0.4628423189456586},  {2, 0.23840584404423511},  {3, 0.072866693037789621},
                         {4.5, 0.014237804770908055}, {6, 0.0029730287317116257}, {8, 0.00038336748825071911}};
  for (const auto& row : g) EXPECT_NEAR(critical_mu(row[0]), row[1], 1e-15 + 1e-14 * row[1]);
  EXPECT_NEAR(critical_mu(2), 0.238406, 5e-7);
  EXPECT_DOUBLE_EQ(critical_mu(1), 1.0);
}

TEST(CriticalMu, IsTheCriticalityBoundary) {
  for (double l : {1.5, 2.0, 3.0, 4.5, 6.0, 8.0}) {
    EXPECT_NEAR(mean(OffspringModel::janardan(l, critical_mu(l))), 1.0, 1e-12) << "lambda=" << l;
  }
}

TEST(CriticalMu, MatchesBisectionOracle) {
  // Solve mean(lambda, mu) = 1 in mu by plain bisection.
  const double l = 8;
  double lo = 1e-12, hi = l * (1 - 1e-9);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean(OffspringModel::janardan(l, mid)) < 1 ? lo : hi) = mid;
  }
  const double v = critical_mu(l);
  EXPECT_NEAR(v, lo, 1e-15);
  EXPECT_NEAR(mean(OffspringModel::janardan(l, v)), 1.0, 1e-10);
}

TEST(CriticalMu, RejectsSmallLambda) {
  EXPECT_THROW(critical_mu(0.8), DomainError);
  EXPECT_THROW(critical_mu(NAN), DomainError);
  try {
    critical_mu(0.5);
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("no supercritical mu"), std::string::npos);
  }
}

TEST(Extinction, HighPrecisionRoots) {
  for (const auto& c : kRoots) {
    const ExtinctionRoot r = solve_extinction(c.model);
    EXPECT_NEAR(r.probability, c.q, 1e-15) << c.model.label();
    EXPECT_LE(std::abs(r.residual), 1e-12);
  }
}

TEST(Extinction, SubcriticalIsOne) {
  EXPECT_EQ(extinction_probability(OffspringModel::janardan(0.8, 0.4)), 1.0);
  EXPECT_EQ(extinction_probability(OffspringModel::janardan(2, 0.2)), 1.0);
  EXPECT_EQ(extinction_probability(OffspringModel::poisson(1)), 1.0);
  EXPECT_EQ(extinction_probability(OffspringModel::bernoulli(0.99)), 1.0);
}

TEST(Extinction, RootAndFixedPointAgree) {
  for (const auto& m : supercritical_grid()) {
    const ExtinctionRoot r = solve_extinction(m);
    EXPECT_TRUE(r.fixed_point_converged) << m.label();
    EXPECT_NEAR(r.probability, r.fixed_point, 1e-9) << m.label();
  }
}

TEST(Extinction, ClassificationConsistency) {
  gen::Source src(23);
  for (int i = 0; i < 300; ++i) {
    const auto [l, mu] = src.janardan(0.3, 10);
    const auto m = OffspringModel::janardan(l, mu);
    if (std::abs(mean(m) - 1) < 1e-3) continue;  // fixed point too slow to cross-check
    const double q = extinction_probability(m);
    if (classify(m).cls == CriticalityClass::Supercritical) EXPECT_LT(q, 1 - 1e-9) << m.label();
    else EXPECT_EQ(q, 1.0) << m.label();
  }
}

TEST(Extinction, ToleranceDomain) {
  const auto m = OffspringModel::poisson(2);
  EXPECT_THROW(extinction_probability(m, 0.0), DomainError);
  EXPECT_THROW(extinction_probability(m, 1e-5), DomainError);
  EXPECT_NO_THROW(extinction_probability(m, 1e-6));
}

TEST(Extinction, GridBrentProcedure) {
  // Values of the 100-cell grid + zeroin search at DBL_EPSILON^0.2.
  EXPECT_NEAR(extinction_probability_grid_brent(OffspringModel::poisson(2)), 0.2032028096, 1e-9);
  EXPECT_NEAR(extinction_probability_grid_brent(OffspringModel::janardan(2, 1.9999)), 0.2032076838, 1e-9);
  EXPECT_NEAR(extinction_probability_grid_brent(OffspringModel::poisson(6)), 0.002517337287, 1e-11);
  EXPECT_EQ(extinction_probability_grid_brent(OffspringModel::janardan(0.8, 0.4)), 1.0);
  // At a tight tolerance it is the exact root.
  EXPECT_NEAR(extinction_probability_grid_brent(OffspringModel::poisson(2), 1e-15), 0.20318786997997995, 1e-15);
}

TEST(Curve, ReferenceValues) {
  EXPECT_NEAR(extinction_curve(OffspringModel::poisson(2), 10).at(10), 0.2031694953, 5e-11);
  EXPECT_NEAR(extinction_curve(OffspringModel::janardan(2, 1), 20).at(20), 0.3060074, 5e-8);
}

TEST(Curve, FirstGenerationIsZeroClass) {
  for (const auto& m : supercritical_grid()) {
    const ExtinctionCurve c = extinction_curve(m, 1);
    ASSERT_EQ(c.generations(), 1u);
    EXPECT_EQ(c.at(1), pgf(m, 0.0));
    EXPECT_EQ(c.at(0), 0.0);
  }
}

TEST(Curve, MonotoneAndBoundedByLimit) {
  std::vector<OffspringModel> models = supercritical_grid();
  models.push_back(OffspringModel::janardan(0.8, 0.4));
  models.push_back(OffspringModel::janardan(2, 0.2));
  for (const auto& m : models) {
    const ExtinctionCurve c = extinction_curve(m, 200);
    for (std::size_t n = 1; n <= 200; ++n) {
      EXPECT_GE(c.at(n), c.at(n - 1));
      EXPECT_LE(c.at(n), std::nextafter(c.limit, 2.0)) << m.label() << " n=" << n;
    }
    EXPECT_LE(c.limit, 1.0);
  }
}

TEST(Curve, ConvergesToLimit) {
  for (const auto& m : supercritical_grid()) {
    const ExtinctionCurve c = extinction_curve(m, 2000);
    EXPECT_NEAR(c.q.back(), c.limit, 1e-9) << m.label();
  }
}

TEST(Curve, RejectsZeroGenerations) {
  EXPECT_THROW(extinction_curve(OffspringModel::poisson(2), 0), DomainError);
}

TEST(ExtinctionTime, ReferenceValues) {
  const auto pm = extinction_time_pmf(OffspringModel::poisson(0.8), 20);
  EXPECT_NEAR(pm.pt[19], 9.44e-4, 5e-7);
  const auto jm = extinction_time_pmf(OffspringModel::janardan(0.8, 0.4), 10);
  EXPECT_NEAR(jm.pt[9], 5.77e-3, 5e-6);
}

TEST(ExtinctionTime, TelescopesExactly) {
  std::vector<OffspringModel> models = supercritical_grid();
  models.push_back(OffspringModel::janardan(0.8, 0.4));
  models.push_back(OffspringModel::janardan(2, 0.2));
  models.push_back(OffspringModel::bernoulli(0.4));
  for (const auto& m : models) {
    const ExtinctionTimeDist d = extinction_time_pmf(m, 100);
    const ExtinctionCurve c = extinction_curve(m, 100);
    ASSERT_EQ(d.cumulative, c.q);
    EXPECT_EQ(d.pt[0], c.q[0]);
    double sum = 0;
    for (std::size_t n = 0; n < d.pt.size(); ++n) {
      EXPECT_GE(d.pt[n], 0.0);
      sum += d.pt[n];
      EXPECT_EQ(sum, c.q[n]) << m.label() << " n=" << n + 1;
    }
  }
}

TEST(Simulate, TraceInvariants) {
  gen::Source src(31);
  for (int i = 0; i < 200; ++i) {
    const auto [l, mu] = src.janardan(0.3, 4);
    const auto m = OffspringModel::janardan(l, mu);
    const GenerationTrace t = simulate_generations(m, src.integer(0, ~0ull), 50, 100000);
    ASSERT_FALSE(t.sizes.empty());
    EXPECT_EQ(t.sizes.front(), 1u);
    EXPECT_LE(t.sizes.size(), 51u);
    EXPECT_EQ(t.extinct, t.sizes.back() == 0);
    for (std::size_t k = 1; k + 1 < t.sizes.size(); ++k) EXPECT_GT(t.sizes[k], 0u);
    if (t.truncated) EXPECT_GT(t.sizes.back(), 100000u);
    EXPECT_FALSE(t.extinct && t.truncated);
  }
}

TEST(Simulate, Deterministic) {
  const auto m = OffspringModel::janardan(2, 1.9);
  const GenerationTrace a = simulate_generations(m, 77, 30);
  const GenerationTrace b = simulate_generations(m, 77, 30);
  EXPECT_EQ(a.sizes, b.sizes);
  EXPECT_EQ(a.seed, 77u);
}

TEST(Simulate, SummaryIndependentOfThreads) {
  const auto m = OffspringModel::poisson(2);
  const SimulationSummary one = simulate_many(m, 5, 2000, 40, kDefaultPopulationCap, 1);
  const SimulationSummary four = simulate_many(m, 5, 2000, 40, kDefaultPopulationCap, 4);
  EXPECT_EQ(one.extinct, four.extinct);
  EXPECT_EQ(one.truncated, four.truncated);
  EXPECT_EQ(one.censored, four.censored);
  EXPECT_EQ(one.extinct_by, four.extinct_by);
  EXPECT_EQ(one.traces, one.extinct + one.truncated + one.censored);
}

TEST(Simulate, SubcriticalDiesOut) {
  const SimulationSummary s = simulate_many(OffspringModel::janardan(0.8, 0.4), 1, 10000, 200, kDefaultPopulationCap, 4);
  EXPECT_GE(s.extinct_fraction(), 0.995);
}

TEST(Simulate, PoissonTwoExtinctionFraction) {
  const SimulationSummary s = simulate_many(OffspringModel::poisson(2), 2, 10000, 100, kDefaultPopulationCap, 4);
  EXPECT_NEAR(s.extinct_fraction(), 0.2032, 0.02);
}

TEST(Simulate, CapMarksTruncated) {
  const SimulationSummary s = simulate_many(OffspringModel::poisson(4), 9, 500, 100, 1000, 2);
  EXPECT_GT(s.truncated, 0u);
  EXPECT_EQ(s.censored, 0u);
  EXPECT_EQ(s.traces, s.extinct + s.truncated);
}

TEST(Simulate, GrowthMatchesMeanPower) {
  // Past 64 parents a generation is drawn as multinomial class counts. For
  // Poisson(2), W = X_15 / 2^15 has mean 1 and variance about 1.
  const auto m = OffspringModel::poisson(2);
  const int traces = 4000;
  double acc = 0;
  for (int i = 0; i < traces; ++i) acc += double(simulate_generations(m, derive_seed(13, i), 15).sizes.back());
  const double w = acc / traces / std::pow(2.0, 15);
  EXPECT_NEAR(w, 1.0, 0.07);
}

TEST(Simulate, ArgumentChecks) {
  const auto m = OffspringModel::poisson(2);
  EXPECT_THROW(simulate_generations(m, 1, 0), DomainError);
  EXPECT_THROW(simulate_generations(m, 1, 10, 0), DomainError);
  EXPECT_THROW(simulate_many(m, 1, 0, 10), DomainError);
}
