#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gsos/density.hpp"
#include "oracles/kde_oracle.hpp"
#include "oracles/quadrature.hpp"

using namespace gsos;

TEST(Kernel, KnownValuesAndSymmetry) {
  EXPECT_NEAR(gaussian_kernel(0.0), 0.3989422804, 1e-10);
  EXPECT_EQ(gaussian_kernel(1.0), gaussian_kernel(-1.0));
  EXPECT_NEAR(gaussian_kernel(3.0), 0.0044318484, 1e-10);
  EXPECT_GT(gaussian_kernel(30.0), 0.0);
}

TEST(Kde, SingleSampleAtQuery) {
  NumericKde kde({5.0}, 1.0);
  EXPECT_NEAR(kde.estimate(5.0), 0.3989422804, 1e-10);
}

TEST(Kde, TwoSamplesMidpoint) {
  NumericKde kde({0.0, 2.0}, 1.0);
  EXPECT_NEAR(kde.estimate(1.0), 0.2419707245, 1e-10);
}

TEST(Kde, FourTermOracle) {
  const std::vector<double> s{0, 1, 2, 3};
  NumericKde kde(s, 0.5);
  EXPECT_NEAR(kde.estimate(1.5), oracle::kde(s, 0.5, 1.5), 1e-12);
}

TEST(Kde, RandomInstancesMatchOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> n(1, 40);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(static_cast<std::size_t>(n(rng)));
    for (auto& x : s) x = u(rng);
    const double h = 0.05 + std::abs(u(rng)) / 2.0;
    const double x = u(rng);
    NumericKde kde(s, h);
    ASSERT_NEAR(kde.estimate(x), oracle::kde(s, h, x), 1e-12);
    ASSERT_NEAR(std::exp(kde.log_estimate(x)), oracle::kde(s, h, x), 1e-12);
  }
}

TEST(Kde, LogEstimateStaysFiniteFarAway) {
  NumericKde kde({0.0}, 0.01);
  const double l = kde.log_estimate(100.0);
  EXPECT_TRUE(std::isfinite(l));
  EXPECT_NEAR(l, -0.5 * 1e8 - 0.5 * std::log(2 * M_PI) - std::log(0.01), 1e-6);
}

TEST(Kde, SymmetricSamplesGiveEvenDensity) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int t = 0; t < 50; ++t) {
    const double a = u(rng);
    NumericKde kde({-a, a}, 0.3 + u(rng) / 4);
    const double x = u(rng);
    ASSERT_NEAR(kde.estimate(x), kde.estimate(-x), 1e-12);
  }
}

TEST(Kde, IntegratesToOne) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> s(1 + t);
    for (auto& x : s) x = u(rng);
    const double h = 0.1 + std::abs(u(rng)) / 3.0;
    NumericKde kde(s, h);
    const double lo = *std::min_element(s.begin(), s.end()) - 10 * h;
    const double hi = *std::max_element(s.begin(), s.end()) + 10 * h;
    ASSERT_NEAR(oracle::simpson([&](double x) { return kde.estimate(x); }, lo, hi, h / 20), 1.0, 1e-6);
  }
}

TEST(Kde, RejectsBadConstruction) {
  EXPECT_THROW(NumericKde({}, 1.0), std::invalid_argument);
  EXPECT_THROW(NumericKde({1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(NumericKde({std::nan("")}, 1.0), std::invalid_argument);
}

TEST(Bandwidth, FloorWhenSamplesCoincide) {
  const std::vector<double> s{0.3, 0.3, 0.3};
  EXPECT_DOUBLE_EQ(select_bandwidth(s, 1.0), 0.001);
  const std::vector<double> one{0.3};
  EXPECT_DOUBLE_EQ(select_bandwidth(one, 2.0), 0.002);
}

TEST(Bandwidth, TwoSamplesHandArithmetic) {
  const std::vector<double> s{0.0, 1.0};
  EXPECT_NEAR(select_bandwidth(s, 10.0), std::sqrt(0.5) * std::pow(2.0, -0.2), 1e-12);
  EXPECT_NEAR(select_bandwidth(s, 10.0), 0.6156, 1e-4);
}

TEST(Bandwidth, ScottRuleOnNormalDraws) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> s(1000);
  for (auto& x : s) x = z(rng);
  const double h = select_bandwidth(s, 10.0);
  EXPECT_GE(h, 0.15);
  EXPECT_LE(h, 0.35);
  EXPECT_NEAR(h, oracle::sample_sd(s) * std::pow(1000.0, -0.2), 1e-12);
}

TEST(Bandwidth, FitUsesSearchScaleAndAdaptiveFloor) {
  const auto lr = ParamDomain::log_continuous("lr", 1e-5, 1.0, 0.01);
  const std::vector<double> raw{0.01, 0.01};
  const NumericKde plain = NumericKde::fit(raw, lr);
  EXPECT_NEAR(plain.bandwidth(), 5e-3, 1e-15);
  EXPECT_NEAR(plain.samples()[0], -2.0, 1e-12);
  const NumericKde floored = NumericKde::fit(raw, lr, true);
  EXPECT_NEAR(floored.bandwidth(), 5.0 / 3.0, 1e-12);
}

TEST(Categorical, AddOneSmoothing) {
  const auto opt = ParamDomain::categorical("optimizer", {"adam", "sgd"}, "adam");
  const std::vector<std::string> a{"adam", "adam", "sgd"};
  const auto pmf = fit_categorical(a, opt);
  EXPECT_NEAR(pmf.weight("adam"), 0.6, 1e-15);
  EXPECT_NEAR(pmf.weight("sgd"), 0.4, 1e-15);
  const auto empty = fit_categorical(std::span<const std::string>{}, opt);
  EXPECT_DOUBLE_EQ(empty.weight("adam"), 0.5);
  const std::vector<std::string> s{"sgd"};
  const auto one = fit_categorical(s, opt);
  EXPECT_NEAR(one.weight("adam"), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(one.weight("sgd"), 2.0 / 3.0, 1e-15);
}

TEST(Categorical, RejectsUnknownValues) {
  const auto opt = ParamDomain::categorical("optimizer", {"adam", "sgd"}, "adam");
  const std::vector<std::string> bad{"rmsprop"};
  EXPECT_THROW(fit_categorical(bad, opt), std::invalid_argument);
  EXPECT_THROW(fit_categorical(bad, ParamDomain::continuous("x", 0, 1, 0)), std::invalid_argument);
}

TEST(Categorical, WeightsNormalisedAndPositive) {
  std::mt19937_64 rng(15);
  const auto dom = ParamDomain::categorical("b", {"32", "64", "128", "256"}, "32");
  std::uniform_int_distribution<int> pick(0, 3);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> v(t % 17);
    for (auto& x : v) x = dom.choices()[static_cast<std::size_t>(pick(rng))];
    const auto pmf = fit_categorical(v, dom, 0.1 + t % 3);
    double sum = 0.0;
    for (double w : pmf.weights()) {
      ASSERT_GT(w, 0.0);
      sum += w;
    }
    ASSERT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Categorical, NearPointMassSampling) {
  std::mt19937_64 rng(16);
  CategoricalPmf pmf({"adam", "sgd"}, {1.0 - 1e-6, 1e-6});
  int adam = 0;
  for (int i = 0; i < 10000; ++i) adam += pmf.sample(rng) == "adam";
  EXPECT_GE(adam, 9900);
}

TEST(IntegerDensity, EvaluatesContinuousKde) {
  EXPECT_NEAR(integer_density(NumericKde({3.0}, 1.0), 3), 0.3989422804, 1e-10);
  EXPECT_NEAR(integer_density(NumericKde({2.0, 4.0}, 1.0), 3), 0.2419707245, 1e-10);
  EXPECT_NEAR(integer_density(NumericKde({2.0}, 0.5), 4), oracle::kde({2.0}, 0.5, 4.0), 1e-12);
}

TEST(Sampling, ReflectionKeepsDrawsInBounds) {
  std::mt19937_64 rng(17);
  const auto dom = ParamDomain::continuous("x", 0.0, 1.0, 0.5);
  const std::vector<double> raw{0.02, 0.5, 0.97};
  NumericKde kde(raw, 0.4);
  kde.set_bounds(0.0, 1.0);
  const Estimator est = kde;
  for (int i = 0; i < 100000; ++i) {
    const double v = std::get<double>(sample_from(est, dom, rng));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Sampling, FlooredKdeConcentratesNearSample) {
  std::mt19937_64 rng(18);
  const auto dom = ParamDomain::continuous("x", 0.0, 1.0, 0.5);
  const std::vector<double> raw{0.5};
  const Estimator est = NumericKde::fit(raw, dom);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::get<double>(sample_from(est, dom, rng));
    ASSERT_NEAR(v, 0.5, 0.01);
  }
}

TEST(Sampling, TwoComponentMixtureMean) {
  std::mt19937_64 rng(19);
  const auto dom = ParamDomain::continuous("x", 0.0, 1.0, 0.5);
  NumericKde kde({0.1, 0.9}, 0.05);
  kde.set_bounds(0.0, 1.0);
  const Estimator est = kde;
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += std::get<double>(sample_from(est, dom, rng));
  EXPECT_GE(sum / 10000, 0.45);
  EXPECT_LE(sum / 10000, 0.55);
}

TEST(Sampling, IntegerDrawsAreRoundedInRange) {
  std::mt19937_64 rng(20);
  const auto dom = ParamDomain::integer("k", 2, 4, 3);
  const std::vector<ParamValue> vals{std::int64_t{2}, std::int64_t{4}};
  const Estimator est = fit_estimator(vals, dom);
  for (int i = 0; i < 10000; ++i) {
    const auto v = sample_from(est, dom, rng);
    ASSERT_TRUE(std::holds_alternative<std::int64_t>(v));
    ASSERT_TRUE(dom.contains(v));
  }
}

TEST(Sampling, LogDomainDrawsStayInRange) {
  std::mt19937_64 rng(21);
  const auto dom = ParamDomain::log_continuous("lr", 1e-5, 1.0, 0.01);
  const std::vector<ParamValue> vals{1e-5, 2e-5, 0.9};
  const Estimator est = fit_estimator(vals, dom);
  for (int i = 0; i < 20000; ++i) ASSERT_TRUE(dom.contains(sample_from(est, dom, rng)));
}

TEST(Reflect, FoldsAtBothBounds) {
  EXPECT_DOUBLE_EQ(reflect_into(-0.25, 0.0, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(reflect_into(1.25, 0.0, 1.0), 0.75);
  EXPECT_DOUBLE_EQ(reflect_into(2.25, 0.0, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(reflect_into(0.5, 0.0, 1.0), 0.5);
}

TEST(FitEstimator, EmptyGivesUniformPrior) {
  const auto dom = ParamDomain::continuous("x", -2.0, 2.0, 0.0);
  const Estimator est = fit_estimator(std::span<const ParamValue>{}, dom);
  ASSERT_TRUE(std::holds_alternative<UniformDensity>(est));
  EXPECT_DOUBLE_EQ(density_at(est, 0.3), 0.25);
  const auto cat = ParamDomain::categorical("c", {"a", "b", "c", "d"}, "a");
  EXPECT_DOUBLE_EQ(density_at(fit_estimator(std::span<const ParamValue>{}, cat), std::string("b")), 0.25);
}

TEST(FitEstimator, PriorMixtureFormulaAndLogConsistency) {
  const auto dom = ParamDomain::continuous("x", 0.0, 1.0, 0.5);
  const std::vector<ParamValue> vals{0.2, 0.3, 0.35};
  const Estimator est = fit_estimator(vals, dom);
  ASSERT_TRUE(std::holds_alternative<PriorMixedKde>(est));
  const auto& mix = std::get<PriorMixedKde>(est);
  const std::vector<double> raw{0.2, 0.3, 0.35};
  const double h = mix.kde().bandwidth();
  for (double x : {0.0, 0.25, 0.5, 0.99}) {
    const double expected = (3.0 * oracle::kde(raw, h, x) + 1.0 * 1.0) / 4.0;
    EXPECT_NEAR(density_at(est, x), expected, 1e-12);
    EXPECT_NEAR(std::exp(log_density_at(est, x)), expected, 1e-12);
  }
}

TEST(FitEstimator, BareKdeWhenPriorDisabled) {
  const auto dom = ParamDomain::continuous("x", 0.0, 1.0, 0.5);
  const std::vector<ParamValue> vals{0.2, 0.3};
  const Estimator est = fit_estimator(vals, dom, DensityOptions{0.0, false});
  ASSERT_TRUE(std::holds_alternative<NumericKde>(est));
  const std::vector<double> raw{0.2, 0.3};
  EXPECT_NEAR(std::get<NumericKde>(est).bandwidth(), oracle::sample_sd(raw) * std::pow(2.0, -0.2), 1e-12);
}
