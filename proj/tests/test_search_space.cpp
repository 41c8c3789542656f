#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "gsos/config_io.hpp"
#include "gsos/search_space.hpp"

using namespace gsos;

TEST(PaperSpace, HasTenParametersInTableOrder) {
  const SearchSpace s = paper_search_space();
  ASSERT_EQ(s.size(), 10u);
  const std::vector<std::string> expected{"num_conv_layers", "lr",     "dropout_rate", "optimizer",    "epoch",
                                          "stride",          "padding", "kernel",      "num_fc_units", "batch_size"};
  EXPECT_EQ(s.names(), expected);
}

TEST(PaperSpace, DomainsAndDefaults) {
  const SearchSpace s = paper_search_space();
  EXPECT_EQ(std::get<double>(s.at("lr").default_value()), 0.01);
  EXPECT_EQ(s.at("lr").kind(), ParamKind::log_continuous);
  EXPECT_EQ(s.at("lr").low(), 1e-5);
  EXPECT_EQ(s.at("lr").high(), 1.0);
  EXPECT_EQ(s.at("epoch").low(), 10.0);
  EXPECT_EQ(s.at("epoch").high(), 100.0);
  EXPECT_EQ(s.at("num_conv_layers").kind(), ParamKind::integer);
  EXPECT_EQ(std::get<std::int64_t>(s.at("num_conv_layers").default_value()), 3);
  EXPECT_EQ(s.at("dropout_rate").high(), 0.9);
  EXPECT_EQ(s.at("num_fc_units").low(), 64.0);
  EXPECT_EQ(s.at("num_fc_units").high(), 256.0);
  EXPECT_EQ(s.at("batch_size").choices(), (std::vector<std::string>{"32", "64", "128", "256"}));
  EXPECT_EQ(s.at("kernel").choices(), (std::vector<std::string>{"3", "5"}));
  EXPECT_EQ(s.at("padding").choices(), (std::vector<std::string>{"valid", "same"}));
}

TEST(DefaultConfig, PaperDefaults) {
  const Configuration c = default_config(paper_search_space());
  EXPECT_EQ(c.label("batch_size"), "32");
  EXPECT_EQ(c.numeric("batch_size"), 32.0);
  EXPECT_EQ(c.numeric("dropout_rate"), 0.0);
  EXPECT_EQ(c.label("optimizer"), "adam");
  EXPECT_EQ(c.label("padding"), "same");
  EXPECT_EQ(c.numeric("num_fc_units"), 64.0);
}

TEST(DefaultConfig, EmptySpaceGivesEmptyConfig) {
  EXPECT_TRUE(default_config(SearchSpace{}).empty());
}

TEST(ParamDomain, RejectsBrokenDomains) {
  EXPECT_THROW(ParamDomain::continuous("a", 1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ParamDomain::continuous("a", 0.0, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(ParamDomain::log_continuous("a", 0.0, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(ParamDomain::integer("a", 3, 2, 2), std::invalid_argument);
  EXPECT_THROW(ParamDomain::categorical("a", {}, "x"), std::invalid_argument);
  EXPECT_THROW(ParamDomain::categorical("a", {"x", "x"}, "x"), std::invalid_argument);
  EXPECT_THROW(ParamDomain::categorical("a", {"x", "y"}, "z"), std::invalid_argument);
  EXPECT_NO_THROW(ParamDomain::integer("a", 2, 2, 2));
}

TEST(SearchSpace, RejectsDuplicateNames) {
  EXPECT_THROW(SearchSpace({ParamDomain::continuous("a", 0, 1, 0), ParamDomain::continuous("a", 0, 2, 0)}),
               std::invalid_argument);
}

TEST(SearchSpace, SubspaceKeepsCanonicalOrder) {
  const SearchSpace s = paper_search_space();
  const SearchSpace sub = s.subspace(std::vector<std::string>{"batch_size", "lr", "epoch"});
  EXPECT_EQ(sub.names(), (std::vector<std::string>{"lr", "epoch", "batch_size"}));
  EXPECT_THROW(s.subspace(std::vector<std::string>{"nope"}), std::invalid_argument);
}

TEST(Validate, DefaultsAreValid) { EXPECT_TRUE(validate(default_config(paper_search_space()), paper_search_space())); }

TEST(Validate, FlagsOutOfDomainLr) {
  Configuration c = default_config(paper_search_space());
  c.set("lr", 2.0);
  const auto v = validate(c, paper_search_space());
  EXPECT_FALSE(v.ok());
  EXPECT_TRUE(v.flags("lr"));
  EXPECT_FALSE(v.flags("epoch"));
  ASSERT_EQ(v.issues.size(), 1u);
  EXPECT_EQ(v.issues[0].kind, ValidationIssue::Kind::out_of_domain);
}

TEST(Validate, FlagsMissingExtraAndEveryOffender) {
  Configuration c = default_config(paper_search_space());
  c.erase("epoch");
  c.set("momentum", 0.9);
  c.set("batch_size", std::string("48"));
  c.set("stride", std::int64_t{3});
  const auto v = validate(c, paper_search_space());
  EXPECT_EQ(v.issues.size(), 4u);
  EXPECT_TRUE(v.flags("epoch"));
  EXPECT_TRUE(v.flags("momentum"));
  EXPECT_TRUE(v.flags("batch_size"));
  EXPECT_TRUE(v.flags("stride"));
}

TEST(Validate, RejectsWrongValueType) {
  Configuration c = default_config(paper_search_space());
  c.set("optimizer", 1.0);
  c.set("num_conv_layers", 2.5);
  const auto v = validate(c, paper_search_space());
  EXPECT_TRUE(v.flags("optimizer"));
  EXPECT_TRUE(v.flags("num_conv_layers"));
}

TEST(SamplePrior, MembershipForEveryKind) {
  std::mt19937_64 rng(1);
  for (const auto& p : paper_search_space()) {
    for (int i = 0; i < 10000; ++i) ASSERT_TRUE(p.contains(sample_prior(p, rng))) << p.name();
  }
}

TEST(SamplePrior, CategoricalMembership) {
  std::mt19937_64 rng(2);
  const auto p = ParamDomain::categorical("optimizer", {"adam", "sgd"}, "adam");
  int adam = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto v = std::get<std::string>(sample_prior(p, rng));
    ASSERT_TRUE(v == "adam" || v == "sgd");
    adam += v == "adam";
  }
  EXPECT_GT(adam, 400);
  EXPECT_LT(adam, 600);
}

TEST(SamplePrior, LogUniformDecadesAreEquiprobable) {
  std::mt19937_64 rng(3);
  const auto p = ParamDomain::log_continuous("lr", 1e-5, 1.0, 0.01);
  int first_decade = 0;
  for (int i = 0; i < 10000; ++i) {
    const double v = std::get<double>(sample_prior(p, rng));
    if (v >= 1e-5 && v <= 1e-4) ++first_decade;
  }
  EXPECT_NEAR(first_decade / 10000.0, 0.2, 0.02);
}

TEST(SamplePrior, ContinuousMeanIsCentred) {
  std::mt19937_64 rng(4);
  const auto p = ParamDomain::continuous("x", -3.0, 7.0, 0.0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += std::get<double>(sample_prior(p, rng));
  EXPECT_NEAR(sum / 100000.0, 2.0, 0.01 * 10.0);
}

TEST(SamplePrior, IntegerCoversEveryValue) {
  std::mt19937_64 rng(5);
  const auto p = ParamDomain::integer("k", 2, 4, 3);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(std::get<std::int64_t>(sample_prior(p, rng)));
  EXPECT_EQ(seen, (std::set<std::int64_t>{2, 3, 4}));
}

TEST(SamplePrior, DefaultsValidForRandomSpaces) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ParamDomain> ps;
    const double a = u(rng);
    const double b = a + 0.1 + std::abs(u(rng));
    ps.push_back(ParamDomain::continuous("c", a, b, a));
    ps.push_back(ParamDomain::log_continuous("l", std::exp(a / 4), std::exp(b / 4), std::exp(b / 4)));
    ps.push_back(ParamDomain::integer("i", -trial, trial, 0));
    ps.push_back(ParamDomain::categorical("k", {"p", "q", "r"}, "q"));
    const SearchSpace s(std::move(ps));
    ASSERT_TRUE(validate(default_config(s), s));
    ASSERT_TRUE(validate(sample_prior(s, rng), s));
  }
}

TEST(SearchScale, IntegerValuesRoundAndClamp) {
  const auto p = ParamDomain::integer("k", 2, 4, 3);
  EXPECT_EQ(std::get<std::int64_t>(p.value_from_search_scale(2.49)), 2);
  EXPECT_EQ(std::get<std::int64_t>(p.value_from_search_scale(2.51)), 3);
  EXPECT_EQ(std::get<std::int64_t>(p.value_from_search_scale(9.0)), 4);
  const auto lr = ParamDomain::log_continuous("lr", 1e-5, 1.0, 0.01);
  EXPECT_NEAR(std::get<double>(lr.value_from_search_scale(-2.0)), 0.01, 1e-15);
}

TEST(ConfigFile, ShippedSpaceMatchesBuiltIn) {
  const SearchSpace loaded = load_search_space(std::string(GSOS_DATA_DIR) + "/paper_space.json");
  EXPECT_EQ(loaded, paper_search_space());
}

TEST(ConfigFile, RoundTrip) {
  const SearchSpace s = paper_search_space();
  EXPECT_EQ(search_space_from_json(search_space_to_json(s)), s);
}

TEST(ConfigFile, RejectsMalformedRecords) {
  EXPECT_THROW(search_space_from_json(json::parse(R"({"parameters":[{"name":"a","kind":"continuous"}]})")),
               ConfigError);
  EXPECT_THROW(search_space_from_json(json::parse(R"({"parameters":[{"name":"a","kind":"weird","low":0,"high":1,"default":0}]})")),
               std::exception);
  EXPECT_THROW(read_json_file("/nonexistent/space.json"), ConfigError);
}
