#include <random>

#include <gtest/gtest.h>

#include "metric_lab/certify.hpp"
#include "metric_lab/io.hpp"

using namespace mlab;

TEST(ParseDouble, AcceptsAndRejects) {
  EXPECT_EQ(parse_double(" 1.5 "), 1.5);
  EXPECT_EQ(parse_double("+2"), 2.0);
  EXPECT_EQ(parse_double("-3e-2"), -0.03);
  for (const char* bad : {"", "abc", "1.5x", "nan", "inf", "1e999", "--1"}) {
    EXPECT_THROW(parse_double(bad), parse_error) << bad;
  }
}

TEST(FormatDouble, RoundTripsExactly) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.25), "0.25");
}

TEST(Vectors, ParseAndFormat) {
  EXPECT_EQ(parse_vector("1, -2.5,3"), (Vector{1, -2.5, 3}));
  EXPECT_EQ(format_vector({1, -2.5}), "1,-2.5");
  EXPECT_THROW(parse_vector("1,,2"), parse_error);
  const auto t = parse_triple("0,0;3,0;0,4");
  EXPECT_EQ(t[2], (Vector{0, 4}));
  EXPECT_THROW(parse_triple("0,0;3,0"), parse_error);
  EXPECT_THROW(parse_triple("0,0;3;0,4"), dimension_error);
}

TEST(NormSpecText, ParseAndFormat) {
  EXPECT_EQ(parse_norm_spec("p1").exponent(), 1.0);
  EXPECT_EQ(parse_norm_spec("2").exponent(), 2.0);
  EXPECT_EQ(parse_norm_spec("p1.5").exponent(), 1.5);
  EXPECT_TRUE(parse_norm_spec("pinf").is_max());
  EXPECT_TRUE(parse_norm_spec("inf").is_max());
  const NormSpec w = parse_norm_spec("p3:weights=1,0.5");
  EXPECT_EQ(w.weights(), (std::vector<double>{1, 0.5}));
  for (const char* text : {"p1", "p1.5", "p2", "pinf", "p3:weights=1,0.5", "pinf:weights=2,3,4"}) {
    EXPECT_EQ(format_norm_spec(parse_norm_spec(text)), text);
  }
  for (const char* bad : {"p0.5", "q2", "p2:w=1", "p2:weights=1,-1", ""}) {
    EXPECT_THROW(parse_norm_spec(bad), parse_error) << bad;
  }
}

TEST(IntervalSetText, ParseAndFormat) {
  EXPECT_TRUE(parse_interval_set("empty").empty());
  EXPECT_EQ(format_interval_set(IntervalSet{}), "empty");
  const IntervalSet a = parse_interval_set("0.75-1, 0-0.25");
  EXPECT_EQ(format_interval_set(a), "0-0.25,0.75-1");
  // Overlapping pieces merge.
  EXPECT_EQ(format_interval_set(parse_interval_set("0-0.5,0.25-0.75")), "0-0.75");
  // A dash after an exponent marker is a sign.
  const IntervalSet tiny = parse_interval_set("1e-3-2.5e-1");
  ASSERT_EQ(tiny.intervals().size(), 1u);
  EXPECT_EQ(tiny.intervals()[0].lo, 1e-3);
  EXPECT_EQ(tiny.intervals()[0].hi, 0.25);
  for (const char* bad : {"0.5", "0.5-0.2", "0-2", "a-b"}) {
    EXPECT_THROW(parse_interval_set(bad), parse_error) << bad;
  }
}

TEST(SubsetText, ParseAndFormat) {
  const FiniteSubset s = parse_subset("1,2 | 0,0");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(format_subset(s), "0,0 | 1,2");
  EXPECT_EQ(parse_subset(format_subset(s)), s);
  EXPECT_THROW(parse_subset("0|1|2|3"), parse_error);
  EXPECT_THROW(parse_subset("0|1,2"), dimension_error);
}

TEST(SweepConfigJson, DefaultsAndOverrides) {
  const SweepConfig d = sweep_config_from_json(nlohmann::json::object());
  EXPECT_EQ(d.ops, known_sweep_ops());
  EXPECT_EQ(d.samples, 10000u);
  const auto j = nlohmann::json::parse(R"({"dims":[2],"norms":["p1.5","pinf"],"ops":["nagel"],
      "samples":7,"seed":3,"claimed_bounds":{"nagel":0.5},"format":"csv"})");
  const SweepConfig c = sweep_config_from_json(j);
  EXPECT_EQ(c.dims, (std::vector<std::size_t>{2}));
  EXPECT_EQ(c.norms.size(), 2u);
  EXPECT_TRUE(c.norms[1].is_max());
  EXPECT_EQ(c.claimed_bounds.at("nagel"), 0.5);
  EXPECT_NO_THROW(c.validate());
  const SweepConfig back = sweep_config_from_json(nlohmann::json::parse(sweep_config_to_json(c).dump()));
  EXPECT_EQ(sweep_config_to_json(back), sweep_config_to_json(c));
}

TEST(SweepConfigJson, Errors) {
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::array()), config_error);
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"dims":"x"})")), config_error);
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"norms":["p0"]})")), config_error);
  for (const char* text : {R"({"ops":[]})", R"({"ops":["foo"]})", R"({"dims":[0]})", R"({"samples":0})",
                           R"({"format":"xml"})", R"({"box_radius":-1})"}) {
    EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(text)).validate(), config_error) << text;
  }
}

TEST(SweepConfigJson, SeedEnvironmentOverride) {
  SweepConfig c;
  ::setenv("METRIC_LAB_SEED", "77", 1);
  apply_env_overrides(c);
  EXPECT_EQ(c.seed, 77u);
  ::setenv("METRIC_LAB_SEED", "7x", 1);
  EXPECT_THROW(apply_env_overrides(c), config_error);
  ::unsetenv("METRIC_LAB_SEED");
}

TEST(CertifyReport, CsvQuotingAndJsonSummary) {
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
  SweepConfig cfg;
  cfg.dims = {1};
  cfg.norms = {NormSpec::lp(2)};
  cfg.ops = {"median"};
  cfg.samples = 500;
  const CertifyOutcome out = run_certify(cfg);
  EXPECT_TRUE(out.all_pass);
  const auto j = certify_report_json(cfg, out, "T");
  EXPECT_EQ(j["generated_at"], "T");
  EXPECT_EQ(j["summary"]["checks"], out.checks.size());
  EXPECT_EQ(j["summary"]["failed"], 0);
  const std::string csv = certify_report_csv(out);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), out.checks.size() + 1);
  // Same config, same report body.
  EXPECT_EQ(certify_report_json(cfg, run_certify(cfg), "T"), j);
}
