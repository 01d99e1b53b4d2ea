#include <gtest/gtest.h>

#include "framelab/cli.hpp"

using namespace framelab;

namespace {

std::string error_of(const nlohmann::json& raw) {
    try {
        validate_config(raw);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "valid";
}

nlohmann::json light() {
    return {{"construction", {{"depth", 2}, {"exponent", 4}}}, {"kernel", {{"M", 16}}}, {"tests", 4}};
}

}  // namespace

TEST(Config, NamedErrors) {
    EXPECT_EQ(error_of({{"rank", 2}, {"modulus", 4}, {"weights", {2, 0}}}), "phi not surjective");
    EXPECT_EQ(error_of({{"modulus", 1}}), "index must be ≥ 2");
    EXPECT_EQ(error_of({{"radii", {{"support", 7}, {"index", 7}, {"interior", 1}}}}),
              "window inequality violated: interior + support > index radius");
    EXPECT_EQ(error_of({{"bogus", 1}}), "unknown key 'bogus' in config");
    EXPECT_EQ(error_of({{"kernel", {{"M", "many"}}}}), "bad type for 'M' in kernel");
    EXPECT_EQ(error_of({{"alpha_beta", {{0.5, 0.6}}}}), "alpha_beta entries must sum to 1");
    EXPECT_EQ(error_of({{"construction", {{"seed_vector", "identity"}}}}),
              "interior refinement needs the cross_coset seed vector");
    EXPECT_EQ(error_of({{"construction", {{"seed_vector", "identity"}, {"refine", false}}}}), "valid");
}

TEST(Config, DefaultsAndEchoRoundTrip) {
    const RunConfig c = validate_config(nlohmann::json::object());
    EXPECT_EQ(c.rank, 2);
    EXPECT_EQ(c.modulus, 2);
    EXPECT_EQ(c.support_radius, 7);
    EXPECT_EQ(c.index_radius, 8);
    EXPECT_EQ(c.truncation, 64);
    const std::string once = c.to_json().dump();
    const std::string twice = validate_config(nlohmann::json::parse(once)).to_json().dump();
    EXPECT_EQ(once, twice);
    EXPECT_EQ(validate_config({{"radii", {{"support", 3}}}}).index_radius, 4);
}

TEST(Report, CanonicalFloats) {
    nlohmann::json j = {{"a", 0.1 + 0.2}, {"b", -0.0}, {"c", {1.0 / 3.0}}, {"d", 7}};
    canonicalize(j);
    EXPECT_EQ(j.dump(), R"({"a":0.3,"b":0.0,"c":[0.333333333333],"d":7})");
}

TEST(Run, CertifyDeltaIsParseval) {
    const RunOutput out = run("certify", validate_config(nlohmann::json::object()));
    ASSERT_EQ(out.status, 0) << out.diagnostic;
    const auto rep = nlohmann::json::parse(out.files.at("report.json"));
    EXPECT_EQ(rep.at("schema"), "framelab-report/1");
    EXPECT_EQ(rep.at("results").at("vectors")[0].at("parseval_residual"), 0.0);
    EXPECT_EQ(rep.at("provenance").at("E"), "[0,1/N)");
    EXPECT_EQ(rep.at("provenance").at("trace_estimate"), 0.5);
    EXPECT_TRUE(rep.at("checks").at("all_passed").get<bool>());
}

TEST(Run, CertifyGivenVectors) {
    nlohmann::json raw = {{"vectors",
                           {to_json(L2Vector::delta(Word::parse("xy"))),
                            to_json([] {
                                auto v = L2Vector::delta(Word::identity());
                                v += L2Vector::delta(Word::parse("x"));
                                return v;
                            }())}}};
    const RunOutput out = run("certify", validate_config(raw));
    ASSERT_EQ(out.status, 0) << out.diagnostic;
    const auto rep = nlohmann::json::parse(out.files.at("report.json"));
    EXPECT_LE(rep.at("results").at("vectors")[0].at("parseval_residual").get<double>(), 1e-14);
    EXPECT_GT(rep.at("results").at("vectors")[1].at("parseval_residual").get<double>(), 0.5);
    EXPECT_FALSE(rep.at("checks").at("all_passed").get<bool>());
}

TEST(Run, UnknownCommand) {
    const RunOutput out = run("frobnicate", RunConfig{});
    EXPECT_EQ(out.status, 2);
    EXPECT_TRUE(out.files.empty());
}

TEST(Run, ConstructIsDeterministicAndCertified) {
    const RunConfig cfg = validate_config(light());
    const RunOutput a = run("construct", cfg), b = run("construct", cfg);
    ASSERT_EQ(a.status, 0) << a.diagnostic;
    EXPECT_EQ(a.files, b.files);
    RunConfig more = cfg;
    more.workers = 3;
    EXPECT_EQ(run("construct", more).files, a.files);
    const auto rep = nlohmann::json::parse(a.files.at("report.json"));
    EXPECT_LT(rep.at("results").at("eta").at("subgroup_onb_residual").get<double>(), 1e-10);
    EXPECT_EQ(rep.at("provenance").at("construction").at("exponent"), 4);
}

TEST(Run, SeedChangesTheTests) {
    RunConfig cfg = validate_config(light());
    const std::string a = run("construct", cfg).files.at("report.json");
    cfg.seed = 2;
    EXPECT_NE(run("construct", cfg).files.at("report.json"), a);
}

TEST(Run, GramCsvOutputs) {
    nlohmann::json raw = light();
    raw["outputs"] = {{"gram_csv", true}};
    raw["radii"] = {{"subgroup", 2}};
    const RunOutput out = run("riesz", validate_config(raw));
    ASSERT_EQ(out.status, 0) << out.diagnostic;
    EXPECT_TRUE(out.files.count("gram_member_0_coset_1.csv"));
    const auto rep = nlohmann::json::parse(out.files.at("report.json"));
    EXPECT_EQ(rep.at("results").at("feichtinger").at("families").size(), 4u);
}

TEST(Run, ParamDemos) {
    nlohmann::json raw = light();
    raw["rows"] = {KernelRow::scalars({std::sqrt(0.5), std::sqrt(0.5)}).to_json(),
                   KernelRow::scalars({-std::sqrt(0.5), std::sqrt(0.5)}).to_json()};
    const RunOutput out = run("param", validate_config(raw));
    ASSERT_EQ(out.status, 0) << out.diagnostic;
    const auto rep = nlohmann::json::parse(out.files.at("report.json"));
    const auto& demo = rep.at("results").at("scalar_rows")[0];
    EXPECT_LE(demo.at("verify_row").get<double>(), 1e-14);
    EXPECT_LE(demo.at("rows_disjoint_perp").get<double>(), 1e-14);
    EXPECT_NEAR(demo.at("rows_equivalent_swapped").get<double>(), 0.6, 1e-12);
    EXPECT_LE(rep.at("results").at("rows")[0].at("relations")[0].at("rows_disjoint").get<double>(), 1e-14);
}

TEST(Run, SweepCsv) {
    nlohmann::json raw = light();
    raw["sweep"] = {{"M", {8, 16}}, {"subgroup_radii", nlohmann::json::array()}};
    const RunOutput out = run("sweep", validate_config(raw));
    ASSERT_EQ(out.status, 0) << out.diagnostic;
    const std::string& csv = out.files.at("sweep.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "parameter,residual_name,value");
    EXPECT_NE(csv.find("M=16,idempotency_residual,"), std::string::npos);
}
