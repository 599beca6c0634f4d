#include "sgm/app.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace sgm;
using app::Json;

namespace {

struct Outcome {
    int code;
    std::string out, err;
    Json doc() const { return Json::parse(out); }
};

Outcome run(const Json& cfg) {
    std::ostringstream out, err;
    const int code = app::run_json(cfg, out, err);
    return {code, out.str(), err.str()};
}

Json iso3(double ke, double kt) { return {{"command", "identify"}, {"dim", 3}, {"keta", ke}, {"ktau", kt}}; }

} // namespace

TEST(App, IdentifyUnitCoefficients) {
    const auto r = run(iso3(1680, 0));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.doc();
    const auto& d = j["derived"];
    for (const char* c : {"c3", "c4", "c5", "c6", "c7"}) EXPECT_NEAR(d[c].get<double>(), 1.0, 1e-14) << c;
    EXPECT_NEAR(d["a1"].get<double>(), 2.0, 1e-14);
    EXPECT_NEAR(d["a4"].get<double>(), 1.0, 1e-14);
    EXPECT_NEAR(d["lambda"].get<double>(), 112.0, 1e-12);
    EXPECT_NEAR(d["mu"].get<double>(), 112.0, 1e-12);
    EXPECT_NEAR(d["nu"].get<double>(), 0.25, 1e-15);
    EXPECT_NEAR(d["d_groups"]["d1_3d"].get<double>(), 15.0, 1e-12);
    EXPECT_TRUE(j["warnings"].empty());
}

TEST(App, TopLevelKeysInFixedOrder) {
    const auto j = run(iso3(2, 1)).doc();
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"meta", "C", "M", "D", "derived", "warnings"}));
    std::vector<std::string> mk;
    for (const auto& [k, v] : j["meta"].items()) mk.push_back(k);
    EXPECT_EQ(mk, (std::vector<std::string>{"command", "dim", "L", "inputs", "mode"}));
}

TEST(App, ComponentNamesAndZerosOmitted) {
    const auto j = run(iso3(2, 1)).doc();
    const std::regex name_re("^[CMD]_[1-3]+$");
    for (const char* t : {"C", "M", "D"})
        for (const auto& [k, v] : j[t].items()) {
            EXPECT_TRUE(std::regex_match(k, name_re)) << k;
            EXPECT_NE(v.get<double>(), 0.0) << k;
        }
    EXPECT_EQ(j["C"].size(), 21u);  // 3 + 6 + 12
    EXPECT_TRUE(j["M"].empty());
    EXPECT_EQ(j["D"].size(), 183u);
    EXPECT_FALSE(j["C"].contains("C_1123"));
}

TEST(App, TwoDimensionalIdentifyHasNoGradientCoefficients) {
    const auto j = run({{"command", "identify"}, {"dim", 2}, {"keta", 256}, {"ktau", 0}}).doc();
    EXPECT_TRUE(j["derived"]["c3"].is_null());
    EXPECT_EQ(j["D"].size(), 32u);
    EXPECT_NEAR(j["D"]["D_111111"].get<double>(), 5.0, 1e-13);
    EXPECT_NEAR(j["derived"]["d_groups"]["d1_2d"].get<double>(), 5.0, 1e-13);
}

TEST(App, AnisotropicIdentify) {
    const auto r = run({{"command", "identify"}, {"dim", 2}, {"dist", "biased-c1"}});
    ASSERT_EQ(r.code, 0);
    const auto j = r.doc();
    EXPECT_NEAR(j["M"]["M_11111"].get<double>(), 5 * std::numbers::pi / 32, 1e-14);
    EXPECT_TRUE(j["derived"]["lambda"].is_null());
    EXPECT_EQ(j["warnings"].size(), 1u);
}

TEST(App, Convert) {
    const auto r = run({{"command", "convert"}, {"dim", 2}, {"young", 1.0}, {"nu", 1.0 / 3}});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.doc();
    EXPECT_NEAR(j["derived"]["kbar_eta"].get<double>(), 3.0, 1e-14);
    EXPECT_NEAR(j["derived"]["kbar_tau"].get<double>(), 0.0, 1e-14);
    EXPECT_NEAR(j["derived"]["Y"].get<double>(), 1.0, 1e-14);
}

TEST(App, ConvertNegativeStiffnessWarns) {
    const auto j = run({{"command", "convert"}, {"dim", 2}, {"young", 1.0}, {"nu", 0.45}}).doc();
    EXPECT_LT(j["derived"]["kbar_tau"].get<double>(), 0.0);
    EXPECT_FALSE(j["warnings"].empty());
}

TEST(App, VerifyPassesAndStrictToleranceFails) {
    auto r = run({{"command", "verify"}});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.doc()["passed"].get<bool>());
    r = run({{"command", "verify"}, {"tol", 1e-20}});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.doc()["passed"].get<bool>());
    EXPECT_NE(r.err.find("FAILED"), std::string::npos);
}

TEST(App, VerifyWithMaterialAddsChecks) {
    const auto r = run({{"command", "verify"}, {"dim", 2}, {"dist", "fabric-c1sq"}, {"dist-param", {"beta=0.5"}}});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.doc();
    EXPECT_EQ(j["checks"].back()["name"], "material_energy_equivalence");
    EXPECT_EQ(j["meta"]["inputs"]["dist-param"]["beta"].get<double>(), 0.5);
}

TEST(App, UsageErrorsExitTwo) {
    const Json bad[] = {
        Json::object(),
        {{"command", "frobnicate"}, {"keta", 1}, {"ktau", 1}},
        {{"command", "identify"}},
        {{"command", "identify"}, {"keta", 1}},
        {{"command", "identify"}, {"keta", 1}, {"ktau", 1}, {"young", 1}, {"nu", 0.2}},
        {{"command", "identify"}, {"dim", 4}, {"keta", 1}, {"ktau", 1}},
        {{"command", "identify"}, {"L", -1}, {"keta", 1}, {"ktau", 1}},
        {{"command", "identify"}, {"keta", 1}, {"ktau", 1}, {"format", "xml"}},
        {{"command", "identify"}, {"keta", 1}, {"ktau", 1}, {"colour", "red"}},
        {{"command", "identify"}, {"keta", "1"}, {"ktau", 1}},
        {{"command", "identify"}, {"dist", "nope"}},
        {{"command", "identify"}, {"dist", "biased-c1"}, {"dist-param", {"beta"}}},
        {{"command", "identify"}, {"dist", "biased-c1"}, {"dist-param", {"gamma=1"}}},
        {{"command", "convert"}, {"dist", "biased-c1"}},
        {{"command", "convert"}, {"dim", 3}, {"young", 1}, {"nu", 0.5}},
        {{"command", "identify"}, {"keta", 1}, {"ktau", 1}, {"mode", "sideways"}},
    };
    for (const auto& cfg : bad) {
        const auto r = run(cfg);
        EXPECT_EQ(r.code, 2) << cfg.dump();
        EXPECT_TRUE(r.out.empty()) << cfg.dump();
        EXPECT_NE(r.err.find("error:"), std::string::npos) << cfg.dump();
    }
}

TEST(App, ParseDistParam) {
    EXPECT_EQ(app::parse_dist_param("beta=0.5"), (std::pair<std::string, double>{"beta", 0.5}));
    EXPECT_THROW(app::parse_dist_param("=1"), app::UsageError);
    EXPECT_THROW(app::parse_dist_param("beta=0.5x"), app::UsageError);
    EXPECT_THROW(app::parse_dist_param("beta="), app::UsageError);
}

TEST(App, FormatNumber) {
    EXPECT_EQ(app::format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(app::format_number(-0.0), "0");
    EXPECT_EQ(app::format_number(3.0), "3");
    EXPECT_EQ(app::format_number(std::nan("")), "null");
}

TEST(App, DeterministicOutputForEveryCommand) {
    const Json cfgs[] = {
        iso3(2.5, 0.7),
        {{"command", "identify"}, {"dim", 2}, {"dist", "biased-c1"}, {"dist-param", {{"beta", 0.3}}}},
        {{"command", "convert"}, {"young", 2.0}, {"nu", 0.2}},
        {{"command", "table"}, {"keta", 2.5}, {"ktau", 0.7}},
        {{"command", "diff-legacy"}, {"dim", 2}, {"keta", 2.5}, {"ktau", 0.7}},
        {{"command", "verify"}},
    };
    for (const auto& cfg : cfgs) {
        const auto a = run(cfg), b = run(cfg);
        EXPECT_EQ(a.code, 0) << cfg.dump() << a.err;
        EXPECT_EQ(a.out, b.out) << cfg.dump();
        auto csv = cfg;
        csv["format"] = "csv";
        EXPECT_EQ(run(csv).out, run(csv).out);
    }
}

TEST(App, NumbersUseSeventeenSignificantDigits) {
    const auto r = run(iso3(1.0, 0.0));
    const double v = r.doc()["D"]["D_111111"].get<double>();
    EXPECT_NEAR(v, 5.0 / 560, 1e-16);
    char buf[64];
    std::snprintf(buf, sizeof buf, "\"D_111111\": %.17g,", v);
    EXPECT_NE(r.out.find(buf), std::string::npos);
}

TEST(App, CsvOutput) {
    auto cfg = iso3(1680, 0);
    cfg["format"] = "csv";
    const auto r = run(cfg);
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("name,value\n", 0), 0u);
    EXPECT_NE(r.out.find("\nmeta.dim,3\n"), std::string::npos);
    EXPECT_NE(r.out.find("\nderived.c3,"), std::string::npos);
    EXPECT_NE(r.out.find("\nD.D_112233,"), std::string::npos);
}

TEST(App, TableWarnsAboutShearPrefactor) {
    const auto r = run({{"command", "table"}, {"keta", 15}, {"ktau", 0}});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.doc();
    ASSERT_FALSE(j["warnings"].empty());
    EXPECT_NE(j["warnings"][0].get<std::string>().find("L^2/15"), std::string::npos);
    EXPECT_LT(j["quadrature_max_relative_error"].get<double>(), 1e-10);
    bool corrected_member = false;
    for (const auto& g : j["D_groups"])
        for (const auto& row : g["rows"])
            if (row.contains("printed_as")) corrected_member |= row["printed_as"].contains("D_212111");
    EXPECT_TRUE(corrected_member);
}

TEST(App, TableTwoDimensions) {
    const auto j = run({{"command", "table"}, {"dim", 2}, {"keta", 256}, {"ktau", 0}}).doc();
    EXPECT_FALSE(j.contains("D_probes"));
    EXPECT_EQ(j["D_groups"].size(), 6u);
    EXPECT_EQ(j["D_groups"][0]["name"], "d1_2d");
    EXPECT_DOUBLE_EQ(j["D_groups"][0]["value"].get<double>(), 5.0);
}

TEST(App, DiffLegacy) {
    const auto r = run({{"command", "diff-legacy"}, {"keta", 2.0}, {"ktau", 0.75}});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.doc();
    EXPECT_TRUE(j["C"]["identical"].get<bool>());
    EXPECT_GE(j["summary"]["groups_differing_over_1pct"].get<int>(), 1);
    EXPECT_GT(j["summary"]["max_relative_difference"].get<double>(), 0.01);
    EXPECT_EQ(j["meta"]["mode"], "corrected-vs-legacy");
}

TEST(App, LegacyModeIdentify) {
    auto cfg = iso3(2.0, 0.75);
    cfg["mode"] = "legacy";
    const auto j = run(cfg).doc();
    EXPECT_EQ(j["meta"]["mode"], "legacy");
    EXPECT_FALSE(j["derived"]["c3"].is_null());
    const auto corrected = run(iso3(2.0, 0.75)).doc();
    EXPECT_NE(j["derived"]["c6"].get<double>(), corrected["derived"]["c6"].get<double>());
    EXPECT_EQ(j["C"], corrected["C"]);
}

TEST(App, WritesToOutFile) {
    const auto path = std::filesystem::temp_directory_path() / "sgm_app_test_out.json";
    std::filesystem::remove(path);
    auto cfg = iso3(1680, 0);
    cfg["out"] = path.string();
    const auto r = run(cfg);
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(ss.str(), run(iso3(1680, 0)).out);
    std::filesystem::remove(path);
}

TEST(App, UnwritableOutFileIsAUsageError) {
    auto cfg = iso3(1, 1);
    cfg["out"] = "/nonexistent-dir/x.json";
    EXPECT_EQ(run(cfg).code, 2);
}
