#include <gtest/gtest.h>

#include <algorithm>

#include "segal/checks.hpp"
#include "segal/io.hpp"

using namespace segal;

TEST(SeriesJson, RoundTrip) {
    auto f = LaurentMap::from_powers({{-1, cd(0.1, -0.2)}, {1, 0.8}, {3, cd(0.0, 0.01)}}, 0.05);
    json j = series_to_json(f);
    auto g = series_from_json(parse_json_text(j.dump()));
    EXPECT_EQ(g.eps(), 0.05);
    for (int n = -3; n <= 4; ++n) EXPECT_EQ(g.coeff(n), f.coeff(n)) << n;
    EXPECT_EQ(j["coeffs"][0][0].get<int>(), -2);
}

TEST(SeriesJson, ErrorsCarryPositions) {
    try {
        parse_json_text("{\"eps\": 0,\n  \"coeffs\": [[0, 1 0]]}", "f.json");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.column(), 20);
    }
    EXPECT_THROW(series_from_json(json::parse(R"({"coeffs": [[0.5, 1, 0]]})")), ParseError);
    EXPECT_THROW(series_from_json(json::parse(R"({"eps": 0})")), ParseError);
}

TEST(BoundaryFieldJson, RoundTrip) {
    BoundaryField phi(0.3, {cd(0.1, 0.2), cd(-0.05, 0.0)});
    auto back = boundary_field_from_json(parse_json_text(boundary_field_to_json(phi).dump()));
    EXPECT_EQ(back.c(), 0.3);
    EXPECT_EQ(back.mode(2), cd(-0.05, 0.0));
}

TEST(OperatorJson, LabelsAndShape) {
    FockSector s(ModelParams(1.2, 0.0, 0.3), 2);
    CMat m = CMat::Identity(s.size(), s.size());
    json j = operator_to_json(s, m);
    EXPECT_EQ(j["basis"].size(), std::size_t(s.size()));
    EXPECT_EQ(j["entries"].size(), std::size_t(s.size()));
    EXPECT_EQ(j["entries"][1][1][0].get<double>(), 1.0);
}

TEST(Config, FlagsOverrideAndUnknownKeys) {
    CheckConfig base;
    base.seed = 7;
    auto c = config_from_json(json::parse(R"({"gamma": 0.9, "level": 5})"), base);
    EXPECT_EQ(c.gamma, 0.9);
    EXPECT_EQ(c.level, 5);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_THROW(config_from_json(json::parse(R"({"gama": 0.9})")), ParseError);
    EXPECT_THROW(config_from_json(json::parse(R"({"gamma": "x"})")), ParseError);
}

TEST(Report, PassIffResidualWithinToleranceAndSortedCases) {
    CheckConfig c;
    c.level = 6;
    Report r = run_suite("virasoro", c);
    ASSERT_FALSE(r.cases.empty());
    EXPECT_TRUE(std::is_sorted(r.cases.begin(), r.cases.end(),
                               [](const CheckCase& a, const CheckCase& b) { return a.name < b.name; }));
    for (const auto& k : r.cases) EXPECT_EQ(k.pass, k.residual <= k.tolerance) << k.name;
    EXPECT_TRUE(r.pass());
    json j = r.to_json();
    EXPECT_EQ(j["schema_version"].get<int>(), Report::kSchemaVersion);
    EXPECT_EQ(j["params"]["level"].get<int>(), 6);
    EXPECT_EQ(run_suite("virasoro", c).to_json().dump(), j.dump());
    EXPECT_THROW(run_suite("nope", c), std::invalid_argument);
    EXPECT_FALSE(make_case("x", std::nan(""), 1.0).pass);
}
