#include <gtest/gtest.h>

#include <distortion.hpp>

using namespace distortion;
using namespace distortion::io;

namespace {

Errc code_of(const auto& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return Errc::BadInput;
}

const json kF13 = json::parse(R"({"field": {"p": 13}, "a": 11, "b": 4})");

json minimal_fixture()
{
    return json::parse(R"({
      "id": "minimal",
      "curve": {"field": {"p": 13}, "a": 11, "b": 4},
      "checks": [{"name": "order", "kind": "group_order", "args": {}, "expected": 12,
                  "mode": "exact", "provenance": "direct count"}]
    })");
}

void expect_same_action(const Endomorphism& a, const Endomorphism& b, int trials = 8)
{
    Rng rng(7);
    for (int i = 0; i < trials; ++i) {
        const Point P = random_point(a.curve(), rng);
        EXPECT_EQ(a(P), b(P));
    }
}

} // namespace

TEST(Dsl, RoundTripsThroughToString)
{
    for (const auto& f : load_fixture_dir(default_fixture_dir())) {
        const CurveConfig cfg = curve_config_from_json(f.curve);
        for (const auto& [name, text] : f.endos) {
            SCOPED_TRACE(f.id + "/" + name);
            const Endomorphism phi = parse_endomorphism(text, cfg);
            const Endomorphism again = parse_endomorphism(phi.to_string(), cfg);
            EXPECT_EQ(again.to_string(), phi.to_string());
            expect_same_action(phi, again);
        }
    }
}

TEST(Dsl, SumsAndScalars)
{
    const CurveConfig cfg = curve_config_from_json(kF13);
    const Endomorphism a = parse_endomorphism("frob(1) - 3", cfg);
    const Endomorphism b = parse_endomorphism("-3*scalar(1) + frob(1)", cfg);
    expect_same_action(a, b);
    const Endomorphism zero = parse_endomorphism("2*scalar(3) - scalar(6)", cfg);
    Rng rng(1);
    for (int i = 0; i < 5; ++i)
        EXPECT_TRUE(zero(random_point(cfg.E, rng)).is_infinity());
    const Endomorphism neg = parse_endomorphism("-scalar(2)", cfg);
    EXPECT_EQ(parse_endomorphism(neg.to_string(), cfg).to_string(), neg.to_string());
    expect_same_action(neg, parse_endomorphism("scalar(-2)", cfg));
}

TEST(Dsl, RejectsMalformedText)
{
    const CurveConfig cfg = curve_config_from_json(kF13);
    for (const char* bad : {"", "frob(", "frob(1) +", "warp(1)", "isog(V9)", "twist(u=nope, v=1)", "frob(1) frob(1)",
                            "twist(u=1)", "scalar(x)"}) {
        SCOPED_TRACE(bad);
        EXPECT_EQ(code_of([&] { parse_endomorphism(bad, cfg); }), Errc::SchemaError);
    }
}

TEST(Config, ReportsJsonPosition)
{
    try {
        parse_json("{\n  \"a\": [1, 2\n}", "inline");
        FAIL() << "no error raised";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SchemaError);
        EXPECT_NE(std::string(e.what()).find("inline:3:"), std::string::npos) << e.what();
    }
}

TEST(Config, RejectsBadCurves)
{
    EXPECT_EQ(code_of([] { curve_config_from_json(json::parse(R"({"a": 1, "b": 1})")); }), Errc::SchemaError);
    EXPECT_EQ(code_of([] { curve_config_from_json(json::parse(R"({"field": {"p": 15}, "a": 1, "b": 1})")); }),
              Errc::NotPrime);
    EXPECT_EQ(code_of([] { curve_config_from_json(json::parse(R"({"field": {"p": 13}, "a": 0, "b": 0})")); }),
              Errc::SingularCurve);
    EXPECT_EQ(code_of([] {
                  curve_config_from_json(
                      json::parse(R"({"field": {"p": 13}, "a": 11, "b": 4, "points": {"P": {"x": 1, "y": 1}}})"));
              }),
              Errc::OffCurve);
}

TEST(Fixture, MinimalParsesAndRuns)
{
    const Fixture f = fixture_from_json(minimal_fixture());
    EXPECT_EQ(f.id, "minimal");
    const auto out = FixtureRunner(f).run();
    ASSERT_EQ(out.size(), 1u);
    EXPECT_TRUE(out[0].pass) << out[0].got.dump() << " " << out[0].error;
}

TEST(Fixture, EveryExpectationNeedsProvenance)
{
    json j = minimal_fixture();
    j["checks"][0].erase("provenance");
    EXPECT_EQ(code_of([&] { fixture_from_json(j); }), Errc::SchemaError);
    j["checks"][0]["provenance"] = "";
    EXPECT_EQ(code_of([&] { fixture_from_json(j); }), Errc::SchemaError);
    j["checks"] = json::array();
    EXPECT_EQ(code_of([&] { fixture_from_json(j); }), Errc::SchemaError);
    j = minimal_fixture();
    j["checks"][0]["mode"] = "roughly";
    EXPECT_EQ(code_of([&] { fixture_from_json(j); }), Errc::SchemaError);
}

TEST(Fixture, SerializationRoundTrips)
{
    const json j = load_json_file(default_fixture_dir() + "/ex-2.4-transfer-F101.json");
    EXPECT_EQ(fixture_to_json(fixture_from_json(j)), j);
}

TEST(Fixture, ComparisonModes)
{
    EXPECT_TRUE(compare_values(json::array({2, 5}), json::array({5, 2}), Compare::SetEquality));
    EXPECT_FALSE(compare_values(json::array({2, 5}), json::array({5, 2}), Compare::Exact));
    EXPECT_FALSE(compare_values(json(1), json(true), Compare::Boolean));
    EXPECT_TRUE(compare_values(json(false), json(false), Compare::Boolean));
}

TEST(Fixture, ShippedFixturesAgree)
{
    const auto all = load_fixture_dir(default_fixture_dir());
    ASSERT_EQ(all.size(), 5u);
    for (const auto& f : all) {
        const FixtureRunner runner(f);
        for (const auto& o : runner.run()) {
            SCOPED_TRACE(f.id + " / " + o.name);
            EXPECT_TRUE(o.error.empty()) << o.error;
            if (f.id == "ex-2.4-transfer-F101" && o.name == "pairing at P") {
                // The printed value uses the reciprocal pairing normalisation.
                const Field& F = runner.config().F;
                const FieldElement got = element_from_json(F, o.got, "got");
                const FieldElement want = element_from_json(F, o.expected, "expected");
                EXPECT_FALSE(o.pass);
                EXPECT_TRUE((got * want).is_one());
                continue;
            }
            EXPECT_TRUE(o.pass) << "got " << o.got.dump() << " expected " << o.expected.dump();
        }
    }
}
