#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "lossaverse/cli.hpp"
#include "lossaverse/game_io.hpp"

using namespace lossaverse;
using namespace lossaverse::cli;
using Labels = std::vector<std::string>;

namespace {

Json scenario(const char* kind, Json parameters)
{
    return Json{{"version", 1}, {"kind", kind}, {"parameters", std::move(parameters)}};
}

Labels verdict(const Report& r, const char* name)
{
    return r.doc["verdicts"][name]["actions"].get<Labels>();
}

int exit_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.exit_code();
    }
    return 0;
}

} // namespace

TEST(Scenario, RoundTripsThroughJson)
{
    Json j = scenario("dfpa", {{"value", "1"}, {"epsilon", "3/10"}});
    j["concepts"] = Json::array({"loss-averse"});
    j["format"] = "csv";
    const Scenario s = scenario_from_json(j);
    EXPECT_EQ(s.kind, ScenarioKind::Dfpa);
    EXPECT_EQ(s.format, std::optional<std::string>("csv"));
    EXPECT_EQ(to_json(s), j);
}

TEST(Scenario, RejectsWrongVersionAndUnknownKeys)
{
    Json j = scenario("dfpa", {{"value", "1"}, {"epsilon", "1/4"}});
    j["version"] = 2;
    EXPECT_EQ(exit_of([&] { scenario_from_json(j); }), 2);
    j["version"] = 1;
    j["colour"] = "red";
    EXPECT_EQ(exit_of([&] { scenario_from_json(j); }), 2);
    EXPECT_EQ(exit_of([&] { scenario_from_json(scenario("poker", Json::object())); }), 2);
    EXPECT_EQ(exit_of([&] { run_scenario(scenario_from_json(scenario("dfpa", {{"value", "1"}, {"eps", "1/4"}}))); }),
              2);
}

TEST(Curated, RegistryIsClosed)
{
    EXPECT_EQ(curated_names().size(), 8u);
    for (const auto& name : curated_names())
        EXPECT_NO_THROW(check_curated(name)) << name;
    EXPECT_EQ(exit_of([] { check_curated("nope"); }), 3);
    EXPECT_TRUE(curated_game("aim-big").has_value());
    EXPECT_FALSE(curated_game("example-e1").has_value());
    EXPECT_TRUE(curated_example("example-e2", Rational(1, 10)).has_value());
}

TEST(Run, LeximinProofGame)
{
    Scenario s = curated_scenario("leximin-proof-game");
    s.concepts = {"loss-averse", "multi-leximin"};
    const Report r = run_scenario(s);
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(verdict(r, "loss-averse"), (Labels{"a", "b"}));
    EXPECT_EQ(verdict(r, "multi-leximin"), (Labels{"b"}));
    EXPECT_FALSE(r.doc["verdicts"].contains("leximin"));
}

TEST(Run, DfpaClosedForm)
{
    const Report r = run_scenario(scenario_from_json(scenario("dfpa", {{"value", "1"}, {"epsilon", "3/10"}})));
    EXPECT_EQ(verdict(r, "loss-averse"), (Labels{"9/10"}));
    EXPECT_EQ(verdict(r, "min-max-regret"), (Labels{"3/10"}));
    EXPECT_EQ(r.doc["closed_form"]["loss_averse_bid"], "9/10");
    EXPECT_EQ(r.doc["closed_form"]["min_max_regret_bid"], "3/10");
    for (const auto& i : r.doc["inclusions"])
        EXPECT_TRUE(i["holds"].get<bool>());
}

TEST(Run, VotingAndFacility)
{
    const Report v = run_scenario(
        scenario_from_json(scenario("voting", {{"rule", "plurality"}, {"utilities", Json::array({"1", "1/3", "0"})}})));
    EXPECT_TRUE(v.doc["closed_form"].contains("plurality_min_max_regret"));
    EXPECT_FALSE(v.doc["closed_form"].contains("approval_top_k"));
    const Report f = run_scenario(
        scenario_from_json(scenario("facility", {{"agents", 3}, {"type", "1/2"}, {"step", "1/4"}})));
    EXPECT_EQ(f.doc["game"]["actions"].size(), 5u);
    EXPECT_TRUE(f.doc.contains("closed_form"));
}

TEST(Run, ExampleE1UnderClarke)
{
    const Report r = run_scenario(scenario_from_json(
        scenario("vcg", {{"curated", "example-e1"}, {"epsilon", "1/10"}, {"payment_rule", "clarke"}})));
    const Json& o = r.doc["outcome"];
    EXPECT_EQ(o["real_welfare"], "3/5");
    Labels payments;
    for (const auto& b : o["bids"])
        if (b["agent"] == "A")
            payments.push_back(b["payment"].get<std::string>());
    EXPECT_EQ(payments, (Labels{"18", "18"}));
}

TEST(Run, FpaWitnessHolds)
{
    const Report r = run_fpa_witness(Json{{"value", "7/3"}});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.doc["witnesses"].size(), 3u);
}

TEST(Run, VerifyTheoremOneItem)
{
    double seconds = -1;
    const Report r = run_verify_theorem(TheoremRequest{}, &seconds);
    EXPECT_EQ(r.status, 0);
    EXPECT_GE(seconds, 0);
    EXPECT_FALSE(r.doc.dump().find("seconds") != std::string::npos);
    TheoremRequest big;
    big.items = 3;
    big.budget = 1000;
    EXPECT_EQ(exit_of([&] { run_verify_theorem(big); }), 4);
}

TEST(Render, FormatsAndDecimal)
{
    const Report r = run_scenario(scenario_from_json(scenario("dfpa", {{"value", "1"}, {"epsilon", "1/3"}})));
    const Json plain = parse_json(render(r, Format::Json, std::nullopt));
    EXPECT_EQ(plain, r.doc);
    const Json dec = parse_json(render(r, Format::Json, 4));
    EXPECT_EQ(dec["closed_form"], r.doc["closed_form"]);
    EXPECT_EQ(dec["decimal_non_authoritative"]["closed_form"]["min_max_regret_bid"], "0.3333");
    const std::string csv = render(r, Format::Csv, std::nullopt);
    EXPECT_EQ(csv.rfind("path,value\n", 0), 0u);
    EXPECT_NE(csv.find("closed_form.loss_averse_bid,"), std::string::npos);
    const std::string table = render(r, Format::Table, std::nullopt);
    EXPECT_NE(table.find("loss-averse"), std::string::npos);
    EXPECT_NE(render(r, Format::Table, 3).find("non-authoritative"), std::string::npos);
}

TEST(Render, ByteStable)
{
    for (const auto& name : curated_names()) {
        const std::string a = render(run_scenario(curated_scenario(name)), Format::Json, std::nullopt);
        const std::string b = render(run_scenario(curated_scenario(name)), Format::Json, std::nullopt);
        EXPECT_EQ(a, b) << name;
    }
}

TEST(Export, GameRoundTripIsIdentity)
{
    for (const char* name : {"leximin-proof-game", "safety-wrong-monotone", "aim-big"}) {
        const AgentGame g = *curated_game(name);
        EXPECT_EQ(parse_game(serialize(g)), g) << name;
        EXPECT_EQ(serialize(parse_game(serialize(g))), serialize(g)) << name;
    }
}

TEST(Output, EnvironmentDirectoryAndAtomicWrite)
{
    const auto dir = std::filesystem::temp_directory_path() / "lossaverse_cli_test";
    std::filesystem::create_directories(dir);
    ::setenv(output_dir_variable, dir.c_str(), 1);
    const auto p = output_path("", "analyze");
    ::unsetenv(output_dir_variable);
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->parent_path(), dir);
    write_atomically(*p, "x\n");
    std::ifstream in(*p);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x");
    EXPECT_FALSE(output_path("", "analyze").has_value());
    std::filesystem::remove_all(dir);
}

TEST(Concepts, AllCombinesWithMixedSafetyLevel)
{
    Scenario s = curated_scenario("safety-wrong-monotone");
    s.concepts = {"all", "mixed-safety-level"};
    const Report r = run_scenario(s);
    EXPECT_EQ(r.doc["verdicts"].size(), all_concepts.size());
    EXPECT_EQ(r.doc["mixed_safety_level"]["value"], "3/4");
    s.concepts = {"leximin", "bogus"};
    EXPECT_EQ(exit_of([&] { run_scenario(s); }), 3);
}
