#include <gtest/gtest.h>

#include "lossaverse/curated.hpp"
#include "lossaverse/game_io.hpp"
#include "lossaverse/random_games.hpp"

using namespace lossaverse;

TEST(Rational, LowestTermsAndSign)
{
    Rational r(6, -8);
    EXPECT_EQ(r.str(), "-3/4");
    EXPECT_EQ(Rational(10, 5).str(), "2");
    EXPECT_THROW(Rational(1, 0), ValidationError);
}

TEST(Rational, ParseForms)
{
    EXPECT_EQ(Rational::parse("3/10"), Rational(3, 10));
    EXPECT_EQ(Rational::parse("-6/4"), Rational(-3, 2));
    EXPECT_EQ(Rational::parse("+7"), Rational(7));
    EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
    EXPECT_EQ(Rational::parse("-1.5"), Rational(-3, 2));
    EXPECT_EQ(Rational::parse("010"), Rational(10));
    EXPECT_EQ(Rational::parse("07/010"), Rational(7, 10));
    EXPECT_EQ(Rational::parse("123456789012345678901234567890").str(), "123456789012345678901234567890");
    for (const char* bad : {"", "-", "1/", "/2", "1/0", "1.", ".5", "1/2/3", "abc", "1e3", " 1"})
        EXPECT_THROW(Rational::parse(bad), ParseError) << bad;
}

TEST(Rational, RoundTrip)
{
    RandomGames gen(11);
    for (int i = 0; i < 200; ++i) {
        Rational x(static_cast<std::int64_t>(gen.draw(2001)) - 1000, 1 + static_cast<std::int64_t>(gen.draw(97)));
        EXPECT_EQ(Rational::parse(x.str()), x);
    }
}

TEST(Rational, ExactArithmetic)
{
    Rational a(1, 3), b(1, 6);
    EXPECT_EQ(a + b, Rational(1, 2));
    EXPECT_EQ(a * b, Rational(1, 18));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_EQ(Rational(1, 10) + Rational(2, 10), Rational(3, 10));
    EXPECT_THROW(a / Rational(0), ValidationError);
    EXPECT_EQ(Rational(-7, 2).floor(), -4);
    EXPECT_EQ(Rational(2, 3).decimal(3), "0.667");
    EXPECT_EQ(Rational(-1, 8).decimal(2), "-0.13");
}

TEST(ExtendedRational, Order)
{
    auto inf = ExtendedRational::infinity();
    auto ninf = ExtendedRational::negative_infinity();
    EXPECT_TRUE(inf == ExtendedRational::infinity());
    EXPECT_TRUE(ExtendedRational(Rational(1000000)) < inf);
    EXPECT_TRUE(ninf < ExtendedRational(Rational(-1000000)));
    EXPECT_TRUE(inf >= inf);
    EXPECT_EQ(inf.str(), "inf");
}

TEST(AgentGame, Utility)
{
    auto g = curated::leximin_proof_game();
    EXPECT_EQ(g.utility("a", "opp-a"), Rational(5));
    EXPECT_EQ(g.utility("a", "opp-a"), g.utility("a", "opp-a"));
    EXPECT_EQ(curated::dominant_leximin().utility("b", "C"), Rational(3));
}

TEST(AgentGame, LookupErrorNamesLabel)
{
    auto g = curated::leximin_proof_game();
    try {
        (void)g.utility("zz", "opp-a");
        FAIL();
    } catch (const LookupError& e) {
        EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
    }
    EXPECT_THROW((void)g.utility("a", "nowhere"), LookupError);
}

TEST(AgentGame, Validation)
{
    EXPECT_THROW(AgentGame("t", {}, {"s"}, {}), ValidationError);
    EXPECT_THROW(AgentGame("t", {"a"}, {}, {}), ValidationError);
    EXPECT_THROW(AgentGame("t", {"a", "a"}, {"s"}, curated::ints({1, 2})), ValidationError);
    EXPECT_THROW(AgentGame("t", {"a"}, {"s", "s"}, curated::ints({1, 2})), ValidationError);
    EXPECT_THROW(AgentGame("t", {"a"}, {"s"}, curated::ints({1, 2})), ShapeError);
}

TEST(MixedAction, Utility)
{
    auto g = curated::safety_wrong_monotone();
    auto mix = MixedAction::from_labels(g, {{"a", Rational(3, 4)}, {"b", Rational(1, 4)}});
    EXPECT_EQ(mixed_utility(g, mix, "A"), Rational(3, 4));
    EXPECT_EQ(mixed_utility(g, mix, "B"), Rational(3, 4));
    auto pure = MixedAction::pure(2, 1);
    EXPECT_EQ(mixed_utility(g, pure, "B"), g.utility("b", "B"));
}

TEST(MixedAction, Invalid)
{
    EXPECT_THROW(MixedAction({Rational(1, 2), Rational(1, 3)}), ValidationError);
    EXPECT_THROW(MixedAction({Rational(3, 2), Rational(-1, 2)}), ValidationError);
    auto g = curated::dominant_leximin();
    EXPECT_THROW(mixed_utility(g, MixedAction({Rational(1)}), 0), ValidationError);
}

TEST(MixedAction, Linearity)
{
    RandomGames gen(5);
    for (int i = 0; i < 100; ++i) {
        auto g = gen.next();
        const auto n = g.action_count();
        std::vector<Rational> px(n), py(n);
        px[0] = Rational(1);
        for (std::size_t a = 0; a < n; ++a)
            py[a] = Rational(1, static_cast<std::int64_t>(n));
        MixedAction x(px), y(py);
        Rational lambda(2, 7);
        auto z = MixedAction::combine(lambda, x, y);
        for (std::size_t s = 0; s < g.state_count(); ++s)
            EXPECT_EQ(mixed_utility(g, z, s),
                      lambda * mixed_utility(g, x, s) + (Rational(1) - lambda) * mixed_utility(g, y, s));
    }
}

TEST(DifferenceSet, Examples)
{
    using V = std::vector<std::string>;
    EXPECT_EQ(difference_set(curated::leximin_proof_game(), "a", "b"), (V{"opp-a", "opp-b"}));
    EXPECT_EQ(difference_set(curated::dominant_leximin(), "a", "b"), (V{"B", "C"}));
    EXPECT_TRUE(difference_set(curated::dominant_leximin(), "a", "a").empty());
    EXPECT_THROW(difference_set(curated::dominant_leximin(), "a", "q"), LookupError);
}

TEST(DifferenceSet, Symmetric)
{
    RandomGames gen(3);
    for (int i = 0; i < 200; ++i) {
        auto g = gen.next();
        for (std::size_t a = 0; a < g.action_count(); ++a)
            for (std::size_t b = 0; b < g.action_count(); ++b)
                EXPECT_EQ(difference_set(g, a, b), difference_set(g, b, a));
    }
}

TEST(GameIo, RoundTripIsBitExact)
{
    std::vector<AgentGame> games = {curated::leximin_proof_game(), curated::dominant_leximin(),
                                    curated::minmaxreg_safety(), curated::aim_big_grid(7)};
    RandomGames gen(9);
    for (int i = 0; i < 50; ++i)
        games.push_back(gen.next().affine(Rational(3, 7), Rational(-1, 2)));
    for (const auto& g : games) {
        const std::string text = serialize(g);
        const AgentGame back = parse_game(text);
        EXPECT_EQ(back, g);
        EXPECT_EQ(serialize(back), text);
    }
}

TEST(GameIo, AcceptsIntegersAndRejectsUnknownFields)
{
    auto g = parse_game(R"({"type":"t","actions":["x"],"states":["s","r"],"utilities":[[1,"-2/4"]]})");
    EXPECT_EQ(g.utility("x", "r"), Rational(-1, 2));
    EXPECT_THROW(parse_game(R"({"type":"t","actions":["x"],"states":["s"],"utilities":[[1]],"extra":1})"),
                 ParseError);
    EXPECT_THROW(parse_game(R"({"type":"t","actions":["x"],"states":["s"],"utilities":[[1, 2]]})"), ParseError);
    EXPECT_THROW(parse_game(R"({"type":"t","actions":["x"],"states":["s"],"utilities":[["1/0"]]})"), ParseError);
    EXPECT_THROW(parse_game("{not json"), ParseError);
}

TEST(RandomGames, SeedDeterminesGames)
{
    RandomGames a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 20; ++i) {
        auto ga = a.next(), gb = b.next(), gc = c.next();
        EXPECT_EQ(ga, gb);
        differs |= !(ga == gc);
        EXPECT_LE(ga.action_count(), 6u);
        EXPECT_LE(ga.state_count(), 6u);
        for (const auto& u : ga.table()) {
            EXPECT_GE(u, Rational(-5));
            EXPECT_LE(u, Rational(5));
        }
    }
    EXPECT_TRUE(differs);
}
