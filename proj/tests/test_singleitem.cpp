#include <gtest/gtest.h>

#include "lossaverse/concepts.hpp"
#include "lossaverse/continuum.hpp"
#include "lossaverse/curated.hpp"
#include "lossaverse/mixed.hpp"
#include "lossaverse/oracle.hpp"
#include "lossaverse/random_games.hpp"
#include "lossaverse/singleitem.hpp"

using namespace lossaverse;
using Labels = std::vector<std::string>;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

AgentGame dfpa(const Rational& v, const Rational& e) { return dfpa_game(DfpaSpec::with_default_cap(v, e)); }

} // namespace

TEST(EpsNet, Examples)
{
    EXPECT_EQ(eps_net(q(1), q(3, 10)), q(9, 10));
    EXPECT_EQ(eps_net(q(0), q(7, 3)), q(0));
    EXPECT_EQ(eps_net(q(1), q(1, 4)), q(1));
    EXPECT_THROW(eps_net(q(1), q(0)), ValidationError);
    EXPECT_THROW(eps_net(q(1), q(-1, 2)), ValidationError);
}

TEST(Dfpa, GameShape)
{
    auto g = dfpa_game({q(1), q(3, 10), q(3, 2)});
    EXPECT_EQ(g.actions(), (Labels{"0", "3/10", "3/5", "9/10"}));
    EXPECT_EQ(g.states(), (Labels{"none", "0", "3/10", "3/5", "9/10", "6/5", "3/2"}));
    EXPECT_EQ(g.utility("9/10", "3/5"), q(1, 10));
    EXPECT_EQ(g.utility("0", "none"), q(1));
    for (std::size_t a = 0; a < g.action_count(); ++a)
        for (std::size_t s = 1; s < g.state_count(); ++s)
            if (Rational::parse(g.states()[s]) >= Rational::parse(g.actions()[a])) {
                EXPECT_EQ(g.at(a, s), q(0));
            }
    EXPECT_THROW(dfpa_game({q(1), q(3, 10), q(1)}), ValidationError);
}

TEST(Dfpa, DefaultCap)
{
    EXPECT_EQ(DfpaSpec::with_default_cap(q(1), q(3, 10)).nature_bid_cap, q(9, 5));
    EXPECT_EQ(DfpaSpec::with_default_cap(q(1), q(1, 4)).nature_bid_cap, q(3, 2));
}

TEST(Dfpa, LiteralInstance)
{
    auto g = dfpa(q(1), q(3, 10));
    EXPECT_EQ(compute(g, Concept::LossAverse).labels(g), (Labels{"9/10"}));
    EXPECT_EQ(safety_level(g), q(0));
    EXPECT_EQ(compute(g, Concept::SafetyLevel).labels(g), (Labels{"0", "3/10", "3/5", "9/10"}));
    EXPECT_EQ(compute(g, Concept::Leximin).labels(g), (Labels{"0"}));
    EXPECT_EQ(compute(g, Concept::MultiLeximin).labels(g), (Labels{"9/10"}));
    EXPECT_EQ(compute(g, Concept::MinMaxRegret).labels(g), (Labels{"3/10"}));
}

TEST(Dfpa, ClosedForms)
{
    EXPECT_EQ(dfpa_loss_averse_bid(q(1), q(3, 10)), q(9, 10));
    EXPECT_EQ(dfpa_loss_averse_bid(q(0), q(1, 4)), q(0));
    EXPECT_EQ(dfpa_loss_averse_bid(q(1), q(1, 4)), q(3, 4));
    EXPECT_EQ(dfpa_min_max_regret_bid(q(1), q(3, 10)), q(3, 10));
    EXPECT_EQ(dfpa_min_max_regret_bid(q(0), q(1, 7)), q(0));
    EXPECT_EQ(dfpa_min_max_regret_bid(q(2), q(3, 10)), q(9, 10));
}

TEST(Dfpa, LossAverseClosedFormMatchesEngine)
{
    for (const auto& [v, e] : dfpa_test_grid()) {
        auto g = dfpa(v, e);
        auto la = loss_averse_actions(g);
        ASSERT_EQ(la.actions.size(), 1u) << v << " " << e;
        EXPECT_EQ(Rational::parse(g.actions()[la.actions[0]]), dfpa_loss_averse_bid(v, e));
        EXPECT_EQ(oracle::naive_loss_averse(g), (std::set<std::size_t>{la.actions[0]}));
    }
}

TEST(Dfpa, LeximinAndMultiLeximin)
{
    for (const auto& [v, e] : dfpa_test_grid()) {
        if (v.is_zero() || eps_net(v, e) == v)
            continue;
        auto g = dfpa(v, e);
        EXPECT_EQ(compute(g, Concept::Leximin).labels(g), (Labels{"0"}));
        EXPECT_EQ(compute(g, Concept::MultiLeximin).labels(g), (Labels{dfpa_loss_averse_bid(v, e).str()}));
    }
}

TEST(Dfpa, MinMaxRegretBidIsAlwaysAMinimizer)
{
    for (const auto& [v, e] : dfpa_test_grid()) {
        auto g = dfpa(v, e);
        auto mmr = compute(g, Concept::MinMaxRegret).labels(g);
        EXPECT_NE(std::find(mmr.begin(), mmr.end(), dfpa_min_max_regret_bid(v, e).str()), mmr.end()) << v << " " << e;
    }
}

TEST(Dfpa, MinMaxRegretTieAtQuarterGrid)
{
    // Bids 1/4 and 1/2 both have max regret 1/2.
    auto g = dfpa(q(1), q(1, 4));
    EXPECT_EQ(compute(g, Concept::MinMaxRegret).labels(g), (Labels{"1/4", "1/2"}));
    EXPECT_EQ(max_regret(g, g.action_index("1/4")).value, q(1, 2));
    EXPECT_EQ(max_regret(g, g.action_index("1/2")).value, q(1, 2));
}

TEST(Dfpa, CapInvariance)
{
    for (const auto& [v, e] : dfpa_test_grid()) {
        auto base = DfpaSpec::with_default_cap(v, e);
        for (int extra = 1; extra <= 3; ++extra) {
            DfpaSpec wide{v, e, base.nature_bid_cap + Rational(extra) * e};
            auto g = dfpa_game(base), h = dfpa_game(wide);
            for (auto c : {Concept::LossAverse, Concept::Leximin, Concept::MultiLeximin, Concept::MinMaxRegret,
                           Concept::SafetyLevel})
                EXPECT_EQ(compute(g, c).actions, compute(h, c).actions);
        }
    }
}

TEST(Dfpa, MixedPureBidSurvivesAndOthersFalsified)
{
    for (const auto& [v, e] : dfpa_test_grid()) {
        auto g = dfpa(v, e);
        if (g.action_count() < 2)
            continue;
        const std::size_t star = g.action_index(dfpa_loss_averse_bid(v, e).str());
        std::vector<MixedAction> family;
        for (std::size_t a = 0; a < g.action_count(); ++a)
            family.push_back(MixedAction::pure(g.action_count(), a));
        for (std::size_t a = 0; a < g.action_count(); ++a)
            for (std::size_t b = a + 1; b < g.action_count(); ++b)
                for (std::int64_t k = 1; k < 10; ++k) {
                    std::vector<Rational> p(g.action_count());
                    p[a] = q(k, 10);
                    p[b] = q(10 - k, 10);
                    family.emplace_back(std::move(p));
                }
        auto pure_star = MixedAction::pure(g.action_count(), star);
        EXPECT_FALSE(mixed_loss_averse_falsify(g, pure_star, family).falsified);
        for (std::size_t a = 0; a < g.action_count(); ++a)
            if (a != star) {
                EXPECT_TRUE(mixed_loss_averse_falsify(g, MixedAction::pure(g.action_count(), a), {pure_star}).falsified);
            }
    }
}

TEST(Fpa, WitnessExamples)
{
    auto w = fpa_no_loss_averse_witness(q(1), q(1, 2));
    EXPECT_EQ(w.deviation, q(3, 4));
    EXPECT_EQ(w.state, q(5, 8));
    EXPECT_EQ(w.bid_min, q(0));
    EXPECT_EQ(w.deviation_min, q(1, 4));
    w = fpa_no_loss_averse_witness(q(1), q(1));
    EXPECT_EQ(w.deviation, q(1, 2));
    EXPECT_EQ(w.state, q(0));
    EXPECT_EQ(w.deviation_min, q(1, 2));
    w = fpa_no_loss_averse_witness(q(1), q(0));
    EXPECT_EQ(w.deviation, q(1, 2));
    EXPECT_EQ(w.state, q(1, 4));
    EXPECT_EQ(w.deviation_min, q(1, 2));
    EXPECT_THROW(fpa_no_loss_averse_witness(q(0), q(0)), ValidationError);
}

TEST(Fpa, WitnessesHoldOnFineGrid)
{
    const Rational v(7, 3);
    std::vector<Rational> probes;
    for (std::int64_t k = 0; k <= 400; ++k)
        probes.push_back(v * q(k, 200));
    for (std::int64_t k = 0; k < 100; ++k) {
        auto w = fpa_no_loss_averse_witness(v, v * q(k, 99));
        EXPECT_TRUE(fpa_witness_holds(w, probes)) << k;
    }
}

TEST(AllPay, OnlyZeroBid)
{
    auto g = all_pay_game({q(1), q(1, 4), q(3, 2)});
    EXPECT_EQ(compute(g, Concept::LossAverse).labels(g), (Labels{"0"}));
    EXPECT_EQ(compute(g, Concept::IndividuallyRational).labels(g), (Labels{"0"}));
    EXPECT_EQ(all_pay_loss_averse_bid(q(17)), q(0));
}

TEST(RevenueFloor, Examples)
{
    auto r = dfpa_revenue_floor({q(1), q(7, 10)}, q(3, 10));
    EXPECT_EQ(r.floor, q(7, 10));
    EXPECT_EQ(r.revenue, q(9, 10));
    r = dfpa_revenue_floor({q(0)}, q(1, 4));
    EXPECT_EQ(r.floor, q(-1, 4));
    EXPECT_EQ(r.revenue, q(0));
    r = dfpa_revenue_floor({q(1), q(1)}, q(1, 4));
    EXPECT_EQ(r.revenue, q(3, 4));
    EXPECT_EQ(r.floor, q(3, 4));
    EXPECT_EQ(r.winner, 0u);
}

TEST(AimBig, ClosedFormAndGrid)
{
    auto g = aim_big();
    EXPECT_EQ(continuum_loss_averse(g), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(continuum_loss_averse_star(g), (std::vector<std::size_t>{1}));
    for (std::int64_t steps : {1, 4, 10, 100}) {
        auto grid = curated::aim_big_grid(steps);
        EXPECT_EQ(compute(grid, Concept::LossAverse).labels(grid), (Labels{"S"}));
        EXPECT_EQ(compute(grid, Concept::LossAverseStar).labels(grid), (Labels{"S"}));
        auto sampled = g.sample(steps);
        EXPECT_EQ(compute(sampled, Concept::LossAverse).labels(sampled), (Labels{"S"}));
    }
}

TEST(Continuum, PointPiecesAgreeWithFiniteEngine)
{
    RandomGames gen(404);
    for (const auto& g : gen.take(300)) {
        std::vector<NaturePiece> pieces;
        for (std::size_t s = 0; s < g.state_count(); ++s) {
            std::vector<Rational> col;
            for (std::size_t a = 0; a < g.action_count(); ++a)
                col.push_back(g.at(a, s));
            pieces.push_back(NaturePiece::point(g.states()[s], col));
        }
        ContinuumGame c(g.type_label(), g.actions(), pieces);
        EXPECT_EQ(continuum_loss_averse(c), loss_averse_actions(g).actions);
        EXPECT_EQ(continuum_loss_averse_star(c), loss_averse_star_actions(g).actions);
        EXPECT_EQ(continuum_safety_level_actions(c), safety_level_actions(g).actions);
    }
}
