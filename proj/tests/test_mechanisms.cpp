#include <gtest/gtest.h>

#include <random>

#include "lossaverse/mechanisms.hpp"
#include "lossaverse/mixed.hpp"
#include "lossaverse/oracle.hpp"

using namespace lossaverse;

namespace {

std::vector<Rational> rats(std::initializer_list<Rational> xs) { return xs; }

std::vector<std::string> labels_of(const AgentGame& g, const std::vector<std::size_t>& idx)
{
    std::vector<std::string> out;
    for (auto i : idx)
        out.push_back(g.actions()[i]);
    return out;
}

} // namespace

TEST(Facility, ClosedFormExamples)
{
    EXPECT_EQ(facility_loss_averse_report(Rational(1, 2), 4), Rational(1, 2));
    EXPECT_EQ(facility_loss_averse_report(Rational(3, 5), 3), Rational(4, 5));
    EXPECT_EQ(facility_loss_averse_report(Rational(1, 5), 3), Rational(0));
    EXPECT_EQ(facility_loss_averse_report(Rational(9, 10), 3), Rational(1));
    EXPECT_THROW(facility_loss_averse_report(Rational(11, 10), 3), ValidationError);
    EXPECT_THROW(facility_loss_averse_report(Rational(-1, 10), 3), ValidationError);
}

TEST(Facility, GameExample)
{
    auto g = facility_game({3, Rational(3, 5), Rational(1, 30)});
    EXPECT_EQ(g.action_count(), 31u);
    EXPECT_EQ(g.states().front(), "sum=0");
    EXPECT_EQ(g.states().back(), "sum=2");
    EXPECT_EQ(safety_level_actions(g).labels(g), std::vector<std::string>{"4/5"});
    auto half = facility_game({4, Rational(1, 2), Rational(1, 10)});
    EXPECT_TRUE(safety_level_actions(half).contains(half.action_index("1/2")));
    EXPECT_THROW(facility_game({1, Rational(1, 2), Rational(1, 10)}), ValidationError);
    EXPECT_THROW(facility_game({3, Rational(1, 2), Rational(0)}), ValidationError);
    EXPECT_THROW(facility_game({3, Rational(1, 2), Rational(2, 7)}), ValidationError);
}

TEST(Facility, ClosedFormMatchesEngineOnAlignedGrid)
{
    int pairs = 0;
    for (std::int64_t n = 2; n <= 5; ++n)
        for (std::int64_t k = 0; k <= 10; ++k) {
            const Rational theta(k, 10);
            auto g = facility_game({n, theta, Rational(1, 10)});
            const auto expected = std::vector<std::string>{facility_loss_averse_report(theta, n).str()};
            EXPECT_EQ(safety_level_actions(g).labels(g), expected) << "n=" << n << " theta=" << theta.str();
            EXPECT_EQ(loss_averse_actions(g).labels(g), expected) << "n=" << n << " theta=" << theta.str();
            const auto naive = oracle::naive_loss_averse(g);
            EXPECT_EQ(labels_of(g, {naive.begin(), naive.end()}), expected);
            ++pairs;
        }
    EXPECT_GE(pairs, 30);
}

TEST(Facility, ReportMonotoneInType)
{
    for (std::int64_t n = 2; n <= 8; ++n) {
        Rational prev(-1);
        for (std::int64_t k = 0; k <= 120; ++k) {
            Rational r = facility_loss_averse_report(Rational(k, 120), n);
            EXPECT_GE(r, prev);
            EXPECT_GE(r, Rational(0));
            EXPECT_LE(r, Rational(1));
            prev = r;
        }
    }
}

TEST(Facility, WelfareLossDemo)
{
    for (std::int64_t n = 2; n <= 10; ++n) {
        auto d = facility_welfare_loss_demo(n);
        EXPECT_EQ(d.reports, std::vector<Rational>(n, Rational(0)));
        EXPECT_EQ(d.facility, Rational(0));
        EXPECT_EQ(d.loss, (Rational(1, 2) - Rational(1, 2 * n)) * Rational(n));
    }
    EXPECT_EQ(facility_welfare_loss_demo(2).loss, Rational(1, 2));
    EXPECT_EQ(facility_welfare_loss_demo(10).loss, Rational(9, 2));
}

TEST(Psr, RuleEvaluation)
{
    PsrSpec spec{plurality_ballots(3), rats({1, Rational(1, 2), 0}), 2};
    auto g = psr_game(spec);
    EXPECT_EQ(g.game.state_count(), 27u);
    EXPECT_EQ(g.game.utility("(1,0,0)", "(1,0,1)"), Rational(1));
    EXPECT_EQ(g.game.utility("(0,1,0)", "(1,0,1)"), Rational(0));
    for (const auto& a : g.game.actions())
        EXPECT_EQ(g.game.utility(a, "(0,2,0)"), Rational(1, 2));
    EXPECT_TRUE(g.warnings.empty());
    spec.tally_cap = 0;
    EXPECT_EQ(psr_game(spec).game.state_count(), 27u);
}

TEST(Psr, Validation)
{
    EXPECT_THROW(psr_game({plurality_ballots(3), rats({1, Rational(1, 2), Rational(1, 2)}), 2}), ValidationError);
    EXPECT_THROW(psr_game({plurality_ballots(3), rats({1, Rational(1, 2), Rational(1, 4)}), 2}), ValidationError);
    EXPECT_THROW(psr_game({plurality_ballots(2), rats({1, Rational(1, 2), 0}), 2}), ShapeError);
    EXPECT_THROW(psr_game({{}, rats({1, 0}), 2}), ValidationError);
    PsrSpec wide{{{2, 0}, {0, 2}}, rats({1, 0}), 1};
    EXPECT_FALSE(psr_game(wide).warnings.empty());
}

TEST(Psr, ApprovalLossAverse)
{
    auto g = psr_game({approval_ballots(3), rats({1, Rational(1, 2), 0}), 0});
    EXPECT_EQ(loss_averse_actions(g.game).labels(g.game), std::vector<std::string>{"(1,1,0)"});
}

TEST(Psr, ParetoFrontierExamples)
{
    PsrSpec approval{approval_ballots(3), rats({1, Rational(1, 2), 0}), 0};
    EXPECT_EQ(labels_of(psr_game(approval).game, voting_pareto_frontier_loss_averse(approval)),
              std::vector<std::string>{"(1,1,0)"});
    PsrSpec plurality{plurality_ballots(3), rats({1, Rational(1, 2), 0}), 0};
    EXPECT_EQ(labels_of(psr_game(plurality).game, voting_pareto_frontier_loss_averse(plurality)),
              (std::vector<std::string>{"(1,0,0)", "(0,1,0)"}));
    PsrSpec single{{{3, 1, 0}}, rats({1, Rational(1, 2), 0}), 0};
    EXPECT_EQ(voting_pareto_frontier_loss_averse(single), std::vector<std::size_t>{0});
}

TEST(Psr, ParetoFrontierLemma)
{
    const std::vector<std::vector<Rational>> fs = {
        rats({1, 0}), rats({1, Rational(1, 2), 0}), rats({1, Rational(9, 10), Rational(1, 10), 0})};
    for (const auto& f : fs)
        for (bool approval : {false, true}) {
            const std::size_t n = f.size();
            PsrSpec spec{approval ? approval_ballots(n) : plurality_ballots(n), f, 0};
            auto g = psr_game(spec);
            EXPECT_EQ(loss_averse_actions(g.game).actions, voting_pareto_frontier_loss_averse(spec))
                << "n=" << n << (approval ? " approval" : " plurality");
        }
}

TEST(Psr, PluralityMixedClosedForm)
{
    EXPECT_EQ(plurality_mixed_loss_averse(rats({1, Rational(1, 2), Rational(1, 4), 0})),
              rats({Rational(1, 7), Rational(2, 7), Rational(4, 7), 0}));
    EXPECT_EQ(plurality_mixed_loss_averse(rats({1, 0})), rats({1, 0}));
    EXPECT_EQ(plurality_mixed_loss_averse(rats({1, Rational(1, 2), 0})), rats({Rational(1, 3), Rational(2, 3), 0}));
    EXPECT_THROW(plurality_mixed_loss_averse(rats({1, 0, 0})), ValidationError);
}

TEST(Psr, PluralityEqualization)
{
    for (const auto& f : {rats({1, Rational(1, 2), 0}), rats({1, Rational(1, 2), Rational(1, 4), 0}),
                          rats({1, Rational(2, 3), Rational(1, 5), 0})}) {
        auto g = psr_game({plurality_ballots(f.size()), f, 0});
        const MixedAction p(plurality_mixed_loss_averse(f));
        const Rational target = Rational(1) / plurality_normalizer(f);
        for (std::size_t j = 0; j + 1 < f.size(); ++j) {
            auto pivotal = plurality_pivotal_states(g, j);
            ASSERT_FALSE(pivotal.empty());
            for (auto s : pivotal)
                EXPECT_EQ(mixed_utility(g.game, p, s), target) << g.game.states()[s];
        }
    }
}

TEST(Psr, PerturbedMixturesFalsified)
{
    const auto f = rats({1, Rational(1, 2), Rational(1, 4), 0});
    auto g = psr_game({plurality_ballots(4), f, 0});
    const auto p = plurality_mixed_loss_averse(f);
    const MixedAction star(p);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t j = rng() % 3, k = (j + 1 + rng() % 3) % 4;
        const Rational delta = p[j] * Rational(1 + static_cast<std::int64_t>(rng() % 9), 10);
        auto q = p;
        q[j] -= delta;
        q[k] += delta;
        auto verdict = mixed_loss_averse_falsify(g.game, MixedAction(q), {star});
        EXPECT_TRUE(verdict.falsified) << trial;
        for (auto s : plurality_pivotal_states(g, j))
            EXPECT_LT(mixed_utility(g.game, MixedAction(q), s), verdict.deviation_min.value());
    }
}

TEST(Psr, PluralityMixedSurvivesGridFamily)
{
    const auto f = rats({1, Rational(1, 2), 0});
    auto g = psr_game({plurality_ballots(3), f, 0});
    const MixedAction star(plurality_mixed_loss_averse(f));
    EXPECT_FALSE(mixed_loss_averse_falsify(g.game, star, mixture_grid(3, 10)).falsified);
    EXPECT_TRUE(mixed_loss_averse_falsify(g.game, MixedAction::pure(3, 0), {star}).falsified);
    EXPECT_FALSE(mixed_loss_averse_falsify(g.game, star, {star}).falsified);
}

TEST(Psr, ApprovalMixedUniqueness)
{
    for (std::size_t n : {3u, 4u}) {
        std::vector<Rational> f{Rational(1)};
        for (std::size_t j = 1; j + 1 < n; ++j)
            f.push_back(Rational(static_cast<std::int64_t>(n - 1 - j), static_cast<std::int64_t>(n - 1)));
        f.push_back(Rational(0));
        const auto ballots = approval_ballots(n);
        auto g = psr_game({ballots, f, 0});
        Ballot top(n, 1);
        top[n - 1] = 0;
        const MixedAction best = MixedAction::pure(ballots.size(), g.game.action_index(ballot_label(top)));
        std::mt19937_64 rng(n);
        int checked = 0;
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<Rational> w(ballots.size());
            Rational total;
            for (auto& x : w) {
                x = Rational(static_cast<std::int64_t>(rng() % 4));
                total += x;
            }
            if (total.is_zero())
                continue;
            for (auto& x : w)
                x /= total;
            bool some_below = false;
            for (std::size_t j = 0; j + 1 < n; ++j) {
                Rational approve;
                for (std::size_t b = 0; b < ballots.size(); ++b)
                    if (ballots[b][j])
                        approve += w[b];
                some_below |= approve < Rational(1);
            }
            if (!some_below)
                continue;
            EXPECT_TRUE(mixed_loss_averse_falsify(g.game, MixedAction(w), {best}).falsified) << trial;
            ++checked;
        }
        EXPECT_GT(checked, 40);
    }
}

TEST(Psr, PluralityMinMaxRegret)
{
    for (const auto& f : {rats({1, 0}), rats({1, Rational(1, 2), 0}), rats({1, Rational(9, 10), Rational(1, 10), 0}),
                          rats({1, Rational(1, 3), Rational(1, 4), 0})}) {
        auto r = plurality_min_max_regret(f);
        EXPECT_EQ(r.ballot, 0u);
        EXPECT_EQ(r.max_regret, f[1]);
        auto g = psr_game({plurality_ballots(f.size()), f, 0});
        EXPECT_EQ(min_max_regret_actions(g.game).actions, std::vector<std::size_t>{0});
        for (std::size_t j = 1; j < f.size(); ++j)
            EXPECT_EQ(max_regret(g.game, j).value, Rational(1));
    }
}

TEST(Psr, ApprovalTopK)
{
    EXPECT_EQ(approval_min_max_regret_top_k(rats({1, 0})).k, 1u);
    auto r = approval_min_max_regret_top_k(rats({1, Rational(9, 10), Rational(1, 10), 0}));
    EXPECT_EQ(r.k, 2u);
    EXPECT_EQ(r.regrets, rats({Rational(9, 10), Rational(1, 10), Rational(9, 10)}));
}
