#include <gtest/gtest.h>

#include <random>

#include "lossaverse/oracle.hpp"
#include "lossaverse/vcg/enumerate.hpp"
#include "lossaverse/vcg/examples.hpp"
#include "lossaverse/vcg/io.hpp"

using namespace lossaverse;
using namespace lossaverse::vcg;

namespace {

const Rational eps(1, 10);

SetFunction additive(std::initializer_list<Rational> xs) { return SetFunction::additive(xs); }

SetFunction table(std::size_t m, std::initializer_list<Rational> xs) { return SetFunction(m, xs); }

VcgOutcome run(const std::vector<SetFunction>& bids, std::size_t m, PaymentRule rule)
{
    std::vector<SybilProfile> ps;
    for (std::size_t j = 0; j < bids.size(); ++j)
        ps.push_back(SybilProfile::truthful("b" + std::to_string(j), bids[j]));
    return run_vcg(ps, m, rule);
}

} // namespace

TEST(Bundle, TextAndSubsets)
{
    const auto names = default_item_names(3);
    EXPECT_EQ(bundle_str(0, names), "{}");
    EXPECT_EQ(bundle_str(5, names), "{a,c}");
    std::size_t n = 0;
    for_each_subset_of(7, [&](Bundle) { ++n; });
    EXPECT_EQ(n, 8u);
    EXPECT_THROW(check_item_count(9), CapacityError);
    EXPECT_THROW(check_item_count(0), ValidationError);
    EXPECT_EQ(bid_grid_step(Rational(1), 3), Rational(1, 12));
}

TEST(SetFunctions, Validation)
{
    EXPECT_THROW(SetFunction(2, {Rational(1), Rational(0), Rational(0), Rational(0)}), ValidationError);
    EXPECT_THROW(SetFunction(2, {Rational(0), Rational(-1), Rational(0), Rational(0)}), ValidationError);
    EXPECT_THROW(SetFunction(2, {Rational(0), Rational(1)}), ShapeError);
    EXPECT_THROW(SetFunction::xos({}), ValidationError);
    EXPECT_TRUE(additive({1, 2}).is_additive());
    EXPECT_FALSE(table(2, {0, 1, 1, 1}).is_additive());
}

TEST(SetFunctions, XosExpansion)
{
    const auto b = build_example_e1(eps).truthful[1].valuation;
    EXPECT_EQ(b(0b0101), Rational(9) + eps);
    EXPECT_EQ(b(0b0001), Rational(9));
    EXPECT_EQ(SetFunction::xos({{Rational(1), Rational(2), Rational(3)}}), additive({1, 2, 3}));
}

TEST(SetFunctions, OrClosure)
{
    const auto b = *build_example_e2(eps).nature_bid;
    EXPECT_EQ(b(0b011), Rational(2) - eps);
    EXPECT_EQ(b(0b100), Rational(1000));
    EXPECT_EQ(b(0b101), Rational(1000));
    EXPECT_EQ(b(0b111), Rational(1002) - eps);
    EXPECT_EQ(b(0b001), Rational(0));
}

TEST(WinnerDetermination, ExampleE1Attack)
{
    const auto x = build_example_e1(eps);
    const auto o = run_vcg(x.attack, 4, PaymentRule::ClarkePivot);
    // flat bids: A1, A2, B, C
    EXPECT_EQ(o.bid_bundles[0], Bundle{0b0011});
    EXPECT_EQ(o.bid_bundles[1], Bundle{0b1100});
    std::vector<SetFunction> flat = x.attack[0].bids;
    flat.push_back(x.attack[1].bids[0]);
    flat.push_back(x.attack[2].bids[0]);
    const auto naive = oracle::naive_winner_determination(flat, 4, full_bundle(4));
    EXPECT_EQ(o.observed_welfare, naive.welfare);
    EXPECT_EQ(o.observed_welfare, Rational(40));
    EXPECT_EQ(o.real_welfare, Rational(6) * eps);
}

TEST(WinnerDetermination, SingleBidderAndNoBids)
{
    const auto o = run({table(2, {0, 0, 0, 0})}, 2, PaymentRule::ClarkePivot);
    EXPECT_EQ(o.bid_bundles[0], Bundle{0b11});
    EXPECT_EQ(o.payments[0], Rational(0));
    const auto none = winner_determination<Rational>({}, 2);
    EXPECT_EQ(none.welfare, Rational(0));
    EXPECT_EQ(none.owner, (std::vector<std::size_t>{unassigned, unassigned}));
}

TEST(WinnerDetermination, LargerBundlesWinTies)
{
    // {a,b} for 2 against a=1 and b=1 split across two bids
    const auto o = run({additive({1, 0}), additive({0, 1}), table(2, {0, 0, 0, 2})}, 2, PaymentRule::ClarkePivot);
    EXPECT_EQ(o.bid_bundles[2], Bundle{0b11});
    // equal profiles: the smaller owner vector wins
    const auto p = run({table(2, {0, 0, 0, 2}), table(2, {0, 0, 0, 2})}, 2, PaymentRule::ClarkePivot);
    EXPECT_EQ(p.bid_bundles[0], Bundle{0b11});
}

TEST(WinnerDetermination, MatchesNaiveOracle)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 1 + rng() % 3, k = 1 + rng() % 4;
        std::vector<SetFunction> bids;
        for (std::size_t j = 0; j < k; ++j) {
            SetFunction f(m);
            for (Bundle b = 1; b <= full_bundle(m); ++b)
                f.at(b) = Rational(static_cast<std::int64_t>(rng() % 5), 4);
            bids.push_back(f);
        }
        const auto ptrs = pointers(bids);
        const auto a = winner_determination(ptrs, m);
        const auto naive = oracle::naive_winner_determination(bids, m, full_bundle(m));
        ASSERT_EQ(a.welfare, naive.welfare);
        ASSERT_EQ(a.owner, naive.owner) << "trial " << trial;
        EXPECT_EQ(vcg_payments(ptrs, m, a, PaymentRule::ClarkePivot), oracle::naive_payments(bids, m, true));
        EXPECT_EQ(vcg_payments(ptrs, m, a, PaymentRule::Literal), oracle::naive_payments(bids, m, false));
    }
}

TEST(WinnerDetermination, ItemLimits)
{
    std::vector<SetFunction> bids{SetFunction(2)};
    EXPECT_THROW(winner_determination(pointers(bids), 3), ShapeError);
    EXPECT_THROW(SetFunction(9), CapacityError);
}

TEST(Payments, StaleAllocationRejected)
{
    std::vector<SetFunction> bids{additive({1, 0}), additive({0, 1})};
    const auto ptrs = pointers(bids);
    Assignment stale{{1, 1}, Rational(1)};
    EXPECT_THROW(vcg_payments(ptrs, 2, stale, PaymentRule::ClarkePivot), ConsistencyError);
    Assignment wrong_total{{0, 1}, Rational(3)};
    EXPECT_THROW(vcg_payments(ptrs, 2, wrong_total, PaymentRule::Literal), ConsistencyError);
}

TEST(Payments, DisjointSingleMindedPayNothing)
{
    const auto o = run({table(2, {0, 1, 0, 1}), table(2, {0, 0, 1, 1})}, 2, PaymentRule::ClarkePivot);
    EXPECT_EQ(o.bid_bundles, (std::vector<Bundle>{1, 2}));
    EXPECT_EQ(o.payments, (std::vector<Rational>{0, 0}));
}

TEST(Payments, ExampleE1BothRules)
{
    const auto r = example_e1_report(eps);
    EXPECT_EQ(r.attack_observed, Rational(40));
    EXPECT_EQ(r.attack_real, Rational(6) * eps);
    const auto x = build_example_e1(eps);
    std::vector<SetFunction> flat = x.attack[0].bids;
    flat.push_back(x.attack[1].bids[0]);
    flat.push_back(x.attack[2].bids[0]);
    const auto clarke = oracle::naive_payments(flat, 4, true);
    const auto literal = oracle::naive_payments(flat, 4, false);
    EXPECT_EQ(r.clarke_payments, (std::vector<Rational>{clarke[0], clarke[1]}));
    EXPECT_EQ(r.literal_payments, (std::vector<Rational>{literal[0], literal[1]}));
    std::vector<SetFunction> truthful;
    for (const auto& p : x.truthful)
        truthful.push_back(p.valuation);
    EXPECT_EQ(r.truthful_optimum, oracle::naive_winner_determination(truthful, 4, full_bundle(4)).welfare);
    EXPECT_TRUE(r.welfare_discrepancy);
    EXPECT_TRUE(r.payment_discrepancy);
}

TEST(Payments, GridClosure)
{
    const auto x = build_example_e1(eps);
    const auto step = bid_grid_step(eps, 4);
    for (auto rule : {PaymentRule::ClarkePivot, PaymentRule::Literal}) {
        const auto o = run_vcg(x.attack, 4, rule);
        EXPECT_TRUE(is_multiple(o.observed_welfare, step));
        for (const auto& p : o.payments)
            EXPECT_TRUE(is_multiple(p, step));
    }
}

TEST(Payments, LiteralRuleSybilTotalEqualsValue)
{
    // The two Sybils win S = {a,b} and pay v(S) in total under the literal rule.
    const auto v = additive({1, 1});
    const std::vector<SetFunction> attack{additive({1, 0}), additive({0, 1})};
    const NatureState<Rational> nature{SetFunction(2)};
    EXPECT_EQ(agent_utility(v, {v}, nature, PaymentRule::Literal), Rational(0));
    std::vector<SybilProfile> ps{{"i", v, attack, {}}, SybilProfile::truthful("n", nature[0])};
    const auto o = run_vcg(ps, 2, PaymentRule::Literal);
    EXPECT_EQ(o.agent_bundles[0], Bundle{0b11});
    EXPECT_EQ(o.agent_payments[0], v(0b11));
    EXPECT_EQ(run_vcg(ps, 2, PaymentRule::ClarkePivot).agent_payments[0], Rational(0));
}

TEST(Classification, Examples)
{
    const auto x1 = build_example_e1(eps);
    const auto c1 = classify_attack(x1.attack[0].valuation, x1.attack[0].bids);
    EXPECT_EQ(c1.kind, AttackKind::Overbidding);
    EXPECT_EQ(*c1.witness, Bundle{0b0001});
    EXPECT_EQ(c1.best[1], Rational(10));

    const auto x2 = build_example_e2(eps);
    const auto c2 = classify_attack(x2.attack[0].valuation, x2.attack[0].bids);
    EXPECT_EQ(c2.kind, AttackKind::Underbidding);
    EXPECT_EQ(*c2.witness, Bundle{0b100});
    EXPECT_EQ(c2.best[4], eps);

    const auto v = x2.truthful[0].valuation;
    EXPECT_EQ(classify_attack(v, {v}).kind, AttackKind::ExactBidding);
    EXPECT_FALSE(classify_attack(v, {v}).witness);
    EXPECT_THROW(classify_attack(v, {additive({1, 1})}), ShapeError);
}

TEST(ExampleE2, UtilitiesAgainstNatureBid)
{
    const auto x = build_example_e2(eps);
    const NatureState<Rational> n{*x.nature_bid};
    const auto& v = x.truthful[0].valuation;
    EXPECT_EQ(agent_utility(v, {v}, n, PaymentRule::ClarkePivot), eps);
    EXPECT_EQ(agent_utility(v, x.attack[0].bids, n, PaymentRule::ClarkePivot), Rational(2) * eps);
}

TEST(ExampleE2, WelfareLossAgainstAdditiveBidder)
{
    const auto x = build_example_e2(eps);
    const auto other = SybilProfile::truthful("o", additive({Rational(3, 2), Rational(3, 2), Rational(2) * eps}));
    const auto attacked = run_vcg(std::vector<SybilProfile>{x.attack[0], other}, 3, PaymentRule::ClarkePivot);
    EXPECT_EQ(attacked.agent_bundles[1], Bundle{0b111});
    EXPECT_EQ(attacked.real_welfare, Rational(3) + Rational(2) * eps);
    const auto truthful = run_vcg(std::vector<SybilProfile>{x.truthful[0], other}, 3, PaymentRule::ClarkePivot);
    EXPECT_EQ(truthful.real_welfare, Rational(4));
}

TEST(Adversary, OverbiddingExamples)
{
    const auto x = build_example_e1(eps);
    const auto a = overbidding_adversary(x.attack[0].valuation, x.attack[0].bids, make_grid(eps, 4));
    EXPECT_TRUE(a.succeeded);
    EXPECT_LT(a.attack_utility, Rational(0));
    EXPECT_GE(a.truth_utility, Rational(0));

    // one item, value 1, bid 2: nature bids b-tilde and the bid pays it
    const auto v = SetFunction::additive({Rational(1)});
    const auto b = overbidding_adversary(v, {SetFunction::additive({Rational(2)})}, make_grid(Rational(1), 1));
    EXPECT_LT(Rational(1), b.tilde);
    EXPECT_LT(b.tilde, Rational(2));
    EXPECT_EQ(b.attack_utility, Rational(1) - b.tilde);
    EXPECT_TRUE(b.on_grid);

    EXPECT_THROW(overbidding_adversary(v, {v}, make_grid(Rational(1), 1)), ClassificationError);
}

TEST(Adversary, UnderbiddingExamples)
{
    const auto x = build_example_e2(eps);
    const auto& v = x.truthful[0].valuation;
    const auto a = underbidding_adversary(v, x.attack[0].bids, make_grid(eps, 3));
    EXPECT_TRUE(a.succeeded);
    EXPECT_EQ(a.attack_utility, Rational(0));
    EXPECT_EQ(a.truth_utility, v(a.bundle) - a.tilde);
    EXPECT_GT(a.truth_utility, Rational(0));

    const auto v2 = SetFunction::additive({Rational(2)});
    const auto b = underbidding_adversary(v2, {SetFunction::additive({Rational(1)})}, make_grid(Rational(1), 1));
    EXPECT_EQ(b.tilde, Rational(3, 2));
    EXPECT_EQ(b.attack_utility, Rational(0));
    EXPECT_EQ(b.truth_utility, Rational(1, 2));

    EXPECT_THROW(underbidding_adversary(v2, {v2}, make_grid(Rational(1), 1)), ClassificationError);
}

TEST(Adversary, SubsetWinDefeatsAdditiveConstruction)
{
    // The bid takes {a} alone against the additive b' and profits.
    const auto v = table(2, {0, 1, 0, 0});
    const std::vector<SetFunction> bid{table(2, {0, Rational(1, 4), 0, Rational(1, 4)})};
    const auto a = overbidding_adversary(v, bid, make_grid(Rational(1), 2));
    EXPECT_FALSE(a.succeeded);
    EXPECT_EQ(a.bundle, Bundle{0b11});
    EXPECT_EQ(a.attack_utility, Rational(15, 16));
    // A single-minded bid on {a,b} does push it below zero.
    const NatureState<Rational> n{claim_single_minded_bid(2, 0b11, a.blocking, a.tilde)};
    EXPECT_LT(agent_utility(v, bid, n, PaymentRule::ClarkePivot), Rational(0));
}

TEST(Adversary, SnapBetween)
{
    EXPECT_EQ(snap_between(Rational(0), Rational(1), Rational(1, 4)), std::make_pair(Rational(1, 2), true));
    EXPECT_EQ(snap_between(Rational(0), Rational(3, 4), Rational(1, 4)), std::make_pair(Rational(1, 4), true));
    EXPECT_EQ(snap_between(Rational(0), Rational(1, 4), Rational(1, 4)), std::make_pair(Rational(1, 8), false));
}

TEST(ExactBidding, WelfareChain)
{
    const auto v1 = additive({1, 1});
    const auto v2 = table(2, {0, 0, 0, Rational(3, 2)});
    const std::vector<SybilProfile> honest{SybilProfile::truthful("1", v1), SybilProfile::truthful("2", v2)};
    const auto truthful = verify_exact_bidding_optimal(honest, 2);
    EXPECT_TRUE(truthful.optimal);
    EXPECT_TRUE(truthful.chain_holds);
    EXPECT_EQ(truthful.truthful_real, truthful.attack_real);
    EXPECT_EQ(truthful.truthful_observed, truthful.attack_observed);

    const std::vector<SybilProfile> split{{"1", v1, {additive({1, 0}), additive({0, 1})}, {}},
                                          SybilProfile::truthful("2", v2)};
    const auto w = verify_exact_bidding_optimal(split, 2);
    EXPECT_TRUE(w.optimal);
    EXPECT_TRUE(w.chain_holds);
    EXPECT_EQ(w.attack_real, oracle::naive_winner_determination({v1, v2}, 2, 3).welfare);

    const std::vector<SybilProfile> over{{"1", v1, {additive({2, 0})}, {}}};
    EXPECT_THROW(verify_exact_bidding_optimal(over, 2), ClassificationError);
}

TEST(ExactBidding, TruthWitnessCases)
{
    const auto grid = make_grid(Rational(1), 2);
    const auto family = additive_nature_family(2, Rational(1, 2), Rational(3));
    const auto v = additive({1, 1});

    const auto split = truth_loss_averse_witnesses(v, {additive({1, 0}), additive({0, 1})}, grid, family);
    EXPECT_EQ(split.which, TruthCase::NoSingleBid);
    EXPECT_EQ(split.bundle, Bundle{0b11});
    EXPECT_TRUE(split.succeeded);
    EXPECT_EQ(split.attack_utility, Rational(0));
    EXPECT_EQ(split.gap, Rational(1));
    EXPECT_GE(split.truth_utility, split.gap);

    const auto twice = truth_loss_averse_witnesses(v, {v, v}, grid, family);
    EXPECT_EQ(twice.which, TruthCase::SingleBidCovers);
    EXPECT_TRUE(twice.succeeded);
    EXPECT_EQ(twice.states_checked, family.size());

    const auto alone = truth_loss_averse_witnesses(v, {v}, grid, family);
    EXPECT_EQ(alone.which, TruthCase::SingleBidCovers);
    EXPECT_TRUE(alone.succeeded);
    EXPECT_EQ(alone.fragmented_wins, 0u);

    EXPECT_THROW(truth_loss_averse_witnesses(v, {additive({2, 2})}, grid, family), ClassificationError);
}

TEST(ExactBidding, ZeroGapSplitIsNotCertified)
{
    // One Sybil carries all of v({a,b}); the case-1 gap is 0.
    const auto v = additive({1, 0});
    const auto w = truth_loss_averse_witnesses(v, {SetFunction(2), table(2, {0, 1, 0, 0})}, make_grid(Rational(1), 2),
                                               additive_nature_family(2, Rational(1, 2), Rational(3)));
    EXPECT_EQ(w.which, TruthCase::NoSingleBid);
    EXPECT_EQ(w.gap, Rational(0));
    EXPECT_FALSE(w.succeeded);
}

TEST(Enumeration, SingleItemLattice)
{
    EnumerationParams p;
    p.items = 1;
    p.value_cap = Rational(2);
    p.max_sybils = 1;
    InstanceEnumerator en(p);
    ASSERT_EQ(en.bid_lattice().size(), 5u);
    for (std::size_t k = 0; k < 5; ++k)
        EXPECT_EQ(en.scale().to_rational(en.bid_lattice()[k](1)), Rational(static_cast<std::int64_t>(k), 2));
    EXPECT_EQ(en.valuations().size(), 3u);
    EXPECT_EQ(en.attacks_per_valuation(), 5u);
}

TEST(Enumeration, ExactTwoSybilDecompositionsRegression)
{
    EnumerationParams p;
    InstanceEnumerator en(p);
    const auto unit = en.scale().per_epsilon;
    const auto v = TickFunction::additive({unit, unit});
    std::size_t pairs = 0;
    en.for_each_attack([&](const std::vector<TickFunction>& bids) {
        pairs += bids.size() == 2 && classify_attack(v, bids).kind == AttackKind::ExactBidding;
    });
    EXPECT_EQ(pairs, 2261u);
}

TEST(Enumeration, Limits)
{
    EnumerationParams p;
    p.items = 4;
    EXPECT_THROW(InstanceEnumerator{p}, CapacityError);
    p.items = 3;
    EXPECT_THROW(InstanceEnumerator{p}, CapacityError); // 3 items exceed the 1e7 budget
    p.items = 2;
    p.max_sybils = 3;
    EXPECT_THROW(InstanceEnumerator{p}, CapacityError);
}

TEST(Enumeration, FilteredStreamIsDeterministic)
{
    EnumerationParams p;
    p.items = 1;
    p.max_sybils = 2;
    auto trace = [&] {
        std::vector<std::string> out;
        InstanceEnumerator en(p);
        en.for_each_instance(
            [&](const TickFunction& v, const std::vector<TickFunction>& b) { out.push_back(describe(en.scale(), v, b)); },
            AttackKind::Underbidding);
        return out;
    };
    const auto first = trace();
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, trace());
}

TEST(Enumeration, TickScale)
{
    const auto s2 = make_tick_scale(Rational(1), 2);
    EXPECT_EQ(s2.unit, Rational(1, 16));
    const auto s3 = make_tick_scale(Rational(1), 3);
    EXPECT_EQ(s3.unit, Rational(1, 144));
    EXPECT_EQ(s3.to_rational(s3.bid_step), Rational(1, 12));
    EXPECT_THROW(s3.from_rational(Rational(1, 1000)), ValidationError);
}

TEST(TheoremSuite, SingleItemIsClean)
{
    EnumerationParams p;
    p.items = 1;
    const auto r = exhaustive_theorem_suite(p);
    EXPECT_EQ(r.instances, 60u);
    EXPECT_TRUE(r.claim1_ok());
    EXPECT_TRUE(r.claim2_ok());
    EXPECT_TRUE(r.claim3_ok());
    EXPECT_TRUE(r.claim4_ok());
    EXPECT_EQ(r.claim2_below_bound, 0u);
}

TEST(TheoremSuite, RandomSuiteIsSeeded)
{
    const auto a = random_theorem_suite(40, 3);
    const auto b = random_theorem_suite(40, 3);
    EXPECT_EQ(a.instances, 40u);
    EXPECT_EQ(a.overbidding, b.overbidding);
    EXPECT_EQ(a.claim1_failures, b.claim1_failures);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_GT(a.overbidding, 0u);
    EXPECT_GT(a.underbidding, 0u);
    EXPECT_GT(a.exact, 0u);
}

TEST(InstanceIo, RoundTripAndForms)
{
    const std::string text = R"({
      "version": 1, "items": ["a", "b"], "epsilon": "1/2",
      "agents": [
        {"name": "A", "valuation": {"additive": ["1", "1/2"]},
         "bids": [{"additive": ["1", "0"]}, {"table": {"a": "0", "b": "1/2", "a,b": "1/2"}}],
         "bid_names": ["A1", "A2"]},
        {"name": "B", "valuation": {"xos": [["1", "0"], ["0", "1"]]}},
        {"name": "C", "valuation": {"or": [{"bundle": "a,b", "value": "3/2"}]}}
      ]})";
    const auto x = parse_instance(text);
    ASSERT_EQ(x.agents.size(), 3u);
    EXPECT_EQ(x.agents[0].bids.size(), 2u);
    EXPECT_EQ(x.agents[0].bid_name(1), "A2");
    EXPECT_EQ(x.agents[1].valuation(3), Rational(1));
    EXPECT_EQ(x.agents[2].valuation(3), Rational(3, 2));
    EXPECT_EQ(x.agents[2].valuation(1), Rational(0));
    const auto again = instance_from_json(to_json(x));
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(again.agents[i].valuation, x.agents[i].valuation);
        EXPECT_EQ(again.agents[i].bids, x.agents[i].bids);
    }
    const auto o = run_vcg(x.agents, 2, PaymentRule::ClarkePivot);
    const auto j = outcome_to_json(x, o, PaymentRule::ClarkePivot);
    EXPECT_EQ(j["observed_welfare"], o.observed_welfare.str());
    const auto csv = outcome_to_csv(x, o);
    EXPECT_EQ(csv.rfind("row,agent,bid,bundle,value,payment,utility\n", 0), 0u);
    EXPECT_NE(csv.find("real_welfare"), std::string::npos);
}

TEST(InstanceIo, Rejections)
{
    auto doc = [](const std::string& agents, const std::string& eps = "\"1\"") {
        return R"({"version": 1, "items": 1, "epsilon": )" + eps + R"(, "agents": [)" + agents + "]}";
    };
    EXPECT_NO_THROW(parse_instance(doc(R"({"valuation": {"additive": ["1"]}, "bids": [{"additive": ["1/2"]}]})")));
    EXPECT_THROW(parse_instance(doc(R"({"valuation": {"additive": ["1/2"]}})")), ValidationError);
    EXPECT_THROW(parse_instance(doc(R"({"valuation": {"additive": ["1"]}, "bids": [{"additive": ["1/4"]}]})")),
                 ValidationError);
    EXPECT_THROW(parse_instance(doc(R"({"valuation": {"cubic": ["1"]}})")), ParseError);
    EXPECT_THROW(parse_instance(doc(R"({"valuation": {"table": {"z": "1"}}})")), LookupError);
    EXPECT_THROW(parse_instance(doc(R"({"valuation": {"additive": ["1"]}})", "\"0\"")), ValidationError);
    EXPECT_THROW(parse_instance(R"({"version": 2, "items": 1, "epsilon": "1", "agents": []})"), ParseError);
    EXPECT_THROW(parse_instance(R"({"version": 1, "items": 9, "epsilon": "1", "agents": []})"), CapacityError);
    EXPECT_THROW(parse_instance("{"), ParseError);
}
