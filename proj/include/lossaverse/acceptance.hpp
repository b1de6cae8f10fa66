#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lossaverse/concepts.hpp"
#include "lossaverse/continuum.hpp"
#include "lossaverse/curated.hpp"
#include "lossaverse/hierarchy.hpp"
#include "lossaverse/mechanisms.hpp"
#include "lossaverse/mixed.hpp"
#include "lossaverse/oracle.hpp"
#include "lossaverse/random_games.hpp"
#include "lossaverse/singleitem.hpp"
#include "lossaverse/vcg/enumerate.hpp"
#include "lossaverse/vcg/examples.hpp"

namespace lossaverse::acceptance {

/// Outcome of one acceptance criterion. Every comparison is exact; the time
/// limit is part of the verdict.
struct Criterion {
    int id = 0;
    std::string title;
    double limit_seconds = 0;
    bool checks_passed = false;
    double seconds = 0;
    std::vector<std::string> details;

    bool passed() const { return checks_passed && seconds < limit_seconds; }
};

struct Options {
    std::uint64_t hierarchy_seed = 2024;
    std::size_t hierarchy_games = 1000;
    std::uint64_t dominated_seed = 4242;
    std::size_t dominated_games = 200;
    std::uint64_t collapse_seed = 31337;
    std::size_t collapse_games = 20;
    std::uint64_t theorem_seed = 20240601;
    std::size_t theorem_random = 500;
    bool theorem_exhaustive_m2 = true;
    std::uint64_t vcg_oracle_seed = 99;
    std::size_t vcg_oracle_random = 400;
    std::size_t vcg_oracle_stride = 997;
    std::set<int> only; // empty runs every criterion
};

/// Games gathered by criteria 1 to 12 for the oracle cross-check.
struct Corpus {
    std::vector<AgentGame> games;
    void add(const AgentGame& g) { games.push_back(g); }
};

namespace detail {

inline std::string join(const std::vector<std::string>& xs)
{
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? ", " : "") + xs[i];
    return out + "}";
}

inline std::string rats(const std::vector<Rational>& xs)
{
    std::vector<std::string> s;
    for (const auto& x : xs)
        s.push_back(x.str());
    return join(s);
}

class Checker {
public:
    explicit Checker(Criterion& c) : c_(c) {}

    bool expect(bool ok, const std::string& what)
    {
        if (!ok) {
            ++failures_;
            if (failures_ <= 8)
                c_.details.push_back("mismatch: " + what);
        }
        return ok;
    }

    void note(const std::string& s) { c_.details.push_back(s); }
    std::size_t failures() const { return failures_; }

private:
    Criterion& c_;
    std::size_t failures_ = 0;
};

inline AgentGame dfpa(const Rational& v, const Rational& e) { return dfpa_game(DfpaSpec::with_default_cap(v, e)); }

inline std::vector<std::pair<Concept, std::set<std::size_t>>> oracle_verdicts(const AgentGame& g)
{
    return {
        {Concept::LossAverse, oracle::naive_loss_averse(g)},
        {Concept::LossAverseStar, oracle::naive_loss_averse_star(g)},
        {Concept::SafetyLevel, oracle::naive_safety_level(g)},
        {Concept::IndividuallyRational, oracle::naive_individually_rational(g)},
        {Concept::WeaklyDominant, oracle::naive_weakly_dominant(g)},
        {Concept::StrictlyDominated, oracle::naive_strictly_dominated(g)},
        {Concept::Leximin, oracle::naive_leximin(g, false)},
        {Concept::MultiLeximin, oracle::naive_leximin(g, true)},
        {Concept::MinMaxRegret, oracle::naive_min_max_regret(g)},
    };
}

} // namespace detail

inline void criterion_dfpa_closed_form(Criterion& c, Corpus& corpus)
{
    detail::Checker chk(c);
    const auto grid = dfpa_test_grid();
    std::size_t below = 0, on = 0, zero = 0;
    for (const auto& [v, e] : grid) {
        const auto g = detail::dfpa(v, e);
        corpus.add(g);
        const auto la = loss_averse_actions(g).labels(g);
        const std::vector<std::string> want{dfpa_loss_averse_bid(v, e).str()};
        chk.expect(la == want, "v=" + v.str() + " eps=" + e.str() + " got " + detail::join(la) + " want " +
                                   detail::join(want));
        if (v.is_zero())
            ++zero;
        else if (eps_net(v, e) == v)
            ++on;
        else
            ++below;
    }
    chk.note(std::to_string(grid.size()) + " (v, eps) pairs: " + std::to_string(zero) + " with v = 0, " +
             std::to_string(on) + " with v on the grid, " + std::to_string(below) + " with v between grid points");
    c.checks_passed = chk.failures() == 0 && grid.size() >= 40 && zero && on && below;
}

inline void criterion_fpa_witness(Criterion& c, Corpus&)
{
    detail::Checker chk(c);
    const Rational v(7, 3);
    std::vector<Rational> probes;
    for (std::int64_t k = 0; k <= 400; ++k)
        probes.push_back(v * Rational(k, 300));
    std::size_t checked = 0;
    for (std::int64_t k = 0; k < 100; ++k) {
        const Rational bid = v * Rational(k, 99);
        const auto w = fpa_no_loss_averse_witness(v, bid);
        const bool strict = fpa_utility(v, bid, w.state) == w.bid_min && w.bid_min < w.deviation_min &&
                            fpa_utility(v, w.deviation, w.state) == w.deviation_min;
        chk.expect(strict && fpa_witness_holds(w, probes), "bid " + bid.str());
        ++checked;
    }
    chk.note(std::to_string(checked) + " bids k*v/99 for v = 7/3, " + std::to_string(probes.size()) +
             " probe states in [0, 4v/3]");
    c.checks_passed = chk.failures() == 0 && checked == 100;
}

inline void criterion_hierarchy(Criterion& c, Corpus& corpus, const Options& opt)
{
    detail::Checker chk(c);
    RandomGames gen(opt.hierarchy_seed);
    std::size_t violations = 0, games = 0;
    for (const auto& g : gen.take(opt.hierarchy_games)) {
        corpus.add(g);
        try {
            const auto r = hierarchy_report(g);
            for (const auto& inc : r.inclusions)
                violations += !inc.holds;
        } catch (const ConsistencyError& e) {
            ++violations;
            chk.expect(false, g.type_label() + ": " + e.what());
        }
        ++games;
    }
    chk.expect(violations == 0, std::to_string(violations) + " inclusion violations");
    chk.note(std::to_string(games) + " random games (seed " + std::to_string(opt.hierarchy_seed) + "), " +
             std::to_string(violations) + " violations of the 5 proven inclusions");

    struct Curated {
        AgentGame game;
        Concept sub, sup;
        std::vector<std::string> sub_labels, sup_labels;
    };
    const std::vector<Curated> cases = {
        {detail::dfpa(Rational(1), Rational(3, 10)), Concept::Leximin, Concept::LossAverse, {"0"}, {"9/10"}},
        {curated::leximin_proof_game(), Concept::LossAverse, Concept::MultiLeximin, {"a", "b"}, {"b"}},
        {curated::dominant_leximin(), Concept::WeaklyDominant, Concept::Leximin, {"a"}, {"b"}},
        {curated::minmaxreg_safety(), Concept::MinMaxRegret, Concept::SafetyLevel, {"b"}, {"a"}},
        {curated::safety_not_leximin(), Concept::SafetyLevel, Concept::Leximin, {"a", "b"}, {"b"}},
    };
    std::size_t reproduced = 0;
    for (const auto& x : cases) {
        corpus.add(x.game);
        const auto r = hierarchy_report(x.game);
        const auto sub = r[x.sub].labels(x.game), sup = r[x.sup].labels(x.game);
        bool listed = false;
        for (const auto& inc : r.non_inclusions)
            listed |= inc.subset == x.sub && inc.superset == x.sup;
        const std::string name = x.game.type_label() + ": " + std::string(concept_name(x.sub)) + " " +
                                 detail::join(sub) + " not within " + std::string(concept_name(x.sup)) + " " +
                                 detail::join(sup);
        if (chk.expect(sub == x.sub_labels && sup == x.sup_labels && listed && !is_subset(r[x.sub].actions, r[x.sup].actions),
                       name))
            ++reproduced;
        chk.note(name);
    }
    c.checks_passed = chk.failures() == 0 && reproduced == cases.size() && games == opt.hierarchy_games;
}

inline void criterion_multi_leximin(Criterion& c, Corpus&, const Options& opt)
{
    detail::Checker chk(c);
    RandomGames gen(opt.hierarchy_seed);
    std::size_t empty = 0, games = 0;
    for (const auto& g : gen.take(opt.hierarchy_games)) {
        if (multi_leximin_actions(g).actions.empty()) {
            ++empty;
            chk.expect(false, g.type_label() + " has no multi-leximin action");
        }
        ++games;
    }
    chk.note(std::to_string(games) + " random games (seed " + std::to_string(opt.hierarchy_seed) + "), " +
             std::to_string(empty) + " with an empty multi-leximin set");
    c.checks_passed = empty == 0 && games == opt.hierarchy_games;
}

inline void criterion_min_max_regret(Criterion& c, Corpus&)
{
    detail::Checker chk(c);
    const auto grid = dfpa_test_grid();
    std::size_t singleton = 0, contains = 0;
    for (const auto& [v, e] : grid) {
        const auto g = detail::dfpa(v, e);
        const auto mmr = min_max_regret_actions(g).labels(g);
        const std::string want = dfpa_min_max_regret_bid(v, e).str();
        contains += std::find(mmr.begin(), mmr.end(), want) != mmr.end();
        const bool ok = mmr == std::vector<std::string>{want};
        singleton += ok;
        chk.expect(ok, "v=" + v.str() + " eps=" + e.str() + " got " + detail::join(mmr) + " want {" + want + "}");
    }
    chk.note(std::to_string(singleton) + "/" + std::to_string(grid.size()) + " pairs give exactly {eps_net(v/2)}; " +
             std::to_string(contains) + "/" + std::to_string(grid.size()) + " contain it");
    c.checks_passed = chk.failures() == 0;
}

/// Games for the mixture collapse: a floor state C gives every action 0 and
/// some action attains safety level 0 without being loss-averse.
inline std::vector<AgentGame> collapse_games(std::uint64_t seed, std::size_t count)
{
    std::mt19937_64 rng(seed);
    std::vector<AgentGame> out;
    while (out.size() < count) {
        const std::size_t n = 2 + rng() % 3, m = 2 + rng() % 3;
        std::vector<std::string> actions, states;
        for (std::size_t a = 0; a < n; ++a)
            actions.push_back("a" + std::to_string(a));
        for (std::size_t s = 0; s < m; ++s)
            states.push_back("s" + std::to_string(s));
        states.push_back("C");
        std::vector<std::int64_t> draws(n * m);
        for (auto& x : draws)
            x = static_cast<std::int64_t>(rng() % 9) - 2;
        auto g = AgentGame::tabulate("collapse-" + std::to_string(out.size()), actions, states,
                                     [&](std::size_t a, std::size_t s) {
                                         return s == m ? Rational(0) : Rational(draws[a * m + s]);
                                     });
        if (safety_level(g) != Rational(0))
            continue;
        if (safety_level_actions(g).actions == loss_averse_actions(g).actions)
            continue;
        out.push_back(std::move(g));
    }
    return out;
}

/// Augments every non-floor state with each mixture weight.
inline AgentGame augment_all(const AgentGame& g, const std::string& floor, const std::vector<Rational>& eps)
{
    AgentGame out = g;
    for (const auto& s : g.states())
        if (s != floor)
            out = augment_with_mixed_nature(out, {s, floor, eps});
    return out;
}

inline void criterion_collapse(Criterion& c, Corpus& corpus, const Options& opt)
{
    detail::Checker chk(c);
    const std::vector<Rational> eps{Rational(1, 10), Rational(1, 100)};
    const auto games = collapse_games(opt.collapse_seed, opt.collapse_games);
    std::size_t finite = 0, limit = 0, stuck = 0;
    for (const auto& g : games) {
        corpus.add(g);
        const auto h = augment_all(g, "C", eps);
        corpus.add(h);
        const auto la = loss_averse_actions(h).labels(h), sl = safety_level_actions(h).labels(h);
        const bool ok = la == sl;
        finite += ok;
        chk.expect(ok, g.type_label() + " augmented: loss-averse " + detail::join(la) + " vs safety level " +
                           detail::join(sl));
        stuck += loss_averse_actions(h).actions == loss_averse_actions(g).actions;
        const auto cg = augment_with_mixture_family(g, "C");
        limit += continuum_loss_averse(cg) == continuum_safety_level_actions(cg);
    }
    chk.note(std::to_string(games.size()) + " games (seed " + std::to_string(opt.collapse_seed) +
             "), each with a safety-level action that is not loss-averse; floor state C gives every action 0");
    chk.note("eps in {1/10, 1/100} on every bar state: " + std::to_string(finite) + "/" +
             std::to_string(games.size()) + " collapse, " + std::to_string(stuck) + "/" +
             std::to_string(games.size()) + " keep the unaugmented loss-averse set");
    chk.note("a mixture at weight e moves each minimum over the difference set to e*m, so a strict gap stays strict "
             "for every finite weight");
    chk.note("whole mixture family e in (0,1), infimum as e -> 0: " + std::to_string(limit) + "/" +
             std::to_string(games.size()) + " collapse");
    c.checks_passed = chk.failures() == 0 && games.size() == opt.collapse_games;
}

inline void criterion_aim_big(Criterion& c, Corpus& corpus, const Options& opt)
{
    detail::Checker chk(c);
    const auto g = aim_big();
    const auto la = continuum_loss_averse(g), star = continuum_loss_averse_star(g);
    chk.expect(la == std::vector<std::size_t>{0, 1}, "aim-big loss-averse");
    chk.expect(star == std::vector<std::size_t>{1}, "aim-big loss-averse*");
    chk.note("aim-big: loss-averse {B, S}, loss-averse* {S}");
    const auto grid = curated::aim_big_grid(20);
    corpus.add(grid);
    RandomGames gen(opt.dominated_seed);
    std::size_t games = 0, dominated = 0, bad = 0;
    for (const auto& r : gen.take(opt.dominated_games)) {
        corpus.add(r);
        const auto d = strictly_dominated_actions(r).actions, s = loss_averse_star_actions(r).actions;
        dominated += d.size();
        for (auto a : d)
            if (std::find(s.begin(), s.end(), a) != s.end()) {
                ++bad;
                chk.expect(false, r.type_label() + " action " + r.actions()[a] + " is dominated yet loss-averse*");
            }
        ++games;
    }
    chk.note(std::to_string(games) + " random games (seed " + std::to_string(opt.dominated_seed) + "), " +
             std::to_string(dominated) + " strictly dominated actions, " + std::to_string(bad) + " loss-averse*");
    c.checks_passed = chk.failures() == 0 && games == opt.dominated_games && dominated > 0;
}

inline std::string theorem_summary(const std::string& name, const vcg::TheoremReport& r)
{
    std::ostringstream o;
    o << name << ": " << r.instances << " attacks (" << r.overbidding << " over, " << r.underbidding << " under, "
      << r.exact << " exact), " << r.nature_states << " nature states, " << r.seconds << " s";
    return o.str();
}

inline void criterion_theorem(Criterion& c, Corpus&, const Options& opt)
{
    detail::Checker chk(c);
    vcg::TheoremReport total;
    vcg::EnumerationParams p1;
    p1.items = 1;
    const auto r1 = vcg::exhaustive_theorem_suite(p1);
    chk.note(theorem_summary("m=1 exhaustive", r1));
    total.merge(r1);
    if (opt.theorem_exhaustive_m2) {
        vcg::EnumerationParams p2;
        p2.items = 2;
        const auto r2 = vcg::exhaustive_theorem_suite(p2);
        chk.note(theorem_summary("m=2 exhaustive", r2));
        total.merge(r2);
    }
    const auto r3 = vcg::random_theorem_suite(opt.theorem_random, opt.theorem_seed);
    chk.note(theorem_summary("m=3 random (seed " + std::to_string(opt.theorem_seed) + ")", r3));
    total.merge(r3);

    auto sub = [&](const char* tag, bool ok, const std::string& text) {
        chk.note(std::string(ok ? "  PASS " : "  FAIL ") + tag + " " + text);
        return ok;
    };
    std::ostringstream a, b, cc, d;
    a << "claim 1: constructed adversary fails on " << total.claim1_failures << " of " << total.overbidding
      << " overbidding attacks; truthful utility negative in " << total.truth_negative
      << " states; no checked state makes the attack negative for " << total.claim1_unrefuted;
    b << "claim 2: construction misses the (0, >0) pair on " << total.claim2_failures << " of " << total.underbidding
      << " underbidding attacks; reversals " << total.claim2_reversals << "; no (0, >0) pair in any checked state for "
      << total.claim2_pair_missing << "; attack minimum not below truth for " << total.claim2_unrefuted
      << "; off-grid constructions " << total.off_grid;
    cc << "claim 3: " << total.claim3_violations << " violations over " << total.claim3_profiles
       << " exact-bidding profiles";
    d << "claim 4: witness fails on " << total.claim4_failures << " of " << total.exact << " exact attacks (case 1 "
      << total.claim4_case1 << ", case 2 " << total.claim4_case2 << "); attack minimum beats truth for "
      << total.claim4_refuted;
    const bool ok_a = sub("(a)", total.claim1_ok(), a.str());
    const bool ok_b = sub("(b)", total.claim2_ok(), b.str());
    const bool ok_c = sub("(c)", total.claim3_ok(), cc.str());
    const bool ok_d = sub("(d)", total.claim4_ok(), d.str());
    for (const auto& f : total.failures)
        chk.note("  " + f);
    c.checks_passed = ok_a && ok_b && ok_c && ok_d;
}

inline void criterion_example_e1(Criterion& c, Corpus&)
{
    detail::Checker chk(c);
    for (const auto& eps : {Rational(1, 10), Rational(1, 100)}) {
        const std::string at = " at eps=" + eps.str();
        const auto x = vcg::build_example_e1(eps);
        const auto o = vcg::run_vcg(x.attack, x.items, vcg::PaymentRule::ClarkePivot);
        chk.expect(o.bid_bundles[0] == vcg::Bundle{0b0011} && o.bid_bundles[1] == vcg::Bundle{0b1100},
                   "attack allocation" + at);
        chk.expect(o.real_welfare == Rational(6) * eps, "real welfare " + o.real_welfare.str() + at);

        std::vector<vcg::SetFunction> flat = x.attack[0].bids, truthful;
        flat.push_back(x.attack[1].bids[0]);
        flat.push_back(x.attack[2].bids[0]);
        for (const auto& p : x.truthful)
            truthful.push_back(p.valuation);
        const auto opt = oracle::naive_winner_determination(truthful, 4, vcg::full_bundle(4)).welfare;
        const auto clarke = oracle::naive_payments(flat, 4, true), literal = oracle::naive_payments(flat, 4, false);

        const auto r = vcg::example_e1_report(eps);
        chk.expect(r.truthful_optimum == opt && opt == Rational(18) + Rational(6) * eps,
                   "truthful optimum " + r.truthful_optimum.str() + at);
        chk.expect(r.clarke_payments == std::vector<Rational>{clarke[0], clarke[1]} &&
                       r.clarke_payments == std::vector<Rational>{Rational(18), Rational(18)},
                   "Clarke payments" + at);
        chk.expect(r.literal_payments == std::vector<Rational>{literal[0], literal[1]} &&
                       r.literal_payments == std::vector<Rational>{Rational(20), Rational(20)},
                   "literal payments" + at);
        chk.expect(r.attacker_utility_clarke == Rational(6) * eps - Rational(36) &&
                       r.attacker_utility_literal == Rational(6) * eps - Rational(40) &&
                       r.truthful_utility == Rational(4) * eps,
                   "utilities" + at);
        chk.expect(r.welfare_discrepancy && r.payment_discrepancy, "discrepancy flags" + at);
        chk.note("eps=" + eps.str() + ": A1 {a,b}, A2 {c,d}; real welfare " + r.attack_real.str() + " (observed " +
                 r.attack_observed.str() + "); truthful optimum " + r.truthful_optimum.str() + " vs stated " +
                 r.stated_optimum.str() + "; Clarke " + detail::rats(r.clarke_payments) + ", literal " +
                 detail::rats(r.literal_payments) + " vs stated " + r.stated_payment.str() + " each");
    }
    c.checks_passed = chk.failures() == 0;
}

inline void criterion_example_e2(Criterion& c, Corpus&)
{
    detail::Checker chk(c);
    const Rational eps(1, 10);
    const auto x = vcg::build_example_e2(eps);
    const vcg::NatureState<Rational> n{*x.nature_bid};
    const auto& v = x.truthful[0].valuation;
    const auto truth = vcg::agent_utility(v, {v}, n, vcg::PaymentRule::ClarkePivot);
    const auto attack = vcg::agent_utility(v, x.attack[0].bids, n, vcg::PaymentRule::ClarkePivot);
    const auto kind = vcg::classify_attack(v, x.attack[0].bids).kind;
    chk.expect(truth == eps, "truthful utility " + truth.str());
    chk.expect(attack == Rational(2) * eps, "attack utility " + attack.str());
    chk.expect(kind == vcg::AttackKind::Underbidding, "classification " + std::string(vcg::attack_kind_name(kind)));
    const auto pt = vcg::agent_utility(v, {v}, n, vcg::PaymentRule::Literal);
    const auto pa = vcg::agent_utility(v, x.attack[0].bids, n, vcg::PaymentRule::Literal);
    chk.note("eps=1/10, Clarke: u(truth) " + truth.str() + ", u(attack) " + attack.str() + ", " +
             std::string(vcg::attack_kind_name(kind)));
    chk.note("literal rule for reference: u(truth) " + pt.str() + ", u(attack) " + pa.str());
    c.checks_passed = chk.failures() == 0;
}

inline void criterion_facility(Criterion& c, Corpus& corpus)
{
    detail::Checker chk(c);
    std::size_t pairs = 0;
    for (std::int64_t n = 2; n <= 5; ++n)
        for (std::int64_t k = 0; k <= 10; ++k) {
            const Rational theta(k, 10);
            const auto g = facility_game({n, theta, Rational(1, 10)});
            corpus.add(g);
            const std::vector<std::string> want{facility_loss_averse_report(theta, n).str()};
            const auto la = loss_averse_actions(g).labels(g);
            std::vector<std::string> naive;
            for (auto a : oracle::naive_loss_averse(g))
                naive.push_back(g.actions()[a]);
            chk.expect(la == want && naive == want, "n=" + std::to_string(n) + " theta=" + theta.str() + " got " +
                                                        detail::join(la) + " want " + detail::join(want));
            ++pairs;
        }
    for (std::int64_t n = 2; n <= 10; ++n) {
        const auto d = facility_welfare_loss_demo(n);
        chk.expect(d.loss == (Rational(1, 2) - Rational(1, 2 * n)) * Rational(n),
                   "welfare loss n=" + std::to_string(n) + " got " + d.loss.str());
    }
    chk.note(std::to_string(pairs) + " (theta, n) pairs on the 1/10 grid, n = 2..5; welfare-loss demo n = 2..10");
    c.checks_passed = chk.failures() == 0 && pairs >= 30;
}

inline void criterion_voting(Criterion& c, Corpus& corpus)
{
    detail::Checker chk(c);
    const std::vector<std::vector<Rational>> fs = {
        {Rational(1), Rational(0)},
        {Rational(1), Rational(1, 2), Rational(0)},
        {Rational(1), Rational(9, 10), Rational(1, 10), Rational(0)}};
    for (const auto& f : fs)
        for (bool approval : {false, true}) {
            const std::size_t n = f.size();
            PsrSpec spec{approval ? approval_ballots(n) : plurality_ballots(n), f, 0};
            const auto g = psr_game(spec);
            corpus.add(g.game);
            chk.expect(loss_averse_actions(g.game).actions == voting_pareto_frontier_loss_averse(spec),
                       "Pareto lemma n=" + std::to_string(n) + (approval ? " approval" : " plurality"));
        }
    chk.note("Pareto-frontier lemma: plurality and approval for n = 2, 3, 4");

    std::size_t pivotal = 0;
    for (const auto& f : {std::vector<Rational>{Rational(1), Rational(1, 2), Rational(0)},
                          std::vector<Rational>{Rational(1), Rational(1, 2), Rational(1, 4), Rational(0)},
                          std::vector<Rational>{Rational(1), Rational(2, 3), Rational(1, 5), Rational(0)}}) {
        const auto g = psr_game({plurality_ballots(f.size()), f, 0});
        corpus.add(g.game);
        const MixedAction p(plurality_mixed_loss_averse(f));
        const Rational target = Rational(1) / plurality_normalizer(f);
        for (std::size_t j = 0; j + 1 < f.size(); ++j) {
            const auto states = plurality_pivotal_states(g, j);
            chk.expect(!states.empty(), "no pivotal state for candidate " + std::to_string(j));
            for (auto s : states) {
                chk.expect(mixed_utility(g.game, p, s) == target, "equalization at " + g.game.states()[s]);
                ++pivotal;
            }
        }
    }
    chk.note("mixed plurality: expected utility 1/N_f at all " + std::to_string(pivotal) + " pivotal states");

    const std::vector<Rational> f{Rational(1), Rational(1, 2), Rational(1, 4), Rational(0)};
    const auto g = psr_game({plurality_ballots(4), f, 0});
    const auto p = plurality_mixed_loss_averse(f);
    const MixedAction star(p);
    std::mt19937_64 rng(7);
    std::size_t falsified = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t j = rng() % 3, k = (j + 1 + rng() % 3) % 4;
        const Rational delta = p[j] * Rational(1 + static_cast<std::int64_t>(rng() % 9), 10);
        auto q = p;
        q[j] -= delta;
        q[k] += delta;
        falsified += chk.expect(mixed_loss_averse_falsify(g.game, MixedAction(q), {star}).falsified,
                                "perturbed mixture " + std::to_string(trial));
    }
    chk.note(std::to_string(falsified) + "/50 perturbed mixtures falsified against the equalizing mixture");

    for (const auto& f2 : {std::vector<Rational>{Rational(1), Rational(0)},
                           std::vector<Rational>{Rational(1), Rational(1, 2), Rational(0)},
                           std::vector<Rational>{Rational(1), Rational(9, 10), Rational(1, 10), Rational(0)},
                           std::vector<Rational>{Rational(1), Rational(1, 3), Rational(1, 4), Rational(0)}}) {
        const auto r = plurality_min_max_regret(f2);
        const auto h = psr_game({plurality_ballots(f2.size()), f2, 0});
        corpus.add(h.game);
        chk.expect(r.ballot == 0 && r.max_regret == f2[1] &&
                       min_max_regret_actions(h.game).actions == std::vector<std::size_t>{0},
                   "plurality min-max regret n=" + std::to_string(f2.size()));
    }
    chk.note("plurality min-max regret is the truthful ballot for c_1 on 4 utility profiles");
    c.checks_passed = chk.failures() == 0 && falsified == 50;
}

inline std::vector<vcg::SetFunction> random_rational_bids(std::mt19937_64& rng, std::size_t m, std::size_t k)
{
    std::vector<vcg::SetFunction> bids;
    for (std::size_t j = 0; j < k; ++j) {
        vcg::SetFunction f(m);
        for (vcg::Bundle b = 1; b <= vcg::full_bundle(m); ++b)
            f.at(b) = Rational(static_cast<std::int64_t>(rng() % 7), 4);
        bids.push_back(f);
    }
    return bids;
}

/// Compares the partition search and both payment rules with the naive
/// oracle. Returns false on any difference.
inline bool vcg_agrees(const std::vector<vcg::SetFunction>& bids, std::size_t m)
{
    const auto ptrs = vcg::pointers(bids);
    const auto a = vcg::winner_determination(ptrs, m);
    const auto naive = oracle::naive_winner_determination(bids, m, vcg::full_bundle(m));
    return a.welfare == naive.welfare && a.owner == naive.owner &&
           vcg::vcg_payments(ptrs, m, a, vcg::PaymentRule::ClarkePivot) == oracle::naive_payments(bids, m, true) &&
           vcg::vcg_payments(ptrs, m, a, vcg::PaymentRule::Literal) == oracle::naive_payments(bids, m, false);
}

inline bool within_oracle_limit(std::size_t bids, std::size_t m)
{
    double x = 1;
    for (std::size_t i = 0; i < m; ++i)
        x *= static_cast<double>(bids);
    return x <= 1e6;
}

inline void criterion_oracle(Criterion& c, Corpus& corpus, const Options& opt)
{
    detail::Checker chk(c);
    std::size_t games = 0;
    for (const auto& g : corpus.games) {
        for (const auto& [concept_id, naive] : detail::oracle_verdicts(g)) {
            const auto& got = compute(g, concept_id).actions;
            chk.expect(std::set<std::size_t>(got.begin(), got.end()) == naive,
                       g.type_label() + " " + std::string(concept_name(concept_id)));
        }
        ++games;
    }
    chk.note(std::to_string(games) + " games from criteria 1-12, 9 concepts each, against the naive oracle");

    std::size_t instances = 0, skipped = 0;
    auto check = [&](const std::vector<vcg::SetFunction>& bids, std::size_t m, const std::string& name) {
        if (!within_oracle_limit(bids.size(), m)) {
            ++skipped;
            return;
        }
        chk.expect(vcg_agrees(bids, m), name);
        ++instances;
    };
    for (const auto& eps : {Rational(1, 10), Rational(1, 100)}) {
        const auto e1 = vcg::build_example_e1(eps);
        std::vector<vcg::SetFunction> attack, truthful;
        for (const auto& p : e1.attack)
            attack.insert(attack.end(), p.bids.begin(), p.bids.end());
        for (const auto& p : e1.truthful)
            truthful.push_back(p.valuation);
        check(attack, 4, "E1 attack eps=" + eps.str());
        check(truthful, 4, "E1 truthful eps=" + eps.str());
        const auto e2 = vcg::build_example_e2(eps);
        auto b2 = e2.attack[0].bids;
        b2.push_back(*e2.nature_bid);
        check(b2, 3, "E2 attack eps=" + eps.str());
        check({e2.truthful[0].valuation, *e2.nature_bid}, 3, "E2 truthful eps=" + eps.str());
    }
    std::mt19937_64 rng(opt.vcg_oracle_seed);
    for (std::size_t t = 0; t < opt.vcg_oracle_random; ++t) {
        const std::size_t m = 1 + rng() % 4, k = 1 + rng() % 5;
        check(random_rational_bids(rng, m, k), m, "random instance " + std::to_string(t));
    }
    for (std::size_t items : {std::size_t{1}, std::size_t{2}}) {
        vcg::EnumerationParams p;
        p.items = items;
        const vcg::InstanceEnumerator en(p);
        const auto& scale = en.scale();
        const auto family = vcg::theorem_family(scale, items, scale.from_rational(p.value_cap));
        std::size_t counter = 0;
        en.for_each_instance([&](const vcg::TickFunction&, const std::vector<vcg::TickFunction>& bids) {
            if (counter++ % opt.vcg_oracle_stride != 0)
                return;
            std::vector<vcg::SetFunction> flat;
            for (const auto& b : bids)
                flat.push_back(scale.to_rational(b));
            for (const auto& n : family[counter % family.size()])
                flat.push_back(scale.to_rational(n));
            check(flat, items, "enumerated m=" + std::to_string(items) + " #" + std::to_string(counter - 1));
        });
    }
    {
        const auto scale = vcg::make_tick_scale(Rational(1), 3);
        const std::int64_t cap = scale.from_rational(Rational(2));
        const auto family = vcg::theorem_family(scale, 3, cap);
        vcg::RandomAttackSource source(opt.theorem_seed, scale, 3, cap);
        for (std::size_t i = 0; i < opt.theorem_random; ++i) {
            const auto a = source.next();
            std::vector<vcg::SetFunction> flat;
            for (const auto& b : a.bids)
                flat.push_back(scale.to_rational(b));
            for (const auto& n : family[(i * 7919) % family.size()])
                flat.push_back(scale.to_rational(n));
            check(flat, 3, "random m=3 attack " + std::to_string(i));
        }
    }
    chk.note(std::to_string(instances) + " auction instances (E1, E2, random, sampled enumerated, m=3 suite) "
             "against naive winner determination and payments; " + std::to_string(skipped) + " above the limit");
    c.checks_passed = chk.failures() == 0 && skipped == 0;
}

struct Entry {
    int id;
    std::string title;
    double limit_seconds;
    std::function<void(Criterion&, Corpus&, const Options&)> run;
};

inline std::vector<Entry> entries()
{
    auto wrap = [](void (*f)(Criterion&, Corpus&)) {
        return [f](Criterion& c, Corpus& k, const Options&) { f(c, k); };
    };
    return {
        {1, "DFPA loss-averse closed form", 1, wrap(criterion_dfpa_closed_form)},
        {2, "FPA has no loss-averse bid", 1, wrap(criterion_fpa_witness)},
        {3, "concept hierarchy", 10, criterion_hierarchy},
        {4, "multi-leximin existence", 5, criterion_multi_leximin},
        {5, "DFPA min-max regret", 1, wrap(criterion_min_max_regret)},
        {6, "mixture collapse to safety level", 1, criterion_collapse},
        {7, "aim-big and dominated actions", 2, criterion_aim_big},
        {8, "VCG Sybil theorem suite", 300, criterion_theorem},
        {9, "example E.1", 1, wrap(criterion_example_e1)},
        {10, "example E.2", 1, wrap(criterion_example_e2)},
        {11, "facility location", 5, wrap(criterion_facility)},
        {12, "voting", 10, wrap(criterion_voting)},
        {13, "oracle equivalence", 120, criterion_oracle},
    };
}

/// Runs the selected criteria in order. Criterion 13 checks every game the
/// earlier criteria produced, so running it alone checks only its own cases.
inline std::vector<Criterion> run(const Options& opt = {},
                                  const std::function<void(const Criterion&)>& on_done = nullptr)
{
    std::vector<Criterion> out;
    Corpus corpus;
    for (const auto& e : entries()) {
        if (!opt.only.empty() && !opt.only.count(e.id))
            continue;
        Criterion c;
        c.id = e.id;
        c.title = e.title;
        c.limit_seconds = e.limit_seconds;
        const auto start = std::chrono::steady_clock::now();
        try {
            e.run(c, corpus, opt);
        } catch (const std::exception& ex) {
            c.checks_passed = false;
            c.details.push_back(std::string("error: ") + ex.what());
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.checks_passed && !c.passed())
            c.details.push_back("runtime over the limit");
        if (on_done)
            on_done(c);
        out.push_back(std::move(c));
    }
    return out;
}

inline std::string format_line(const Criterion& c)
{
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(3);
    o << (c.passed() ? "PASS" : "FAIL") << "  " << (c.id < 10 ? " " : "") << c.id << "  " << c.title
      << "  [tolerance exact, " << c.seconds << " s, limit " << c.limit_seconds << " s]";
    return o.str();
}

} // namespace lossaverse::acceptance
