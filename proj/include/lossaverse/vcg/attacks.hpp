#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lossaverse/vcg/auction.hpp"

namespace lossaverse::vcg {

enum class AttackKind { Overbidding, Underbidding, ExactBidding };

inline std::string_view attack_kind_name(AttackKind k)
{
    switch (k) {
    case AttackKind::Overbidding:
        return "overbidding";
    case AttackKind::Underbidding:
        return "underbidding";
    case AttackKind::ExactBidding:
        break;
    }
    return "exact-bidding";
}

/// Grid parameters of an instance: valuations live on multiples of epsilon,
/// bids on multiples of bid_step.
template <class T>
struct BasicGrid {
    T epsilon;
    T bid_step;
};

using Grid = BasicGrid<Rational>;

inline Grid make_grid(const Rational& epsilon, std::size_t m)
{
    if (epsilon.sign() <= 0)
        throw ValidationError("epsilon must be positive, got " + epsilon.str());
    return {epsilon, bid_grid_step(epsilon, m)};
}

template <class T>
std::vector<const BasicSetFunction<T>*> pointers(const std::vector<BasicSetFunction<T>>& bids)
{
    std::vector<const BasicSetFunction<T>*> out;
    for (const auto& b : bids)
        out.push_back(&b);
    return out;
}

/// best[S]: the largest total the Sybil bids can declare for S by splitting it
/// among themselves.
template <class T>
std::vector<T> sybil_best(const std::vector<BasicSetFunction<T>>& bids, std::size_t m)
{
    if (bids.empty())
        throw ValidationError("attack has no bids");
    for (const auto& b : bids)
        if (b.items() != m)
            throw ShapeError("Sybil bid over " + std::to_string(b.items()) + " items against a " + std::to_string(m) +
                             "-item valuation");
    const detail::PartitionTable<T> table(pointers(bids), m);
    std::vector<T> best;
    for (Bundle s = 0; s <= full_bundle(m); ++s)
        best.push_back(table.value(0, s));
    return best;
}

template <class T>
struct BasicClassification {
    AttackKind kind = AttackKind::ExactBidding;
    std::optional<Bundle> witness;
    std::vector<T> best;
};

/// Overbidding if some bundle can be declared above its value, otherwise
/// underbidding if some bundle is always declared below it, otherwise exact.
/// The witness is the first violating bundle in mask order.
template <class T>
BasicClassification<T> classify_attack(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids)
{
    BasicClassification<T> c;
    c.best = sybil_best(bids, v.items());
    for (Bundle s = 0; s <= full_bundle(v.items()); ++s)
        if (v(s) < c.best[s]) {
            c.kind = AttackKind::Overbidding;
            c.witness = s;
            return c;
        }
    for (Bundle s = 0; s <= full_bundle(v.items()); ++s)
        if (c.best[s] < v(s)) {
            c.kind = AttackKind::Underbidding;
            c.witness = s;
            return c;
        }
    return c;
}

template <class T>
using NatureState = std::vector<BasicSetFunction<T>>;

/// The agent's utility against the nature bids.
template <class T>
T agent_utility(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids,
                const NatureState<T>& nature, PaymentRule rule)
{
    std::vector<const BasicSetFunction<T>*> flat = pointers(bids);
    for (const auto& b : nature)
        flat.push_back(&b);
    const std::size_t m = v.items();
    const auto assignment = winner_determination(flat, m);
    const auto pay = vcg_payments(flat, m, assignment, rule);
    const auto bundles = assignment.bundles(flat.size());
    Bundle won = 0;
    T paid(0);
    for (std::size_t j = 0; j < bids.size(); ++j) {
        won |= bundles[j];
        paid += pay[j];
    }
    return v(won) - paid;
}

/// Bundle allocated to each of the agent's bids against the nature bids.
template <class T>
std::vector<Bundle> agent_bundles(const std::vector<BasicSetFunction<T>>& bids, const NatureState<T>& nature,
                                  std::size_t m)
{
    std::vector<const BasicSetFunction<T>*> flat = pointers(bids);
    for (const auto& b : nature)
        flat.push_back(&b);
    auto bundles = winner_determination(flat, m).bundles(flat.size());
    bundles.resize(bids.size());
    return bundles;
}

/// b-bar: max over bids j and bundles S of b_j(S) + v(S), plus one bid step so
/// that nature's blocking items never tie with the agent.
template <class T>
T blocking_value(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids, const T& bid_step)
{
    T top(0);
    for (const auto& b : bids)
        for (Bundle s = 0; s <= full_bundle(v.items()); ++s)
            if (top < b(s) + v(s))
                top = b(s) + v(s);
    return top + bid_step;
}

/// A point strictly between lo and hi, preferring a bid-grid multiple near the
/// midpoint. Falls back to the exact midpoint when no grid point fits.
template <class T>
std::pair<T, bool> snap_between(const T& lo, const T& hi, const T& bid_step)
{
    const T mid = half(lo + hi);
    if (is_multiple(mid, bid_step))
        return {mid, true};
    const T down = floor_multiple(mid, bid_step);
    if (lo < down)
        return {down, true};
    const T up = down + bid_step;
    if (up < hi)
        return {up, true};
    return {mid, false};
}

/// Single additive nature bid: blocking on items outside S, b-tilde spread
/// evenly over S.
template <class T>
BasicSetFunction<T> claim_adversary_bid(std::size_t m, Bundle s, const T& blocking, const T& tilde)
{
    std::vector<T> per_item(m, blocking);
    const auto size = static_cast<std::int64_t>(bundle_size(s));
    for (std::size_t g = 0; g < m; ++g)
        if (s >> g & 1)
            per_item[g] = divide(tilde, size);
    return BasicSetFunction<T>::additive(per_item);
}

/// Single-minded variant: b-tilde for any bundle containing all of S, plus
/// blocking on each item outside S.
template <class T>
BasicSetFunction<T> claim_single_minded_bid(std::size_t m, Bundle s, const T& blocking, const T& tilde)
{
    BasicSetFunction<T> b(m);
    for (Bundle t = 1; t <= full_bundle(m); ++t)
        b.at(t) = (contains(t, s) ? tilde : T(0)) + scale(blocking, static_cast<std::int64_t>(bundle_size(t & ~s)));
    return b;
}

template <class T>
struct BasicAdversary {
    Bundle bundle = 0;           // the bundle S the construction targets
    T blocking{};                // b-bar
    T tilde{};                   // b-tilde
    bool on_grid = true;         // false when b-tilde is the off-grid midpoint
    BasicSetFunction<T> bid;     // b'
    T attack_utility{};
    T truth_utility{};
    bool succeeded = false;      // the construction's utility claims hold
    std::size_t tried = 0;       // bundles tried before success (1 = the witness)
};

namespace detail {

template <class T>
BasicAdversary<T> build_adversary(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids,
                                  const std::vector<T>& best, Bundle s, const BasicGrid<T>& grid, PaymentRule rule,
                                  bool overbidding)
{
    BasicAdversary<T> a;
    a.bundle = s;
    a.blocking = blocking_value(v, bids, grid.bid_step);
    const T lo = overbidding ? v(s) : best[s];
    const T hi = overbidding ? best[s] : v(s);
    std::tie(a.tilde, a.on_grid) = snap_between(lo, hi, grid.bid_step);
    a.bid = claim_adversary_bid(v.items(), s, a.blocking, a.tilde);
    const NatureState<T> nature{a.bid};
    a.attack_utility = agent_utility(v, bids, nature, rule);
    a.truth_utility = agent_utility(v, {v}, nature, rule);
    if (overbidding)
        a.succeeded = a.attack_utility < T(0) && !(a.truth_utility < T(0));
    else
        a.succeeded = a.attack_utility == T(0) && T(0) < a.truth_utility;
    return a;
}

template <class T>
BasicAdversary<T> search_adversary(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids,
                                   const BasicGrid<T>& grid, PaymentRule rule, AttackKind expected)
{
    const auto c = classify_attack(v, bids);
    if (c.kind != expected)
        throw ClassificationError("attack is " + std::string(attack_kind_name(c.kind)) + ", not " +
                                  std::string(attack_kind_name(expected)));
    const bool over = expected == AttackKind::Overbidding;
    auto first = build_adversary(v, bids, c.best, *c.witness, grid, rule, over);
    first.tried = 1;
    if (first.succeeded)
        return first;
    std::size_t tried = 1;
    for (Bundle s = *c.witness + 1; s <= full_bundle(v.items()); ++s) {
        const bool violates = over ? v(s) < c.best[s] : c.best[s] < v(s);
        if (!violates)
            continue;
        auto a = build_adversary(v, bids, c.best, s, grid, rule, over);
        a.tried = ++tried;
        if (a.succeeded)
            return a;
    }
    first.tried = tried;
    return first;
}

} // namespace detail

/// Nature bid that drives an overbidding attack to negative utility while the
/// truthful bid stays individually rational. Starts from the classification
/// witness and moves on to later overbid bundles if the construction fails.
template <class T>
BasicAdversary<T> overbidding_adversary(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids,
                                        const BasicGrid<T>& grid, PaymentRule rule = PaymentRule::ClarkePivot)
{
    return detail::search_adversary(v, bids, grid, rule, AttackKind::Overbidding);
}

/// Nature bid under which an underbidding attack gets 0 and the truthful bid
/// gets v(S) - b-tilde > 0.
template <class T>
BasicAdversary<T> underbidding_adversary(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids,
                                         const BasicGrid<T>& grid, PaymentRule rule = PaymentRule::ClarkePivot)
{
    return detail::search_adversary(v, bids, grid, rule, AttackKind::Underbidding);
}

/// Proof-constructed nature states for every bundle that violates the
/// attack's classification: the additive construction and its single-minded
/// variant. `on_grid[n]` tells whether state n lies on the bid grid.
template <class T>
struct BasicConstructedStates {
    std::vector<NatureState<T>> states;
    std::vector<bool> on_grid;
};

template <class T>
BasicConstructedStates<T> constructed_states(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids,
                                             const BasicGrid<T>& grid)
{
    const auto c = classify_attack(v, bids);
    BasicConstructedStates<T> out;
    if (c.kind == AttackKind::ExactBidding)
        return out;
    const bool over = c.kind == AttackKind::Overbidding;
    const T blocking = blocking_value(v, bids, grid.bid_step);
    for (Bundle s = 1; s <= full_bundle(v.items()); ++s) {
        if (!(over ? v(s) < c.best[s] : c.best[s] < v(s)))
            continue;
        const auto [tilde, on] = snap_between(over ? v(s) : c.best[s], over ? c.best[s] : v(s), grid.bid_step);
        const auto additive = claim_adversary_bid(v.items(), s, blocking, tilde);
        const bool additive_on = on && additive.on_grid(grid.bid_step);
        out.states.push_back({additive});
        out.on_grid.push_back(additive_on);
        if (bundle_size(s) > 1) {
            out.states.push_back({claim_single_minded_bid(v.items(), s, blocking, tilde)});
            out.on_grid.push_back(on);
        }
    }
    return out;
}

/// Every additive nature bid whose item values are multiples of `step` up to
/// `cap`.
template <class T>
std::vector<NatureState<T>> additive_nature_family(std::size_t m, const T& step, const T& cap)
{
    std::vector<T> levels;
    for (T x(0); !(cap < x); x += step)
        levels.push_back(x);
    std::vector<NatureState<T>> out;
    std::vector<std::size_t> idx(m, 0);
    while (true) {
        std::vector<T> per_item;
        for (auto i : idx)
            per_item.push_back(levels[i]);
        out.push_back({BasicSetFunction<T>::additive(per_item)});
        std::size_t g = 0;
        while (g < m && ++idx[g] == levels.size())
            idx[g++] = 0;
        if (g == m)
            return out;
    }
}

template <class T>
struct BasicFamilyComparison {
    std::size_t states = 0;
    std::size_t differing = 0;
    std::size_t reversals = 0;              // attack > 0 while truth = 0
    std::size_t dominance_violations = 0;   // attack > truth
    std::optional<T> attack_min, truth_min; // minima over the difference set
};

/// Compares the attack with the truthful bid over a family of nature states.
template <class T>
BasicFamilyComparison<T> compare_on_family(const BasicSetFunction<T>& v, const std::vector<BasicSetFunction<T>>& bids,
                                           const std::vector<NatureState<T>>& family, PaymentRule rule,
                                           const std::vector<T>* truth_cache = nullptr)
{
    BasicFamilyComparison<T> r;
    for (std::size_t n = 0; n < family.size(); ++n) {
        const T att = agent_utility(v, bids, family[n], rule);
        const T tru = truth_cache ? (*truth_cache)[n] : agent_utility(v, {v}, family[n], rule);
        ++r.states;
        if (T(0) < att && tru == T(0))
            ++r.reversals;
        if (tru < att)
            ++r.dominance_violations;
        if (att == tru)
            continue;
        ++r.differing;
        if (!r.attack_min || att < *r.attack_min)
            r.attack_min = att;
        if (!r.truth_min || tru < *r.truth_min)
            r.truth_min = tru;
    }
    return r;
}

template <class T>
std::vector<T> truth_utilities(const BasicSetFunction<T>& v, const std::vector<NatureState<T>>& family,
                               PaymentRule rule)
{
    std::vector<T> out;
    for (const auto& n : family)
        out.push_back(agent_utility(v, {v}, n, rule));
    return out;
}

/// Claim 3 chain for a profile of exact-bidding attacks.
template <class T>
struct BasicWelfareChain {
    T truthful_real, truthful_observed, attack_observed, attack_real;
    bool optimal = false; // attack_real >= truthful_real
    bool chain_holds = false;
};

template <class T>
BasicWelfareChain<T> verify_exact_bidding_optimal(const std::vector<BasicSybilProfile<T>>& profiles, std::size_t m,
                                                  PaymentRule rule = PaymentRule::ClarkePivot)
{
    std::vector<BasicSybilProfile<T>> truthful;
    for (const auto& p : profiles) {
        const auto c = classify_attack(p.valuation, p.bids);
        if (c.kind != AttackKind::ExactBidding)
            throw ClassificationError("agent '" + p.name + "' is " + std::string(attack_kind_name(c.kind)) +
                                      ", not exact-bidding");
        truthful.push_back(BasicSybilProfile<T>::truthful(p.name, p.valuation));
    }
    const auto t = run_vcg(truthful, m, rule);
    const auto f = run_vcg(profiles, m, rule);
    BasicWelfareChain<T> w{t.real_welfare, t.observed_welfare, f.observed_welfare, f.real_welfare, false, false};
    w.optimal = !(w.attack_real < w.truthful_real);
    w.chain_holds = !(w.truthful_observed < w.truthful_real) && !(w.attack_observed < w.truthful_observed) &&
                    !(w.attack_real < w.attack_observed);
    return w;
}

enum class TruthCase { NoSingleBid, SingleBidCovers };

/// Claim 4 certificate that the truthful bid is loss-averse against an
/// exact-bidding attack.
template <class T>
struct BasicTruthWitness {
    TruthCase which = TruthCase::SingleBidCovers;
    // Case 1: a bundle no single bid covers, its split and nature's bid.
    Bundle bundle = 0;
    std::vector<Bundle> split;
    std::optional<BasicSetFunction<T>> nature_bid;
    T attack_utility{}, truth_utility{}, gap{}; // truth gets at least the gap
    // Case 2: pointwise comparison over the nature family. In case 1, the
    // number of uncovered bundles tried.
    std::size_t states_checked = 0;
    std::size_t dominance_violations = 0;
    std::size_t fragmented_wins = 0; // states where the attack's items reach more than one Sybil
    bool succeeded = false;
};

/// Case 1 nature bid: b'(alpha_j) = v(alpha_j) for each part of the split of S,
/// other subsets of S inherit the largest value of a part they contain, and
/// items outside S are blocked at b-bar each.
template <class T>
BasicSetFunction<T> claim4_nature_bid(const BasicSetFunction<T>& v, const std::vector<Bundle>& split, Bundle s,
                                      const T& blocking)
{
    const std::size_t m = v.items();
    BasicSetFunction<T> b(m);
    for (Bundle t = 1; t <= full_bundle(m); ++t) {
        T inside(0);
        for (auto part : split)
            if (part != 0 && contains(t & s, part) && inside < v(part))
                inside = v(part);
        b.at(t) = inside + scale(blocking, static_cast<std::int64_t>(bundle_size(t & ~s)));
    }
    return b;
}

template <class T>
BasicTruthWitness<T> truth_loss_averse_witnesses(const BasicSetFunction<T>& v,
                                                 const std::vector<BasicSetFunction<T>>& attack,
                                                 const BasicGrid<T>& grid, const std::vector<NatureState<T>>& family,
                                                 PaymentRule rule = PaymentRule::ClarkePivot,
                                                 const std::vector<T>* truth_cache = nullptr)
{
    const std::size_t m = v.items();
    const auto c = classify_attack(v, attack);
    if (c.kind != AttackKind::ExactBidding)
        throw ClassificationError("attack is " + std::string(attack_kind_name(c.kind)) + ", not exact-bidding");
    BasicTruthWitness<T> w;
    std::vector<Bundle> uncovered;
    for (Bundle s = 1; s <= full_bundle(m); ++s) {
        bool all_below = true;
        for (const auto& b : attack)
            all_below &= b(s) < v(s);
        if (all_below)
            uncovered.push_back(s);
    }
    if (!uncovered.empty()) {
        // Tries every uncovered bundle in mask order and keeps the first that
        // certifies, or the first one tried.
        const detail::PartitionTable<T> table(pointers(attack), m);
        const T blocking = blocking_value(v, attack, grid.bid_step);
        std::optional<BasicTruthWitness<T>> first;
        for (Bundle s : uncovered) {
            BasicTruthWitness<T> c;
            c.which = TruthCase::NoSingleBid;
            c.bundle = s;
            // The attack's own split of S: a partition declaring v(S).
            c.split.assign(attack.size(), 0);
            Bundle rest = s;
            for (std::size_t j = 0; j < attack.size(); ++j) {
                Bundle pick = 0;
                bool found = false;
                for_each_subset_of(rest, [&](Bundle t) {
                    if (!found && table.feasible(j + 1, rest & ~t) &&
                        attack[j](t) + table.value(j + 1, rest & ~t) == table.value(j, rest)) {
                        pick = t;
                        found = true;
                    }
                });
                c.split[j] = pick;
                rest &= ~pick;
            }
            c.nature_bid = claim4_nature_bid(v, c.split, s, blocking);
            const NatureState<T> nature{*c.nature_bid};
            c.attack_utility = agent_utility(v, attack, nature, rule);
            c.truth_utility = agent_utility(v, {v}, nature, rule);
            T top(0);
            for (auto part : c.split)
                if (top < v(part))
                    top = v(part);
            c.gap = v(s) - top;
            c.succeeded = c.attack_utility == T(0) && !(c.truth_utility < c.gap) && T(0) < c.gap;
            c.states_checked = uncovered.size();
            if (c.succeeded)
                return c;
            if (!first)
                first = std::move(c);
        }
        return *first;
    }
    w.which = TruthCase::SingleBidCovers;
    for (std::size_t n = 0; n < family.size(); ++n) {
        const T att = agent_utility(v, attack, family[n], rule);
        const T tru = truth_cache ? (*truth_cache)[n] : agent_utility(v, {v}, family[n], rule);
        ++w.states_checked;
        if (tru < att)
            ++w.dominance_violations;
        std::size_t winners = 0;
        for (auto b : agent_bundles(attack, family[n], m))
            winners += b != 0;
        if (winners > 1)
            ++w.fragmented_wins;
    }
    w.succeeded = w.dominance_violations == 0;
    return w;
}

} // namespace lossaverse::vcg
