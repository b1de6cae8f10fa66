#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lossaverse/vcg/attacks.hpp"

namespace lossaverse::vcg {

using TickFunction = BasicSetFunction<std::int64_t>;
using TickProfile = BasicSybilProfile<std::int64_t>;

/// Exact integer representation of an instance's values: every quantity is a
/// multiple of `unit` = bid_step / (2 lcm(1..m)), which keeps grid midpoints
/// and per-item shares of a bundle integral.
struct TickScale {
    Rational unit;
    std::int64_t per_epsilon = 0;
    std::int64_t bid_step = 0;

    Rational to_rational(std::int64_t t) const { return unit * Rational(t); }

    std::int64_t from_rational(const Rational& x) const
    {
        const Rational t = x / unit;
        if (!t.is_integer())
            throw ValidationError("value " + x.str() + " is not a multiple of " + unit.str());
        return t.gmp().get_num().get_si();
    }

    BasicGrid<std::int64_t> grid() const { return {per_epsilon, bid_step}; }

    SetFunction to_rational(const TickFunction& f) const
    {
        return f.map<Rational>([&](std::int64_t t) { return to_rational(t); });
    }
};

inline TickScale make_tick_scale(const Rational& epsilon, std::size_t m)
{
    check_item_count(m);
    if (epsilon.sign() <= 0)
        throw ValidationError("epsilon must be positive, got " + epsilon.str());
    std::int64_t fact = 1, lcm = 1;
    for (std::int64_t k = 2; k <= static_cast<std::int64_t>(m); ++k) {
        fact *= k;
        lcm = std::lcm(lcm, k);
    }
    const std::int64_t step = 2 * lcm;
    return {epsilon / Rational(2 * fact * step), 2 * fact * step, step};
}

struct EnumerationParams {
    std::size_t items = 2;
    std::size_t max_agents = 3;
    Rational value_cap = Rational(2);
    Rational epsilon = Rational(1);
    std::size_t max_sybils = 2;
    std::size_t budget = default_assignment_budget;
};

/// Every set function with f(empty) = 0 and values in {0, step, ..., cap}, in
/// odometer order over bundle masks 1, 2, ...
inline std::vector<TickFunction> lattice_functions(std::size_t m, std::int64_t step, std::int64_t cap,
                                                   std::size_t budget)
{
    const std::size_t bundles = (std::size_t{1} << m) - 1;
    const std::size_t levels = static_cast<std::size_t>(cap / step) + 1;
    std::size_t count = 1;
    for (std::size_t i = 0; i < bundles; ++i)
        if ((count *= levels) > budget)
            throw CapacityError("lattice of " + std::to_string(levels) + "^" + std::to_string(bundles) +
                                " set functions exceeds the budget of " + std::to_string(budget));
    std::vector<TickFunction> out;
    std::vector<std::int64_t> values(bundles + 1, 0);
    while (true) {
        out.emplace_back(m, values);
        std::size_t i = 1;
        while (i <= bundles && (values[i] += step) > cap)
            values[i++] = 0;
        if (i > bundles)
            return out;
    }
}

/// Valuations on the epsilon grid and Sybil attacks on the bid grid, both up
/// to the value cap. Attacks with two bids are unordered pairs.
class InstanceEnumerator {
public:
    explicit InstanceEnumerator(EnumerationParams p) : params_(std::move(p)), scale_(make_tick_scale(params_.epsilon, params_.items))
    {
        if (params_.items > 3 || params_.max_agents > 3 || params_.max_sybils > 2 || params_.max_sybils == 0)
            throw CapacityError("enumeration supports at most 3 items, 3 agents and 2 Sybils");
        if (params_.value_cap.sign() < 0)
            throw ValidationError("value cap must be non-negative");
        cap_ = scale_.from_rational(params_.value_cap);
        valuations_ = lattice_functions(params_.items, scale_.per_epsilon, cap_ / scale_.per_epsilon * scale_.per_epsilon,
                                        params_.budget);
        bids_ = lattice_functions(params_.items, scale_.bid_step, cap_ / scale_.bid_step * scale_.bid_step,
                                  params_.budget);
        const double b = static_cast<double>(bids_.size());
        const double per = params_.max_sybils == 1 ? b : b + b * (b + 1) / 2;
        if (per * static_cast<double>(valuations_.size()) > static_cast<double>(params_.budget))
            throw CapacityError("enumeration of " + std::to_string(bids_.size()) + " bids and " +
                                std::to_string(valuations_.size()) + " valuations exceeds the budget of " + std::to_string(params_.budget));
    }

    const EnumerationParams& params() const { return params_; }
    const TickScale& scale() const { return scale_; }
    const std::vector<TickFunction>& valuations() const { return valuations_; }
    const std::vector<TickFunction>& bid_lattice() const { return bids_; }

    std::size_t attacks_per_valuation() const
    {
        const std::size_t b = bids_.size();
        return params_.max_sybils == 1 ? b : b + b * (b + 1) / 2;
    }

    /// Calls f(attack) for every attack in order: single bids, then pairs
    /// (i, j) with i <= j.
    void for_each_attack(const std::function<void(const std::vector<TickFunction>&)>& f) const
    {
        std::vector<TickFunction> one(1), two(2);
        for (const auto& b : bids_) {
            one[0] = b;
            f(one);
        }
        if (params_.max_sybils < 2)
            return;
        for (std::size_t i = 0; i < bids_.size(); ++i)
            for (std::size_t j = i; j < bids_.size(); ++j) {
                two[0] = bids_[i];
                two[1] = bids_[j];
                f(two);
            }
    }

    /// Calls f(valuation, attack) over every valuation and attack, optionally
    /// keeping only one classification.
    void for_each_instance(const std::function<void(const TickFunction&, const std::vector<TickFunction>&)>& f,
                           std::optional<AttackKind> only = std::nullopt) const
    {
        for (const auto& v : valuations_)
            for_each_attack([&](const std::vector<TickFunction>& bids) {
                if (!only || classify_attack(v, bids).kind == *only)
                    f(v, bids);
            });
    }

private:
    EnumerationParams params_;
    TickScale scale_;
    std::int64_t cap_ = 0;
    std::vector<TickFunction> valuations_, bids_;
};

/// Counts and failures from the Theorem 1 property suite.
struct TheoremReport {
    std::size_t instances = 0;
    std::size_t overbidding = 0, underbidding = 0, exact = 0;
    // Claim 1
    std::size_t claim1_failures = 0;
    std::size_t claim1_searched = 0; // succeeded only on a later bundle than the witness
    std::size_t truth_negative = 0;  // truthful utility < 0 in any checked state
    std::size_t claim1_unrefuted = 0; // no checked state gives the attack negative utility
    // Claim 2
    std::size_t claim2_failures = 0; // no (0, >0) pair from the construction
    std::size_t claim2_searched = 0;
    std::size_t claim2_reversals = 0; // (attack > 0, truth = 0) in the family
    std::size_t claim2_pair_missing = 0; // no checked state gives (0, > 0)
    std::size_t claim2_unrefuted = 0; // attack minimum on D not below the truthful one
    std::size_t claim2_below_bound = 0; // on-grid truthful minimum on D below one bid step
    std::size_t off_grid = 0; // constructions that needed the off-grid midpoint
    // Claim 3
    std::size_t claim3_profiles = 0;
    std::size_t claim3_violations = 0;
    // Claim 4
    std::size_t claim4_case1 = 0, claim4_case2 = 0;
    std::size_t claim4_failures = 0;
    std::size_t claim4_refuted = 0; // the attack's minimum on D beats the truthful one
    std::size_t nature_states = 0;
    double seconds = 0;
    std::vector<std::string> failures; // first few failing instances, described

    bool claim1_ok() const { return claim1_failures == 0 && truth_negative == 0; }
    bool claim2_ok() const { return claim2_failures == 0 && claim2_reversals == 0; }
    bool claim3_ok() const { return claim3_violations == 0; }
    bool claim4_ok() const { return claim4_failures == 0; }

    void merge(const TheoremReport& o)
    {
        instances += o.instances;
        overbidding += o.overbidding;
        underbidding += o.underbidding;
        exact += o.exact;
        claim1_failures += o.claim1_failures;
        claim1_searched += o.claim1_searched;
        truth_negative += o.truth_negative;
        claim1_unrefuted += o.claim1_unrefuted;
        claim2_failures += o.claim2_failures;
        claim2_searched += o.claim2_searched;
        claim2_reversals += o.claim2_reversals;
        claim2_pair_missing += o.claim2_pair_missing;
        claim2_unrefuted += o.claim2_unrefuted;
        claim2_below_bound += o.claim2_below_bound;
        off_grid += o.off_grid;
        claim3_profiles += o.claim3_profiles;
        claim3_violations += o.claim3_violations;
        claim4_case1 += o.claim4_case1;
        claim4_case2 += o.claim4_case2;
        claim4_failures += o.claim4_failures;
        claim4_refuted += o.claim4_refuted;
        nature_states = std::max(nature_states, o.nature_states);
        seconds += o.seconds;
        for (const auto& f : o.failures)
            if (failures.size() < 10)
                failures.push_back(f);
    }
};

inline std::string describe(const TickScale& s, const TickFunction& f)
{
    std::string out = "[";
    for (Bundle b = 1; b <= full_bundle(f.items()); ++b)
        out += (b > 1 ? "," : "") + s.to_rational(f(b)).str();
    return out + "]";
}

inline std::string describe(const TickScale& s, const TickFunction& v, const std::vector<TickFunction>& bids)
{
    std::string out = "v=" + describe(s, v) + " bids=";
    for (const auto& b : bids)
        out += describe(s, b);
    return out;
}

/// Runs Claims 1, 2 and 4 on one (valuation, attack) pair and folds the
/// outcome into the report. `family` and `truth` are the nature-state family
/// and the truthful utilities on it.
inline void check_attack(const TickScale& scale, const TickFunction& v, const std::vector<TickFunction>& bids,
                         const std::vector<NatureState<std::int64_t>>& family, const std::vector<std::int64_t>& truth,
                         std::vector<std::vector<TickFunction>>* exact_out, TheoremReport& r)
{
    const auto grid = scale.grid();
    const auto rule = PaymentRule::ClarkePivot;
    auto fail = [&](const std::string& what) {
        if (r.failures.size() < 10)
            r.failures.push_back(what + ": " + describe(scale, v, bids));
    };
    ++r.instances;
    const auto c = classify_attack(v, bids);
    switch (c.kind) {
    case AttackKind::Overbidding: {
        ++r.overbidding;
        const auto a = overbidding_adversary(v, bids, grid, rule);
        r.off_grid += !a.on_grid;
        if (a.tried > 1 && a.succeeded)
            ++r.claim1_searched;
        if (a.truth_utility < 0)
            ++r.truth_negative;
        if (a.succeeded)
            break;
        ++r.claim1_failures;
        fail("claim 1");
        bool refuted = false;
        const auto extra = constructed_states(v, bids, grid);
        for (const auto& n : extra.states)
            if (!refuted && agent_utility(v, bids, n, rule) < 0 && !(agent_utility(v, {v}, n, rule) < 0))
                refuted = true;
        for (std::size_t n = 0; n < family.size() && !refuted; ++n)
            refuted = agent_utility(v, bids, family[n], rule) < 0 && !(truth[n] < 0);
        if (!refuted) {
            ++r.claim1_unrefuted;
            fail("claim 1 unrefuted");
        }
        break;
    }
    case AttackKind::Underbidding: {
        ++r.underbidding;
        const auto a = underbidding_adversary(v, bids, grid, rule);
        r.off_grid += !a.on_grid;
        if (a.tried > 1 && a.succeeded)
            ++r.claim2_searched;
        if (!a.succeeded) {
            ++r.claim2_failures;
            fail("claim 2");
        }
        // Family states first, then every construction.
        const auto extra = constructed_states(v, bids, grid);
        bool pair = a.succeeded, reversed = false;
        std::optional<std::int64_t> attack_min, truth_min, truth_min_on_grid;
        auto visit = [&](std::int64_t att, std::int64_t tru, bool on_grid) {
            pair |= att == 0 && 0 < tru;
            reversed |= 0 < att && tru == 0;
            if (att == tru)
                return;
            if (!attack_min || att < *attack_min)
                attack_min = att;
            if (!truth_min || tru < *truth_min)
                truth_min = tru;
            if (on_grid && (!truth_min_on_grid || tru < *truth_min_on_grid))
                truth_min_on_grid = tru;
        };
        for (std::size_t n = 0; n < family.size(); ++n)
            visit(agent_utility(v, bids, family[n], rule), truth[n], true);
        for (std::size_t n = 0; n < extra.states.size(); ++n)
            visit(agent_utility(v, bids, extra.states[n], rule), agent_utility(v, {v}, extra.states[n], rule),
                  extra.on_grid[n]);
        if (reversed) {
            ++r.claim2_reversals;
            fail("claim 2 reversal");
        }
        if (!pair)
            ++r.claim2_pair_missing;
        if (!attack_min || !(*attack_min < *truth_min)) {
            ++r.claim2_unrefuted;
            fail("claim 2 unrefuted");
        }
        if (truth_min_on_grid && *truth_min_on_grid < grid.bid_step)
            ++r.claim2_below_bound;
        break;
    }
    case AttackKind::ExactBidding: {
        ++r.exact;
        const auto w = truth_loss_averse_witnesses(v, bids, grid, family, rule, &truth);
        (w.which == TruthCase::NoSingleBid ? r.claim4_case1 : r.claim4_case2)++;
        if (!w.succeeded) {
            ++r.claim4_failures;
            fail("claim 4");
            auto cmp = compare_on_family(v, bids, family, rule, &truth);
            if (w.nature_bid) {
                const NatureState<std::int64_t> n{*w.nature_bid};
                const auto extra = compare_on_family(v, bids, std::vector<NatureState<std::int64_t>>{n}, rule);
                if (extra.differing) {
                    cmp.attack_min = cmp.attack_min ? std::min(*cmp.attack_min, *extra.attack_min) : *extra.attack_min;
                    cmp.truth_min = cmp.truth_min ? std::min(*cmp.truth_min, *extra.truth_min) : *extra.truth_min;
                }
            }
            if (cmp.attack_min && *cmp.truth_min < *cmp.attack_min) {
                ++r.claim4_refuted;
                fail("claim 4 refuted");
            }
        }
        if (exact_out)
            exact_out->push_back(bids);
        break;
    }
    }
}

/// Claim 3 over profiles of exact-bidding attacks. `pool[k]` lists the exact
/// attacks of valuation k. Profiles with 1..max_agents agents are visited in a
/// deterministic stride order, at most `budget` per agent count.
inline void check_claim3(const TickScale&, std::size_t m, const std::vector<TickFunction>& valuations,
                         const std::vector<std::vector<std::vector<TickFunction>>>& pool, std::size_t max_agents,
                         std::size_t budget, TheoremReport& r)
{
    std::vector<std::pair<std::size_t, std::size_t>> entries; // (valuation, attack)
    for (std::size_t k = 0; k < pool.size(); ++k)
        for (std::size_t a = 0; a < pool[k].size(); ++a)
            entries.emplace_back(k, a);
    if (entries.empty())
        return;
    const std::size_t e = entries.size();
    for (std::size_t agents = 1; agents <= max_agents; ++agents) {
        double total = 1;
        for (std::size_t i = 0; i < agents; ++i)
            total *= static_cast<double>(e);
        const std::size_t count = total > static_cast<double>(budget) ? budget : static_cast<std::size_t>(total);
        // Stride by a large odd step so sampled profiles spread over the space.
        const std::uint64_t space = static_cast<std::uint64_t>(std::min(total, 1.8e19));
        const std::uint64_t stride = count == static_cast<std::size_t>(total) ? 1 : space / count | 1;
        for (std::size_t n = 0; n < count; ++n) {
            std::uint64_t code = (static_cast<std::uint64_t>(n) * stride) % (space ? space : 1);
            std::vector<TickProfile> profiles;
            for (std::size_t i = 0; i < agents; ++i) {
                const auto& [k, a] = entries[code % e];
                code /= e;
                TickProfile p{"agent" + std::to_string(i + 1), valuations[k], pool[k][a], {}};
                profiles.push_back(std::move(p));
            }
            const auto w = verify_exact_bidding_optimal(profiles, m);
            ++r.claim3_profiles;
            if (!w.optimal || !w.chain_holds) {
                ++r.claim3_violations;
                if (r.failures.size() < 10)
                    r.failures.push_back("claim 3 with " + std::to_string(agents) + " agents");
            }
        }
    }
}

/// Nature family used for the pointwise checks: additive bids with item
/// values on half the epsilon grid up to cap + epsilon.
inline std::vector<NatureState<std::int64_t>> theorem_family(const TickScale& scale, std::size_t m,
                                                             std::int64_t cap)
{
    return additive_nature_family<std::int64_t>(m, scale.per_epsilon / 2, cap + scale.per_epsilon);
}

/// Exhaustive part of the Theorem 1 suite.
inline TheoremReport exhaustive_theorem_suite(const EnumerationParams& params, std::size_t claim3_budget = 20000)
{
    const auto start = std::chrono::steady_clock::now();
    InstanceEnumerator en(params);
    const auto& scale = en.scale();
    const std::int64_t cap = scale.from_rational(params.value_cap);
    const auto family = theorem_family(scale, params.items, cap);
    TheoremReport r;
    r.nature_states = family.size();
    std::vector<std::vector<std::vector<TickFunction>>> pool(en.valuations().size());
    for (std::size_t k = 0; k < en.valuations().size(); ++k) {
        const auto& v = en.valuations()[k];
        const auto truth = truth_utilities(v, family, PaymentRule::ClarkePivot);
        for (auto t : truth)
            r.truth_negative += t < 0;
        en.for_each_attack([&](const std::vector<TickFunction>& bids) {
            check_attack(scale, v, bids, family, truth, &pool[k], r);
        });
    }
    check_claim3(scale, params.items, en.valuations(), pool, params.max_agents, claim3_budget, r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// A random valuation and attack on three items. Attack shapes rotate through
/// uniform bids, bids capped by the valuation, copies of the valuation and
/// item splits of an additive valuation, so every classification occurs.
struct RandomAttack {
    TickFunction valuation;
    std::vector<TickFunction> bids;
};

class RandomAttackSource {
public:
    RandomAttackSource(std::uint64_t seed, const TickScale& scale, std::size_t m, std::int64_t cap)
        : rng_(seed), scale_(scale), m_(m), cap_(cap)
    {
    }

    RandomAttack next()
    {
        const std::size_t shape = count_++ % 4;
        RandomAttack a;
        if (shape == 3) {
            std::vector<std::int64_t> items(m_);
            for (auto& x : items)
                x = eps_level(cap_ / static_cast<std::int64_t>(m_));
            a.valuation = TickFunction::additive(items);
            std::vector<std::int64_t> left(m_, 0), right(m_, 0);
            for (std::size_t g = 0; g < m_; ++g)
                (draw(2) ? left : right)[g] = items[g];
            a.bids = {TickFunction::additive(left), TickFunction::additive(right)};
            return a;
        }
        a.valuation = TickFunction(m_);
        for (Bundle b = 1; b <= full_bundle(m_); ++b)
            a.valuation.at(b) = eps_level(cap_);
        const std::size_t sybils = 1 + draw(2);
        for (std::size_t j = 0; j < sybils; ++j) {
            TickFunction bid(m_);
            for (Bundle b = 1; b <= full_bundle(m_); ++b) {
                if (shape == 0)
                    bid.at(b) = bid_level(cap_);
                else if (shape == 1)
                    bid.at(b) = bid_level(a.valuation(b));
                else
                    bid.at(b) = j == 0 || draw(2) ? a.valuation(b) : bid_level(a.valuation(b));
            }
            a.bids.push_back(bid);
        }
        return a;
    }

private:
    std::size_t draw(std::size_t bound) { return static_cast<std::size_t>(rng_() % bound); }
    std::int64_t eps_level(std::int64_t top)
    {
        return static_cast<std::int64_t>(draw(static_cast<std::size_t>(top / scale_.per_epsilon) + 1)) *
               scale_.per_epsilon;
    }
    std::int64_t bid_level(std::int64_t top)
    {
        return static_cast<std::int64_t>(draw(static_cast<std::size_t>(top / scale_.bid_step) + 1)) *
               scale_.bid_step;
    }

    std::mt19937_64 rng_;
    TickScale scale_;
    std::size_t m_;
    std::int64_t cap_;
    std::size_t count_ = 0;
};

/// Random part of the Theorem 1 suite: `count` seeded instances on m items.
inline TheoremReport random_theorem_suite(std::size_t count, std::uint64_t seed, std::size_t m = 3,
                                          const Rational& epsilon = Rational(1), const Rational& value_cap = Rational(2),
                                          std::size_t claim3_budget = 2000)
{
    const auto start = std::chrono::steady_clock::now();
    const auto scale = make_tick_scale(epsilon, m);
    const std::int64_t cap = scale.from_rational(value_cap);
    const auto family = theorem_family(scale, m, cap);
    RandomAttackSource source(seed, scale, m, cap);
    TheoremReport r;
    r.nature_states = family.size();
    std::vector<TickFunction> valuations;
    std::vector<std::vector<std::vector<TickFunction>>> pool;
    for (std::size_t i = 0; i < count; ++i) {
        const auto a = source.next();
        const auto truth = truth_utilities(a.valuation, family, PaymentRule::ClarkePivot);
        for (auto t : truth)
            r.truth_negative += t < 0;
        std::vector<std::vector<TickFunction>> exact;
        check_attack(scale, a.valuation, a.bids, family, truth, &exact, r);
        if (!exact.empty()) {
            valuations.push_back(a.valuation);
            pool.push_back(std::move(exact));
        }
    }
    check_claim3(scale, m, valuations, pool, 3, claim3_budget, r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace lossaverse::vcg
