#pragma once

// Deliberately naive reference implementations. They read the utility table
// through AgentGame::at only and share no algorithmic code with the engine.

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

#include "lossaverse/game.hpp"
#include "lossaverse/vcg/bundle.hpp"

namespace lossaverse::oracle {

class StepBudget {
public:
    explicit StepBudget(std::size_t limit = 10'000'000) : left_(limit) {}
    void tick(std::size_t n = 1)
    {
        if (n > left_)
            throw CapacityError("oracle step budget exhausted");
        left_ -= n;
    }

private:
    std::size_t left_;
};

inline std::set<std::size_t> naive_loss_averse(const AgentGame& g)
{
    StepBudget budget;
    std::set<std::size_t> out;
    for (std::size_t a = 0; a < g.action_count(); ++a) {
        bool ok = true;
        for (std::size_t b = 0; b < g.action_count(); ++b) {
            if (b == a)
                continue;
            bool any = false;
            Rational min_a, min_b;
            for (std::size_t s = 0; s < g.state_count(); ++s) {
                budget.tick();
                if (g.at(a, s) == g.at(b, s))
                    continue;
                if (!any || g.at(a, s) < min_a)
                    min_a = g.at(a, s);
                if (!any || g.at(b, s) < min_b)
                    min_b = g.at(b, s);
                any = true;
            }
            if (any && min_a < min_b)
                ok = false;
        }
        if (ok)
            out.insert(a);
    }
    return out;
}

inline std::set<std::size_t> naive_loss_averse_star(const AgentGame& g)
{
    std::set<std::size_t> out;
    for (std::size_t a = 0; a < g.action_count(); ++a) {
        bool ok = true;
        for (std::size_t b = 0; b < g.action_count(); ++b) {
            if (b == a)
                continue;
            // a is worse on some states, b is worse on others
            bool has_a = false, has_b = false;
            Rational min_a, min_b;
            for (std::size_t s = 0; s < g.state_count(); ++s) {
                if (g.at(a, s) < g.at(b, s) && (!has_a || g.at(a, s) < min_a)) {
                    min_a = g.at(a, s);
                    has_a = true;
                }
                if (g.at(b, s) < g.at(a, s) && (!has_b || g.at(b, s) < min_b)) {
                    min_b = g.at(b, s);
                    has_b = true;
                }
            }
            if (has_a && (!has_b || min_a < min_b))
                ok = false;
        }
        if (ok)
            out.insert(a);
    }
    return out;
}

inline std::set<std::size_t> naive_safety_level(const AgentGame& g)
{
    std::vector<Rational> worst;
    for (std::size_t a = 0; a < g.action_count(); ++a) {
        Rational w = g.at(a, 0);
        for (std::size_t s = 1; s < g.state_count(); ++s)
            if (g.at(a, s) < w)
                w = g.at(a, s);
        worst.push_back(w);
    }
    std::set<std::size_t> out;
    for (std::size_t a = 0; a < worst.size(); ++a) {
        bool top = true;
        for (const auto& w : worst)
            if (worst[a] < w)
                top = false;
        if (top)
            out.insert(a);
    }
    return out;
}

inline std::set<std::size_t> naive_weakly_dominant(const AgentGame& g)
{
    std::set<std::size_t> out;
    for (std::size_t a = 0; a < g.action_count(); ++a) {
        bool ok = true;
        for (std::size_t b = 0; b < g.action_count(); ++b)
            for (std::size_t s = 0; s < g.state_count(); ++s)
                if (g.at(b, s) > g.at(a, s))
                    ok = false;
        if (ok)
            out.insert(a);
    }
    return out;
}

inline std::set<std::size_t> naive_strictly_dominated(const AgentGame& g)
{
    std::set<std::size_t> out;
    for (std::size_t a = 0; a < g.action_count(); ++a)
        for (std::size_t b = 0; b < g.action_count(); ++b) {
            bool all = b != a;
            for (std::size_t s = 0; s < g.state_count(); ++s)
                if (!(g.at(b, s) > g.at(a, s)))
                    all = false;
            if (all)
                out.insert(a);
        }
    return out;
}

inline std::set<std::size_t> naive_individually_rational(const AgentGame& g)
{
    std::set<std::size_t> out;
    for (std::size_t a = 0; a < g.action_count(); ++a) {
        bool ok = true;
        for (std::size_t s = 0; s < g.state_count(); ++s)
            if (g.at(a, s) < Rational(0))
                ok = false;
        if (ok)
            out.insert(a);
    }
    return out;
}

namespace detail {

/// Literal recursive LD test: compare minima, strip the minimum (all copies
/// for sets, one copy for multisets) and recurse. Exhausting x first means x
/// does not dominate unless y is exhausted too.
inline bool ld(std::multiset<Rational> x, std::multiset<Rational> y, bool multiset)
{
    if (x.empty())
        return y.empty();
    if (y.empty())
        return true;
    const Rational mx = *x.begin(), my = *y.begin();
    if (mx > my)
        return true;
    if (mx < my)
        return false;
    if (multiset) {
        x.erase(x.begin());
        y.erase(y.begin());
    } else {
        x.erase(mx);
        y.erase(my);
    }
    return ld(std::move(x), std::move(y), multiset);
}

} // namespace detail

/// Actions that lexicographically weakly dominate every other action.
inline std::set<std::size_t> naive_leximin(const AgentGame& g, bool multiset)
{
    std::vector<std::multiset<Rational>> outcomes(g.action_count());
    for (std::size_t a = 0; a < g.action_count(); ++a)
        for (std::size_t s = 0; s < g.state_count(); ++s)
            if (multiset || !outcomes[a].count(g.at(a, s)))
                outcomes[a].insert(g.at(a, s));
    std::set<std::size_t> out;
    for (std::size_t a = 0; a < g.action_count(); ++a) {
        bool all = true;
        for (std::size_t b = 0; b < g.action_count(); ++b)
            if (!detail::ld(outcomes[a], outcomes[b], multiset))
                all = false;
        if (all)
            out.insert(a);
    }
    return out;
}

inline std::set<std::size_t> naive_min_max_regret(const AgentGame& g)
{
    std::vector<Rational> worst_regret(g.action_count());
    for (std::size_t a = 0; a < g.action_count(); ++a)
        for (std::size_t s = 0; s < g.state_count(); ++s)
            for (std::size_t b = 0; b < g.action_count(); ++b) {
                Rational r = g.at(b, s) - g.at(a, s);
                if (r > worst_regret[a])
                    worst_regret[a] = r;
            }
    std::set<std::size_t> out;
    for (std::size_t a = 0; a < g.action_count(); ++a) {
        bool best = true;
        for (const auto& r : worst_regret)
            if (r < worst_regret[a])
                best = false;
        if (best)
            out.insert(a);
    }
    return out;
}

/// Plain enumeration of every item-to-bid map over the items of `items`.
struct NaiveWinnerDetermination {
    Rational welfare;
    std::vector<std::size_t> owner; // tie-broken optimum; items outside `items` map to bids.size()
    std::size_t optimal_count = 0;
};

inline NaiveWinnerDetermination naive_winner_determination(const std::vector<vcg::SetFunction>& bids, std::size_t m,
                                                            vcg::Bundle items, std::size_t budget = 10'000'000)
{
    const std::size_t k = bids.size();
    std::vector<std::size_t> free_items;
    for (std::size_t g = 0; g < m; ++g)
        if (items >> g & 1)
            free_items.push_back(g);
    NaiveWinnerDetermination r{Rational(0), std::vector<std::size_t>(m, k), 0};
    if (k == 0) {
        r.optimal_count = 1;
        return r;
    }
    StepBudget steps(budget);
    std::vector<std::size_t> digits(free_items.size(), 0);
    std::vector<std::size_t> best_sizes;
    bool first = true;
    while (true) {
        steps.tick();
        std::vector<vcg::Bundle> got(k, 0);
        std::vector<std::size_t> owner(m, k);
        for (std::size_t i = 0; i < free_items.size(); ++i) {
            got[digits[i]] |= vcg::Bundle{1} << free_items[i];
            owner[free_items[i]] = digits[i];
        }
        Rational w(0);
        for (std::size_t j = 0; j < k; ++j)
            w += bids[j](got[j]);
        std::vector<std::size_t> sizes;
        for (auto b : got)
            sizes.push_back(vcg::bundle_size(b));
        std::sort(sizes.begin(), sizes.end(), std::greater<>());
        if (first || r.welfare < w) {
            r.welfare = w;
            r.owner = owner;
            best_sizes = sizes;
            r.optimal_count = 1;
            first = false;
        } else if (w == r.welfare) {
            ++r.optimal_count;
            if (best_sizes < sizes || (sizes == best_sizes && owner < r.owner)) {
                r.owner = owner;
                best_sizes = sizes;
            }
        }
        std::size_t i = free_items.size();
        while (i > 0 && ++digits[i - 1] == k)
            digits[--i] = 0;
        if (i == 0)
            return r;
    }
}

/// Per-bid payments from naive optima. Clarke: W without j minus the others'
/// share of W. Literal: W minus the best value of the items j did not win.
inline std::vector<Rational> naive_payments(const std::vector<vcg::SetFunction>& bids, std::size_t m, bool clarke)
{
    const auto all = vcg::full_bundle(m);
    const auto top = naive_winner_determination(bids, m, all);
    std::vector<Rational> out;
    for (std::size_t j = 0; j < bids.size(); ++j) {
        vcg::Bundle mine = 0;
        for (std::size_t g = 0; g < m; ++g)
            if (top.owner[g] == j)
                mine |= vcg::Bundle{1} << g;
        if (clarke) {
            auto others = bids;
            others.erase(others.begin() + static_cast<std::ptrdiff_t>(j));
            out.push_back(naive_winner_determination(others, m, all).welfare - (top.welfare - bids[j](mine)));
        } else {
            out.push_back(top.welfare - naive_winner_determination(bids, m, all & ~mine).welfare);
        }
    }
    return out;
}

} // namespace lossaverse::oracle
