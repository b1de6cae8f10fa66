#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lossaverse/vcg/bundle.hpp"

namespace lossaverse::vcg {

inline constexpr std::size_t default_assignment_budget = 10'000'000;
inline constexpr std::size_t unassigned = static_cast<std::size_t>(-1);

enum class PaymentRule { Literal, ClarkePivot };

inline std::string_view payment_rule_name(PaymentRule r)
{
    return r == PaymentRule::ClarkePivot ? "clarke" : "literal";
}

inline PaymentRule payment_rule_from_name(std::string_view s)
{
    if (s == "clarke")
        return PaymentRule::ClarkePivot;
    if (s == "literal")
        return PaymentRule::Literal;
    throw ValidationError("unknown payment rule '" + std::string(s) + "' (expected literal or clarke)");
}

/// owner[g] is the index of the bid that receives item g.
template <class T>
struct BasicAssignment {
    std::vector<std::size_t> owner;
    T welfare{};

    std::vector<Bundle> bundles(std::size_t bid_count) const
    {
        std::vector<Bundle> out(bid_count, 0);
        for (std::size_t g = 0; g < owner.size(); ++g)
            if (owner[g] != unassigned)
                out[owner[g]] |= Bundle{1} << g;
        return out;
    }
};

namespace detail {

/// table[j][S]: best welfare from giving every item of S to bids j..k-1.
/// Entries are empty when S is nonempty and no bids remain.
template <class T>
class PartitionTable {
public:
    PartitionTable(const std::vector<const BasicSetFunction<T>*>& bids, std::size_t m)
        : k_(bids.size()), width_(std::size_t{1} << m), values_((k_ + 1) * width_, T(0)), valid_((k_ + 1) * width_, 0)
    {
        valid_[k_ * width_] = 1;
        for (std::size_t j = k_; j-- > 0;) {
            const auto& b = *bids[j];
            for (Bundle s = 0; s < width_; ++s) {
                bool found = false;
                T best(0);
                for_each_subset_of(s, [&](Bundle t) {
                    const std::size_t rest = (j + 1) * width_ + (s & ~t);
                    if (!valid_[rest])
                        return;
                    T v = b(t) + values_[rest];
                    if (!found || best < v) {
                        best = v;
                        found = true;
                    }
                });
                values_[j * width_ + s] = best;
                valid_[j * width_ + s] = found;
            }
        }
    }

    bool feasible(std::size_t j, Bundle s) const { return valid_[j * width_ + s] != 0; }
    const T& value(std::size_t j, Bundle s) const { return values_[j * width_ + s]; }

private:
    std::size_t k_, width_;
    std::vector<T> values_;
    std::vector<unsigned char> valid_;
};

/// Larger bundles first, then the lexicographically smallest owner vector.
inline bool prefer(const std::vector<std::size_t>& owner, const std::vector<Bundle>& bundles,
                   const std::vector<std::size_t>& best_owner, const std::vector<Bundle>& best_bundles)
{
    auto profile = [](const std::vector<Bundle>& bs) {
        std::vector<std::size_t> p;
        for (auto b : bs)
            p.push_back(bundle_size(b));
        std::sort(p.rbegin(), p.rend());
        return p;
    };
    const auto p = profile(bundles), q = profile(best_bundles);
    if (p != q)
        return p > q;
    return owner < best_owner;
}

} // namespace detail

/// Welfare of the best partition of `items` among the bids (0 when there are
/// no bids).
template <class T>
T best_partition_value(const std::vector<const BasicSetFunction<T>*>& bids, std::size_t m, Bundle items)
{
    if (bids.empty())
        return T(0);
    detail::PartitionTable<T> table(bids, m);
    return table.value(0, items);
}

/// Welfare-maximizing assignment of all m items. Among optimal assignments,
/// prefers the lexicographically largest descending bundle-size profile, then
/// the lexicographically smallest owner vector. With no bids every item stays
/// unassigned and welfare is 0.
template <class T>
BasicAssignment<T> winner_determination(const std::vector<const BasicSetFunction<T>*>& bids, std::size_t m,
                                        std::size_t budget = default_assignment_budget)
{
    check_item_count(m);
    for (const auto* b : bids)
        if (b->items() != m)
            throw ShapeError("bid over " + std::to_string(b->items()) + " items in a " + std::to_string(m) +
                             "-item auction");
    if (bids.empty())
        return {std::vector<std::size_t>(m, unassigned), T(0)};
    const detail::PartitionTable<T> table(bids, m);
    const std::size_t k = bids.size();
    const Bundle all = full_bundle(m);

    std::vector<Bundle> chosen(k, 0), best_bundles;
    std::vector<std::size_t> best_owner;
    std::size_t visited = 0;
    auto owner_of = [&](const std::vector<Bundle>& bs) {
        std::vector<std::size_t> owner(m, unassigned);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t g = 0; g < m; ++g)
                if (bs[j] >> g & 1)
                    owner[g] = j;
        return owner;
    };
    auto search = [&](auto&& self, std::size_t j, Bundle rest) -> void {
        if (++visited > budget)
            throw CapacityError("winner determination exceeded its budget of " + std::to_string(budget) +
                                " search steps");
        if (j == k) {
            auto owner = owner_of(chosen);
            if (best_owner.empty() || detail::prefer(owner, chosen, best_owner, best_bundles)) {
                best_owner = std::move(owner);
                best_bundles = chosen;
            }
            return;
        }
        const T target = table.value(j, rest);
        for_each_subset_of(rest, [&](Bundle t) {
            if (table.feasible(j + 1, rest & ~t) && (*bids[j])(t) + table.value(j + 1, rest & ~t) == target) {
                chosen[j] = t;
                self(self, j + 1, rest & ~t);
            }
        });
        chosen[j] = 0;
    };
    search(search, 0, all);
    return {best_owner, table.value(0, all)};
}

/// Per-bid payments for an assignment that must be optimal for `bids`.
template <class T>
std::vector<T> vcg_payments(const std::vector<const BasicSetFunction<T>*>& bids, std::size_t m,
                            const BasicAssignment<T>& assignment, PaymentRule rule)
{
    const std::size_t k = bids.size();
    const auto bundles = assignment.bundles(k);
    T observed(0);
    for (std::size_t j = 0; j < k; ++j)
        observed += (*bids[j])(bundles[j]);
    const T optimum = best_partition_value(bids, m, full_bundle(m));
    if (observed != optimum || assignment.welfare != optimum)
        throw ConsistencyError("stale allocation: observed welfare " + scalar_str(observed) + " but the optimum is " +
                               scalar_str(optimum));
    std::vector<T> pay(k, T(0));
    if (rule == PaymentRule::Literal) {
        if (k == 0)
            return pay;
        const detail::PartitionTable<T> table(bids, m);
        for (std::size_t j = 0; j < k; ++j)
            pay[j] = optimum - table.value(0, full_bundle(m) & ~bundles[j]);
        return pay;
    }
    for (std::size_t j = 0; j < k; ++j) {
        auto others = bids;
        others.erase(others.begin() + static_cast<std::ptrdiff_t>(j));
        pay[j] = best_partition_value(others, m, full_bundle(m)) - (optimum - (*bids[j])(bundles[j]));
    }
    return pay;
}

/// One real agent: its valuation and the bids it submits (one per Sybil).
template <class T>
struct BasicSybilProfile {
    std::string name;
    BasicSetFunction<T> valuation;
    std::vector<BasicSetFunction<T>> bids;
    std::vector<std::string> bid_names;

    static BasicSybilProfile truthful(std::string name, BasicSetFunction<T> v)
    {
        BasicSybilProfile p{std::move(name), v, {v}, {}};
        return p;
    }

    std::string bid_name(std::size_t j) const
    {
        if (j < bid_names.size())
            return bid_names[j];
        return bids.size() == 1 ? name : name + std::to_string(j + 1);
    }
};

template <class T>
struct BasicVcgOutcome {
    BasicAssignment<T> assignment;
    std::vector<std::pair<std::size_t, std::size_t>> bid_owner; // flat bid -> (agent, sybil)
    std::vector<Bundle> bid_bundles;
    std::vector<T> payments; // per flat bid
    std::vector<Bundle> agent_bundles;
    std::vector<T> agent_payments;
    std::vector<T> utilities;
    T observed_welfare{};
    T real_welfare{};
};

template <class T>
BasicVcgOutcome<T> run_vcg(const std::vector<BasicSybilProfile<T>>& profiles, std::size_t m, PaymentRule rule,
                           std::size_t budget = default_assignment_budget)
{
    check_item_count(m);
    BasicVcgOutcome<T> out;
    std::vector<const BasicSetFunction<T>*> flat;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (profiles[i].bids.empty())
            throw ValidationError("agent '" + profiles[i].name + "' submits no bids");
        if (profiles[i].valuation.items() != m)
            throw ShapeError("valuation of '" + profiles[i].name + "' has the wrong item count");
        for (std::size_t j = 0; j < profiles[i].bids.size(); ++j) {
            flat.push_back(&profiles[i].bids[j]);
            out.bid_owner.emplace_back(i, j);
        }
    }
    out.assignment = winner_determination(flat, m, budget);
    out.bid_bundles = out.assignment.bundles(flat.size());
    out.payments = vcg_payments(flat, m, out.assignment, rule);
    out.agent_bundles.assign(profiles.size(), 0);
    out.agent_payments.assign(profiles.size(), T(0));
    out.observed_welfare = out.assignment.welfare;
    for (std::size_t f = 0; f < flat.size(); ++f) {
        const auto i = out.bid_owner[f].first;
        out.agent_bundles[i] |= out.bid_bundles[f];
        out.agent_payments[i] += out.payments[f];
    }
    out.real_welfare = T(0);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const T value = profiles[i].valuation(out.agent_bundles[i]);
        out.real_welfare += value;
        out.utilities.push_back(value - out.agent_payments[i]);
    }
    return out;
}

using Assignment = BasicAssignment<Rational>;
using SybilProfile = BasicSybilProfile<Rational>;
using VcgOutcome = BasicVcgOutcome<Rational>;

} // namespace lossaverse::vcg
