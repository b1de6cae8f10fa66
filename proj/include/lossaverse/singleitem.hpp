#pragma once

#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "lossaverse/game.hpp"

namespace lossaverse {

/// Largest multiple of epsilon not exceeding value.
inline Rational eps_net(const Rational& value, const Rational& epsilon)
{
    if (epsilon.sign() <= 0)
        throw ValidationError("epsilon must be positive, got " + epsilon.str());
    if (value.sign() < 0)
        throw ValidationError("value must be non-negative, got " + value.str());
    return epsilon * Rational(mpq_class((value / epsilon).floor()));
}

/// Smallest multiple of epsilon not below value.
inline Rational eps_ceil(const Rational& value, const Rational& epsilon)
{
    Rational down = eps_net(value, epsilon);
    return down == value ? down : down + epsilon;
}

/// Grid {0, step, 2 step, ..., top} (top must be a multiple of step).
inline std::vector<Rational> grid_up_to(const Rational& top, const Rational& step)
{
    std::vector<Rational> out;
    for (Rational x; x <= top; x += step)
        out.push_back(x);
    return out;
}

struct DfpaSpec {
    Rational value;
    Rational epsilon;
    Rational nature_bid_cap;

    /// Cap defaults to value + 2 epsilon, rounded up to the grid.
    static DfpaSpec with_default_cap(const Rational& value, const Rational& epsilon)
    {
        return {value, epsilon, eps_ceil(value + Rational(2) * epsilon, epsilon)};
    }

    void validate() const
    {
        if (epsilon.sign() <= 0)
            throw ValidationError("epsilon must be positive, got " + epsilon.str());
        if (value.sign() < 0)
            throw ValidationError("value must be non-negative, got " + value.str());
        if (nature_bid_cap < value + epsilon)
            throw ValidationError("nature bid cap " + nature_bid_cap.str() + " is below value + epsilon");
    }
};

inline constexpr const char* no_competitor_state = "none";

namespace detail {

/// Single-item game on the bid grid. Nature states are "none" (no competing
/// bid, every bid wins) and each competing top bid on the grid up to the cap;
/// ties go to nature.
template <class Utility>
AgentGame single_item_game(const std::string& type, const DfpaSpec& spec, Utility&& utility)
{
    spec.validate();
    const auto bids = grid_up_to(eps_net(spec.value, spec.epsilon), spec.epsilon);
    const auto others = grid_up_to(eps_net(spec.nature_bid_cap, spec.epsilon), spec.epsilon);
    std::vector<std::string> actions, states{no_competitor_state};
    for (const auto& b : bids)
        actions.push_back(b.str());
    for (const auto& s : others)
        states.push_back(s.str());
    return AgentGame::tabulate(type + "(v=" + spec.value.str() + ",eps=" + spec.epsilon.str() + ")", std::move(actions),
                               std::move(states), [&](std::size_t a, std::size_t s) {
                                   const bool wins = s == 0 || bids[a] > others[s - 1];
                                   return utility(bids[a], wins);
                               });
}

} // namespace detail

/// Discrete first-price auction from one bidder's view.
inline AgentGame dfpa_game(const DfpaSpec& spec)
{
    return detail::single_item_game("dfpa", spec, [&](const Rational& b, bool wins) {
        return wins ? spec.value - b : Rational(0);
    });
}

/// All-pay auction: the bid is paid whether or not the bidder wins.
inline AgentGame all_pay_game(const DfpaSpec& spec)
{
    return detail::single_item_game("all-pay", spec, [&](const Rational& b, bool wins) {
        return wins ? spec.value - b : -b;
    });
}

inline Rational dfpa_loss_averse_bid(const Rational& value, const Rational& epsilon)
{
    const Rational net = eps_net(value, epsilon);
    if (net != value || value.is_zero())
        return net;
    return net - epsilon;
}

inline Rational dfpa_min_max_regret_bid(const Rational& value, const Rational& epsilon)
{
    return eps_net(value / Rational(2), epsilon);
}

/// Test grid: v = k/4 for k = 0..12 against epsilon in {1/10, 1/4, 3/10, 1/3}.
/// It covers v = 0, v on the epsilon grid and v strictly between grid points.
inline std::vector<std::pair<Rational, Rational>> dfpa_test_grid()
{
    std::vector<std::pair<Rational, Rational>> out;
    for (std::int64_t k = 0; k <= 12; ++k)
        for (auto e : {Rational(1, 10), Rational(1, 4), Rational(3, 10), Rational(1, 3)})
            out.emplace_back(Rational(k, 4), e);
    return out;
}

inline Rational all_pay_loss_averse_bid(const Rational&) { return Rational(0); }

/// Continuous first-price utility; ties go to nature. A missing competing bid
/// means the bidder wins.
inline Rational fpa_utility(const Rational& value, const Rational& bid, const std::optional<Rational>& competing)
{
    return !competing || bid > *competing ? value - bid : Rational(0);
}

/// Refutes loss-aversion of `bid` in the continuous first-price auction: at
/// `state` the bid gets 0 while `deviation` wins, and every state where the
/// two differ gives the deviation exactly value - deviation.
struct FpaWitness {
    Rational value, bid, deviation, state;
    Rational bid_min;       // 0, realized at `state`
    Rational deviation_min; // value - deviation
};

inline FpaWitness fpa_no_loss_averse_witness(const Rational& value, const Rational& bid)
{
    if (value.sign() <= 0)
        throw ValidationError("no witness for value " + value.str() + ": the only bid is 0");
    if (bid.sign() < 0 || bid > value)
        throw ValidationError("bid " + bid.str() + " outside [0, " + value.str() + "]");
    FpaWitness w{value, bid, {}, {}, Rational(0), {}};
    if (bid < value) {
        w.deviation = (bid + value) / Rational(2);
        w.state = (bid + w.deviation) / Rational(2);
    } else {
        w.deviation = value / Rational(2);
        w.state = Rational(0);
    }
    w.deviation_min = value - w.deviation;
    return w;
}

/// Re-derives the witness from the utility formula: at the witness state the
/// two bids differ and the bid gets bid_min; on every probe state where they
/// differ, the deviation gets exactly deviation_min; and bid_min < deviation_min.
inline bool fpa_witness_holds(const FpaWitness& w, const std::vector<Rational>& probes)
{
    const Rational at_bid = fpa_utility(w.value, w.bid, w.state);
    const Rational at_dev = fpa_utility(w.value, w.deviation, w.state);
    if (at_bid == at_dev || at_bid != w.bid_min || !(w.bid_min < w.deviation_min))
        return false;
    std::vector<std::optional<Rational>> states{std::nullopt, w.state};
    for (const auto& p : probes)
        states.emplace_back(p);
    for (const auto& s : states) {
        const Rational x = fpa_utility(w.value, w.bid, s), y = fpa_utility(w.value, w.deviation, s);
        if (x != y && (y != w.deviation_min || x < w.bid_min))
            return false;
    }
    return true;
}

struct RevenueFloor {
    Rational floor;
    Rational revenue;
    std::size_t winner = 0;
    std::vector<Rational> bids;
};

/// Every bidder plays its loss-averse bid; the highest bid wins (lowest index
/// on ties) and pays it. Revenue must reach max value - epsilon.
inline RevenueFloor dfpa_revenue_floor(const std::vector<Rational>& values, const Rational& epsilon)
{
    if (values.empty())
        throw ValidationError("no bidders");
    RevenueFloor r;
    Rational top = values[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
        r.bids.push_back(dfpa_loss_averse_bid(values[i], epsilon));
        top = max(top, values[i]);
        if (r.bids[i] > r.bids[r.winner])
            r.winner = i;
    }
    r.floor = top - epsilon;
    r.revenue = r.bids[r.winner];
    if (r.revenue < r.floor)
        throw ConsistencyError("revenue " + r.revenue.str() + " below the floor " + r.floor.str());
    return r;
}

} // namespace lossaverse
