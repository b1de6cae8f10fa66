#pragma once

#include <string>
#include <vector>

#include "lossaverse/game.hpp"

namespace lossaverse::curated {

inline std::vector<Rational> ints(std::initializer_list<std::int64_t> xs)
{
    std::vector<Rational> out;
    for (auto x : xs)
        out.emplace_back(x);
    return out;
}

/// Both actions are loss-averse, only b is multi-leximin.
inline AgentGame leximin_proof_game()
{
    return AgentGame("leximin-proof-game", {"a", "b"}, {"opp-a", "opp-b"}, ints({5, 0, 0, 10}));
}

/// Both actions are safety level, only b is leximin.
inline AgentGame safety_not_leximin()
{
    return AgentGame("safety-not-leximin", {"a", "b"}, {"opp-a", "opp-b"}, ints({0, 0, 0, 10}));
}

/// a dominates b, yet b is the unique leximin.
inline AgentGame dominant_leximin()
{
    return AgentGame("dominant-leximin", {"a", "b"}, {"A", "B", "C"}, ints({0, 1, 5, 0, 0, 3}));
}

/// b minimizes max regret while a is the unique safety level action.
inline AgentGame minmaxreg_safety()
{
    return AgentGame("minmaxreg-safety", {"a", "b"}, {"A", "B"}, ints({0, 0, -1, 100}));
}

/// Unique safety level mixture is (3/4, 1/4).
inline AgentGame safety_wrong_monotone()
{
    return AgentGame("safety-wrong-monotone", {"a", "b"}, {"A", "B"}, ints({1, 0, 0, 3}));
}

/// Aim-big with the small prizes sampled at k/steps, k = 1..steps, plus the
/// big prize state "1000".
inline AgentGame aim_big_grid(std::int64_t steps)
{
    std::vector<std::string> states;
    for (std::int64_t k = 1; k <= steps; ++k)
        states.push_back(Rational(k, steps).str());
    states.push_back("1000");
    const auto n = static_cast<std::size_t>(steps);
    return AgentGame::tabulate("aim-big-grid", {"B", "S"}, std::move(states), [&](std::size_t a, std::size_t s) {
        if (s == n)
            return a == 0 ? Rational(1000) : Rational(1);
        return a == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(s) + 1, steps);
    });
}

} // namespace lossaverse::curated
