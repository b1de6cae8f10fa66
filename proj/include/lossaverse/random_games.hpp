#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lossaverse/game.hpp"

namespace lossaverse {

struct RandomGameShape {
    std::size_t max_actions = 6;
    std::size_t max_states = 6;
    std::int64_t low = -5;
    std::int64_t high = 5;
};

/// Seeded game generator. Uses the raw mt19937_64 stream reduced modulo the
/// range, so a seed yields the same game on every platform.
class RandomGames {
public:
    explicit RandomGames(std::uint64_t seed, RandomGameShape shape = {}) : rng_(seed), shape_(shape) {}

    AgentGame next()
    {
        const std::size_t n = 1 + draw(shape_.max_actions);
        const std::size_t m = 1 + draw(shape_.max_states);
        std::vector<std::string> actions, states;
        for (std::size_t i = 0; i < n; ++i)
            actions.push_back("a" + std::to_string(i));
        for (std::size_t i = 0; i < m; ++i)
            states.push_back("s" + std::to_string(i));
        const auto span = static_cast<std::uint64_t>(shape_.high - shape_.low + 1);
        std::vector<Rational> table;
        for (std::size_t i = 0; i < n * m; ++i)
            table.emplace_back(shape_.low + static_cast<std::int64_t>(draw(span)));
        return AgentGame("random-" + std::to_string(count_++), std::move(actions), std::move(states),
                         std::move(table));
    }

    std::vector<AgentGame> take(std::size_t count)
    {
        std::vector<AgentGame> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(next());
        return out;
    }

    std::uint64_t draw(std::uint64_t bound) { return rng_() % bound; }

private:
    std::mt19937_64 rng_;
    RandomGameShape shape_;
    std::size_t count_ = 0;
};

} // namespace lossaverse
