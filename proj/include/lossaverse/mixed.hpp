#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lossaverse/concepts.hpp"

namespace lossaverse {

namespace detail {

/// Solves the square system m * x = rhs exactly. Returns nullopt when singular.
inline std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs)
{
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero())
            ++pivot;
        if (pivot == n)
            return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero())
                continue;
            const Rational f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c)
                m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] /= m[i][i];
    return rhs;
}

/// Calls f(subset) for every k-subset of {0..n-1}, in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f)
{
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

inline std::size_t binomial(std::size_t n, std::size_t k)
{
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

} // namespace detail

struct MixedMaxMin {
    Rational value;
    MixedAction strategy;
};

/// Exact max-min value over mixed actions (the value of the zero-sum game
/// against nature), found by enumerating square kernels: every vertex of the
/// feasible region solves sum_{a in P} p_a u(a,s) = t for s in Q, sum p = 1,
/// for some |P| = |Q|.
inline MixedMaxMin mixed_max_min(const AgentGame& game, std::size_t budget = 2'000'000)
{
    const std::size_t n = game.action_count(), m = game.state_count();
    std::size_t systems = 0;
    for (std::size_t k = 1; k <= std::min(n, m); ++k)
        systems += detail::binomial(n, k) * detail::binomial(m, k);
    if (systems > budget)
        throw CapacityError("mixed max-min needs " + std::to_string(systems) + " kernel systems, budget " +
                            std::to_string(budget));

    std::optional<MixedMaxMin> best;
    for (std::size_t k = 1; k <= std::min(n, m); ++k) {
        detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& rows) {
            detail::for_each_subset(m, k, [&](const std::vector<std::size_t>& cols) {
                // unknowns: p_rows[0..k), t
                std::vector<std::vector<Rational>> a(k + 1, std::vector<Rational>(k + 1));
                std::vector<Rational> rhs(k + 1);
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = 0; j < k; ++j)
                        a[i][j] = game.at(rows[j], cols[i]);
                    a[i][k] = Rational(-1);
                }
                for (std::size_t j = 0; j < k; ++j)
                    a[k][j] = Rational(1);
                rhs[k] = Rational(1);
                auto x = detail::solve_exact(std::move(a), std::move(rhs));
                if (!x)
                    return;
                std::vector<Rational> p(n);
                for (std::size_t j = 0; j < k; ++j) {
                    if ((*x)[j].sign() < 0)
                        return;
                    p[rows[j]] = (*x)[j];
                }
                MixedAction mix(std::move(p));
                Rational worst = mixed_utility(game, mix, 0);
                for (std::size_t s = 1; s < m; ++s)
                    worst = min(worst, mixed_utility(game, mix, s));
                if (!best || worst > best->value)
                    best = MixedMaxMin{worst, std::move(mix)};
            });
        });
    }
    return *best;
}

struct MixedSafetyCheck {
    bool guarantees = false;
    Rational worst;
    std::size_t worst_state = 0;
};

struct MixedSafetyReport {
    Rational value;
    std::vector<MixedSafetyCheck> checks;
};

/// For each candidate: does it guarantee the mixed max-min value in every state?
inline MixedSafetyReport mixed_safety_level_actions(const AgentGame& game, const std::vector<MixedAction>& candidates)
{
    MixedSafetyReport r{mixed_max_min(game).value, {}};
    for (const auto& c : candidates) {
        MixedSafetyCheck chk{false, mixed_utility(game, c, 0), 0};
        for (std::size_t s = 1; s < game.state_count(); ++s) {
            auto u = mixed_utility(game, c, s);
            if (u < chk.worst)
                chk = {false, u, s};
        }
        chk.guarantees = chk.worst >= r.value;
        r.checks.push_back(chk);
    }
    return r;
}

/// Closed-form safety-level mixture for two actions against two states: the
/// equalizing mixture when it is interior and strictly beats every pure
/// action, otherwise the first pure action with the best worst case.
inline MixedAction mixed_safety_level_solve_2x2(const AgentGame& game)
{
    if (game.action_count() != 2 || game.state_count() != 2)
        throw ShapeError("2x2 solver needs exactly two actions and two states, got " +
                         std::to_string(game.action_count()) + "x" + std::to_string(game.state_count()));
    const Rational &aA = game.at(0, 0), &aB = game.at(0, 1), &bA = game.at(1, 0), &bB = game.at(1, 1);
    const Rational minA = min(aA, aB), minB = min(bA, bB);
    const MixedAction pure_best = MixedAction::pure(2, minB > minA ? 1 : 0);
    const Rational denom = aA - bA - aB + bB;
    if (denom.is_zero())
        return pure_best;
    const Rational p = (bB - bA) / denom;
    if (p.sign() <= 0 || p >= Rational(1))
        return pure_best;
    const Rational value = p * aA + (Rational(1) - p) * bA;
    if (value <= max(minA, minB))
        return pure_best;
    return MixedAction({p, Rational(1) - p});
}

struct MixedFalsification {
    bool falsified = false;
    std::optional<std::size_t> deviation; // index into the deviation list
    std::optional<std::size_t> candidate_state, deviation_state;
    ExtendedRational candidate_min = ExtendedRational::infinity();
    ExtendedRational deviation_min = ExtendedRational::infinity();
};

/// Checks the loss-aversion inequality of `candidate` against each deviation
/// in turn. Surviving the family is not a proof of mixed loss-aversion.
inline MixedFalsification mixed_loss_averse_falsify(const AgentGame& game, const MixedAction& candidate,
                                                    const std::vector<MixedAction>& deviations)
{
    if (deviations.empty())
        throw ValidationError("deviation family is empty");
    candidate.check(game);
    std::vector<Rational> cu;
    for (std::size_t s = 0; s < game.state_count(); ++s)
        cu.push_back(mixed_utility(game, candidate, s));
    for (std::size_t i = 0; i < deviations.size(); ++i) {
        MixedFalsification f;
        for (std::size_t s = 0; s < game.state_count(); ++s) {
            Rational du = mixed_utility(game, deviations[i], s);
            if (du == cu[s])
                continue;
            if (cu[s] < f.candidate_min) {
                f.candidate_min = cu[s];
                f.candidate_state = s;
            }
            if (du < f.deviation_min) {
                f.deviation_min = du;
                f.deviation_state = s;
            }
        }
        if (f.candidate_min < f.deviation_min) {
            f.falsified = true;
            f.deviation = i;
            return f;
        }
    }
    return {};
}

/// All pure actions followed by every mixture whose probabilities are
/// multiples of 1/steps.
inline std::vector<MixedAction> mixture_grid(std::size_t actions, std::size_t steps)
{
    std::vector<MixedAction> out;
    for (std::size_t a = 0; a < actions; ++a)
        out.push_back(MixedAction::pure(actions, a));
    std::vector<std::size_t> k(actions, 0);
    auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
        if (i + 1 == actions) {
            k[i] = left;
            std::size_t nonzero = 0;
            for (auto x : k)
                nonzero += x != 0;
            if (nonzero < 2)
                return;
            std::vector<Rational> p;
            for (auto x : k)
                p.emplace_back(static_cast<std::int64_t>(x), static_cast<std::int64_t>(steps));
            out.emplace_back(std::move(p));
            return;
        }
        for (std::size_t x = 0; x <= left; ++x) {
            k[i] = x;
            self(self, i + 1, left - x);
        }
    };
    rec(rec, 0, steps);
    return out;
}

struct MixtureAugmentation {
    std::string bar_state;
    std::string floor_state;
    std::vector<Rational> epsilons;
};

/// Adds one synthetic nature state per epsilon: the bar state with
/// probability epsilon, the floor state otherwise.
inline AgentGame augment_with_mixed_nature(const AgentGame& game, const MixtureAugmentation& aug)
{
    const std::size_t bar = game.state_index(aug.bar_state);
    const std::size_t floor = game.state_index(aug.floor_state);
    const Rational level = safety_level(game);
    for (std::size_t a = 0; a < game.action_count(); ++a)
        if (game.at(a, floor) > level)
            throw ValidationError("floor state '" + aug.floor_state + "' gives action '" + game.actions()[a] + "' " +
                                  game.at(a, floor).str() + " above the safety level " + level.str());
    for (const auto& e : aug.epsilons)
        if (e.sign() <= 0 || e >= Rational(1))
            throw ValidationError("mixture weight " + e.str() + " is not in (0,1)");
    if (aug.epsilons.empty())
        return game;

    auto states = game.states();
    for (const auto& e : aug.epsilons)
        states.push_back("mix(" + aug.bar_state + "," + aug.floor_state + "," + e.str() + ")");
    const std::size_t original = game.state_count();
    return AgentGame::tabulate(game.type_label(), game.actions(), std::move(states),
                               [&](std::size_t a, std::size_t s) {
                                   if (s < original)
                                       return game.at(a, s);
                                   const Rational& e = aug.epsilons[s - original];
                                   return e * game.at(a, bar) + (Rational(1) - e) * game.at(a, floor);
                               });
}

} // namespace lossaverse
