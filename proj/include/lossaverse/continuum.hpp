#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lossaverse/game.hpp"

namespace lossaverse {

/// A block of nature states: either one labelled state or an interval of a
/// real parameter x on which every action's utility is affine,
/// u(a, x) = constant[a] + slope[a] * x.
struct NaturePiece {
    std::string label;
    Rational lo, hi;
    bool lo_closed = true, hi_closed = true;
    std::vector<Rational> constant, slope;

    bool is_point() const { return lo == hi; }

    Rational at(std::size_t a, const Rational& x) const { return constant[a] + slope[a] * x; }

    static NaturePiece point(std::string label, std::vector<Rational> utilities)
    {
        NaturePiece p{std::move(label), Rational(0), Rational(0), true, true, std::move(utilities), {}};
        p.slope.assign(p.constant.size(), Rational(0));
        return p;
    }
};

/// Game whose nature states may form intervals. Minima over infinite state
/// sets are infima, so they may be unattained.
class ContinuumGame {
public:
    ContinuumGame(std::string type_label, std::vector<std::string> actions, std::vector<NaturePiece> pieces)
        : type_label_(std::move(type_label)), actions_(std::move(actions)), pieces_(std::move(pieces))
    {
        if (actions_.empty() || pieces_.empty())
            throw ValidationError("continuum game needs actions and nature states");
        for (const auto& p : pieces_) {
            if (p.constant.size() != actions_.size() || p.slope.size() != actions_.size())
                throw ShapeError("nature piece '" + p.label + "' has the wrong number of utilities");
            if (p.hi < p.lo || (p.is_point() && !(p.lo_closed && p.hi_closed)))
                throw ValidationError("nature piece '" + p.label + "' is empty");
        }
    }

    const std::string& type_label() const { return type_label_; }
    const std::vector<std::string>& actions() const { return actions_; }
    const std::vector<NaturePiece>& pieces() const { return pieces_; }

    /// Samples each interval at `samples` evenly spaced interior-or-closed
    /// points (endpoints only when closed) into a finite game.
    AgentGame sample(std::int64_t samples) const
    {
        std::vector<std::string> states;
        std::vector<std::pair<std::size_t, Rational>> where;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const auto& p = pieces_[i];
            if (p.is_point()) {
                states.push_back(p.label);
                where.emplace_back(i, p.lo);
                continue;
            }
            for (std::int64_t k = 0; k <= samples; ++k) {
                if ((k == 0 && !p.lo_closed) || (k == samples && !p.hi_closed))
                    continue;
                Rational x = p.lo + (p.hi - p.lo) * Rational(k, samples);
                states.push_back(p.label + "@" + x.str());
                where.emplace_back(i, x);
            }
        }
        return AgentGame::tabulate(type_label_ + "-sampled", actions_, std::move(states),
                                   [&](std::size_t a, std::size_t s) { return pieces_[where[s].first].at(a, where[s].second); });
    }

private:
    std::string type_label_;
    std::vector<std::string> actions_;
    std::vector<NaturePiece> pieces_;
};

namespace detail {

/// Infimum of action a's utility over {x in piece : sign(u_a - u_b) matches}.
/// strict_below: the set where u_a < u_b; otherwise the set where u_a != u_b.
inline ExtendedRational piece_infimum(const NaturePiece& p, std::size_t a, std::size_t b, bool strict_below)
{
    const Rational c = p.constant[a] - p.constant[b];
    const Rational d = p.slope[a] - p.slope[b];
    if (p.is_point()) {
        const Rational g = c + d * p.lo;
        const bool in = strict_below ? g.sign() < 0 : !g.is_zero();
        return in ? ExtendedRational(p.at(a, p.lo)) : ExtendedRational::infinity();
    }
    if (!strict_below) {
        // The difference is affine: zero everywhere or at most one point,
        // and removing one point from an interval keeps the infimum.
        if (c.is_zero() && d.is_zero())
            return ExtendedRational::infinity();
        return min(p.at(a, p.lo), p.at(a, p.hi));
    }
    Rational lo = p.lo, hi = p.hi;
    bool lo_closed = p.lo_closed, hi_closed = p.hi_closed;
    if (d.is_zero()) {
        if (c.sign() >= 0)
            return ExtendedRational::infinity();
    } else {
        const Rational root = -c / d;
        if (d.sign() > 0) { // below on x < root
            if (root <= hi) {
                hi = root;
                hi_closed = false;
            }
        } else if (root >= lo) {
            lo = root;
            lo_closed = false;
        }
    }
    if (hi < lo || (hi == lo && !(lo_closed && hi_closed)))
        return ExtendedRational::infinity();
    return min(p.at(a, lo), p.at(a, hi));
}

inline ExtendedRational continuum_min(const ContinuumGame& g, std::size_t a, std::size_t b, bool strict_below)
{
    ExtendedRational best = ExtendedRational::infinity();
    for (const auto& p : g.pieces()) {
        auto v = piece_infimum(p, a, b, strict_below);
        if (v < best)
            best = v;
    }
    return best;
}

} // namespace detail

/// Loss-averse actions with infima in place of minima.
inline std::vector<std::size_t> continuum_loss_averse(const ContinuumGame& g)
{
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < g.actions().size(); ++a) {
        bool ok = true;
        for (std::size_t b = 0; b < g.actions().size() && ok; ++b)
            if (a != b && detail::continuum_min(g, a, b, false) < detail::continuum_min(g, b, a, false))
                ok = false;
        if (ok)
            out.push_back(a);
    }
    return out;
}

inline std::vector<std::size_t> continuum_loss_averse_star(const ContinuumGame& g)
{
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < g.actions().size(); ++a) {
        bool ok = true;
        for (std::size_t b = 0; b < g.actions().size() && ok; ++b)
            if (a != b && detail::continuum_min(g, a, b, true) < detail::continuum_min(g, b, a, true))
                ok = false;
        if (ok)
            out.push_back(a);
    }
    return out;
}

/// Infimum of action a's utility over all nature states.
inline ExtendedRational continuum_worst(const ContinuumGame& g, std::size_t a)
{
    ExtendedRational worst = ExtendedRational::infinity();
    for (const auto& p : g.pieces()) {
        ExtendedRational v = min(p.at(a, p.lo), p.at(a, p.hi));
        if (v < worst)
            worst = v;
    }
    return worst;
}

inline ExtendedRational continuum_safety_level(const ContinuumGame& g)
{
    ExtendedRational best = continuum_worst(g, 0);
    for (std::size_t a = 1; a < g.actions().size(); ++a)
        if (continuum_worst(g, a) > best)
            best = continuum_worst(g, a);
    return best;
}

inline std::vector<std::size_t> continuum_safety_level_actions(const ContinuumGame& g)
{
    const auto level = continuum_safety_level(g);
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < g.actions().size(); ++a)
        if (continuum_worst(g, a) == level)
            out.push_back(a);
    return out;
}

/// Aim-big: small prizes x in (0,1] (S gets x, B gets 0) or the big prize
/// (B gets 1000, S gets 1).
inline ContinuumGame aim_big()
{
    NaturePiece small{"small", Rational(0), Rational(1), false, true, {Rational(0), Rational(0)}, {Rational(0), Rational(1)}};
    return ContinuumGame("aim-big", {"B", "S"},
                         {small, NaturePiece::point("1000", {Rational(1000), Rational(1)})});
}

/// The finite game plus, for every state s other than the floor, the whole
/// family of lotteries "s with probability e, floor otherwise" for e in (0,1).
inline ContinuumGame augment_with_mixture_family(const AgentGame& game, std::string_view floor_state)
{
    const std::size_t floor = game.state_index(floor_state);
    std::vector<NaturePiece> pieces;
    for (std::size_t s = 0; s < game.state_count(); ++s) {
        std::vector<Rational> col;
        for (std::size_t a = 0; a < game.action_count(); ++a)
            col.push_back(game.at(a, s));
        pieces.push_back(NaturePiece::point(game.states()[s], col));
    }
    for (std::size_t s = 0; s < game.state_count(); ++s) {
        if (s == floor)
            continue;
        NaturePiece p{"mix(" + game.states()[s] + "," + game.states()[floor] + ")", Rational(0), Rational(1), false, false, {}, {}};
        for (std::size_t a = 0; a < game.action_count(); ++a) {
            p.constant.push_back(game.at(a, floor));
            p.slope.push_back(game.at(a, s) - game.at(a, floor));
        }
        pieces.push_back(std::move(p));
    }
    return ContinuumGame(game.type_label() + "-mixture-family", game.actions(), std::move(pieces));
}

} // namespace lossaverse
