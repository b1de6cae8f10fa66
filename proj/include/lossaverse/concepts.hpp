#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lossaverse/game.hpp"

namespace lossaverse {

enum class Concept {
    LossAverse,
    LossAverseStar,
    SafetyLevel,
    IndividuallyRational,
    WeaklyDominant,
    StrictlyDominated,
    Leximin,
    MultiLeximin,
    MinMaxRegret,
};

inline constexpr std::array<Concept, 9> all_concepts = {
    Concept::LossAverse,     Concept::LossAverseStar,    Concept::SafetyLevel,
    Concept::IndividuallyRational, Concept::WeaklyDominant, Concept::StrictlyDominated,
    Concept::Leximin,        Concept::MultiLeximin,      Concept::MinMaxRegret,
};

inline std::string_view concept_name(Concept c)
{
    switch (c) {
    case Concept::LossAverse: return "loss-averse";
    case Concept::LossAverseStar: return "loss-averse-star";
    case Concept::SafetyLevel: return "safety-level";
    case Concept::IndividuallyRational: return "individually-rational";
    case Concept::WeaklyDominant: return "weakly-dominant";
    case Concept::StrictlyDominated: return "strictly-dominated";
    case Concept::Leximin: return "leximin";
    case Concept::MultiLeximin: return "multi-leximin";
    case Concept::MinMaxRegret: return "min-max-regret";
    }
    return "?";
}

inline Concept concept_from_name(std::string_view name)
{
    for (auto c : all_concepts)
        if (concept_name(c) == name)
            return c;
    throw ValidationError("unknown concept '" + std::string(name) + "'");
}

/// Evidence about one action. For every concept except StrictlyDominated it
/// refutes membership; for StrictlyDominated it certifies membership (the
/// rival strictly dominates the action). Field meaning per concept:
///
///   LossAverse, LossAverseStar: minima over the (one-sided) difference sets,
///     realized at action_state / rival_state; violation action_value < rival_value.
///   SafetyLevel: the two actions' minima over all states.
///   IndividuallyRational: action_state has action_value < 0 = rival_value, no rival.
///   WeaklyDominant: at action_state the rival does strictly better.
///   StrictlyDominated: action_state is where the rival's margin is smallest.
///   Leximin, MultiLeximin: first differing position `rank` of the sorted
///     outcome lists; -inf marks an exhausted list.
///   MinMaxRegret: values are max regrets; violation action_value > rival_value.
struct Witness {
    std::size_t action = 0;
    std::optional<std::size_t> rival;
    std::optional<std::size_t> action_state;
    std::optional<std::size_t> rival_state;
    ExtendedRational action_value{Rational{}};
    ExtendedRational rival_value{Rational{}};
    std::size_t rank = 0;
};

struct ConceptVerdict {
    Concept kind = Concept::LossAverse;
    std::vector<std::size_t> actions;
    std::vector<Witness> witnesses;

    bool contains(std::size_t a) const { return std::binary_search(actions.begin(), actions.end(), a); }

    std::vector<std::string> labels(const AgentGame& game) const
    {
        std::vector<std::string> out;
        for (auto a : actions)
            out.push_back(game.actions()[a]);
        return out;
    }
};

namespace detail {

struct Extremum {
    ExtendedRational value = ExtendedRational::infinity();
    std::optional<std::size_t> state;
};

/// Minimum of row `a` over `states`; +inf when empty. First state wins ties.
inline Extremum row_min(const AgentGame& g, std::size_t a, const std::vector<std::size_t>& states)
{
    Extremum e;
    for (auto s : states)
        if (!e.state || g.at(a, s) < e.value.value()) {
            e.value = g.at(a, s);
            e.state = s;
        }
    return e;
}

inline std::vector<std::size_t> all_states(const AgentGame& g)
{
    std::vector<std::size_t> s(g.state_count());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = i;
    return s;
}

/// States where a is strictly worse than b.
inline std::vector<std::size_t> worse_set(const AgentGame& g, std::size_t a, std::size_t b)
{
    std::vector<std::size_t> d;
    for (std::size_t s = 0; s < g.state_count(); ++s)
        if (g.at(a, s) < g.at(b, s))
            d.push_back(s);
    return d;
}

inline std::vector<Rational> sorted_outcomes(const AgentGame& g, std::size_t a, bool multiset)
{
    std::vector<Rational> v;
    for (std::size_t s = 0; s < g.state_count(); ++s)
        v.push_back(g.at(a, s));
    std::sort(v.begin(), v.end());
    if (!multiset)
        v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

struct LexCompare {
    int sign = 0; // <0: first list is smaller
    std::size_t rank = 0;
    ExtendedRational x{Rational{}}, y{Rational{}};
};

/// Lexicographic comparison of ascending lists. A list that runs out first
/// is the smaller one.
inline LexCompare lex_compare(const std::vector<Rational>& x, const std::vector<Rational>& y)
{
    const std::size_t n = std::max(x.size(), y.size());
    for (std::size_t k = 0; k < n; ++k) {
        ExtendedRational xv = k < x.size() ? ExtendedRational(x[k]) : ExtendedRational::negative_infinity();
        ExtendedRational yv = k < y.size() ? ExtendedRational(y[k]) : ExtendedRational::negative_infinity();
        if (xv != yv)
            return {xv < yv ? -1 : 1, k, xv, yv};
    }
    return {};
}

} // namespace detail

struct PairVerdict {
    bool holds = true;
    Witness witness;
};

/// Pure loss-aversion of a against a2 over their difference set. An empty
/// difference set compares +inf with +inf and holds.
inline PairVerdict is_loss_averse_vs(const AgentGame& game, std::size_t a, std::size_t a2)
{
    const auto d = difference_set(game, a, a2);
    const auto mine = detail::row_min(game, a, d);
    const auto theirs = detail::row_min(game, a2, d);
    PairVerdict v;
    v.holds = mine.value >= theirs.value;
    v.witness = {a, a2, mine.state, theirs.state, mine.value, theirs.value, 0};
    return v;
}

inline PairVerdict is_loss_averse_vs(const AgentGame& game, std::string_view a, std::string_view a2)
{
    return is_loss_averse_vs(game, game.action_index(a), game.action_index(a2));
}

inline PairVerdict is_loss_averse_star_vs(const AgentGame& game, std::size_t a, std::size_t a2)
{
    const auto mine = detail::row_min(game, a, detail::worse_set(game, a, a2));
    const auto theirs = detail::row_min(game, a2, detail::worse_set(game, a2, a));
    PairVerdict v;
    v.holds = mine.value >= theirs.value;
    v.witness = {a, a2, mine.state, theirs.state, mine.value, theirs.value, 0};
    return v;
}

namespace detail {

template <class PairFn>
ConceptVerdict pairwise(const AgentGame& game, Concept c, PairFn&& fn)
{
    ConceptVerdict out{c, {}, {}};
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        std::optional<Witness> refuted;
        for (std::size_t b = 0; b < game.action_count() && !refuted; ++b) {
            if (a == b)
                continue;
            auto pv = fn(game, a, b);
            if (!pv.holds)
                refuted = pv.witness;
        }
        if (refuted)
            out.witnesses.push_back(*refuted);
        else
            out.actions.push_back(a);
    }
    return out;
}

} // namespace detail

inline ConceptVerdict loss_averse_actions(const AgentGame& game)
{
    return detail::pairwise(game, Concept::LossAverse,
                            [](const AgentGame& g, std::size_t a, std::size_t b) { return is_loss_averse_vs(g, a, b); });
}

inline ConceptVerdict loss_averse_star_actions(const AgentGame& game)
{
    return detail::pairwise(game, Concept::LossAverseStar, [](const AgentGame& g, std::size_t a, std::size_t b) {
        return is_loss_averse_star_vs(g, a, b);
    });
}

/// max over actions of the worst-case utility.
inline Rational safety_level(const AgentGame& game)
{
    const auto states = detail::all_states(game);
    Rational best = detail::row_min(game, 0, states).value.value();
    for (std::size_t a = 1; a < game.action_count(); ++a)
        best = max(best, detail::row_min(game, a, states).value.value());
    return best;
}

inline ConceptVerdict safety_level_actions(const AgentGame& game)
{
    const auto states = detail::all_states(game);
    std::vector<detail::Extremum> mins;
    std::size_t best = 0;
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        mins.push_back(detail::row_min(game, a, states));
        if (mins[a].value > mins[best].value)
            best = a;
    }
    ConceptVerdict out{Concept::SafetyLevel, {}, {}};
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        if (mins[a].value == mins[best].value)
            out.actions.push_back(a);
        else
            out.witnesses.push_back({a, best, mins[a].state, mins[best].state, mins[a].value, mins[best].value, 0});
    }
    return out;
}

inline ConceptVerdict individually_rational_actions(const AgentGame& game)
{
    ConceptVerdict out{Concept::IndividuallyRational, {}, {}};
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        std::optional<std::size_t> bad;
        for (std::size_t s = 0; s < game.state_count() && !bad; ++s)
            if (game.at(a, s).sign() < 0)
                bad = s;
        if (bad)
            out.witnesses.push_back({a, std::nullopt, bad, std::nullopt, game.at(a, *bad), Rational(0), 0});
        else
            out.actions.push_back(a);
    }
    return out;
}

inline ConceptVerdict weakly_dominant_actions(const AgentGame& game)
{
    ConceptVerdict out{Concept::WeaklyDominant, {}, {}};
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        std::optional<Witness> w;
        for (std::size_t b = 0; b < game.action_count() && !w; ++b)
            for (std::size_t s = 0; s < game.state_count() && !w; ++s)
                if (game.at(a, s) < game.at(b, s))
                    w = Witness{a, b, s, s, game.at(a, s), game.at(b, s), 0};
        if (w)
            out.witnesses.push_back(*w);
        else
            out.actions.push_back(a);
    }
    return out;
}

/// Members are actions some rival beats in every state; each member carries
/// a certificate naming the first such rival.
inline ConceptVerdict strictly_dominated_actions(const AgentGame& game)
{
    ConceptVerdict out{Concept::StrictlyDominated, {}, {}};
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        for (std::size_t b = 0; b < game.action_count(); ++b) {
            if (a == b)
                continue;
            bool dominated = true;
            std::size_t tight = 0;
            for (std::size_t s = 0; s < game.state_count() && dominated; ++s) {
                if (!(game.at(a, s) < game.at(b, s)))
                    dominated = false;
                else if (game.at(b, s) - game.at(a, s) < game.at(b, tight) - game.at(a, tight))
                    tight = s;
            }
            if (dominated) {
                out.actions.push_back(a);
                out.witnesses.push_back({a, b, tight, tight, game.at(a, tight), game.at(b, tight), 0});
                break;
            }
        }
    }
    return out;
}

namespace detail {

inline ConceptVerdict leximin_impl(const AgentGame& game, bool multiset)
{
    std::vector<std::vector<Rational>> lists;
    for (std::size_t a = 0; a < game.action_count(); ++a)
        lists.push_back(sorted_outcomes(game, a, multiset));
    std::size_t best = 0;
    for (std::size_t a = 1; a < lists.size(); ++a)
        if (lex_compare(lists[a], lists[best]).sign > 0)
            best = a;
    ConceptVerdict out{multiset ? Concept::MultiLeximin : Concept::Leximin, {}, {}};
    for (std::size_t a = 0; a < lists.size(); ++a) {
        auto c = lex_compare(lists[a], lists[best]);
        if (c.sign == 0)
            out.actions.push_back(a);
        else
            out.witnesses.push_back({a, best, std::nullopt, std::nullopt, c.x, c.y, c.rank});
    }
    return out;
}

} // namespace detail

/// Actions whose ascending list of distinct outcome values is
/// lexicographically maximal.
inline ConceptVerdict leximin_actions(const AgentGame& game) { return detail::leximin_impl(game, false); }

/// As leximin_actions, but each state contributes one entry.
inline ConceptVerdict multi_leximin_actions(const AgentGame& game) { return detail::leximin_impl(game, true); }

struct Regret {
    Rational value;
    std::size_t state = 0;
};

/// Largest shortfall against the best action in hindsight, with the first
/// state attaining it.
inline Regret max_regret(const AgentGame& game, std::size_t a)
{
    Regret r{Rational(-1), 0};
    for (std::size_t s = 0; s < game.state_count(); ++s) {
        Rational best = game.at(0, s);
        for (std::size_t b = 1; b < game.action_count(); ++b)
            best = max(best, game.at(b, s));
        Rational regret = best - game.at(a, s);
        if (regret > r.value)
            r = {regret, s};
    }
    return r;
}

inline ConceptVerdict min_max_regret_actions(const AgentGame& game)
{
    std::vector<Regret> regrets;
    std::size_t best = 0;
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        regrets.push_back(max_regret(game, a));
        if (regrets[a].value < regrets[best].value)
            best = a;
    }
    ConceptVerdict out{Concept::MinMaxRegret, {}, {}};
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        if (regrets[a].value == regrets[best].value)
            out.actions.push_back(a);
        else
            out.witnesses.push_back(
                {a, best, regrets[a].state, regrets[best].state, regrets[a].value, regrets[best].value, 0});
    }
    return out;
}

inline ConceptVerdict compute(const AgentGame& game, Concept c)
{
    switch (c) {
    case Concept::LossAverse: return loss_averse_actions(game);
    case Concept::LossAverseStar: return loss_averse_star_actions(game);
    case Concept::SafetyLevel: return safety_level_actions(game);
    case Concept::IndividuallyRational: return individually_rational_actions(game);
    case Concept::WeaklyDominant: return weakly_dominant_actions(game);
    case Concept::StrictlyDominated: return strictly_dominated_actions(game);
    case Concept::Leximin: return leximin_actions(game);
    case Concept::MultiLeximin: return multi_leximin_actions(game);
    case Concept::MinMaxRegret: return min_max_regret_actions(game);
    }
    throw ValidationError("unknown concept");
}

/// Re-evaluates a witness from the utility table alone. True when it proves
/// what it claims (refutation, or membership for StrictlyDominated).
inline bool witness_holds(const AgentGame& game, Concept c, const Witness& w)
{
    auto u = [&](std::size_t a, std::optional<std::size_t> s) { return ExtendedRational(game.at(a, *s)); };
    auto matches_min = [&](std::size_t a, const std::vector<std::size_t>& set, std::optional<std::size_t> s,
                           const ExtendedRational& claimed) {
        if (set.empty())
            return !s && claimed.is_infinite();
        if (!s || std::find(set.begin(), set.end(), *s) == set.end() || u(a, s) != claimed)
            return false;
        for (auto t : set)
            if (game.at(a, t) < game.at(a, *s))
                return false;
        return true;
    };
    switch (c) {
    case Concept::LossAverse:
    case Concept::LossAverseStar: {
        if (!w.rival)
            return false;
        const auto dA = c == Concept::LossAverse ? difference_set(game, w.action, *w.rival)
                                                 : detail::worse_set(game, w.action, *w.rival);
        const auto dB = c == Concept::LossAverse ? dA : detail::worse_set(game, *w.rival, w.action);
        return matches_min(w.action, dA, w.action_state, w.action_value) &&
               matches_min(*w.rival, dB, w.rival_state, w.rival_value) && w.action_value < w.rival_value;
    }
    case Concept::SafetyLevel: {
        if (!w.rival)
            return false;
        const auto all = detail::all_states(game);
        return matches_min(w.action, all, w.action_state, w.action_value) &&
               matches_min(*w.rival, all, w.rival_state, w.rival_value) && w.action_value < w.rival_value;
    }
    case Concept::IndividuallyRational:
        return w.action_state && u(w.action, w.action_state) == w.action_value && w.action_value < Rational(0);
    case Concept::WeaklyDominant:
        return w.rival && w.action_state && u(w.action, w.action_state) < u(*w.rival, w.action_state);
    case Concept::StrictlyDominated: {
        if (!w.rival)
            return false;
        for (std::size_t s = 0; s < game.state_count(); ++s)
            if (!(game.at(w.action, s) < game.at(*w.rival, s)))
                return false;
        return true;
    }
    case Concept::Leximin:
    case Concept::MultiLeximin: {
        if (!w.rival)
            return false;
        const bool multi = c == Concept::MultiLeximin;
        auto x = detail::sorted_outcomes(game, w.action, multi);
        auto y = detail::sorted_outcomes(game, *w.rival, multi);
        auto at = [](const std::vector<Rational>& v, std::size_t k) {
            return k < v.size() ? ExtendedRational(v[k]) : ExtendedRational::negative_infinity();
        };
        for (std::size_t k = 0; k < w.rank; ++k)
            if (at(x, k) != at(y, k))
                return false;
        return at(x, w.rank) == w.action_value && at(y, w.rank) == w.rival_value && w.action_value < w.rival_value;
    }
    case Concept::MinMaxRegret:
        return w.rival && ExtendedRational(max_regret(game, w.action).value) == w.action_value &&
               ExtendedRational(max_regret(game, *w.rival).value) == w.rival_value &&
               w.action_value > w.rival_value;
    }
    return false;
}

} // namespace lossaverse
