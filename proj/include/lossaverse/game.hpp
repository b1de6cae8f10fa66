#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lossaverse/errors.hpp"
#include "lossaverse/rational.hpp"

namespace lossaverse {

/// Finite single-agent decision problem against nature. The utility table
/// is dense and row-major: row = action, column = nature state.
class AgentGame {
public:
    AgentGame(std::string type_label,
              std::vector<std::string> actions,
              std::vector<std::string> states,
              std::vector<Rational> utilities)
        : type_label_(std::move(type_label)),
          actions_(std::move(actions)),
          states_(std::move(states)),
          table_(std::move(utilities))
    {
        if (actions_.empty())
            throw ValidationError("game '" + type_label_ + "' has no actions");
        if (states_.empty())
            throw ValidationError("game '" + type_label_ + "' has no nature states");
        check_unique(actions_, "action");
        check_unique(states_, "nature state");
        if (table_.size() != actions_.size() * states_.size())
            throw ShapeError("utility table has " + std::to_string(table_.size()) + " entries, expected " +
                             std::to_string(actions_.size() * states_.size()));
    }

    /// Builds the table by calling f(action_index, state_index).
    template <class F>
    static AgentGame tabulate(std::string type_label,
                              std::vector<std::string> actions,
                              std::vector<std::string> states,
                              F&& f)
    {
        std::vector<Rational> table;
        table.reserve(actions.size() * states.size());
        for (std::size_t a = 0; a < actions.size(); ++a)
            for (std::size_t s = 0; s < states.size(); ++s)
                table.push_back(f(a, s));
        return AgentGame(std::move(type_label), std::move(actions), std::move(states), std::move(table));
    }

    const std::string& type_label() const { return type_label_; }
    const std::vector<std::string>& actions() const { return actions_; }
    const std::vector<std::string>& states() const { return states_; }
    std::size_t action_count() const { return actions_.size(); }
    std::size_t state_count() const { return states_.size(); }
    const std::vector<Rational>& table() const { return table_; }

    std::size_t action_index(std::string_view label) const { return find(actions_, label, "action"); }
    std::size_t state_index(std::string_view label) const { return find(states_, label, "nature state"); }

    const Rational& at(std::size_t action, std::size_t state) const
    {
        return table_[action * states_.size() + state];
    }

    const Rational& utility(std::string_view action, std::string_view state) const
    {
        return at(action_index(action), state_index(state));
    }

    /// Same labels and table, new utilities u -> scale * u + shift.
    AgentGame affine(const Rational& scale, const Rational& shift) const
    {
        std::vector<Rational> t;
        t.reserve(table_.size());
        for (const auto& u : table_)
            t.push_back(scale * u + shift);
        return AgentGame(type_label_, actions_, states_, std::move(t));
    }

    friend bool operator==(const AgentGame&, const AgentGame&) = default;

private:
    static void check_unique(const std::vector<std::string>& labels, const char* what)
    {
        std::unordered_set<std::string_view> seen;
        for (const auto& l : labels)
            if (!seen.insert(l).second)
                throw ValidationError(std::string("duplicate ") + what + " label '" + l + "'");
    }

    static std::size_t find(const std::vector<std::string>& labels, std::string_view label, const char* what)
    {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end())
            throw LookupError(std::string("unknown ") + what + " '" + std::string(label) + "'");
        return static_cast<std::size_t>(it - labels.begin());
    }

    std::string type_label_;
    std::vector<std::string> actions_;
    std::vector<std::string> states_;
    std::vector<Rational> table_;
};

/// Probability vector aligned with a game's action order.
class MixedAction {
public:
    MixedAction() = default;

    explicit MixedAction(std::vector<Rational> probabilities) : p_(std::move(probabilities))
    {
        Rational total;
        for (const auto& x : p_) {
            if (x.sign() < 0)
                throw ValidationError("negative probability " + x.str());
            total += x;
        }
        if (p_.empty() || total != Rational(1))
            throw ValidationError("probabilities sum to " + total.str() + ", not 1");
    }

    static MixedAction pure(std::size_t count, std::size_t index)
    {
        std::vector<Rational> p(count);
        p.at(index) = Rational(1);
        return MixedAction(std::move(p));
    }

    /// Mixture given by action labels; unlisted actions get probability 0.
    static MixedAction from_labels(const AgentGame& game, const std::map<std::string, Rational>& by_label)
    {
        std::vector<Rational> p(game.action_count());
        for (const auto& [label, prob] : by_label)
            p[game.action_index(label)] = prob;
        return MixedAction(std::move(p));
    }

    /// lambda * x + (1 - lambda) * y.
    static MixedAction combine(const Rational& lambda, const MixedAction& x, const MixedAction& y)
    {
        if (x.size() != y.size())
            throw ShapeError("mixtures over different action counts");
        if (lambda.sign() < 0 || lambda > Rational(1))
            throw ValidationError("combination weight outside [0,1]");
        std::vector<Rational> p;
        for (std::size_t i = 0; i < x.size(); ++i)
            p.push_back(lambda * x[i] + (Rational(1) - lambda) * y[i]);
        return MixedAction(std::move(p));
    }

    std::size_t size() const { return p_.size(); }
    const Rational& operator[](std::size_t i) const { return p_[i]; }
    const std::vector<Rational>& probabilities() const { return p_; }

    /// Fails unless the mixture matches the game's action count.
    void check(const AgentGame& game) const
    {
        if (p_.size() != game.action_count())
            throw ValidationError("mixture has " + std::to_string(p_.size()) + " entries for a game with " +
                                  std::to_string(game.action_count()) + " actions");
    }

    std::string str(const AgentGame& game) const
    {
        std::string out = "(";
        bool first = true;
        for (std::size_t i = 0; i < p_.size(); ++i) {
            if (p_[i].is_zero())
                continue;
            if (!first)
                out += ", ";
            out += game.actions()[i] + ": " + p_[i].str();
            first = false;
        }
        return out + ")";
    }

    friend bool operator==(const MixedAction&, const MixedAction&) = default;

private:
    std::vector<Rational> p_;
};

inline Rational mixed_utility(const AgentGame& game, const MixedAction& mixed, std::size_t state)
{
    mixed.check(game);
    Rational total;
    for (std::size_t a = 0; a < game.action_count(); ++a)
        if (!mixed[a].is_zero())
            total += mixed[a] * game.at(a, state);
    return total;
}

inline Rational mixed_utility(const AgentGame& game, const MixedAction& mixed, std::string_view state)
{
    return mixed_utility(game, mixed, game.state_index(state));
}

/// States on which the two actions' utilities differ, in state order.
inline std::vector<std::size_t> difference_set(const AgentGame& game, std::size_t a, std::size_t b)
{
    std::vector<std::size_t> d;
    for (std::size_t s = 0; s < game.state_count(); ++s)
        if (game.at(a, s) != game.at(b, s))
            d.push_back(s);
    return d;
}

inline std::vector<std::string> difference_set(const AgentGame& game, std::string_view a, std::string_view b)
{
    std::vector<std::string> out;
    for (auto s : difference_set(game, game.action_index(a), game.action_index(b)))
        out.push_back(game.states()[s]);
    return out;
}

} // namespace lossaverse
