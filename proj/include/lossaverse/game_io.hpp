#pragma once

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "lossaverse/game.hpp"

namespace lossaverse {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return r.str(); }

/// Rationals are read from strings ("p", "p/q", decimals) or JSON integers.
inline Rational rational_from_json(const Json& j)
{
    if (j.is_string())
        return Rational::parse(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<std::int64_t>());
    throw ParseError("expected a rational, got " + j.dump());
}

/// Rejects any key of `j` not listed in `allowed`.
inline void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where)
{
    if (!j.is_object())
        throw ParseError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError("unknown field '" + it.key() + "' in " + where);
}

inline const Json& require(const Json& j, const char* key, const std::string& where)
{
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError("missing field '" + std::string(key) + "' in " + where);
    return *it;
}

inline std::vector<std::string> labels_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw ParseError(where + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string())
            throw ParseError(where + " must be an array of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

// Game document:
//   {"type": "...", "actions": [...], "states": [...],
//    "utilities": [["p/q", ...], ...]}   one row per action
inline Json to_json(const AgentGame& game)
{
    Json rows = Json::array();
    for (std::size_t a = 0; a < game.action_count(); ++a) {
        Json row = Json::array();
        for (std::size_t s = 0; s < game.state_count(); ++s)
            row.push_back(game.at(a, s).str());
        rows.push_back(std::move(row));
    }
    return Json{{"type", game.type_label()},
                {"actions", game.actions()},
                {"states", game.states()},
                {"utilities", std::move(rows)}};
}

inline AgentGame game_from_json(const Json& j)
{
    const std::string where = "game document";
    reject_unknown_keys(j, {"type", "actions", "states", "utilities"}, where);
    const Json& type = require(j, "type", where);
    if (!type.is_string())
        throw ParseError("game 'type' must be a string");
    auto actions = labels_from_json(require(j, "actions", where), "'actions'");
    auto states = labels_from_json(require(j, "states", where), "'states'");
    const Json& rows = require(j, "utilities", where);
    if (!rows.is_array() || rows.size() != actions.size())
        throw ParseError("'utilities' must have one row per action");
    std::vector<Rational> table;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != states.size())
            throw ParseError("every utility row must have one entry per state");
        for (const auto& x : row)
            table.push_back(rational_from_json(x));
    }
    return AgentGame(type.get<std::string>(), std::move(actions), std::move(states), std::move(table));
}

/// Canonical text: two-space indented JSON with a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string serialize(const AgentGame& game) { return dump(to_json(game)); }

inline Json parse_json(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

inline AgentGame parse_game(const std::string& text) { return game_from_json(parse_json(text)); }

} // namespace lossaverse
