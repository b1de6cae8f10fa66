#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lossaverse/game_io.hpp"
#include "lossaverse/vcg/examples.hpp"

namespace lossaverse::vcg {

inline constexpr int instance_version = 1;

/// A VCG instance file: items, epsilon and per-agent valuations and bids.
struct VcgInstance {
    Rational epsilon;
    std::vector<std::string> item_names;
    std::vector<SybilProfile> agents;

    std::size_t items() const { return item_names.size(); }
    Grid grid() const { return make_grid(epsilon, items()); }
};

/// Parses "a,c" (or "{a,c}", "" for the empty bundle) against the item names.
inline Bundle bundle_from_text(std::string text, const std::vector<std::string>& names)
{
    if (text.size() >= 2 && text.front() == '{' && text.back() == '}')
        text = text.substr(1, text.size() - 2);
    Bundle b = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t g = 0;
        while (g < names.size() && names[g] != item)
            ++g;
        if (g == names.size())
            throw LookupError("unknown item '" + item + "'");
        if (b >> g & 1)
            throw ValidationError("item '" + item + "' listed twice in a bundle");
        b |= Bundle{1} << g;
    }
    return b;
}

inline Bundle bundle_from_json(const Json& j, const std::vector<std::string>& names)
{
    if (j.is_string())
        return bundle_from_text(j.get<std::string>(), names);
    Bundle b = 0;
    for (const auto& x : labels_from_json(j, "bundle"))
        b |= bundle_from_text(x, names);
    return b;
}

inline std::vector<Rational> rationals_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw ParseError(where + " must be an array");
    std::vector<Rational> out;
    for (const auto& x : j)
        out.push_back(rational_from_json(x));
    return out;
}

/// Set function forms:
///   {"additive": [x_a, x_b, ...]}
///   {"xos": [[...], [...]]}
///   {"table": [v(0), v(1), ..., v(2^m - 1)]}    values in bundle-mask order
///   {"table": {"a": x, "a,b": y, ...}}          every nonempty bundle listed
///   {"or": [{"bundle": "a,b", "value": x}, ...]}
inline SetFunction set_function_from_json(const Json& j, const std::vector<std::string>& names,
                                          const std::string& where)
{
    const std::size_t m = names.size();
    if (!j.is_object() || j.size() != 1)
        throw ParseError(where + " must be an object with exactly one of additive, xos, table, or");
    const auto& [form, body] = *j.items().begin();
    if (form == "additive") {
        auto xs = rationals_from_json(body, where + ".additive");
        if (xs.size() != m)
            throw ShapeError(where + ".additive needs one value per item");
        return SetFunction::additive(xs);
    }
    if (form == "xos") {
        if (!body.is_array())
            throw ParseError(where + ".xos must be an array of clauses");
        std::vector<std::vector<Rational>> clauses;
        for (const auto& c : body) {
            clauses.push_back(rationals_from_json(c, where + ".xos clause"));
            if (clauses.back().size() != m)
                throw ShapeError(where + ".xos clauses need one value per item");
        }
        return SetFunction::xos(clauses);
    }
    if (form == "table") {
        if (body.is_array())
            return SetFunction(m, rationals_from_json(body, where + ".table"));
        if (!body.is_object())
            throw ParseError(where + ".table must be an array or an object");
        std::vector<Rational> values(std::size_t{1} << m, Rational(0));
        std::vector<bool> seen(values.size(), false);
        for (auto it = body.begin(); it != body.end(); ++it) {
            const Bundle b = bundle_from_text(it.key(), names);
            if (seen[b])
                throw ValidationError(where + ".table lists bundle {" + it.key() + "} twice");
            seen[b] = true;
            values[b] = rational_from_json(it.value());
        }
        for (Bundle b = 1; b <= full_bundle(m); ++b)
            if (!seen[b])
                throw ValidationError(where + ".table misses bundle " + bundle_str(b, names));
        return SetFunction(m, std::move(values));
    }
    if (form == "or") {
        if (!body.is_array())
            throw ParseError(where + ".or must be an array of atoms");
        std::vector<std::pair<Bundle, Rational>> atoms;
        for (const auto& a : body) {
            reject_unknown_keys(a, {"bundle", "value"}, where + ".or atom");
            atoms.emplace_back(bundle_from_json(require(a, "bundle", where), names),
                               rational_from_json(require(a, "value", where)));
        }
        return or_closure<Rational>(m, atoms);
    }
    throw ParseError("unknown set function form '" + form + "' in " + where);
}

inline Json to_json(const SetFunction& f, const std::vector<std::string>& names)
{
    Json table = Json::object();
    for (Bundle b = 1; b <= full_bundle(f.items()); ++b) {
        const std::string s = bundle_str(b, names);
        table[s.substr(1, s.size() - 2)] = f(b).str();
    }
    return Json{{"table", std::move(table)}};
}

/// Instance document:
///   {"version": 1, "items": ["a", "b"] or 2, "epsilon": "1/10",
///    "agents": [{"name": "A", "valuation": {...}, "bids": [{...}, ...],
///                "bid_names": [...]}]}
/// "bids" defaults to the truthful bid. Valuations must lie on the epsilon
/// grid and bids on the bid grid.
inline VcgInstance instance_from_json(const Json& j)
{
    const std::string where = "VCG instance";
    reject_unknown_keys(j, {"version", "items", "epsilon", "agents"}, where);
    const Json& version = require(j, "version", where);
    if (!version.is_number_integer() || version.get<int>() != instance_version)
        throw ParseError("unsupported instance version " + version.dump() + " (expected " +
                         std::to_string(instance_version) + ")");
    VcgInstance x;
    const Json& items = require(j, "items", where);
    if (items.is_number_integer()) {
        const auto m = items.get<std::int64_t>();
        if (m < 1)
            throw ValidationError("'items' must be positive");
        check_item_count(static_cast<std::size_t>(m));
        x.item_names = default_item_names(static_cast<std::size_t>(m));
    } else {
        x.item_names = labels_from_json(items, "'items'");
        check_item_count(x.item_names.size());
        for (std::size_t g = 0; g < x.item_names.size(); ++g) {
            const auto& n = x.item_names[g];
            if (n.empty() || n.find_first_of(",{}") != std::string::npos)
                throw ValidationError("item name '" + n + "' must be nonempty without ',', '{' or '}'");
            for (std::size_t h = 0; h < g; ++h)
                if (x.item_names[h] == n)
                    throw ValidationError("duplicate item name '" + n + "'");
        }
    }
    x.epsilon = rational_from_json(require(j, "epsilon", where));
    const Grid grid = x.grid();
    const Json& agents = require(j, "agents", where);
    if (!agents.is_array() || agents.empty())
        throw ParseError("'agents' must be a nonempty array");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const Json& a = agents[i];
        const std::string at = "agent " + std::to_string(i + 1);
        reject_unknown_keys(a, {"name", "valuation", "bids", "bid_names"}, at);
        SybilProfile p;
        p.name = a.contains("name") ? a["name"].get<std::string>() : "agent" + std::to_string(i + 1);
        p.valuation = set_function_from_json(require(a, "valuation", at), x.item_names, at + " valuation");
        if (!p.valuation.on_grid(grid.epsilon))
            throw ValidationError("valuation of '" + p.name + "' is off the epsilon grid " + grid.epsilon.str());
        if (a.contains("bids")) {
            if (!a["bids"].is_array() || a["bids"].empty())
                throw ParseError(at + " 'bids' must be a nonempty array");
            for (const auto& b : a["bids"])
                p.bids.push_back(set_function_from_json(b, x.item_names, at + " bid"));
        } else {
            p.bids = {p.valuation};
        }
        for (const auto& b : p.bids)
            if (!b.on_grid(grid.bid_step))
                throw ValidationError("a bid of '" + p.name + "' is off the bid grid " + grid.bid_step.str());
        if (a.contains("bid_names")) {
            p.bid_names = labels_from_json(a["bid_names"], at + " bid_names");
            if (p.bid_names.size() != p.bids.size())
                throw ShapeError(at + " needs one bid name per bid");
        }
        x.agents.push_back(std::move(p));
    }
    return x;
}

inline Json to_json(const VcgInstance& x)
{
    Json agents = Json::array();
    for (const auto& p : x.agents) {
        Json bids = Json::array();
        for (const auto& b : p.bids)
            bids.push_back(to_json(b, x.item_names));
        Json a{{"name", p.name}, {"valuation", to_json(p.valuation, x.item_names)}, {"bids", std::move(bids)}};
        if (!p.bid_names.empty())
            a["bid_names"] = p.bid_names;
        agents.push_back(std::move(a));
    }
    return Json{{"version", instance_version},
                {"items", x.item_names},
                {"epsilon", x.epsilon.str()},
                {"agents", std::move(agents)}};
}

inline VcgInstance parse_instance(const std::string& text) { return instance_from_json(parse_json(text)); }

inline VcgInstance instance_from_example(const ExampleInstance& e, bool attacked)
{
    return {e.epsilon, e.item_names, attacked ? e.attack : e.truthful};
}

/// Formats a value for reports: exact text or a rounded decimal.
using ValueFormat = std::function<std::string(const Rational&)>;

inline ValueFormat exact_format()
{
    return [](const Rational& r) { return r.str(); };
}

inline Json outcome_to_json(const VcgInstance& x, const VcgOutcome& o, PaymentRule rule,
                            const ValueFormat& fmt = exact_format())
{
    const auto& names = x.item_names;
    Json allocation = Json::object();
    for (std::size_t g = 0; g < names.size(); ++g) {
        const auto f = o.assignment.owner[g];
        if (f == unassigned) {
            allocation[names[g]] = nullptr;
            continue;
        }
        const auto [i, j] = o.bid_owner[f];
        allocation[names[g]] = x.agents[i].bid_name(j);
    }
    Json bids = Json::array();
    for (std::size_t f = 0; f < o.bid_owner.size(); ++f) {
        const auto [i, j] = o.bid_owner[f];
        bids.push_back(Json{{"agent", x.agents[i].name},
                            {"bid", x.agents[i].bid_name(j)},
                            {"bundle", bundle_str(o.bid_bundles[f], names)},
                            {"payment", fmt(o.payments[f])}});
    }
    Json agents = Json::array();
    for (std::size_t i = 0; i < x.agents.size(); ++i)
        agents.push_back(Json{{"name", x.agents[i].name},
                              {"bundle", bundle_str(o.agent_bundles[i], names)},
                              {"value", fmt(x.agents[i].valuation(o.agent_bundles[i]))},
                              {"payment", fmt(o.agent_payments[i])},
                              {"utility", fmt(o.utilities[i])}});
    return Json{{"payment_rule", std::string(payment_rule_name(rule))},
                {"allocation", std::move(allocation)},
                {"bids", std::move(bids)},
                {"agents", std::move(agents)},
                {"observed_welfare", fmt(o.observed_welfare)},
                {"real_welfare", fmt(o.real_welfare)}};
}

/// One row per bid, one per agent, then the two welfare totals.
inline std::string outcome_to_csv(const VcgInstance& x, const VcgOutcome& o, const ValueFormat& fmt = exact_format())
{
    const auto& names = x.item_names;
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s)
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    std::string out = "row,agent,bid,bundle,value,payment,utility\n";
    for (std::size_t f = 0; f < o.bid_owner.size(); ++f) {
        const auto [i, j] = o.bid_owner[f];
        out += "bid," + quote(x.agents[i].name) + "," + quote(x.agents[i].bid_name(j)) + "," +
               quote(bundle_str(o.bid_bundles[f], names)) + ",," + fmt(o.payments[f]) + ",\n";
    }
    for (std::size_t i = 0; i < x.agents.size(); ++i)
        out += "agent," + quote(x.agents[i].name) + ",," + quote(bundle_str(o.agent_bundles[i], names)) + "," +
               fmt(x.agents[i].valuation(o.agent_bundles[i])) + "," + fmt(o.agent_payments[i]) + "," +
               fmt(o.utilities[i]) + "\n";
    out += "observed_welfare,,,,," + fmt(o.observed_welfare) + ",\n";
    out += "real_welfare,,,,," + fmt(o.real_welfare) + ",\n";
    return out;
}

} // namespace lossaverse::vcg
