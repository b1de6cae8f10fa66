#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lossaverse/acceptance.hpp"
#include "lossaverse/game_io.hpp"
#include "lossaverse/vcg/io.hpp"

namespace lossaverse::cli {

inline constexpr int scenario_version = 1;
inline constexpr const char* output_dir_variable = "LOSSAVERSE_OUT_DIR";

enum class ScenarioKind { RawGame, Dfpa, AllPay, FpaWitness, Vcg, Facility, Voting, Curated };

inline std::string_view kind_name(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::RawGame: return "raw-game";
    case ScenarioKind::Dfpa: return "dfpa";
    case ScenarioKind::AllPay: return "all-pay";
    case ScenarioKind::FpaWitness: return "fpa-witness";
    case ScenarioKind::Vcg: return "vcg";
    case ScenarioKind::Facility: return "facility";
    case ScenarioKind::Voting: return "voting";
    case ScenarioKind::Curated: return "curated";
    }
    return "?";
}

inline ScenarioKind kind_from_name(std::string_view s)
{
    for (auto k : {ScenarioKind::RawGame, ScenarioKind::Dfpa, ScenarioKind::AllPay, ScenarioKind::FpaWitness,
                   ScenarioKind::Vcg, ScenarioKind::Facility, ScenarioKind::Voting, ScenarioKind::Curated})
        if (kind_name(k) == s)
            return k;
    throw ParseError("unknown scenario kind '" + std::string(s) + "'");
}

enum class Format { Json, Csv, Table };

inline Format format_from_name(std::string_view s)
{
    if (s == "json")
        return Format::Json;
    if (s == "csv")
        return Format::Csv;
    if (s == "table")
        return Format::Table;
    throw ValidationError("unknown format '" + std::string(s) + "' (expected json, csv or table)");
}

/// Scenario document:
///   {"version": 1, "kind": "dfpa", "parameters": {...},
///    "concepts": ["loss-averse", ...], "format": "json"}
/// "concepts" defaults to every concept and "format" to json.
struct Scenario {
    ScenarioKind kind = ScenarioKind::RawGame;
    Json parameters = Json::object();
    std::vector<std::string> concepts;
    std::optional<std::string> format;
};

inline Scenario scenario_from_json(const Json& j)
{
    const std::string where = "scenario";
    reject_unknown_keys(j, {"version", "kind", "parameters", "concepts", "format"}, where);
    const Json& version = require(j, "version", where);
    if (!version.is_number_integer() || version.get<int>() != scenario_version)
        throw ParseError("unsupported scenario version " + version.dump() + " (expected " +
                         std::to_string(scenario_version) + ")");
    const Json& kind = require(j, "kind", where);
    if (!kind.is_string())
        throw ParseError("scenario 'kind' must be a string");
    Scenario s;
    s.kind = kind_from_name(kind.get<std::string>());
    s.parameters = require(j, "parameters", where);
    if (!s.parameters.is_object())
        throw ParseError("scenario 'parameters' must be an object");
    if (j.contains("concepts"))
        s.concepts = labels_from_json(j["concepts"], "'concepts'");
    if (j.contains("format")) {
        if (!j["format"].is_string())
            throw ParseError("scenario 'format' must be a string");
        format_from_name(j["format"].get<std::string>());
        s.format = j["format"].get<std::string>();
    }
    return s;
}

inline Json to_json(const Scenario& s)
{
    Json j{{"version", scenario_version}, {"kind", std::string(kind_name(s.kind))}, {"parameters", s.parameters}};
    if (!s.concepts.empty())
        j["concepts"] = s.concepts;
    if (s.format)
        j["format"] = *s.format;
    return j;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw LookupError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Scenario load_scenario(const std::string& path) { return scenario_from_json(parse_json(read_file(path))); }

// ---------------------------------------------------------------------------
// Curated registry

inline const std::vector<std::string>& curated_names()
{
    static const std::vector<std::string> names = {"aim-big",          "leximin-proof-game", "dominant-leximin",
                                                   "minmaxreg-safety", "safety-not-leximin", "safety-wrong-monotone",
                                                   "example-e1",       "example-e2"};
    return names;
}

inline void check_curated(const std::string& name)
{
    for (const auto& n : curated_names())
        if (n == name)
            return;
    std::string all;
    for (const auto& n : curated_names())
        all += (all.empty() ? "" : ", ") + n;
    throw LookupError("unknown curated example '" + name + "' (known: " + all + ")");
}

inline Scenario curated_scenario(const std::string& name)
{
    check_curated(name);
    return {ScenarioKind::Curated, Json{{"name", name}}, {}, std::nullopt};
}

inline std::optional<AgentGame> curated_game(const std::string& name)
{
    check_curated(name);
    if (name == "aim-big")
        return curated::aim_big_grid(10);
    if (name == "leximin-proof-game")
        return curated::leximin_proof_game();
    if (name == "dominant-leximin")
        return curated::dominant_leximin();
    if (name == "minmaxreg-safety")
        return curated::minmaxreg_safety();
    if (name == "safety-not-leximin")
        return curated::safety_not_leximin();
    if (name == "safety-wrong-monotone")
        return curated::safety_wrong_monotone();
    return std::nullopt;
}

inline std::optional<vcg::ExampleInstance> curated_example(const std::string& name, const Rational& eps)
{
    if (name == "example-e1")
        return vcg::build_example_e1(eps);
    if (name == "example-e2")
        return vcg::build_example_e2(eps);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parameter records

namespace detail {

inline Rational get_rational(const Json& p, const char* key, const std::string& where)
{
    return rational_from_json(require(p, key, where));
}

inline std::optional<Rational> opt_rational(const Json& p, const char* key)
{
    if (!p.contains(key))
        return std::nullopt;
    return rational_from_json(p[key]);
}

inline std::int64_t get_int(const Json& p, const char* key, const std::string& where)
{
    const Json& x = require(p, key, where);
    if (!x.is_number_integer())
        throw ParseError("'" + std::string(key) + "' in " + where + " must be an integer");
    return x.get<std::int64_t>();
}

inline std::vector<std::string> labels(const std::vector<std::string>& names, const std::vector<std::size_t>& idx)
{
    std::vector<std::string> out;
    for (auto a : idx)
        out.push_back(names[a]);
    return out;
}

inline Json rationals(const std::vector<Rational>& xs)
{
    Json out = Json::array();
    for (const auto& x : xs)
        out.push_back(x.str());
    return out;
}

inline Json optional_label(const std::vector<std::string>& names, const std::optional<std::size_t>& i)
{
    return i ? Json(names[*i]) : Json(nullptr);
}

} // namespace detail

inline DfpaSpec dfpa_spec_from_json(const Json& p)
{
    const std::string where = "auction parameters";
    reject_unknown_keys(p, {"value", "epsilon", "cap"}, where);
    auto spec = DfpaSpec::with_default_cap(detail::get_rational(p, "value", where),
                                           detail::get_rational(p, "epsilon", where));
    if (auto cap = detail::opt_rational(p, "cap"))
        spec.nature_bid_cap = *cap;
    spec.validate();
    return spec;
}

inline FacilitySpec facility_spec_from_json(const Json& p)
{
    const std::string where = "facility parameters";
    reject_unknown_keys(p, {"agents", "type", "step"}, where);
    FacilitySpec s{detail::get_int(p, "agents", where), detail::get_rational(p, "type", where),
                   detail::opt_rational(p, "step").value_or(Rational(1, 10))};
    s.validate();
    return s;
}

/// Voting parameters: "utilities" plus either "rule" (plurality or approval)
/// or explicit "ballots"; optional "tally_cap".
inline PsrSpec psr_spec_from_json(const Json& p)
{
    const std::string where = "voting parameters";
    reject_unknown_keys(p, {"rule", "ballots", "utilities", "tally_cap"}, where);
    PsrSpec s;
    s.utilities = vcg::rationals_from_json(require(p, "utilities", where), "'utilities'");
    const std::size_t n = s.utilities.size();
    if (p.contains("rule") == p.contains("ballots"))
        throw ParseError("voting parameters need exactly one of 'rule' and 'ballots'");
    if (p.contains("rule")) {
        const auto rule = p["rule"].get<std::string>();
        if (rule == "plurality")
            s.ballots = plurality_ballots(n);
        else if (rule == "approval")
            s.ballots = approval_ballots(n);
        else
            throw ValidationError("unknown voting rule '" + rule + "' (expected plurality or approval)");
    } else {
        for (const auto& b : p["ballots"]) {
            if (!b.is_array())
                throw ParseError("every ballot must be an array of scores");
            Ballot x;
            for (const auto& v : b) {
                if (!v.is_number_integer())
                    throw ParseError("ballot scores must be integers");
                x.push_back(v.get<std::int64_t>());
            }
            s.ballots.push_back(std::move(x));
        }
    }
    if (p.contains("tally_cap"))
        s.tally_cap = detail::get_int(p, "tally_cap", where);
    s.validate();
    return s;
}

inline bool is_plurality(const PsrSpec& s) { return s.ballots == plurality_ballots(s.candidates()); }
inline bool is_approval(const PsrSpec& s) { return s.ballots == approval_ballots(s.candidates()); }

struct VcgScenario {
    vcg::VcgInstance instance;
    vcg::PaymentRule rule = vcg::PaymentRule::ClarkePivot;
};

/// VCG parameters: {"instance": {...}} or {"curated": "example-e1",
/// "epsilon": "1/10", "truthful": false}, plus an optional "payment_rule".
inline VcgScenario vcg_scenario_from_json(const Json& p)
{
    const std::string where = "vcg parameters";
    reject_unknown_keys(p, {"instance", "curated", "epsilon", "truthful", "payment_rule"}, where);
    VcgScenario s;
    if (p.contains("payment_rule"))
        s.rule = vcg::payment_rule_from_name(p["payment_rule"].get<std::string>());
    if (p.contains("instance") == p.contains("curated"))
        throw ParseError("vcg parameters need exactly one of 'instance' and 'curated'");
    if (p.contains("instance")) {
        if (p.contains("epsilon") || p.contains("truthful"))
            throw ParseError("'epsilon' and 'truthful' apply to curated examples only");
        s.instance = vcg::instance_from_json(p["instance"]);
        return s;
    }
    const auto name = p["curated"].get<std::string>();
    check_curated(name);
    const Rational eps = detail::opt_rational(p, "epsilon").value_or(Rational(1, 10));
    const auto e = curated_example(name, eps);
    if (!e)
        throw ValidationError("curated example '" + name + "' is not a VCG instance");
    const bool truthful = p.contains("truthful") && p["truthful"].get<bool>();
    s.instance = vcg::instance_from_example(*e, !truthful);
    if (e->nature_bid)
        s.instance.agents.push_back(vcg::SybilProfile::truthful("nature", *e->nature_bid));
    return s;
}

/// The finite game a scenario describes, if any.
inline std::optional<AgentGame> scenario_game(const Scenario& s)
{
    switch (s.kind) {
    case ScenarioKind::RawGame: return game_from_json(s.parameters);
    case ScenarioKind::Dfpa: return dfpa_game(dfpa_spec_from_json(s.parameters));
    case ScenarioKind::AllPay: return all_pay_game(dfpa_spec_from_json(s.parameters));
    case ScenarioKind::Facility: return facility_game(facility_spec_from_json(s.parameters));
    case ScenarioKind::Voting: return psr_game(psr_spec_from_json(s.parameters)).game;
    case ScenarioKind::Curated: {
        reject_unknown_keys(s.parameters, {"name", "epsilon"}, "curated parameters");
        return curated_game(require(s.parameters, "name", "curated parameters").get<std::string>());
    }
    case ScenarioKind::FpaWitness:
    case ScenarioKind::Vcg: break;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const AgentGame& g, const Witness& w)
{
    return Json{{"action", g.actions()[w.action]},
                {"rival", detail::optional_label(g.actions(), w.rival)},
                {"action_state", detail::optional_label(g.states(), w.action_state)},
                {"rival_state", detail::optional_label(g.states(), w.rival_state)},
                {"action_value", w.action_value.str()},
                {"rival_value", w.rival_value.str()},
                {"rank", w.rank}};
}

inline Json to_json(const AgentGame& g, const ConceptVerdict& v)
{
    Json witnesses = Json::array();
    for (const auto& w : v.witnesses)
        witnesses.push_back(to_json(g, w));
    return Json{{"actions", v.labels(g)}, {"witnesses", std::move(witnesses)}};
}

inline std::vector<Concept> requested_concepts(const std::vector<std::string>& names)
{
    std::vector<Concept> out;
    if (names.empty() || std::find(names.begin(), names.end(), "all") != names.end())
        return {all_concepts.begin(), all_concepts.end()};
    for (const auto& n : names)
        if (n != "mixed-safety-level")
            out.push_back(concept_from_name(n));
    return out;
}

inline bool wants_mixed(const std::vector<std::string>& names)
{
    return std::find(names.begin(), names.end(), "mixed-safety-level") != names.end();
}

/// Game document, requested verdicts with witnesses and, when every concept
/// is requested, the inclusion checks.
inline Json analyze_game(const AgentGame& g, const std::vector<std::string>& concepts)
{
    const auto wanted = requested_concepts(concepts);
    Json verdicts = Json::object();
    for (auto c : wanted)
        verdicts[std::string(concept_name(c))] = to_json(g, compute(g, c));
    Json out{{"game", to_json(g)}, {"verdicts", std::move(verdicts)}};
    if (wanted.size() == all_concepts.size()) {
        const auto r = hierarchy_report(g);
        Json inc = Json::array(), non = Json::array();
        for (const auto& i : r.inclusions)
            inc.push_back(Json{{"subset", std::string(concept_name(i.subset))},
                               {"superset", std::string(concept_name(i.superset))},
                               {"holds", i.holds}});
        for (const auto& i : r.non_inclusions)
            non.push_back(Json{{"subset", std::string(concept_name(i.subset))},
                               {"superset", std::string(concept_name(i.superset))}});
        out["inclusions"] = std::move(inc);
        out["non_inclusions"] = std::move(non);
    }
    if (wants_mixed(concepts)) {
        const auto m = mixed_max_min(g);
        Json p = Json::object();
        for (std::size_t a = 0; a < g.action_count(); ++a)
            p[g.actions()[a]] = m.strategy[a].str();
        out["mixed_safety_level"] = Json{{"value", m.value.str()}, {"strategy", std::move(p)}};
    }
    return out;
}

struct Report {
    Json doc;
    int status = 0; // 0, or 5 when a checked property fails
    std::string csv; // overrides the generic CSV rendering when set
};

inline Json to_json(const FpaWitness& w, bool holds)
{
    return Json{{"value", w.value.str()},       {"bid", w.bid.str()},
                {"deviation", w.deviation.str()}, {"state", w.state.str()},
                {"bid_min", w.bid_min.str()},   {"deviation_min", w.deviation_min.str()},
                {"holds", holds}};
}

inline std::vector<Rational> fpa_probes(const Rational& v)
{
    std::vector<Rational> probes;
    for (std::int64_t k = 0; k <= 400; ++k)
        probes.push_back(v * Rational(k, 300));
    return probes;
}

inline Report run_fpa_witness(const Json& p)
{
    const std::string where = "fpa-witness parameters";
    reject_unknown_keys(p, {"value", "bids"}, where);
    const Rational v = detail::get_rational(p, "value", where);
    std::vector<Rational> bids = p.contains("bids") ? vcg::rationals_from_json(p["bids"], "'bids'")
                                                    : std::vector<Rational>{Rational(0), v / Rational(2), v};
    const auto probes = fpa_probes(v);
    Report r;
    Json ws = Json::array();
    for (const auto& b : bids) {
        const auto w = fpa_no_loss_averse_witness(v, b);
        const bool holds = fpa_witness_holds(w, probes);
        if (!holds)
            r.status = ConsistencyError("").exit_code();
        ws.push_back(to_json(w, holds));
    }
    r.doc = Json{{"witnesses", std::move(ws)}};
    return r;
}

inline Report run_vcg_outcome(const VcgScenario& s, std::size_t budget)
{
    const auto o = vcg::run_vcg(s.instance.agents, s.instance.items(), s.rule, budget);
    Report r;
    r.doc = Json{{"instance", vcg::to_json(s.instance)}, {"outcome", vcg::outcome_to_json(s.instance, o, s.rule)}};
    r.csv = vcg::outcome_to_csv(s.instance, o);
    return r;
}

struct RunOptions {
    std::size_t budget = vcg::default_assignment_budget;
};

inline Report run_scenario(const Scenario& s, const RunOptions& opt = {})
{
    Report r;
    const Json& p = s.parameters;
    switch (s.kind) {
    case ScenarioKind::Vcg:
        r = run_vcg_outcome(vcg_scenario_from_json(p), opt.budget);
        break;
    case ScenarioKind::FpaWitness:
        r = run_fpa_witness(p);
        break;
    case ScenarioKind::Curated: {
        reject_unknown_keys(p, {"name", "epsilon"}, "curated parameters");
        const auto name = require(p, "name", "curated parameters").get<std::string>();
        check_curated(name);
        if (curated_example(name, Rational(1, 10))) {
            Json q{{"curated", name}};
            if (p.contains("epsilon"))
                q["epsilon"] = p["epsilon"];
            r = run_vcg_outcome(vcg_scenario_from_json(q), opt.budget);
            break;
        }
        r.doc = analyze_game(*curated_game(name), s.concepts);
        if (name == "aim-big") {
            const auto cg = aim_big();
            r.doc["continuum"] = Json{{"actions", cg.actions()},
                                      {"loss-averse", detail::labels(cg.actions(), continuum_loss_averse(cg))},
                                      {"loss-averse-star",
                                       detail::labels(cg.actions(), continuum_loss_averse_star(cg))}};
        }
        break;
    }
    default: {
        const auto g = *scenario_game(s);
        r.doc = analyze_game(g, s.concepts);
        if (s.kind == ScenarioKind::Dfpa || s.kind == ScenarioKind::AllPay) {
            const auto spec = dfpa_spec_from_json(p);
            Json cf = Json::object();
            if (s.kind == ScenarioKind::Dfpa) {
                cf["loss_averse_bid"] = dfpa_loss_averse_bid(spec.value, spec.epsilon).str();
                cf["min_max_regret_bid"] = dfpa_min_max_regret_bid(spec.value, spec.epsilon).str();
            } else {
                cf["loss_averse_bid"] = all_pay_loss_averse_bid(spec.value).str();
            }
            r.doc["closed_form"] = std::move(cf);
        } else if (s.kind == ScenarioKind::Facility) {
            const auto spec = facility_spec_from_json(p);
            const auto demo = facility_welfare_loss_demo(spec.agents);
            r.doc["closed_form"] = Json{{"loss_averse_report", facility_loss_averse_report(spec.type, spec.agents).str()},
                                        {"welfare_loss_demo",
                                         Json{{"type", demo.type.str()},
                                              {"facility", demo.facility.str()},
                                              {"loss", demo.loss.str()}}}};
        } else if (s.kind == ScenarioKind::Voting) {
            const auto spec = psr_spec_from_json(p);
            const auto pg = psr_game(spec);
            Json cf{{"pareto_frontier_loss_averse", detail::labels(g.actions(), voting_pareto_frontier_loss_averse(spec))}};
            if (is_plurality(spec)) {
                cf["plurality_mixed_loss_averse"] = detail::rationals(plurality_mixed_loss_averse(spec.utilities));
                cf["plurality_normalizer"] = plurality_normalizer(spec.utilities).str();
                const auto mmr = plurality_min_max_regret(spec.utilities);
                cf["plurality_min_max_regret"] =
                    Json{{"ballot", g.actions()[mmr.ballot]}, {"max_regret", mmr.max_regret.str()}};
            }
            if (is_approval(spec)) {
                const auto t = approval_min_max_regret_top_k(spec.utilities);
                cf["approval_top_k"] = Json{{"k", t.k}, {"regrets", detail::rationals(t.regrets)}};
            }
            r.doc["closed_form"] = std::move(cf);
            r.doc["warnings"] = pg.warnings;
        }
        break;
    }
    }
    Json doc{{"scenario", to_json(s)}};
    for (auto it = r.doc.begin(); it != r.doc.end(); ++it)
        doc[it.key()] = it.value();
    r.doc = std::move(doc);
    return r;
}

// ---------------------------------------------------------------------------
// VCG attack reports

inline std::size_t attacker_index(const vcg::VcgInstance& x, const std::optional<std::string>& name)
{
    for (std::size_t i = 0; i < x.agents.size(); ++i)
        if (name ? x.agents[i].name == *name : x.agents[i].bids.size() > 1)
            return i;
    if (name)
        throw LookupError("no agent named '" + *name + "'");
    return 0;
}

inline Json classification_to_json(const vcg::VcgInstance& x, std::size_t i)
{
    const auto& a = x.agents[i];
    const auto c = vcg::classify_attack(a.valuation, a.bids);
    Json best = Json::object();
    for (vcg::Bundle b = 1; b <= vcg::full_bundle(x.items()); ++b)
        best[vcg::bundle_str(b, x.item_names)] =
            Json{{"value", a.valuation(b).str()}, {"best_partition", c.best[b].str()}};
    return Json{{"agent", a.name},
                {"kind", std::string(vcg::attack_kind_name(c.kind))},
                {"witness", c.witness ? Json(vcg::bundle_str(*c.witness, x.item_names)) : Json(nullptr)},
                {"bundles", std::move(best)}};
}

inline Report run_classify(const vcg::VcgInstance& x)
{
    Json agents = Json::array();
    for (std::size_t i = 0; i < x.agents.size(); ++i)
        agents.push_back(classification_to_json(x, i));
    return {Json{{"instance", vcg::to_json(x)}, {"classifications", std::move(agents)}}, 0, {}};
}

/// Number of additive nature states, saturating just above `limit`.
inline std::size_t additive_family_size(std::size_t m, const Rational& step, const Rational& cap, std::size_t limit)
{
    const Rational levels = vcg::floor_multiple(cap, step) / step + Rational(1);
    const auto per = static_cast<std::size_t>(levels.gmp().get_num().get_ui());
    std::size_t n = 1;
    for (std::size_t g = 0; g < m; ++g) {
        if (n > limit / per)
            return limit + 1;
        n *= per;
    }
    return n;
}

/// Nature's counter-move for one agent's attack: the overbidding or
/// underbidding adversary, or the truthful certificate for exact bidding.
/// A failed construction sets status 5 and keeps the full witness.
inline Report run_adversary(const vcg::VcgInstance& x, const std::optional<std::string>& agent, vcg::PaymentRule rule,
                            std::size_t family_budget)
{
    const std::size_t i = attacker_index(x, agent);
    const auto& a = x.agents[i];
    const auto grid = x.grid();
    const auto c = vcg::classify_attack(a.valuation, a.bids);
    Report r;
    r.doc = Json{{"instance", vcg::to_json(x)},
                 {"payment_rule", std::string(vcg::payment_rule_name(rule))},
                 {"classification", classification_to_json(x, i)}};
    const auto bad = ConsistencyError("").exit_code();
    if (c.kind != vcg::AttackKind::ExactBidding) {
        const auto adv = c.kind == vcg::AttackKind::Overbidding
                             ? vcg::overbidding_adversary(a.valuation, a.bids, grid, rule)
                             : vcg::underbidding_adversary(a.valuation, a.bids, grid, rule);
        r.doc["adversary"] = Json{{"bundle", vcg::bundle_str(adv.bundle, x.item_names)},
                                  {"blocking", adv.blocking.str()},
                                  {"tilde", adv.tilde.str()},
                                  {"on_grid", adv.on_grid},
                                  {"nature_bid", vcg::to_json(adv.bid, x.item_names)},
                                  {"attack_utility", adv.attack_utility.str()},
                                  {"truth_utility", adv.truth_utility.str()},
                                  {"bundles_tried", adv.tried},
                                  {"succeeded", adv.succeeded}};
        if (!adv.succeeded)
            r.status = bad;
        return r;
    }
    Rational cap;
    for (vcg::Bundle b = 1; b <= vcg::full_bundle(x.items()); ++b)
        cap = max(cap, a.valuation(b));
    const Rational step = grid.epsilon / Rational(2), top = cap + grid.epsilon;
    const auto size = additive_family_size(x.items(), step, top, family_budget);
    if (size > family_budget)
        throw CapacityError("nature family of " + std::to_string(size) + " states exceeds the budget of " +
                            std::to_string(family_budget));
    const auto family = vcg::additive_nature_family<Rational>(x.items(), step, top);
    const auto w = vcg::truth_loss_averse_witnesses(a.valuation, a.bids, grid, family, rule);
    Json split = Json::array();
    for (auto b : w.split)
        split.push_back(vcg::bundle_str(b, x.item_names));
    r.doc["truth_witness"] =
        Json{{"case", w.which == vcg::TruthCase::NoSingleBid ? "no-single-bid" : "single-bid-covers"},
             {"bundle", vcg::bundle_str(w.bundle, x.item_names)},
             {"split", std::move(split)},
             {"nature_bid", w.nature_bid ? vcg::to_json(*w.nature_bid, x.item_names) : Json(nullptr)},
             {"attack_utility", w.attack_utility.str()},
             {"truth_utility", w.truth_utility.str()},
             {"gap", w.gap.str()},
             {"states_checked", w.states_checked},
             {"dominance_violations", w.dominance_violations},
             {"fragmented_wins", w.fragmented_wins},
             {"succeeded", w.succeeded}};
    if (!w.succeeded)
        r.status = bad;
    return r;
}

inline Json to_json(const vcg::TheoremReport& t)
{
    return Json{{"instances", t.instances},
                {"overbidding", t.overbidding},
                {"underbidding", t.underbidding},
                {"exact", t.exact},
                {"nature_states", t.nature_states},
                {"claim1", Json{{"ok", t.claim1_ok()},
                                {"failures", t.claim1_failures},
                                {"searched", t.claim1_searched},
                                {"truth_negative", t.truth_negative},
                                {"unrefuted", t.claim1_unrefuted}}},
                {"claim2", Json{{"ok", t.claim2_ok()},
                                {"failures", t.claim2_failures},
                                {"searched", t.claim2_searched},
                                {"reversals", t.claim2_reversals},
                                {"pair_missing", t.claim2_pair_missing},
                                {"unrefuted", t.claim2_unrefuted},
                                {"below_bound", t.claim2_below_bound},
                                {"off_grid", t.off_grid}}},
                {"claim3", Json{{"ok", t.claim3_ok()},
                                {"profiles", t.claim3_profiles},
                                {"violations", t.claim3_violations}}},
                {"claim4", Json{{"ok", t.claim4_ok()},
                                {"case1", t.claim4_case1},
                                {"case2", t.claim4_case2},
                                {"failures", t.claim4_failures},
                                {"refuted", t.claim4_refuted}}},
                {"failures", t.failures}};
}

struct TheoremRequest {
    std::size_t items = 1;
    std::size_t random = 0; // > 0 selects the random suite on `items` items
    std::uint64_t seed = 20240601;
    Rational epsilon = Rational(1);
    Rational value_cap = Rational(2);
    std::size_t budget = vcg::default_assignment_budget;
};

inline Report run_verify_theorem(const TheoremRequest& q, double* seconds = nullptr)
{
    vcg::TheoremReport t;
    Json params{{"items", q.items}, {"epsilon", q.epsilon.str()}, {"value_cap", q.value_cap.str()}};
    if (q.random > 0) {
        t = vcg::random_theorem_suite(q.random, q.seed, q.items, q.epsilon, q.value_cap);
        params["random"] = q.random;
        params["seed"] = q.seed;
    } else {
        vcg::EnumerationParams p;
        p.items = q.items;
        p.epsilon = q.epsilon;
        p.value_cap = q.value_cap;
        p.budget = q.budget;
        t = vcg::exhaustive_theorem_suite(p);
        params["exhaustive"] = true;
    }
    if (seconds)
        *seconds = t.seconds;
    Report r{Json{{"parameters", std::move(params)}, {"report", to_json(t)}}, 0, {}};
    if (!(t.claim1_ok() && t.claim2_ok() && t.claim3_ok() && t.claim4_ok()))
        r.status = ConsistencyError("").exit_code();
    return r;
}

// ---------------------------------------------------------------------------
// Acceptance

/// "default" or "tiny"; tiny shrinks every batch and skips the m=2 enumeration.
inline acceptance::Options acceptance_options(const std::string& budget, std::optional<std::uint64_t> seed)
{
    acceptance::Options o;
    if (budget == "tiny") {
        o.hierarchy_games = 100;
        o.dominated_games = 50;
        o.theorem_random = 50;
        o.theorem_exhaustive_m2 = false;
        o.vcg_oracle_random = 50;
        o.vcg_oracle_stride = 9973;
    } else if (budget != "default") {
        throw ValidationError("unknown verify-all budget '" + budget + "' (expected default or tiny)");
    }
    if (seed) {
        o.hierarchy_seed = *seed;
        o.dominated_seed = *seed + 1;
        o.collapse_seed = *seed + 2;
        o.theorem_seed = *seed + 3;
        o.vcg_oracle_seed = *seed + 4;
    }
    return o;
}

inline Json to_json(const std::vector<acceptance::Criterion>& cs)
{
    Json out = Json::array();
    for (const auto& c : cs)
        out.push_back(Json{{"id", c.id},
                           {"title", c.title},
                           {"passed", c.passed()},
                           {"seconds", c.seconds},
                           {"limit_seconds", c.limit_seconds},
                           {"details", c.details}});
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline bool looks_fractional(const std::string& s)
{
    if (s.find('/') == std::string::npos)
        return false;
    try {
        Rational::parse(s);
        return true;
    } catch (const Error&) {
        return false;
    }
}

inline Json decimal_copy(const Json& j, int digits)
{
    if (j.is_string() && looks_fractional(j.get<std::string>()))
        return Rational::parse(j.get<std::string>()).decimal(digits);
    if (j.is_object()) {
        Json out = Json::object();
        for (auto it = j.begin(); it != j.end(); ++it)
            out[it.key()] = decimal_copy(it.value(), digits);
        return out;
    }
    if (j.is_array()) {
        Json out = Json::array();
        for (const auto& x : j)
            out.push_back(decimal_copy(x, digits));
        return out;
    }
    return j;
}

inline void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
        return;
    }
    if (j.is_array()) {
        if (j.empty())
            out.emplace_back(path, "[]");
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], path + "." + std::to_string(i), out);
        return;
    }
    out.emplace_back(path, j.is_string() ? j.get<std::string>() : j.dump());
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

inline std::string pad(const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); }

inline std::string grid(const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            width.resize(std::max(width.size(), r.size()));
            width[i] = std::max(width[i], r[i].size());
        }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i)
            line += (i ? "  " : "") + (i + 1 < r.size() ? pad(r[i], width[i]) : r[i]);
        out += line + "\n";
    }
    return out;
}

inline std::string set_text(const Json& labels)
{
    std::string out = "{";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out += (i ? ", " : "") + labels[i].get<std::string>();
    return out + "}";
}

inline std::string scalar(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

/// Game matrix, one line per verdict, then any closed forms.
inline std::string analysis_table(const Json& doc)
{
    const Json& game = doc["game"];
    std::vector<std::vector<std::string>> rows{{game["type"].get<std::string>()}};
    for (const auto& s : game["states"])
        rows[0].push_back(s.get<std::string>());
    for (std::size_t a = 0; a < game["actions"].size(); ++a) {
        std::vector<std::string> r{game["actions"][a].get<std::string>()};
        for (const auto& x : game["utilities"][a])
            r.push_back(x.get<std::string>());
        rows.push_back(std::move(r));
    }
    std::string out = grid(rows) + "\n";
    std::vector<std::vector<std::string>> lines;
    for (auto it = doc["verdicts"].begin(); it != doc["verdicts"].end(); ++it)
        lines.push_back({it.key(), set_text(it.value()["actions"])});
    if (doc.contains("inclusions"))
        for (const auto& i : doc["inclusions"])
            lines.push_back({"inclusion", i["subset"].get<std::string>() + " in " + i["superset"].get<std::string>() +
                                              (i["holds"].get<bool>() ? " holds" : " FAILS")});
    if (doc.contains("mixed_safety_level")) {
        const Json& m = doc["mixed_safety_level"];
        std::string p;
        for (auto it = m["strategy"].begin(); it != m["strategy"].end(); ++it)
            p += (p.empty() ? "" : ", ") + it.key() + ": " + it.value().get<std::string>();
        lines.push_back({"mixed-safety-level", m["value"].get<std::string>() + " at {" + p + "}"});
    }
    for (const char* key : {"closed_form", "continuum"})
        if (doc.contains(key)) {
            std::vector<std::pair<std::string, std::string>> flat;
            flatten(doc[key], std::string(key), flat);
            for (const auto& [k, v] : flat)
                lines.push_back({k, v});
        }
    return out + grid(lines);
}

inline std::string outcome_table(const Json& doc)
{
    const Json& o = doc["outcome"];
    std::vector<std::vector<std::string>> bids{{"bid", "agent", "bundle", "payment"}};
    for (const auto& b : o["bids"])
        bids.push_back({scalar(b["bid"]), scalar(b["agent"]), scalar(b["bundle"]), scalar(b["payment"])});
    std::vector<std::vector<std::string>> agents{{"agent", "bundle", "value", "payment", "utility"}};
    for (const auto& a : o["agents"])
        agents.push_back(
            {scalar(a["name"]), scalar(a["bundle"]), scalar(a["value"]), scalar(a["payment"]), scalar(a["utility"])});
    return "payment rule " + scalar(o["payment_rule"]) + "\n\n" + grid(bids) + "\n" + grid(agents) + "\n" +
           grid({{"observed welfare", scalar(o["observed_welfare"])}, {"real welfare", scalar(o["real_welfare"])}});
}

} // namespace detail

/// JSON, flattened "path,value" CSV, or an aligned table. With `decimal`
/// set, rounded values are added and marked non-authoritative.
inline std::string render(const Report& r, Format f, std::optional<int> decimal)
{
    if (f == Format::Json) {
        Json doc = r.doc;
        if (decimal)
            doc["decimal_non_authoritative"] = detail::decimal_copy(r.doc, *decimal);
        return dump(doc);
    }
    if (f == Format::Csv && !r.csv.empty() && !decimal)
        return r.csv;
    std::vector<std::pair<std::string, std::string>> rows;
    detail::flatten(r.doc, "", rows);
    auto approx = [&](const std::string& v) {
        return decimal && detail::looks_fractional(v) ? Rational::parse(v).decimal(*decimal) : std::string();
    };
    std::string out;
    if (f == Format::Csv) {
        out = decimal ? "path,value,decimal_non_authoritative\n" : "path,value\n";
        for (const auto& [k, v] : rows)
            out += detail::csv_field(k) + "," + detail::csv_field(v) + (decimal ? "," + approx(v) : "") + "\n";
        return out;
    }
    if (!decimal && r.doc.contains("game") && r.doc.contains("verdicts"))
        return detail::analysis_table(r.doc);
    if (!decimal && r.doc.contains("outcome") && r.doc["outcome"].contains("bids"))
        return detail::outcome_table(r.doc);
    std::size_t width = 0;
    for (const auto& [k, v] : rows)
        width = std::max(width, k.size());
    for (const auto& [k, v] : rows) {
        out += k + std::string(width - k.size() + 2, ' ') + v;
        if (const auto d = approx(v); !d.empty())
            out += "  (~" + d + ", non-authoritative)";
        out += "\n";
    }
    return out;
}

inline std::string render_acceptance_table(const std::vector<acceptance::Criterion>& cs)
{
    std::string out;
    std::size_t failed = 0;
    for (const auto& c : cs) {
        out += acceptance::format_line(c) + "\n";
        for (const auto& d : c.details)
            out += "        " + d + "\n";
        failed += !c.passed();
    }
    out += std::to_string(cs.size() - failed) + " passed, " + std::to_string(failed) + " failed\n";
    return out;
}

/// Writes via a temporary file and a rename so readers never see a partial
/// document.
inline void write_atomically(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ValidationError("cannot write '" + tmp.string() + "'");
        out << text;
        if (!out.flush())
            throw ValidationError("cannot write '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

/// --out wins; otherwise the output directory variable selects
/// <dir>/<default_name>; otherwise stdout (empty result).
inline std::optional<std::filesystem::path> output_path(const std::string& out, const std::string& default_name)
{
    if (!out.empty())
        return std::filesystem::path(out);
    if (const char* dir = std::getenv(output_dir_variable); dir && *dir)
        return std::filesystem::path(dir) / default_name;
    return std::nullopt;
}

} // namespace lossaverse::cli
