#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lossaverse/cli.hpp"

using namespace lossaverse;
using namespace lossaverse::cli;

namespace {

struct Globals {
    std::string format;
    std::string out;
    std::optional<int> decimal;
    std::optional<std::uint64_t> seed;
    std::string budget;
};

std::size_t budget_number(const Globals& g, std::size_t fallback)
{
    if (g.budget.empty())
        return fallback;
    try {
        std::size_t used = 0;
        const auto n = std::stoull(g.budget, &used);
        if (used == g.budget.size() && n > 0)
            return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw ValidationError("--budget must be a positive integer here, got '" + g.budget + "'");
}

Format pick_format(const Globals& g, const std::optional<std::string>& scenario_format, Format fallback)
{
    if (!g.format.empty())
        return format_from_name(g.format);
    if (scenario_format)
        return format_from_name(*scenario_format);
    return fallback;
}

std::string extension(Format f) { return f == Format::Json ? ".json" : f == Format::Csv ? ".csv" : ".txt"; }

void emit(const Globals& g, const std::string& name, Format f, const std::string& text)
{
    if (const auto path = output_path(g.out, name + extension(f)))
        write_atomically(*path, text);
    else
        std::cout << text << std::flush;
}

int finish(const Globals& g, const std::string& name, const std::vector<Report>& reports, Format f)
{
    std::string text;
    int status = 0;
    if (reports.size() == 1 || f != Format::Json) {
        for (const auto& r : reports)
            text += render(r, f, g.decimal);
    } else {
        Report all{Json::array(), 0, {}};
        for (const auto& r : reports)
            all.doc.push_back(r.doc);
        text = render(all, f, g.decimal);
    }
    for (const auto& r : reports)
        status = std::max(status, r.status);
    emit(g, name, f, text);
    if (status != 0)
        std::cerr << "internal-consistency: a checked property failed; the report above carries the witness\n";
    return status;
}

vcg::VcgInstance vcg_instance(const std::string& instance, const std::string& curated,
                              const std::optional<std::string>& eps, bool truthful, vcg::PaymentRule* rule)
{
    Json p;
    if (!instance.empty() && !curated.empty())
        throw ValidationError("give either --instance or --curated");
    if (!instance.empty()) {
        p["instance"] = parse_json(read_file(instance));
        if (eps || truthful)
            throw ValidationError("--epsilon and --truthful apply to curated examples only");
    } else if (!curated.empty()) {
        p["curated"] = curated;
        if (eps)
            p["epsilon"] = *eps;
        if (truthful)
            p["truthful"] = true;
    } else {
        throw ValidationError("give --instance FILE or --curated NAME");
    }
    auto s = vcg_scenario_from_json(p);
    if (rule)
        *rule = s.rule;
    return s.instance;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact loss-aversion analysis of agent-vs-nature games and mechanism testbeds"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--format", g.format, "Output format: json, csv or table");
    app.add_option("--out", g.out,
                   std::string("Output file (default: stdout, or a file under $") + output_dir_variable + ")");
    app.add_option("--decimal", g.decimal, "Add rounded values with this many digits (non-authoritative)")
        ->check(CLI::Range(0, 40));
    app.add_option("--seed", g.seed, "Seed for random batches");
    app.add_option("--budget", g.budget, "Search budget (a count, or default|tiny for verify-all)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Compute solution concepts for a game or scenario");
    std::string game_file, curated_name;
    std::vector<std::string> scenario_files, concepts;
    analyze->add_option("--game", game_file, "Game document (JSON)");
    analyze->add_option("--scenario", scenario_files, "Scenario file(s); several run as a batch");
    analyze->add_option("--curated", curated_name, "Curated example name");
    analyze->add_option("--concepts", concepts, "Comma-separated concepts (default all)")->delimiter(',');

    // auction
    auto* auction = app.add_subcommand("auction", "Single-item auction games");
    auction->require_subcommand(1);
    std::string value, epsilon, cap;
    std::vector<std::string> fpa_bids;
    auto add_auction = [&](const char* name, const char* help) {
        auto* c = auction->add_subcommand(name, help);
        c->add_option("--value", value, "Agent value")->required();
        c->add_option("--concepts", concepts, "Comma-separated concepts (default all)")->delimiter(',');
        return c;
    };
    auto* dfpa = add_auction("dfpa", "Discrete first-price auction");
    dfpa->add_option("--epsilon", epsilon, "Bid grid step")->required();
    dfpa->add_option("--cap", cap, "Largest competing bid (default value + 2 epsilon)");
    auto* allpay = add_auction("allpay", "Discrete all-pay auction");
    allpay->add_option("--epsilon", epsilon, "Bid grid step")->required();
    allpay->add_option("--cap", cap, "Largest competing bid (default value + 2 epsilon)");
    auto* fpa = add_auction("fpa-witness", "Continuous first-price auction: witnesses that no bid is loss-averse");
    fpa->add_option("--bid", fpa_bids, "Bids to refute (default 0, v/2, v)");

    // vcg
    auto* vcgc = app.add_subcommand("vcg", "Combinatorial VCG under Sybil attacks");
    vcgc->require_subcommand(1);
    std::string instance_file, vcg_curated, rule_name, agent;
    std::optional<std::string> vcg_eps;
    bool truthful = false;
    auto add_vcg = [&](const char* name, const char* help) {
        auto* c = vcgc->add_subcommand(name, help);
        c->add_option("--instance", instance_file, "VCG instance document (JSON)");
        c->add_option("--curated", vcg_curated, "example-e1 or example-e2");
        c->add_option("--epsilon", vcg_eps, "Epsilon for a curated example (default 1/10)");
        c->add_flag("--truthful", truthful, "Use the truthful profile of a curated example");
        c->add_option("--payment-rule", rule_name, "literal or clarke (default clarke)")
            ->check(CLI::IsMember({"literal", "clarke"}));
        return c;
    };
    auto* vrun = add_vcg("run", "Winner determination and payments");
    auto* vclassify = add_vcg("classify", "Classify each agent's bids against its valuation");
    auto* vadv = add_vcg("adversary", "Nature's counter-move to one agent's attack");
    vadv->add_option("--agent", agent, "Attacking agent (default: first with several bids)");
    auto* vthm = vcgc->add_subcommand("verify-theorem", "Sybil property suite");
    TheoremRequest thm;
    std::string thm_eps = "1", thm_cap = "2";
    vthm->add_option("--items", thm.items, "Item count (exhaustive for 1 or 2)")->check(CLI::Range(1, 3));
    vthm->add_option("--random", thm.random, "Random instances instead of enumeration");
    vthm->add_option("--epsilon", thm_eps, "Valuation grid step");
    vthm->add_option("--value-cap", thm_cap, "Largest bundle value");

    // facility
    auto* fac = app.add_subcommand("facility", "Facility location with the mean rule");
    std::int64_t agents = 2;
    std::string type, step = "1/10";
    fac->add_option("--agents", agents, "Number of agents")->required();
    fac->add_option("--type", type, "Agent type in [0,1]")->required();
    fac->add_option("--step", step, "Report grid step (default 1/10)");
    fac->add_option("--concepts", concepts, "Comma-separated concepts (default all)")->delimiter(',');

    // voting
    auto* vote = app.add_subcommand("voting", "Positional scoring rules");
    std::string vrule = "plurality";
    std::vector<std::string> utilities;
    std::int64_t tally_cap = 0;
    vote->add_option("--rule", vrule, "plurality or approval")->check(CLI::IsMember({"plurality", "approval"}));
    vote->add_option("--utilities", utilities, "Comma-separated utilities from 1 down to 0")
        ->required()
        ->delimiter(',');
    vote->add_option("--cap", tally_cap, "Tally cap for the other voters (default 2 x max score)");
    vote->add_option("--concepts", concepts, "Comma-separated concepts (default all)")->delimiter(',');

    // verify-all
    auto* all = app.add_subcommand("verify-all", "Run the acceptance battery");
    std::vector<int> criteria;
    all->add_option("--criteria", criteria, "Comma-separated criterion numbers (default all)")->delimiter(',');

    // export
    auto* exp = app.add_subcommand("export", "Write the game or instance document a scenario describes");
    exp->add_option("--game", game_file, "Game document (JSON)");
    exp->add_option("--scenario", scenario_files, "Scenario file")->expected(0, 1);
    exp->add_option("--curated", curated_name, "Curated example name");
    exp->add_option("--epsilon", vcg_eps, "Epsilon for a curated VCG example (default 1/10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : ParseError("").exit_code();
    }

    try {
        auto run = [&] { return RunOptions{budget_number(g, vcg::default_assignment_budget)}; };
        auto one = [&](const Scenario& s, const std::string& name) {
            return finish(g, name, {run_scenario(s, run())}, pick_format(g, s.format, Format::Json));
        };
        auto with_concepts = [&](ScenarioKind k, Json p) {
            return Scenario{k, std::move(p), concepts, std::nullopt};
        };

        if (analyze->parsed()) {
            const int sources = !game_file.empty() + !scenario_files.empty() + !curated_name.empty();
            if (sources != 1)
                throw ValidationError("give exactly one of --game, --scenario or --curated");
            if (!game_file.empty())
                return one(with_concepts(ScenarioKind::RawGame, parse_json(read_file(game_file))), "analyze");
            if (!curated_name.empty()) {
                auto s = curated_scenario(curated_name);
                s.concepts = concepts;
                return one(s, "analyze-" + curated_name);
            }
            std::vector<Report> reports;
            std::optional<std::string> fmt;
            for (const auto& f : scenario_files) {
                auto s = load_scenario(f);
                if (!concepts.empty())
                    s.concepts = concepts;
                fmt = fmt ? fmt : s.format;
                reports.push_back(run_scenario(s, run()));
            }
            return finish(g, "analyze", reports, pick_format(g, fmt, Format::Json));
        }
        if (auction->parsed()) {
            if (fpa->parsed()) {
                Json p{{"value", value}};
                if (!fpa_bids.empty())
                    p["bids"] = fpa_bids;
                return one(with_concepts(ScenarioKind::FpaWitness, p), "auction-fpa-witness");
            }
            Json p{{"value", value}, {"epsilon", epsilon}};
            if (!cap.empty())
                p["cap"] = cap;
            if (dfpa->parsed())
                return one(with_concepts(ScenarioKind::Dfpa, p), "auction-dfpa");
            return one(with_concepts(ScenarioKind::AllPay, p), "auction-allpay");
        }
        if (vcgc->parsed()) {
            if (vthm->parsed()) {
                thm.epsilon = Rational::parse(thm_eps);
                thm.value_cap = Rational::parse(thm_cap);
                if (g.seed)
                    thm.seed = *g.seed;
                thm.budget = budget_number(g, vcg::default_assignment_budget);
                double seconds = 0;
                const auto r = run_verify_theorem(thm, &seconds);
                std::cerr << "verify-theorem: " << seconds << " s\n";
                return finish(g, "vcg-verify-theorem", {r}, pick_format(g, std::nullopt, Format::Json));
            }
            vcg::PaymentRule rule = vcg::PaymentRule::ClarkePivot;
            auto x = vcg_instance(instance_file, vcg_curated, vcg_eps, truthful, &rule);
            if (!rule_name.empty())
                rule = vcg::payment_rule_from_name(rule_name);
            const Format f = pick_format(g, std::nullopt, Format::Json);
            if (vrun->parsed())
                return finish(g, "vcg-run", {run_vcg_outcome({x, rule}, run().budget)}, f);
            if (vclassify->parsed())
                return finish(g, "vcg-classify", {run_classify(x)}, f);
            if (vadv->parsed())
                return finish(g, "vcg-adversary",
                              {run_adversary(x, agent.empty() ? std::nullopt : std::optional<std::string>(agent), rule,
                                             budget_number(g, 1'000'000))},
                              f);
        }
        if (fac->parsed())
            return one(with_concepts(ScenarioKind::Facility, Json{{"agents", agents}, {"type", type}, {"step", step}}),
                       "facility");
        if (vote->parsed()) {
            Json p{{"rule", vrule}, {"utilities", utilities}};
            if (tally_cap > 0)
                p["tally_cap"] = tally_cap;
            return one(with_concepts(ScenarioKind::Voting, p), "voting");
        }
        if (all->parsed()) {
            auto opt = acceptance_options(g.budget.empty() ? "default" : g.budget, g.seed);
            opt.only.insert(criteria.begin(), criteria.end());
            const Format f = pick_format(g, std::nullopt, Format::Table);
            const auto cs = acceptance::run(opt, [](const acceptance::Criterion& c) {
                std::cerr << acceptance::format_line(c) << "\n";
            });
            std::size_t failed = 0;
            for (const auto& c : cs)
                failed += !c.passed();
            Report r{Json{{"criteria", to_json(cs)}, {"passed", cs.size() - failed}, {"failed", failed}}, 0, {}};
            const std::string text = f == Format::Table ? render_acceptance_table(cs) : render(r, f, g.decimal);
            emit(g, "verify-all", f, text);
            return failed ? ConsistencyError("").exit_code() : 0;
        }
        if (exp->parsed()) {
            const int sources = !game_file.empty() + !scenario_files.empty() + !curated_name.empty();
            if (sources != 1)
                throw ValidationError("give exactly one of --game, --scenario or --curated");
            Scenario s;
            if (!game_file.empty())
                s = Scenario{ScenarioKind::RawGame, parse_json(read_file(game_file)), {}, std::nullopt};
            else if (!curated_name.empty())
                s = curated_scenario(curated_name);
            else
                s = load_scenario(scenario_files[0]);
            std::string text;
            const std::string name =
                s.kind == ScenarioKind::Curated ? require(s.parameters, "name", "curated parameters").get<std::string>()
                                                : std::string();
            if (!name.empty() && curated_example(name, Rational(1, 10))) {
                Json p{{"curated", name}};
                if (s.parameters.contains("epsilon"))
                    p["epsilon"] = s.parameters["epsilon"];
                if (vcg_eps)
                    p["epsilon"] = *vcg_eps;
                text = dump(vcg::to_json(vcg_scenario_from_json(p).instance));
            } else if (s.kind == ScenarioKind::Vcg) {
                text = dump(vcg::to_json(vcg_scenario_from_json(s.parameters).instance));
            } else if (const auto game = scenario_game(s)) {
                text = serialize(*game);
            } else {
                throw ValidationError("scenario kind '" + std::string(kind_name(s.kind)) +
                                      "' has no game or instance to export");
            }
            emit(g, "export", Format::Json, text);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ParseError("").exit_code();
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ValidationError("").exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ConsistencyError("").exit_code();
    }
    return 0;
}
