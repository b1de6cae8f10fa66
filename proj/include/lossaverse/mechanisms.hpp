#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lossaverse/concepts.hpp"
#include "lossaverse/game.hpp"

namespace lossaverse {

// ---------------------------------------------------------------------------
// Facility location, mean rule

struct FacilitySpec {
    std::int64_t agents = 2;
    Rational type;
    Rational step; // grid step for reports and for the sum of the others' reports

    void validate() const
    {
        if (agents < 2)
            throw ValidationError("facility location needs at least 2 agents");
        if (type.sign() < 0 || type > Rational(1))
            throw ValidationError("type " + type.str() + " outside [0,1]");
        if (step.sign() <= 0 || !(Rational(1) / step).is_integer())
            throw ValidationError("grid step " + step.str() + " must divide 1");
    }
};

inline Rational facility_loss_averse_report(const Rational& theta, std::int64_t n)
{
    if (theta.sign() < 0 || theta > Rational(1))
        throw ValidationError("type " + theta.str() + " outside [0,1]");
    if (n < 2)
        throw ValidationError("facility location needs at least 2 agents");
    const Rational half(1, 2), slack(1, 2 * n);
    if (theta < half - slack)
        return Rational(0);
    if (theta > half + slack)
        return Rational(1);
    return Rational(n) * theta - Rational(n - 1, 2);
}

/// Utility is minus the distance from the type to the mean of all reports.
inline AgentGame facility_game(const FacilitySpec& spec)
{
    spec.validate();
    std::vector<Rational> reports, sums;
    for (Rational r; r <= Rational(1); r += spec.step)
        reports.push_back(r);
    for (Rational s; s <= Rational(spec.agents - 1); s += spec.step)
        sums.push_back(s);
    std::vector<std::string> actions, states;
    for (const auto& r : reports)
        actions.push_back(r.str());
    for (const auto& s : sums)
        states.push_back("sum=" + s.str());
    const Rational n(spec.agents);
    return AgentGame::tabulate("facility(n=" + n.str() + ",theta=" + spec.type.str() + ")", std::move(actions),
                               std::move(states), [&](std::size_t a, std::size_t s) {
                                   return -(spec.type - (reports[a] + sums[s]) / n).abs();
                               });
}

struct WelfareLossDemo {
    std::int64_t agents = 0;
    Rational type;
    std::vector<Rational> reports;
    Rational facility;
    Rational loss;
};

/// All agents share the type 1/2 - 1/(2n), each reports its loss-averse
/// report, and the loss is measured against placing the facility at the type.
inline WelfareLossDemo facility_welfare_loss_demo(std::int64_t n)
{
    WelfareLossDemo d;
    d.agents = n;
    d.type = Rational(1, 2) - Rational(1, 2 * n);
    Rational total;
    for (std::int64_t i = 0; i < n; ++i) {
        d.reports.push_back(facility_loss_averse_report(d.type, n));
        total += d.reports.back();
    }
    d.facility = total / Rational(n);
    d.loss = Rational(n) * (d.type - d.facility).abs();
    return d;
}

// ---------------------------------------------------------------------------
// Positional scoring rules

using Ballot = std::vector<std::int64_t>;

struct PsrSpec {
    std::vector<Ballot> ballots;
    std::vector<Rational> utilities; // f_1 = 1 > ... > f_n = 0
    std::int64_t tally_cap = 0;      // 0 selects 2 * max score

    std::size_t candidates() const { return utilities.size(); }

    std::int64_t max_score() const
    {
        std::int64_t m = 0;
        for (const auto& b : ballots)
            for (auto x : b)
                m = std::max(m, x);
        return m;
    }

    std::int64_t effective_cap() const { return tally_cap > 0 ? tally_cap : 2 * max_score(); }

    void validate() const
    {
        const std::size_t n = candidates();
        if (n < 2)
            throw ValidationError("voting needs at least 2 candidates");
        if (utilities.front() != Rational(1) || utilities.back() != Rational(0))
            throw ValidationError("cardinal utilities must run from 1 down to 0");
        for (std::size_t j = 1; j < n; ++j)
            if (!(utilities[j] < utilities[j - 1]))
                throw ValidationError("cardinal utilities must be strictly decreasing");
        if (ballots.empty())
            throw ValidationError("no permissible ballots");
        for (const auto& b : ballots) {
            if (b.size() != n)
                throw ShapeError("ballot has " + std::to_string(b.size()) + " entries for " + std::to_string(n) +
                                 " candidates");
            for (auto x : b)
                if (x < 0)
                    throw ValidationError("negative score in ballot");
        }
    }
};

inline std::string ballot_label(const Ballot& b)
{
    std::string s = "(";
    for (std::size_t i = 0; i < b.size(); ++i)
        s += (i ? "," : "") + std::to_string(b[i]);
    return s + ")";
}

inline std::vector<Ballot> plurality_ballots(std::size_t n)
{
    std::vector<Ballot> out;
    for (std::size_t j = 0; j < n; ++j) {
        Ballot b(n, 0);
        b[j] = 1;
        out.push_back(b);
    }
    return out;
}

/// Every 0/1 vector, in binary counting order with candidate 1 as the most
/// significant digit, largest first.
inline std::vector<Ballot> approval_ballots(std::size_t n)
{
    std::vector<Ballot> out;
    for (std::int64_t code = (std::int64_t{1} << n) - 1; code >= 0; --code) {
        Ballot b(n);
        for (std::size_t j = 0; j < n; ++j)
            b[j] = (code >> (n - 1 - j)) & 1;
        out.push_back(b);
    }
    return out;
}

/// Highest total wins; ties go to the highest index (the worst candidate).
inline std::size_t psr_winner(const std::vector<std::int64_t>& totals)
{
    std::size_t w = 0;
    for (std::size_t j = 1; j < totals.size(); ++j)
        if (totals[j] >= totals[w])
            w = j;
    return w;
}

/// All tallies in {0..cap}^n, first candidate most significant.
inline std::vector<std::vector<std::int64_t>> all_tallies(std::size_t n, std::int64_t cap)
{
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> t(n, 0);
    while (true) {
        out.push_back(t);
        std::size_t i = n;
        while (i > 0 && t[i - 1] == cap)
            t[--i] = 0;
        if (i == 0)
            return out;
        ++t[i - 1];
    }
}

struct PsrGame {
    AgentGame game;
    std::vector<std::vector<std::int64_t>> tallies;
    std::vector<std::string> warnings;
};

inline PsrGame psr_game(const PsrSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.candidates();
    auto tallies = all_tallies(n, spec.effective_cap());
    std::vector<std::string> actions, states;
    for (const auto& b : spec.ballots)
        actions.push_back(ballot_label(b));
    for (const auto& t : tallies)
        states.push_back(ballot_label(t));
    auto game = AgentGame::tabulate("psr(n=" + std::to_string(n) + ")", std::move(actions), std::move(states),
                                    [&](std::size_t a, std::size_t s) {
                                        std::vector<std::int64_t> total = tallies[s];
                                        for (std::size_t j = 0; j < n; ++j)
                                            total[j] += spec.ballots[a][j];
                                        return spec.utilities[psr_winner(total)];
                                    });
    std::vector<std::string> warnings;
    if (spec.effective_cap() < spec.max_score())
        warnings.push_back("tally cap " + std::to_string(spec.effective_cap()) + " is below the max score " +
                           std::to_string(spec.max_score()) + "; pivotal states may be missing");
    return {std::move(game), std::move(tallies), std::move(warnings)};
}

/// Ballots whose image (v_j - v_n)_{j<n} is not Pareto dominated by another
/// ballot's image, in ballot order.
inline std::vector<std::size_t> voting_pareto_frontier_loss_averse(const PsrSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.candidates();
    auto image = [&](const Ballot& b) {
        std::vector<std::int64_t> x;
        for (std::size_t j = 0; j + 1 < n; ++j)
            x.push_back(b[j] - b[n - 1]);
        return x;
    };
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < spec.ballots.size(); ++a) {
        const auto x = image(spec.ballots[a]);
        bool dominated = false;
        for (std::size_t b = 0; b < spec.ballots.size() && !dominated; ++b) {
            const auto y = image(spec.ballots[b]);
            bool ge = true, gt = false;
            for (std::size_t j = 0; j < x.size(); ++j) {
                ge &= y[j] >= x[j];
                gt |= y[j] > x[j];
            }
            dominated = ge && gt;
        }
        if (!dominated)
            out.push_back(a);
    }
    return out;
}

/// p_j proportional to 1/f_j for j < n, and p_n = 0.
inline std::vector<Rational> plurality_mixed_loss_averse(const std::vector<Rational>& f)
{
    const std::size_t n = f.size();
    if (n < 2)
        throw ValidationError("voting needs at least 2 candidates");
    Rational norm;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (f[j].sign() <= 0)
            throw ValidationError("cardinal utility f_" + std::to_string(j + 1) + " must be positive");
        norm += Rational(1) / f[j];
    }
    std::vector<Rational> p;
    for (std::size_t j = 0; j + 1 < n; ++j)
        p.push_back(Rational(1) / f[j] / norm);
    p.push_back(Rational(0));
    return p;
}

/// N_f = sum_{j<n} 1/f_j.
inline Rational plurality_normalizer(const std::vector<Rational>& f)
{
    Rational norm;
    for (std::size_t j = 0; j + 1 < f.size(); ++j)
        norm += Rational(1) / f[j];
    return norm;
}

/// Tally states where candidate j ties the worst candidate for the lead and
/// every other candidate trails by at least two points.
inline std::vector<std::size_t> plurality_pivotal_states(const PsrGame& g, std::size_t j)
{
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < g.tallies.size(); ++s) {
        const auto& t = g.tallies[s];
        const std::size_t last = t.size() - 1;
        if (j == last || t[j] != t[last])
            continue;
        bool behind = true;
        for (std::size_t k = 0; k < last; ++k)
            if (k != j && t[k] + 2 > t[j])
                behind = false;
        if (behind)
            out.push_back(s);
    }
    return out;
}

struct MinMaxRegretBallot {
    std::size_t ballot = 0;
    Rational max_regret;
};

/// The ballot for the favourite candidate; its max regret is f_2 - f_n.
inline MinMaxRegretBallot plurality_min_max_regret(const std::vector<Rational>& f)
{
    PsrSpec spec{plurality_ballots(f.size()), f, 0};
    auto g = psr_game(spec);
    return {0, max_regret(g.game, 0).value};
}

struct TopKRegret {
    std::size_t k = 0;
    std::vector<Rational> regrets; // regrets[k-1] for k = 1..n-1
};

/// Approval: the k in 1..n-1 whose top-k ballot has the smallest max regret
/// (smallest k on ties), computed on the full approval game.
inline TopKRegret approval_min_max_regret_top_k(const std::vector<Rational>& f)
{
    const std::size_t n = f.size();
    PsrSpec spec{approval_ballots(n), f, 0};
    auto g = psr_game(spec);
    TopKRegret r;
    for (std::size_t k = 1; k < n; ++k) {
        Ballot top(n, 0);
        for (std::size_t j = 0; j < k; ++j)
            top[j] = 1;
        r.regrets.push_back(max_regret(g.game, g.game.action_index(ballot_label(top))).value);
        if (r.k == 0 || r.regrets.back() < r.regrets[r.k - 1])
            r.k = k;
    }
    return r;
}

} // namespace lossaverse
