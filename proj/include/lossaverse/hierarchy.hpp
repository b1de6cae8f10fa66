#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "lossaverse/concepts.hpp"

namespace lossaverse {

struct Inclusion {
    Concept subset;
    Concept superset;
    bool holds = true;
};

struct HierarchyReport {
    std::map<Concept, ConceptVerdict> verdicts;
    /// The proven inclusions, each checked on this game.
    std::vector<Inclusion> inclusions;
    /// Pairs without an arrow in the hierarchy that fail to include on this
    /// game (informational).
    std::vector<Inclusion> non_inclusions;

    const ConceptVerdict& operator[](Concept c) const { return verdicts.at(c); }
};

inline bool is_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline constexpr std::array<std::pair<Concept, Concept>, 5> proven_inclusions = {{
    {Concept::WeaklyDominant, Concept::LossAverse},
    {Concept::LossAverse, Concept::SafetyLevel},
    {Concept::MultiLeximin, Concept::LossAverse},
    {Concept::Leximin, Concept::SafetyLevel},
    {Concept::WeaklyDominant, Concept::MinMaxRegret},
}};

inline constexpr std::array<std::pair<Concept, Concept>, 5> unproven_inclusions = {{
    {Concept::Leximin, Concept::LossAverse},
    {Concept::LossAverse, Concept::MultiLeximin},
    {Concept::WeaklyDominant, Concept::Leximin},
    {Concept::MinMaxRegret, Concept::SafetyLevel},
    {Concept::SafetyLevel, Concept::Leximin},
}};

/// Computes every concept and checks the proven inclusions. A failed
/// inclusion is an engine defect and raises ConsistencyError.
inline HierarchyReport hierarchy_report(const AgentGame& game)
{
    HierarchyReport r;
    for (auto c : all_concepts)
        r.verdicts.emplace(c, compute(game, c));
    std::string failures;
    for (auto [sub, sup] : proven_inclusions) {
        bool ok = is_subset(r[sub].actions, r[sup].actions);
        r.inclusions.push_back({sub, sup, ok});
        if (!ok)
            failures += std::string(failures.empty() ? "" : "; ") + std::string(concept_name(sub)) + " not within " +
                        std::string(concept_name(sup));
    }
    for (auto [sub, sup] : unproven_inclusions)
        if (!is_subset(r[sub].actions, r[sup].actions))
            r.non_inclusions.push_back({sub, sup, false});
    if (!failures.empty())
        throw ConsistencyError("hierarchy violated on game '" + game.type_label() + "': " + failures);
    return r;
}

} // namespace lossaverse
