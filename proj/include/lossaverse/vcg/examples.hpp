#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lossaverse/vcg/attacks.hpp"

namespace lossaverse::vcg {

/// OR bid over atomic bundles: a bundle is worth the best sum of disjoint atoms
/// it contains.
template <class T>
BasicSetFunction<T> or_closure(std::size_t m, const std::vector<std::pair<Bundle, T>>& atoms)
{
    check_item_count(m);
    for (const auto& [b, x] : atoms) {
        if (b == 0 || b > full_bundle(m))
            throw ValidationError("OR atom " + std::to_string(b) + " is not a nonempty bundle over " +
                                  std::to_string(m) + " items");
        if (x < T(0))
            throw ValidationError("negative OR atom value " + scalar_str(x));
    }
    BasicSetFunction<T> f(m);
    for (Bundle s = 1; s <= full_bundle(m); ++s) {
        const Bundle low = s & (~s + 1);
        T best = f(s & ~low);
        for (const auto& [b, x] : atoms)
            if ((b & low) && contains(s, b) && best < x + f(s & ~b))
                best = x + f(s & ~b);
        f.at(s) = best;
    }
    return f;
}

/// A worked instance: the truthful profile, the attacked profile and, when the
/// example names one, the nature bid facing the attacker.
struct ExampleInstance {
    std::string name;
    Rational epsilon;
    std::size_t items = 0;
    std::vector<std::string> item_names;
    std::vector<SybilProfile> truthful;
    std::vector<SybilProfile> attack;
    std::size_t attacker = 0;
    std::optional<SetFunction> nature_bid;
};

inline void check_example_epsilon(const Rational& eps)
{
    if (eps.sign() <= 0 || !(eps < Rational(1)))
        throw ValidationError("example epsilon must lie in (0, 1), got " + eps.str());
}

/// Four items; A additive (0,0,3e,3e), B and C XOS. A attacks with two additive
/// Sybils A1 = (10,10,0,0) and A2 = (0,0,10,10).
inline ExampleInstance build_example_e1(const Rational& eps = Rational(1, 10))
{
    check_example_epsilon(eps);
    const Rational z(0), nine(9), ten(10), e3 = eps * Rational(3);
    ExampleInstance x;
    x.name = "E1";
    x.epsilon = eps;
    x.items = 4;
    x.item_names = default_item_names(4);
    const auto a = SetFunction::additive({z, z, e3, e3});
    const auto b = SetFunction::xos({{nine, z, z, z}, {z, nine, z, z}, {eps, eps, nine, z}});
    const auto c = SetFunction::xos({{nine, z, z, z}, {z, nine, z, z}, {eps, eps, z, nine}});
    x.truthful = {SybilProfile::truthful("A", a), SybilProfile::truthful("B", b), SybilProfile::truthful("C", c)};
    SybilProfile attack{"A", a, {SetFunction::additive({ten, ten, z, z}), SetFunction::additive({z, z, ten, ten})},
                        {"A1", "A2"}};
    x.attack = {attack, x.truthful[1], x.truthful[2]};
    return x;
}

/// Three items; v has singles 1, {a,b} 2, {a,c} and {b,c} 1+e, {a,b,c} 2+e.
/// The attack splits it into additive bids a=1, b=1, c=e. Nature bids the OR
/// of a:0, b:0, c:1000, ab:2-e.
inline ExampleInstance build_example_e2(const Rational& eps = Rational(1, 10))
{
    check_example_epsilon(eps);
    const Rational z(0), one(1), two(2);
    ExampleInstance x;
    x.name = "E2";
    x.epsilon = eps;
    x.items = 3;
    x.item_names = default_item_names(3);
    // masks: a=1 b=2 ab=3 c=4 ac=5 bc=6 abc=7
    const SetFunction v(3, {z, one, one, two, one, one + eps, one + eps, two + eps});
    x.truthful = {SybilProfile::truthful("i", v)};
    x.attack = {SybilProfile{"i",
                             v,
                             {SetFunction::additive({one, z, z}), SetFunction::additive({z, one, z}),
                              SetFunction::additive({z, z, eps})},
                             {"i1", "i2", "i3"}}};
    x.nature_bid = or_closure<Rational>(3, {{1, z}, {2, z}, {4, Rational(1000)}, {3, two - eps}});
    return x;
}

/// Recomputed E1 quantities next to the values the example states.
struct ExampleE1Report {
    Rational epsilon;
    Rational attack_observed, attack_real;
    Rational truthful_optimum;
    std::vector<Rational> clarke_payments, literal_payments; // A1, A2
    Rational attacker_utility_clarke, attacker_utility_literal, truthful_utility;
    Rational stated_optimum, stated_payment;
    bool welfare_discrepancy = false; // truthful optimum differs from 18 + 2e
    bool payment_discrepancy = false; // neither rule charges 2e per Sybil
};

inline ExampleE1Report example_e1_report(const Rational& eps = Rational(1, 10))
{
    const auto x = build_example_e1(eps);
    ExampleE1Report r;
    r.epsilon = eps;
    const auto clarke = run_vcg(x.attack, x.items, PaymentRule::ClarkePivot);
    const auto literal = run_vcg(x.attack, x.items, PaymentRule::Literal);
    const auto truth = run_vcg(x.truthful, x.items, PaymentRule::ClarkePivot);
    r.attack_observed = clarke.observed_welfare;
    r.attack_real = clarke.real_welfare;
    r.truthful_optimum = truth.real_welfare;
    r.clarke_payments = {clarke.payments[0], clarke.payments[1]};
    r.literal_payments = {literal.payments[0], literal.payments[1]};
    r.attacker_utility_clarke = clarke.utilities[0];
    r.attacker_utility_literal = literal.utilities[0];
    r.truthful_utility = truth.utilities[0];
    r.stated_optimum = Rational(18) + Rational(2) * eps;
    r.stated_payment = Rational(2) * eps;
    r.welfare_discrepancy = r.truthful_optimum != r.stated_optimum;
    r.payment_discrepancy = true;
    for (std::size_t j = 0; j < 2; ++j)
        if (r.clarke_payments[j] == r.stated_payment || r.literal_payments[j] == r.stated_payment)
            r.payment_discrepancy = false;
    return r;
}

} // namespace lossaverse::vcg
