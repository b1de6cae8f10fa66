#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "lossaverse/errors.hpp"
#include "lossaverse/rational.hpp"

namespace lossaverse::vcg {

/// Item subset as a bit mask; item g is bit g.
using Bundle = std::uint32_t;

inline constexpr std::size_t max_items = 8;

inline Bundle full_bundle(std::size_t m) { return (Bundle{1} << m) - 1; }
inline std::size_t bundle_size(Bundle b) { return static_cast<std::size_t>(std::popcount(b)); }
inline bool contains(Bundle outer, Bundle inner) { return (outer & inner) == inner; }

inline void check_item_count(std::size_t m)
{
    if (m == 0)
        throw ValidationError("auction needs at least one item");
    if (m > max_items)
        throw CapacityError(std::to_string(m) + " items exceed the supported maximum of " + std::to_string(max_items));
}

/// Default item names: a, b, c, ...
inline std::vector<std::string> default_item_names(std::size_t m)
{
    std::vector<std::string> out;
    for (std::size_t g = 0; g < m; ++g)
        out.emplace_back(1, static_cast<char>('a' + g));
    return out;
}

/// "{a,c}"; the empty bundle is "{}".
inline std::string bundle_str(Bundle b, const std::vector<std::string>& names)
{
    std::string s = "{";
    bool first = true;
    for (std::size_t g = 0; g < names.size(); ++g)
        if (b >> g & 1) {
            s += (first ? "" : ",") + names[g];
            first = false;
        }
    return s + "}";
}

/// Visits every subset of `mask`, including the empty one and `mask` itself.
template <class F>
void for_each_subset_of(Bundle mask, F&& f)
{
    for (Bundle t = mask;; t = (t - 1) & mask) {
        f(t);
        if (t == 0)
            break;
    }
}

// Scalar helpers shared by Rational and integer tick arithmetic.

inline Rational half(const Rational& x) { return x / Rational(2); }
inline std::int64_t half(std::int64_t x)
{
    if (x % 2 != 0)
        throw ConsistencyError("tick value " + std::to_string(x) + " is not even");
    return x / 2;
}

inline Rational divide(const Rational& x, std::int64_t n) { return x / Rational(n); }
inline std::int64_t divide(std::int64_t x, std::int64_t n)
{
    if (x % n != 0)
        throw ConsistencyError("tick value " + std::to_string(x) + " is not divisible by " + std::to_string(n));
    return x / n;
}

inline Rational scale(const Rational& x, std::int64_t n) { return x * Rational(n); }
inline std::int64_t scale(std::int64_t x, std::int64_t n) { return x * n; }

/// Largest multiple of step not above x (x >= 0).
inline Rational floor_multiple(const Rational& x, const Rational& step)
{
    return step * Rational(mpq_class((x / step).floor()));
}
inline std::int64_t floor_multiple(std::int64_t x, std::int64_t step) { return x / step * step; }

inline bool is_multiple(const Rational& x, const Rational& step) { return (x / step).is_integer(); }
inline bool is_multiple(std::int64_t x, std::int64_t step) { return x % step == 0; }

inline std::string scalar_str(const Rational& x) { return x.str(); }
inline std::string scalar_str(std::int64_t x) { return std::to_string(x); }

/// A set function over m items: a value for each of the 2^m bundles.
/// Valuations and bids share this representation.
template <class T>
class BasicSetFunction {
public:
    BasicSetFunction() = default;

    explicit BasicSetFunction(std::size_t m) : m_(m), values_(std::size_t{1} << m, T(0)) { check_item_count(m); }

    BasicSetFunction(std::size_t m, std::vector<T> values) : m_(m), values_(std::move(values))
    {
        check_item_count(m);
        if (values_.size() != (std::size_t{1} << m))
            throw ShapeError("set function over " + std::to_string(m) + " items needs " +
                             std::to_string(std::size_t{1} << m) + " values, got " + std::to_string(values_.size()));
        if (values_[0] != T(0))
            throw ValidationError("the empty bundle must be worth 0");
        for (const auto& v : values_)
            if (v < T(0))
                throw ValidationError("negative bundle value " + scalar_str(v));
    }

    static BasicSetFunction additive(const std::vector<T>& per_item)
    {
        BasicSetFunction f(per_item.size());
        for (Bundle b = 1; b <= full_bundle(f.m_); ++b) {
            const std::size_t g = static_cast<std::size_t>(std::countr_zero(b));
            f.values_[b] = f.values_[b & (b - 1)] + per_item[g];
        }
        for (const auto& v : per_item)
            if (v < T(0))
                throw ValidationError("negative item value " + scalar_str(v));
        return f;
    }

    /// max over clauses of the additive clause value.
    static BasicSetFunction xos(const std::vector<std::vector<T>>& clauses)
    {
        if (clauses.empty())
            throw ValidationError("XOS valuation needs at least one clause");
        BasicSetFunction f = additive(clauses[0]);
        for (std::size_t c = 1; c < clauses.size(); ++c) {
            if (clauses[c].size() != f.m_)
                throw ShapeError("XOS clauses disagree on the item count");
            const auto g = additive(clauses[c]);
            for (Bundle b = 0; b <= full_bundle(f.m_); ++b)
                if (f.values_[b] < g.values_[b])
                    f.values_[b] = g.values_[b];
        }
        return f;
    }

    std::size_t items() const { return m_; }
    const T& operator()(Bundle b) const { return values_[b]; }
    T& at(Bundle b) { return values_[b]; }
    const std::vector<T>& values() const { return values_; }

    bool is_additive() const { return *this == additive(singletons()); }

    std::vector<T> singletons() const
    {
        std::vector<T> out;
        for (std::size_t g = 0; g < m_; ++g)
            out.push_back(values_[Bundle{1} << g]);
        return out;
    }

    bool on_grid(const T& step) const
    {
        for (const auto& v : values_)
            if (!is_multiple(v, step))
                return false;
        return true;
    }

    template <class U, class F>
    BasicSetFunction<U> map(F&& f) const
    {
        std::vector<U> out;
        for (const auto& v : values_)
            out.push_back(f(v));
        return BasicSetFunction<U>(m_, std::move(out));
    }

    bool operator==(const BasicSetFunction&) const = default;

private:
    std::size_t m_ = 0;
    std::vector<T> values_;
};

using SetFunction = BasicSetFunction<Rational>;
using CombValuation = SetFunction;
using CombBid = SetFunction;

/// Bid grid step epsilon / (2 m!).
inline Rational bid_grid_step(const Rational& epsilon, std::size_t m)
{
    std::int64_t fact = 1;
    for (std::size_t k = 2; k <= m; ++k)
        fact *= static_cast<std::int64_t>(k);
    return epsilon / Rational(2 * fact);
}

} // namespace lossaverse::vcg
