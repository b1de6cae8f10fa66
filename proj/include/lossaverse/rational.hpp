#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "lossaverse/errors.hpp"

namespace lossaverse {

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator. Backed by GMP's mpq_class.
class Rational {
public:
    Rational() = default;

    template <std::integral I>
    Rational(I value) // NOLINT(google-explicit-constructor)
    {
        if constexpr (std::is_signed_v<I>)
            q_ = mpq_class(mpz_class(static_cast<signed long>(value)));
        else
            q_ = mpq_class(mpz_class(static_cast<unsigned long>(value)));
    }

    Rational(std::int64_t num, std::int64_t den)
    {
        if (den == 0)
            throw ValidationError("rational with zero denominator");
        q_ = mpq_class(mpz_class(static_cast<signed long>(num)), mpz_class(static_cast<signed long>(den)));
        q_.canonicalize();
    }

    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Accepts "p", "p/q" and finite decimals ("0.25"), optionally signed.
    /// Decimals are converted exactly.
    static Rational parse(std::string_view text);

    /// Canonical form: "p" for integers, "p/q" otherwise.
    std::string str() const { return q_.get_str(); }

    const mpq_class& gmp() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational abs() const { return Rational(mpq_class(::abs(q_))); }

    /// Largest integer not exceeding this value.
    mpz_class floor() const
    {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }

    /// Value rounded to `digits` decimal places, for display only.
    std::string decimal(int digits) const;

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero())
            throw ValidationError("division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_;
};

inline Rational Rational::parse(std::string_view text)
{
    auto fail = [&]() -> ParseError {
        return ParseError("malformed rational '" + std::string(text) + "'");
    };
    if (text.empty())
        throw fail();

    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    auto digits = [&](std::size_t from) {
        std::size_t end = from;
        while (end < text.size() && text[end] >= '0' && text[end] <= '9')
            ++end;
        return end;
    };

    const std::size_t int_end = digits(pos);
    if (int_end == pos)
        throw fail();
    const std::string whole(text.substr(pos, int_end - pos));

    mpq_class q;
    if (int_end == text.size()) {
        q = mpq_class(mpz_class(whole, 10));
    } else if (text[int_end] == '/') {
        const std::size_t den_end = digits(int_end + 1);
        if (den_end == int_end + 1 || den_end != text.size())
            throw fail();
        mpz_class den(std::string(text.substr(int_end + 1)), 10);
        if (den == 0)
            throw ParseError("rational '" + std::string(text) + "' has zero denominator");
        q = mpq_class(mpz_class(whole, 10), den);
    } else if (text[int_end] == '.') {
        const std::size_t frac_end = digits(int_end + 1);
        if (frac_end == int_end + 1 || frac_end != text.size())
            throw fail();
        const std::string frac(text.substr(int_end + 1));
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        q = mpq_class(mpz_class(whole + frac, 10), scale);
    } else {
        throw fail();
    }
    q.canonicalize();
    if (negative)
        q = -q;
    return Rational(std::move(q));
}

inline std::string Rational::decimal(int digits) const
{
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpq_class scaled = ::abs(q_) * scale + mpq_class(1, 2);
    mpz_class rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    std::string s = rounded.get_str();
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits))
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    if (sgn(q_) < 0 && rounded != 0)
        s.insert(0, "-");
    return s;
}

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// A rational extended with +inf and -inf. +inf is the minimum over an empty
/// set; -inf marks an exhausted sequence in lexicographic comparisons. Never
/// enters arithmetic.
class ExtendedRational {
public:
    ExtendedRational(Rational value) : value_(std::move(value)) {} // NOLINT(google-explicit-constructor)

    static ExtendedRational infinity() { return ExtendedRational(Rational{}, 1); }
    static ExtendedRational negative_infinity() { return ExtendedRational(Rational{}, -1); }

    bool is_finite() const { return tag_ == 0; }
    bool is_infinite() const { return tag_ > 0; }
    bool is_negative_infinite() const { return tag_ < 0; }

    /// Only meaningful when finite.
    const Rational& value() const { return value_; }

    std::string str() const { return tag_ > 0 ? "inf" : tag_ < 0 ? "-inf" : value_.str(); }

    friend bool operator==(const ExtendedRational& a, const ExtendedRational& b)
    {
        return a.tag_ == b.tag_ && (a.tag_ != 0 || a.value_ == b.value_);
    }
    friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b)
    {
        if (a.tag_ != 0 || b.tag_ != 0)
            return a.tag_ <=> b.tag_;
        return a.value_ <=> b.value_;
    }

private:
    ExtendedRational(Rational value, int tag) : value_(std::move(value)), tag_(tag) {}

    Rational value_;
    int tag_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const ExtendedRational& r) { return os << r.str(); }

} // namespace lossaverse
