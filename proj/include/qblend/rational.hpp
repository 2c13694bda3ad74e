#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "qblend/errors.hpp"

namespace qblend {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// 50-decimal-digit binary float, used where double/long double noise floors
/// would mask the quantity under test.
using Float50 = boost::multiprecision::cpp_bin_float_50;

template <class T>
T to_fp(const Rational& q) {
    return static_cast<T>(numerator(q)) / static_cast<T>(denominator(q));
}

inline double to_double(const Rational& q) { return to_fp<double>(q); }

/// Exact integer square root test.
inline std::optional<BigInt> integer_sqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

/// Exact rational square root, if one exists.
inline std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    auto rn = integer_sqrt(numerator(q));
    auto rd = integer_sqrt(denominator(q));
    if (rn && rd) return Rational(*rn, *rd);
    return std::nullopt;
}

/// "num/den" (or plain integer) rendering; matches the CLI rational format.
inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "a", "-a", "a/b". Throws InvalidParameter on malformed input.
inline Rational parse_rational(std::string_view s) {
    auto bad = [&] { throw InvalidParameter("malformed rational: '" + std::string(s) + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(BigInt(std::string(s)));
        BigInt num{std::string(s.substr(0, slash))};
        BigInt den{std::string(s.substr(slash + 1))};
        if (den == 0) bad();
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rational(0); // unreachable
}

} // namespace qblend
