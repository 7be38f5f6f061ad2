#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace hsp {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class ScalarMode { Exact, Float };

// The two scalar instantiations used throughout: exact rationals for
// verification runs, doubles for performance runs. All arithmetic within
// one computation uses a single mode.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational ratio(std::int64_t num, std::int64_t den) {
        return Rational(num, den);
    }
    static bool is_zero(const Rational& x) { return x == 0; }
    static double to_double(const Rational& x) {
        return x.template convert_to<double>();
    }
    static std::string to_string(const Rational& x) { return x.str(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";
    static constexpr double tolerance = 1e-12;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double ratio(std::int64_t num, std::int64_t den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static bool is_zero(double x) { return std::abs(x) <= tolerance; }
    static double to_double(double x) { return x; }
    static std::string to_string(double x) { return std::to_string(x); }
};

// 2^e as a scalar, e may be negative.
template <class S>
inline S pow2(int e) {
    if constexpr (ScalarTraits<S>::exact) {
        BigInt p = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
        return e < 0 ? Rational(1, p) : Rational(p);
    } else {
        return std::ldexp(1.0, e);
    }
}

template <class S>
inline S scalar_pow(S base, int e) {
    S acc = ScalarTraits<S>::one();
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
}

}  // namespace hsp
