#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <type_traits>

#include "inflecta/errors.hpp"

namespace inflecta {

// Exact scalar tower. All construction, gcd and elimination work runs on
// arbitrary-precision rationals; floating point appears only inside root
// finding and Newton solving, and conversions are always spelled out.
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Complex = std::complex<double>;

template <class K>
inline constexpr bool is_exact_scalar = std::is_same_v<K, Rational>;

template <class K>
inline constexpr bool is_complex_scalar = false;
template <class T>
inline constexpr bool is_complex_scalar<std::complex<T>> = true;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }
inline long to_long(const Integer& n) { return n.convert_to<long>(); }

// Exact conversion: every finite double is a dyadic rational.
inline Rational rationalize(double x) {
    if (!std::isfinite(x)) throw BadInput("rationalize: non-finite value");
    Rational q;
    int exp = 0;
    double m = std::frexp(x, &exp); // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    Integer num(static_cast<long long>(std::ldexp(m, 53)));
    exp -= 53;
    if (exp >= 0) {
        q = Rational(num << exp);
    } else {
        q = Rational(num, Integer(1) << (-exp));
    }
    return q;
}

inline Integer factorial(long n) {
    Integer f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

inline Integer binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Integer b = 1;
    for (long i = 0; i < k; ++i) {
        b *= (n - i);
        b /= (i + 1);
    }
    return b;
}

inline std::string rational_to_string(const Rational& q) { return q.str(); }

inline Rational rational_from_string(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw BadInput("rational_from_string: cannot parse '" + s + "'");
    }
}

// Requested working precision in significand bits (env INFLECTA_PRECISION).
// 53 = plain double; larger values enable a long-double refinement pass.
inline int precision_bits() {
    static const int bits = [] {
        const char* v = std::getenv("INFLECTA_PRECISION");
        if (!v) return 53;
        int b = std::atoi(v);
        return b > 0 ? b : 53;
    }();
    return bits;
}

inline bool extended_precision_enabled() { return precision_bits() > 53; }

template <class K>
double abs_value(const K& x) {
    if constexpr (is_exact_scalar<K>) {
        return std::abs(to_double(x));
    } else {
        return std::abs(x);
    }
}

} // namespace inflecta
