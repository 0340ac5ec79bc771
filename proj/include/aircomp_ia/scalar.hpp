#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <type_traits>

#include "aircomp_ia/errors.hpp"

namespace aircomp_ia {

using Complex = std::complex<double>;

/// Exact arbitrary-precision rational (GMP-backed). Real-valued: genericity
/// of the rank arguments holds over any continuous real distribution, so
/// complex exactness is never needed.
using Rational = mpq_class;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
    static constexpr bool exact = false;
    static const char* mode_name() { return "float"; }
    static Complex zero() { return Complex(0.0, 0.0); }
    static Complex one() { return Complex(1.0, 0.0); }
    static bool is_zero(const Complex& v) { return v.real() == 0.0 && v.imag() == 0.0; }
    static double abs_value(const Complex& v) { return std::abs(v); }
    static double abs2(const Complex& v) { return std::norm(v); }
    static Complex from_double(double x) { return Complex(x, 0.0); }
    static Complex invert(const Complex& v) {
        if (is_zero(v)) throw SingularChannel("cannot invert zero entry");
        return Complex(1.0, 0.0) / v;
    }
    static double to_double(const Complex& v) { return v.real(); }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static const char* mode_name() { return "exact"; }
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool is_zero(const Rational& v) { return sgn(v) == 0; }
    static double abs_value(const Rational& v) { return std::fabs(v.get_d()); }
    static double abs2(const Rational& v) {
        const double d = v.get_d();
        return d * d;
    }
    static Rational from_double(double x) { return Rational(x); }  // dyadic, exact
    static Rational invert(const Rational& v) {
        if (sgn(v) == 0) throw SingularChannel("cannot invert zero entry");
        return Rational(1) / v;
    }
    static double to_double(const Rational& v) { return v.get_d(); }
};

template <class S>
concept ScalarField = std::is_same_v<S, Complex> || std::is_same_v<S, Rational>;

/// base^e for e >= 0 by binary exponentiation; avoids std::pow's polar
/// round-trip so products of powers stay maximally accurate.
template <ScalarField S>
S pow_nonneg(const S& base, unsigned e) {
    if constexpr (ScalarTraits<S>::exact) {
        Rational r;
        mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
        mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
        return r;  // base canonical => num/den powers stay coprime
    } else {
        S result = ScalarTraits<S>::one();
        S b = base;
        while (e != 0) {
            if (e & 1u) result *= b;
            b *= b;
            e >>= 1;
        }
        return result;
    }
}

template <ScalarField S>
S pow_int(const S& base, int e) {
    if (e >= 0) return pow_nonneg(base, static_cast<unsigned>(e));
    return ScalarTraits<S>::invert(pow_nonneg(base, static_cast<unsigned>(-e)));
}

inline std::string rational_to_string(const Rational& v) {
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

/// num/den in lowest terms (the two-argument mpq constructor does not reduce).
inline Rational make_fraction(long num, long den) {
    Rational v(num, den);
    v.canonicalize();
    return v;
}

}  // namespace aircomp_ia
