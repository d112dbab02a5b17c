#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

namespace opgb {

/// Exact arbitrary-precision rational. Always kept in lowest terms.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

// Absolute tolerance used by float-mode zero tests (pivots, remainders).
double float_tolerance() noexcept;
void set_float_tolerance(double eps) noexcept;

template <typename T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

/// Per-mode behaviour of the two supported scalar types.
template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* mode_name = "exact";
    static bool is_zero(const Rational& v) { return v == 0; }
    static bool equal(const Rational& a, const Rational& b) { return a == b; }
    static double to_double(const Rational& v) { return static_cast<double>(v); }
    static Rational from_rational(const Rational& v) { return v; }
    static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* mode_name = "float";
    static bool is_zero(double v) { return std::abs(v) < float_tolerance(); }
    static bool equal(double a, double b) { return std::abs(a - b) < float_tolerance(); }
    static double to_double(double v) { return v; }
    static double from_rational(const Rational& v) { return static_cast<double>(v); }
    static double abs(double v) { return std::abs(v); }
};

template <Scalar T>
bool is_zero(const T& v) {
    return ScalarTraits<T>::is_zero(v);
}

template <Scalar T>
T from_rational(const Rational& v) {
    return ScalarTraits<T>::from_rational(v);
}

template <Scalar T>
double to_double(const T& v) {
    return ScalarTraits<T>::to_double(v);
}

/// Parse "3", "-1/2", "0.125", "2.5e-3" exactly. Throws ParseError.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" for integers.
std::string to_string(const Rational& v);

/// Shortest decimal that round-trips.
std::string to_string(double v);

Rational pow(const Rational& base, unsigned exponent);
Rational factorial(unsigned n);
/// Rising factorial (x)_n.
Rational pochhammer(const Rational& x, unsigned n);

}  // namespace opgb
