#include "opgb/scalar.hpp"

#include "opgb/errors.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

namespace opgb {

namespace {

std::atomic<double> g_float_tolerance{1e-10};

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

// GMP reads a leading 0 as an octal prefix.
Integer parse_integer(std::string_view digits) {
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return Integer(std::string(digits));
}

// [sign] digits [. digits] [e|E [sign] digits]
Rational parse_decimal(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = text.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6) {
            throw ParseError("malformed exponent in '" + std::string(text) + "'");
        }
        exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
        if (exp_negative) exponent = -exponent;
        text = text.substr(0, e);
    }
    std::string digits;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty())) {
            throw ParseError("malformed decimal '" + std::string(text) + "'");
        }
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(text)) throw ParseError("malformed number '" + std::string(text) + "'");
        digits = std::string(text);
    }
    Integer num = parse_integer(digits);
    if (negative) num = -num;
    Integer scale = 1;
    for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) scale *= 10;
    return exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
}

}  // namespace

double float_tolerance() noexcept { return g_float_tolerance.load(std::memory_order_relaxed); }

void set_float_tolerance(double eps) noexcept {
    g_float_tolerance.store(eps, std::memory_order_relaxed);
}

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty number");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num_text = text.substr(0, slash);
        std::string_view den_text = text.substr(slash + 1);
        bool negative = false;
        if (!num_text.empty() && (num_text.front() == '+' || num_text.front() == '-')) {
            negative = num_text.front() == '-';
            num_text.remove_prefix(1);
        }
        if (!all_digits(num_text) || !all_digits(den_text)) {
            throw ParseError("malformed fraction '" + std::string(text) + "'");
        }
        Integer den = parse_integer(den_text);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        Integer num = parse_integer(num_text);
        return Rational(negative ? Integer(-num) : num, den);
    }
    return parse_decimal(text);
}

std::string to_string(const Rational& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

std::string to_string(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

Rational pow(const Rational& base, unsigned exponent) {
    Rational result = 1;
    Rational b = base;
    while (exponent > 0) {
        if (exponent & 1U) result *= b;
        b *= b;
        exponent >>= 1U;
    }
    return result;
}

Rational factorial(unsigned n) {
    Rational result = 1;
    for (unsigned i = 2; i <= n; ++i) result *= i;
    return result;
}

Rational pochhammer(const Rational& x, unsigned n) {
    Rational result = 1;
    for (unsigned i = 0; i < n; ++i) result *= x + i;
    return result;
}

}  // namespace opgb
