#pragma once

#include "opgb/errors.hpp"
#include "opgb/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace opgb {

/// Univariate polynomial, coefficients in ascending degree. The zero
/// polynomial has an empty coefficient list.
template <Scalar T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { trim(); }

    static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }
    static Polynomial monomial(std::size_t degree) {
        std::vector<T> c(degree + 1, T(0));
        c.back() = T(1);
        return Polynomial(std::move(c));
    }
    /// x - root
    static Polynomial linear(const T& root) { return Polynomial(std::vector<T>{-root, T(1)}); }

    const std::vector<T>& coeffs() const noexcept { return coeffs_; }
    bool zero() const noexcept { return coeffs_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
    T coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : T(0); }
    T leading() const { return coeffs_.empty() ? T(0) : coeffs_.back(); }

    T operator()(const T& x) const {
        T acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<T> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * T(static_cast<long>(k));
        return Polynomial(std::move(d));
    }

    /// Taylor coefficients f^{(l)}(r)/l!, l < count, by repeated synthetic division.
    std::vector<T> taylor_at(const T& r, std::size_t count) const {
        std::vector<T> work = coeffs_;
        std::vector<T> out;
        out.reserve(count);
        for (std::size_t l = 0; l < count; ++l) {
            if (work.empty()) {
                out.emplace_back(0);
                continue;
            }
            // Horner pass: remainder is the value, quotient replaces work.
            std::vector<T> quotient(work.size() - 1, T(0));
            T acc(0);
            for (std::size_t k = work.size(); k-- > 0;) {
                acc = acc * r + work[k];
                if (k > 0) quotient[k - 1] = acc;
            }
            out.push_back(acc);
            work = std::move(quotient);
        }
        return out;
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
        trim();
        return *this;
    }
    Polynomial& operator*=(const T& s) {
        for (auto& c : coeffs_) c *= s;
        trim();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
    friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.zero() || b.zero()) return {};
        std::vector<T> c(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

    /// Quotient and remainder of division by a monic divisor.
    std::pair<Polynomial, Polynomial> divmod_monic(const Polynomial& divisor) const {
        if (divisor.zero() || divisor.leading() != T(1)) throw InvalidArgument("divisor must be monic");
        const std::size_t dn = divisor.coeffs_.size() - 1;
        if (coeffs_.size() <= dn) return {Polynomial{}, *this};
        std::vector<T> rem = coeffs_;
        std::vector<T> quot(coeffs_.size() - dn, T(0));
        for (std::size_t k = quot.size(); k-- > 0;) {
            const T q = rem[k + dn];
            quot[k] = q;
            if (q == 0) continue;
            for (std::size_t j = 0; j <= dn; ++j) rem[k + j] -= q * divisor.coeffs_[j];
        }
        rem.resize(dn);
        return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
    }

    /// Drops coefficients that are exactly zero (exact) or below tolerance (float)
    /// from the top.
    Polynomial cleaned() const {
        std::vector<T> c = coeffs_;
        while (!c.empty() && is_zero(c.back())) c.pop_back();
        return Polynomial(std::move(c));
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<T> coeffs_;
};

/// True when p is the zero polynomial up to the float tolerance.
template <Scalar T>
bool is_zero(const Polynomial<T>& p) {
    return std::all_of(p.coeffs().begin(), p.coeffs().end(), [](const T& c) { return is_zero(c); });
}

template <Scalar T>
Polynomial<T> polynomial_from_roots(std::span<const std::pair<T, unsigned>> roots) {
    Polynomial<T> p = Polynomial<T>::constant(T(1));
    for (const auto& [r, m] : roots)
        for (unsigned k = 0; k < m; ++k) p = p * Polynomial<T>::linear(r);
    return p;
}

}  // namespace opgb
