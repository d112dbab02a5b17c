#pragma once

#include "opgb/biorth.hpp"
#include "opgb/gram.hpp"
#include "opgb/identities.hpp"
#include "opgb/matrix.hpp"
#include "opgb/measure.hpp"
#include "opgb/scalar.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

using opgb::Rational;

inline Rational R(const std::string& s) { return opgb::parse_rational(s); }
inline Rational R(long p, long q = 1) { return Rational(opgb::Integer(p), opgb::Integer(q)); }

inline opgb::DiscreteMeasure measure(std::initializer_list<std::pair<Rational, Rational>> atoms) {
    opgb::DiscreteMeasure m;
    for (const auto& [q, w] : atoms) m.atoms.push_back({q, w, 0});
    return m;
}

// {-1, 0, 1} with unit weights.
inline opgb::DiscreteMeasure three_atoms() { return measure({{R(-1), R(1)}, {R(0), R(1)}, {R(1), R(1)}}); }

inline opgb::BiorthFamilies<Rational> family(const opgb::GramSource& s, std::size_t n) {
    return opgb::build_families(opgb::gram_matrix(s, n));
}

inline opgb::Matrix<Rational> mat(std::initializer_list<std::initializer_list<long>> rows) {
    opgb::Matrix<Rational> m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (long v : r) m(i, j++) = Rational(v);
        ++i;
    }
    return m;
}

// Cofactor expansion; independent of the elimination code.
inline Rational cofactor_det(const opgb::Matrix<Rational>& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Rational acc = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (m(0, c) == 0) continue;
        opgb::Matrix<Rational> minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0, jj = 0; j < n; ++j)
                if (j != c) minor(i - 1, jj++) = m(i, j);
        const Rational term = m(0, c) * cofactor_det(minor);
        acc += (c % 2 == 0) ? term : Rational(-term);
    }
    return acc;
}

// Positive discrete measure with `atoms` distinct small rational positions.
struct MeasureGen {
    std::mt19937_64 rng;
    explicit MeasureGen(std::uint64_t seed) : rng(seed) {}

    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

    Rational small_rational(long span = 6, long den = 3) { return R(uniform(-span, span), uniform(1, den)); }

    opgb::DiscreteMeasure positive(std::size_t atoms) {
        std::set<Rational> used;
        opgb::DiscreteMeasure m;
        while (m.atoms.size() < atoms) {
            const Rational q = small_rational();
            if (!used.insert(q).second) continue;
            m.atoms.push_back({q, R(uniform(1, 5), uniform(1, 3)), 0});
        }
        return m;
    }

    Rational avoiding(const opgb::DiscreteMeasure& m, std::vector<Rational> extra = {}) {
        while (true) {
            const Rational r = small_rational(8, 4);
            if (m.is_atom(r)) continue;
            bool clash = false;
            for (const auto& e : extra) clash = clash || e == r;
            if (!clash) return r;
        }
    }

    opgb::Matrix<Rational> matrix(std::size_t n, long span = 5) {
        opgb::Matrix<Rational> g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = R(uniform(-span, span), uniform(1, 3));
        return g;
    }
};

}  // namespace testing
