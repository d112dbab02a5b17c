#include "opgb/transforms.hpp"

#include <random>

namespace opgb {

namespace {

Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

// C_0(y) = sum w / (y - x_i), plain atoms only.
Rational markov_value(const DiscreteMeasure& m, const Rational& y, std::size_t point_index) {
    Rational acc = 0;
    for (const auto& atom : m.atoms) {
        if (atom.position == y) throw PoleAtAtom(point_index, "Markov function evaluated at an atom");
        acc += atom.weight / (y - atom.position);
    }
    return acc;
}

}  // namespace

MarkovResiduals markov_transform_check(const DiscreteMeasure& m, const Rational& r, const Rational& q,
                                       const Rational& xi, const std::vector<Rational>& points) {
    if (m.has_derivative_atoms()) throw UnsupportedMeasure("Markov checks need plain point masses");
    for (std::size_t i = 0; i < m.atoms.size(); ++i)
        if (m.atoms[i].position == q) throw PoleAtAtom(i, "Geronimus root coincides with an atom");

    Rational mass = 0;
    for (const auto& atom : m.atoms) mass += atom.weight;
    const Rational cq = markov_value(m, q, 0);

    MarkovResiduals out{0, 0, 0};
    for (std::size_t p = 0; p < points.size(); ++p) {
        const Rational& y = points[p];
        if (y == q) throw PoleAtAtom(p, "test point coincides with the Geronimus root");
        const Rational cy = markov_value(m, y, p);

        Rational hat = 0, check = xi / (y - q), tilde = xi * (q - r) / (y - q);
        for (const auto& atom : m.atoms) {
            const Rational& x = atom.position;
            hat += atom.weight * (x - r) / (y - x);
            check += atom.weight / ((x - q) * (y - x));
            tilde += atom.weight * (x - r) / ((x - q) * (y - x));
        }
        const Rational hat_formula = (y - r) * cy - mass;
        const Rational check_formula = (cy - cq + xi) / (y - q);
        const Rational tilde_formula = ((y - r) * cy - (q - r) * cq + (q - r) * xi) / (y - q);

        out.christoffel = std::max(out.christoffel, abs_value(hat - hat_formula));
        out.geronimus = std::max(out.geronimus, abs_value(check - check_formula));
        out.linear_spectral = std::max(out.linear_spectral, abs_value(tilde - tilde_formula));
    }
    return out;
}

MarkovResiduals markov_transform_check(const DiscreteMeasure& m, const Rational& r, const Rational& q,
                                       const Rational& xi, std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-60, 60);
    std::uniform_int_distribution<long> den(1, 7);
    std::vector<Rational> points;
    while (points.size() < count) {
        const Rational y(Integer(num(rng)), Integer(den(rng)));
        if (y == q || m.is_atom(y)) continue;
        points.push_back(y);
    }
    return markov_transform_check(m, r, q, xi, points);
}

}  // namespace opgb
