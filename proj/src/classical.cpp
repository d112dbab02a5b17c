#include "opgb/classical.hpp"

#include "opgb/errors.hpp"

namespace opgb {

const char* family_name(ClassicalFamily f) {
    switch (f) {
        case ClassicalFamily::hermite: return "hermite";
        case ClassicalFamily::laguerre: return "laguerre";
        case ClassicalFamily::jacobi: return "jacobi";
    }
    return "?";
}

ClassicalWeight ClassicalWeight::shifted() const {
    ClassicalWeight w = *this;
    switch (family) {
        case ClassicalFamily::hermite: break;
        case ClassicalFamily::laguerre: w.alpha += 1; break;
        case ClassicalFamily::jacobi:
            w.alpha += 1;
            w.beta += 1;
            break;
    }
    return w;
}

PearsonData pearson_data(const ClassicalWeight& w) {
    switch (w.family) {
        case ClassicalFamily::hermite:
            return {0, 0, 1, -2, 0};
        case ClassicalFamily::laguerre:
            if (w.alpha <= -1) throw InvalidArgument("laguerre needs alpha > -1");
            return {0, 1, 0, -1, w.alpha + 1};
        case ClassicalFamily::jacobi:
            if (w.alpha <= -1 || w.beta <= -1) throw InvalidArgument("jacobi needs alpha, beta > -1");
            return {-1, 0, 1, -(w.alpha + w.beta + 2), -(w.alpha - w.beta)};
    }
    throw InvalidArgument("unknown classical family");
}

Rational classical_subdiagonal(const PearsonData& p, std::size_t n) {
    const Rational nn = static_cast<long>(n);
    const Rational den = p.A + 2 * nn * p.a;
    if (den == 0) throw DegenerateDenominator(n, "A + 2 n a vanishes");
    return (nn + 1) * (p.B + nn * p.b) / den;
}

Rational classical_eigenvalue(const PearsonData& p, std::size_t n) {
    const Rational nn = static_cast<long>(n);
    return nn * (p.A + (nn - 1) * p.a);
}

Rational classical_norm_ratio(const PearsonData& p, std::size_t n) {
    const Rational nn = static_cast<long>(n);
    const Rational den = p.A + (nn - 1) * p.a;
    if (den == 0) throw DegenerateDenominator(n, "A + (n-1) a vanishes");
    return -nn / den;
}

}  // namespace opgb
