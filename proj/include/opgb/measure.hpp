#pragma once

#include "opgb/matrix.hpp"
#include "opgb/scalar.hpp"

#include <variant>
#include <vector>

namespace opgb {

/// A mass `weight` placed on delta^{(derivative_order)}(x - position). The
/// pairing with a test function f is weight * f^{(d)}(position); any sign
/// convention of the perturbation is folded into the weight by the caller.
struct Atom {
    Rational position;
    Rational weight;
    unsigned derivative_order = 0;
};

struct DiscreteMeasure {
    std::vector<Atom> atoms;

    bool has_derivative_atoms() const {
        for (const auto& a : atoms)
            if (a.derivative_order > 0) return true;
        return false;
    }
    bool is_atom(const Rational& x) const {
        for (const auto& a : atoms)
            if (a.position == x) return true;
        return false;
    }
};

enum class ClassicalFamily { hermite, laguerre, jacobi };

const char* family_name(ClassicalFamily f);

/// Very classical weight. alpha is used by Laguerre and Jacobi, beta by Jacobi.
struct ClassicalWeight {
    ClassicalFamily family = ClassicalFamily::hermite;
    Rational alpha = 0;
    Rational beta = 0;

    /// Every parameter increased by one (Hermite unchanged).
    ClassicalWeight shifted() const;
};

/// Explicit Gram table G_{k,l} of a general (possibly non-Hankel) bilinear form.
struct BivariateTable {
    Matrix<Rational> entries;
};

using GramSource = std::variant<DiscreteMeasure, ClassicalWeight, BivariateTable>;

}  // namespace opgb
