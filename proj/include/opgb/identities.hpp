#pragma once

// Executable identity suites over a Gram source: the structural relations of
// biorthogonal families, the kernel identities and the classical-weight
// closed forms. Each check reports its worst residual.

#include "opgb/measure.hpp"
#include "opgb/scalar.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace opgb {

struct IdentityRecord {
    std::string name;
    bool passed = false;
    std::string residual;  // max |lhs - rhs| in the scalar mode of the run
    std::size_t cases = 0;
    std::string note;
};

struct IdentityOptions {
    std::size_t n = 6;           // truncation order
    std::uint64_t seed = 0;
    std::size_t points = 20;     // random rational points per pointwise identity
    std::size_t heine_max_k = 4;
};

/// Structural and kernel identities of the family built from `source`.
/// Checks that need a measure (mixed CD, Heine) or a Hankel Gram are skipped
/// when they do not apply.
template <Scalar T>
std::vector<IdentityRecord> run_identities(const GramSource& source, const IdentityOptions& options);

/// Closed forms, operator symmetry and diagonalization, and the norm ratio
/// identity of a classical weight, all on normalized moments.
template <Scalar T>
std::vector<IdentityRecord> classical_checks(const ClassicalWeight& w, std::size_t n);

/// Uniform random rational p/q with |p| <= span, 1 <= q <= max_den.
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed, long span = 20, long max_den = 9);
    Rational operator()();
    /// Draw avoiding the given points.
    Rational avoiding(const std::vector<Rational>& excluded);

private:
    std::mt19937_64 rng_;
    long span_;
    long max_den_;
};

}  // namespace opgb
