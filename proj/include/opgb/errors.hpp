#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opgb {

/// Base of every library failure. `kind()` is a stable identifier that the
/// CLI copies into its error payload.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

    /// Admissibility failures (the form or a transform degenerates) as opposed
    /// to malformed input.
    virtual bool admissibility() const noexcept { return false; }

private:
    std::string kind_;
};

/// An error that carries the index (degree, row) at which it was detected.
class IndexedError : public Error {
public:
    IndexedError(std::string kind, std::size_t index, const std::string& message)
        : Error(std::move(kind), message + " (index " + std::to_string(index) + ")"),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

#define OPGB_ADMISSIBILITY_ERROR(Name)                                                  \
    class Name : public IndexedError {                                                  \
    public:                                                                             \
        explicit Name(std::size_t index, const std::string& message = #Name)            \
            : IndexedError(#Name, index, message) {}                                    \
        bool admissibility() const noexcept override { return true; }                   \
    };

#define OPGB_PLAIN_ERROR(Name)                                                          \
    class Name : public Error {                                                         \
    public:                                                                             \
        explicit Name(const std::string& message = #Name) : Error(#Name, message) {}    \
    };

// Leading principal minor k vanishes: only degrees < k are well defined.
OPGB_ADMISSIBILITY_ERROR(NotQuasiDefinite)
OPGB_ADMISSIBILITY_ERROR(SingularBlock)
OPGB_ADMISSIBILITY_ERROR(SingularTruncation)
OPGB_ADMISSIBILITY_ERROR(DegenerateRecurrence)
OPGB_ADMISSIBILITY_ERROR(DegenerateDenominator)
OPGB_ADMISSIBILITY_ERROR(ZeroAtRoot)
OPGB_ADMISSIBILITY_ERROR(SingularJetMatrix)
OPGB_ADMISSIBILITY_ERROR(ZeroDenominator)
OPGB_ADMISSIBILITY_ERROR(NonPositive)
OPGB_ADMISSIBILITY_ERROR(PoleAtAtom)
OPGB_ADMISSIBILITY_ERROR(InsufficientTruncation)
OPGB_ADMISSIBILITY_ERROR(NotCoprime)
// Exact division expected but a remainder survived.
OPGB_ADMISSIBILITY_ERROR(FormulaInconsistency)

OPGB_PLAIN_ERROR(NotHankel)
OPGB_PLAIN_ERROR(UnsupportedMeasure)
OPGB_PLAIN_ERROR(InvalidArgument)
OPGB_PLAIN_ERROR(ParseError)

#undef OPGB_ADMISSIBILITY_ERROR
#undef OPGB_PLAIN_ERROR

}  // namespace opgb
