#ifndef HILIM_ERRORS_HPP
#define HILIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hilim {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid user input (bad file, bad poset, bad functor, ...). CLI exit code 1.
struct InputError : Error {
    enum class Code {
        DuplicateElement,
        UnknownElement,
        CycleDetected,
        NotACover,
        SNotBelowP,
        ShapeMismatch,
        NonCommutingSquare,
        NotTruncatable,
        InvalidComplex,
        InvalidChainMap,
        InvalidDiagram,
        NotPrime,
        ParseError,
    };
    Code code;
    InputError(Code c, const std::string& msg) : Error(msg), code(c) {}
};

/// Violation of an internal invariant (a bug, never user error). CLI exit code 2.
struct InternalError : Error {
    enum class Code {
        NotInLimit,
        EquivalenceViolated,
        BoundaryNotZero,
        FibrancyCertificate,
        OracleDisagreement,
        LimitNotPreserved,
    };
    Code code;
    InternalError(Code c, const std::string& msg) : Error(msg), code(c) {}
};

} // namespace hilim

#endif
