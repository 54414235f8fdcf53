#pragma once

#include <stdexcept>
#include <string>

namespace flagrecon {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input data (or an intermediate result) carries odd-degree content on the
// sphere beyond tolerance; every field in this library must be even.
struct SymmetryViolation : Error {
    using Error::Error;
};

// A geodesic derivative was requested along a direction that is not tangent.
struct NonOrthogonal : Error {
    using Error::Error;
};

// An integrand exceeded the plausibility bound; signals a broken grid or
// corrupted input rather than a mathematical property of the data.
struct NumericalBlowup : Error {
    using Error::Error;
};

// The generating density fails the Lindquist nonnegativity condition, so no
// convex body exists for it.
struct NotABody : Error {
    using Error::Error;
};

struct DegenerateMesh : Error {
    using Error::Error;
};

// Malformed or inconsistent input file.
struct FormatError : Error {
    using Error::Error;
};

}  // namespace flagrecon
