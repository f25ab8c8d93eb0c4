#pragma once

#include <stdexcept>
#include <string>

namespace ahgeom {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes of two operands disagree (matrix sizes, tensor dims, point lengths).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input fails a precondition that is checked numerically (symmetry, J-invariance,
/// degenerate plane, singular metric).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A point lies outside a chart domain, or an expression is undefined there.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace ahgeom
