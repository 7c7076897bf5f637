#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latentgeom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input vector or matrix has the wrong shape.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A pre-activation lies within boundary_tol of zero; the Jacobian is not defined there.
class BoundaryError : public Error {
public:
    BoundaryError(std::size_t layer, std::size_t unit, double preactivation)
        : Error("point lies on a partition boundary (layer " + std::to_string(layer) + ", unit " +
                std::to_string(unit) + ", pre-activation " + std::to_string(preactivation) + ")"),
          layer_(layer), unit_(unit), preactivation_(preactivation) {}

    std::size_t layer() const noexcept { return layer_; }
    std::size_t unit() const noexcept { return unit_; }
    double preactivation() const noexcept { return preactivation_; }

private:
    std::size_t layer_;
    std::size_t unit_;
    double preactivation_;
};

/// A singular value needed by the operation is below the rank tolerance.
class RankError : public Error {
public:
    using Error::Error;
};

/// Decomposition failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Too few samples for a non-degenerate covariance.
class UnderSampledError : public Error {
public:
    using Error::Error;
};

class InvalidDirectionError : public Error {
public:
    using Error::Error;
};

/// Malformed weight file or other structured input.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace latentgeom
