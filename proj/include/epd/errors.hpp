#pragma once

#include <stdexcept>
#include <string>

namespace epd {

// Root of every error the library raises. The CLI maps subclasses onto exit
// codes, so keep the hierarchy flat.
class EpdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition violated: argument outside the domain where a formula holds.
class DomainError : public EpdError {
public:
    using EpdError::EpdError;
};

// Gamma pole (non-positive integer argument) hit by a constant or series.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

// Evaluation point within the guard band around t = |x - x'|.
class LightConeError : public DomainError {
public:
    using DomainError::DomainError;
};

// Finite-difference stencil would leave the region where the field is smooth.
class StencilDomainError : public DomainError {
public:
    using DomainError::DomainError;
};

// Series or iterative scheme hit its term cap before meeting the tolerance.
class NoConvergence : public EpdError {
public:
    using EpdError::EpdError;
};

// Quadrature did not reach the requested tolerance or produced a non-finite value.
class QuadratureFailure : public NoConvergence {
public:
    using NoConvergence::NoConvergence;
};

}  // namespace epd
