#pragma once

#include <stdexcept>
#include <string>

namespace imfd {

// Base class for every error raised by the library. All failures carry a
// human-readable message with the offending quantity (node index, step,
// parameter value) already formatted in.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Grid generation produced duplicate coordinates twice in a row.
class DegenerateGrid : public Error {
public:
    using Error::Error;
};

// Fewer than 4 nodes inside the stencil radius: the truncated Taylor
// system (4 unknowns) is underdetermined.
class InsufficientStencil : public Error {
public:
    using Error::Error;
};

// The 4x4 weighted normal matrix is numerically rank-deficient.
class SingularStencil : public Error {
public:
    using Error::Error;
};

// Group action evaluated at a point with 1 - eps5*x == 0.
class PoleHit : public Error {
public:
    using Error::Error;
};

// Continuous moving frame requested outside its domain (u <= 0,
// u_t/u <= 0, u_x == 0 or x*u_x + 3u == 0).
class FrameUndefined : public Error {
public:
    using Error::Error;
};

// Every real root of the frame cubic hits a pole of the stencil: the
// invariant scheme cannot be formed at this node.
class NoAdmissibleRoot : public Error {
public:
    using Error::Error;
};

// A solution value dropped to zero or below; u^{-4/3} is undefined.
// Reported as an instability of the explicit scheme.
class NonPositiveU : public Error {
public:
    using Error::Error;
};

// Exact-solution evaluation where the inner expression is <= 0.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

// NaN/Inf values or runaway magnitudes detected during integration.
class Instability : public Error {
public:
    using Error::Error;
};

// Configuration value outside a module precondition.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

} // namespace imfd
