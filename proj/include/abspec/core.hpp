/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_CORE_HPP
#define ABSPEC_CORE_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace abspec {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr cplx iu{0.0, 1.0};

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Spectral shift outside the gap (0, 2mc^2), or invalid physical parameters.
struct GapError : Error {
    using Error::Error;
};

/// The rank-one prefactor denominator vanished: the shift sits on an eigenvalue.
struct PoleError : Error {
    using Error::Error;
};

/// Grid does not satisfy the preconditions of a grid operation.
struct GridError : Error {
    using Error::Error;
};

/// Array shapes inconsistent with the declared field layout.
struct ShapeError : Error {
    using Error::Error;
};

/// Reduced boundary data requested with incompatible inputs.
struct SupersymmetryError : Error {
    using Error::Error;
};

/// A requested eigenvalue could not be bracketed.
struct MissingEigenvalue : Error {
    using Error::Error;
};

/// A sweep shift collides with a gap eigenvalue.
struct EigenvalueCollision : Error {
    using Error::Error;
};

/// Extension parameter on the extended real line: a finite value or infinity.
/// Infinity is a first-class state, never a sentinel float.
class ExtParam {
public:
    ExtParam() : inf_(false), v_(0.0) {}

    static ExtParam finite(double v) {
        if (!std::isfinite(v)) throw DomainError("ExtParam::finite requires a finite value");
        ExtParam p;
        p.v_ = v;
        return p;
    }
    static ExtParam inf() {
        ExtParam p;
        p.inf_ = true;
        return p;
    }

    bool is_inf() const { return inf_; }
    double value() const {
        if (inf_) throw DomainError("ExtParam is infinite; no finite value");
        return v_;
    }

    friend bool operator==(const ExtParam& a, const ExtParam& b) {
        if (a.inf_ != b.inf_) return false;
        return a.inf_ || a.v_ == b.v_;
    }

    std::string str() const { return inf_ ? "inf" : std::to_string(v_); }

private:
    bool inf_;
    double v_;
};

/// Flux parameter range accepted throughout the library.
inline constexpr double alpha_max = 0.499;

inline void check_alpha(double alpha) {
    if (!(alpha > -alpha_max && alpha < alpha_max))
        throw DomainError("alpha must lie in (-0.499, 0.499)");
}

} // namespace abspec

#endif
