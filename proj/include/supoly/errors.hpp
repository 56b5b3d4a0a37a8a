// errors.hpp: exception types shared by the toolkit.
#pragma once

#include <stdexcept>
#include <string>

namespace supoly {

/// Argument outside the domain of an operation (bad |j|, |zeta| >= r, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numeric failure that a caller may want to report distinctly from bad input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every coefficient is (numerically) zero, so the zero set is undefined.
class DegeneratePolynomialError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A polished root sits on the counting circle |z| = r within tolerance.
class BoundaryAmbiguityError : public NumericError {
public:
    BoundaryAmbiguityError(const std::string& what, double radius)
        : NumericError(what), radius_(radius) {}
    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}
}  // namespace detail

}  // namespace supoly
