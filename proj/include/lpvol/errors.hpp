#pragma once

#include <stdexcept>
#include <string>

namespace lpvol {

/// Argument outside the domain of a formula (p <= 1, nu <= -1, j out of range, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Adaptive quadrature did not reach its tolerance within the subdivision budget.
class QuadratureFailure : public std::runtime_error {
public:
    explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver (root finder, projection) exhausted its iteration budget.
class ConvergenceFailure : public std::runtime_error {
public:
    explicit ConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Point outside the C^2 locus of the boundary (some coordinate is zero).
class DegenerateInput : public std::invalid_argument {
public:
    explicit DegenerateInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A quantity that should be finite in log space became non-finite.
class OverflowGuard : public std::overflow_error {
public:
    explicit OverflowGuard(const std::string& what) : std::overflow_error(what) {}
};

}  // namespace lpvol
