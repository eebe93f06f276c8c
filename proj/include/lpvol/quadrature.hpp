#pragma once

#include <functional>
#include <initializer_list>
#include <vector>

namespace lpvol::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int intervals = 0;       ///< subintervals in the final partition
    int evaluations = 0;
    bool converged = false;
};

/// Tolerances for a single adaptive integration.
struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    int max_subdivisions = 1000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over [a, b].
///
/// The interval with the largest error estimate is bisected until the summed estimate
/// drops below max(abs, rel * |value|) or the subdivision budget is spent. Interior
/// breakpoints (e.g. a known peak) can be supplied to seed the partition. Never throws;
/// callers inspect `converged`.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Tolerance& tol, std::initializer_list<double> breakpoints = {});

/// Same as above with an explicit breakpoint list (sorted, strictly inside (a, b)).
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Tolerance& tol, const std::vector<double>& breakpoints);

}  // namespace lpvol::quad
