#pragma once

#include <functional>

#include "lpvol/specfun.hpp"

namespace lpvol::detail {

struct LogIntegral {
    double log_value = 0.0;
    double rel_error = 0.0;  // quadrature estimate plus the truncated tails
    int nodes = 0;           // integrand evaluations, including the scan
};

/// log of int_0^inf h(theta) dtheta, given log_h_ds(s) = log(theta * h(theta)) at theta = e^s.
///
/// Scans a coarse s-grid for the peak, truncates where the integrand falls
/// cfg.theta_truncation_factor below it, integrates adaptively, then integrates one
/// extension of the same width on each side as a check on the truncation.
LogIntegral integrate_log_theta(const std::function<double(double)>& log_h_ds, const QuadConfig& cfg);

}  // namespace lpvol::detail
