#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <numbers>

namespace testing {

inline double rel(double a, double b) { return std::abs(a / b - 1.0); }

/// int_0^inf f by tanh-sinh on [0,1] and exp-sinh on [1,inf).
inline double half_line(const std::function<double(double)>& f) {
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    return ts.integrate(f, 0.0, 1.0, 1e-13) + es.integrate(f, 1.0, INFINITY, 1e-13);
}

inline double segment(const std::function<double(double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b, 1e-13);
}

/// Point of |x|^p + |y|^p = 1 in the first quadrant at parameter phi in (0, pi/2).
inline void superellipse(double p, double phi, double& x, double& y) {
    x = std::pow(std::cos(phi), 2.0 / p);
    y = std::pow(std::sin(phi), 2.0 / p);
}

/// Arclength of the first quadrant of {|a1 x|^p + |a2 y|^p = 1}, weighted by g(x, y).
inline double quadrant_arclength(double p, double a1, double a2, const std::function<double(double, double)>& g) {
    auto ds = [&](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        const double dx = -(2.0 / p) * std::pow(c, 2.0 / p - 1.0) * s / a1;
        const double dy = (2.0 / p) * std::pow(s, 2.0 / p - 1.0) * c / a2;
        return std::hypot(dx, dy) * g(std::pow(c, 2.0 / p) / a1, std::pow(s, 2.0 / p) / a2);
    };
    return segment(ds, 0.0, std::numbers::pi / 2);
}

}  // namespace testing
