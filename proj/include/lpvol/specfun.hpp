#pragma once

#include "lpvol/log_value.hpp"
#include "lpvol/quadrature.hpp"

namespace lpvol {

/// Exponent of the l_p ball. Only 1 < p < inf is representable; p = 1 and p = inf are
/// handled by the closed-form references in oracles.hpp.
class PExponent {
public:
    explicit PExponent(double p);
    [[nodiscard]] double value() const { return p_; }
    operator double() const { return p_; }  // NOLINT(google-explicit-constructor)

private:
    double p_;
};

/// Tolerances and budgets shared by every integral in the library.
struct QuadConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 1000;
    /// Margin, in units of the log-integrand, below the peak at which ranges are truncated.
    double theta_truncation_factor = 46.0;
    /// Breakpoint (in the rescaled variable) between the power-substituted left piece
    /// and the log-substituted right piece of F_p(t; nu).
    double singularity_split = 0.5;

    /// Throws DomainError when an invariant is violated.
    void validate() const;
    [[nodiscard]] quad::Tolerance tolerance() const { return {rel_tol, abs_tol, max_subdivisions}; }
    /// Copy with rel_tol tightened to at most `rel`.
    [[nodiscard]] QuadConfig tightened(double rel) const;
};

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Volume of the unit Euclidean ball in R^m, pi^{m/2} / Gamma(1 + m/2).
double kappa(int m);
double log_kappa(int m);

/// log of the binomial coefficient C(n, k); -inf outside 0 <= k <= n.
double log_binomial(double n, double k);

/// log F_p(t; nu) with F_p(t; nu) = int_R |u|^nu exp(-|u|^p - t |u|^{2p-2}) du.
///
/// The integral is rescaled by c = t^{-1/(2p-2)} when t > 1, so the integrand is O(1)
/// and the logarithm never underflows even where F itself is below the double range.
/// Throws DomainError (nu <= -1, t < 0) or QuadratureFailure.
double log_f_family(double p, double t, double nu, const QuadConfig& cfg = {});

/// F_p(t; nu) itself.
double f_family(const PExponent& p, double t, double nu, const QuadConfig& cfg = {});

/// Two-term large-t expansion F ~ leading * (1 - first_correction * t^{-p/(2p-2)}).
struct LargeTExpansion {
    double leading;           ///< Gamma((nu+1)/(2p-2)) / (p-1) * t^{-(nu+1)/(2p-2)}
    double first_correction;  ///< Gamma((nu+p+1)/(2p-2)) / Gamma((nu+1)/(2p-2))
    double exponent;          ///< p / (2p-2), the power of t^{-1} multiplying the correction

    [[nodiscard]] double two_term(double t) const;
};

LargeTExpansion f_family_large_t(const PExponent& p, double t, double nu);

/// The four members used throughout: I = F(t;0), J = F(t;p-2), K = F(t;2p-2), L = F(t;3p-4).
struct IJKL {
    double I, J, K, L;
};

/// Same quantities as logs, which is what the theta integrals actually consume.
struct LogIJK {
    double log_I, log_J, log_K;
};

IJKL ijkl(const PExponent& p, double t, const QuadConfig& cfg = {});
LogIJK log_ijk(double p, double t, const QuadConfig& cfg = {});

}  // namespace lpvol
