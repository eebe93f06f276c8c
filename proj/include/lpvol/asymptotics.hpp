#pragma once

#include "lpvol/log_value.hpp"
#include "lpvol/specfun.hpp"

namespace lpvol {

struct PhasePoint {
    double beta = 0.0;
    double theta_star = 0.0;
    double psi_at_star = 0.0;
    double psi2_at_star = 0.0;
    double residual = 0.0;  ///< |theta J / I / target - 1| at theta_star
    double log_I = 0.0, log_J = 0.0, log_K = 0.0;
};

/// Psi_{p,beta}(theta) = ((1-beta)/2) log theta + beta log I(theta) + (1-beta) log J(theta).
double phase(double p, double beta, double theta, const QuadConfig& cfg = {});

/// theta J(theta) / I(theta), strictly increasing from 0 to inf.
double phase_ratio(double p, double theta, const QuadConfig& cfg = {});

/// Unique maximizer of Psi_{p,beta} with the analytic second derivative there.
PhasePoint phase_maximizer(double p, double beta, const QuadConfig& cfg = {});

/// Laplace approximation of V_j(B_p^n) with alpha = j/n, 0 < j < n.
LogValue bulk_asymptotic(double p, int n, int j, const QuadConfig& cfg = {});

/// Leading term of V_j(B_p^n) for fixed j as n grows.
double left_edge_asymptotic(double p, int n, int j);

/// Leading term of V_{n-m}(B_p^n) for fixed m as n grows.
LogValue right_edge_asymptotic(double p, int n, int m);

struct ProfilePoint {
    double alpha = 0.0;
    double g_value = 0.0;
    double kappa_term = 0.0;
    double sup_psi = 0.0;
};

/// kappa_p(alpha), with 0 log 0 = 0.
double profile_kappa(double p, double alpha);

/// g_p(alpha) = lim (1/n) log V_{alpha n}(n^{1/p} B_p^n).
ProfilePoint exp_profile(double p, double alpha, const QuadConfig& cfg = {});

struct ProfileReferences {
    double g_inf, g_2, g_1, g_simplex;
};

/// Profiles of the cube, Euclidean ball, crosspolytope and regular simplex.
ProfileReferences profile_references(double alpha);

/// Surface area of B_p^n (normalized = false) or of its dilate of unit volume (normalized = true).
LogValue surface_area_asymptotic(double p, int n, bool normalized);

}  // namespace lpvol
