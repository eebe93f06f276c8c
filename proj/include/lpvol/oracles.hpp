#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "lpvol/exactvol.hpp"
#include "lpvol/specfun.hpp"

namespace lpvol {

/// V_j of the Euclidean unit ball, C(n,j) kappa_n / kappa_{n-j}.
double ball_vj(int n, int j);

/// V_j of [-1,1]^n, C(n,j) 2^j.
double cube_vj(int n, int j);
/// V_j of the box prod [-h_i, h_i], 2^j sigma_j(h).
double box_vj(const Eigen::VectorXd& half_sides, int j);

double normal_pdf(double x);
double normal_cdf(double x);

/// V_j of the crosspolytope B_1^n. 0 <= j <= n.
double crosspolytope_vj(int n, int j, const QuadConfig& cfg = {});
/// V_j of {sum a_i |x_i| <= 1}, by enumerating the (j+1)-subsets. n <= 20, 0 <= j <= n.
double crosspolytope_vj_weighted(const Eigen::VectorXd& a, int j, const QuadConfig& cfg = {});

enum class EllipsoidForm { A, B };

/// V_j of the ellipsoid with semiaxes b. Form A: 0 <= j <= n-1, form B: 1 <= j <= n.
double ellipsoid_vj(const Eigen::VectorXd& b, int j, const QuadConfig& cfg = {}, EllipsoidForm form = EllipsoidForm::A);

/// Euclidean projection onto B_p^n(a). Points inside are returned unchanged.
Eigen::VectorXd project_lp_ball(const PBallSpec& spec, const Eigen::VectorXd& x);

struct McConfig {
    std::int64_t sample_count = 1'000'000;
    std::uint64_t seed = 0x5eed5eedULL;
    std::int64_t batch = 65'536;
    int threads = 1;

    void validate() const;
};

struct McEstimate {
    double estimate = 0.0;
    double std_err = 0.0;
    std::int64_t samples = 0;
    std::int64_t hits = 0;
    std::int64_t projections = 0;  ///< samples that needed the exact projection
    std::uint64_t seed = 0;
    std::string generator;
};

/// Hit-or-miss estimate of Vol(B_p^n(a) + t B_2^n) for n in {2, 3}.
McEstimate steiner_mc_volume(const PBallSpec& spec, double t, const McConfig& mc = {});

}  // namespace lpvol
