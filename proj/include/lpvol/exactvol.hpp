#pragma once

#include <Eigen/Core>
#include <vector>

#include "lpvol/log_value.hpp"
#include "lpvol/specfun.hpp"

namespace lpvol {

/// The body B_p^n(a) = {x : sum |a_i x_i|^p <= 1}.
class PBallSpec {
public:
    PBallSpec(PExponent p, Eigen::VectorXd weights);
    static PBallSpec unit(double p, int n);

    [[nodiscard]] double p() const { return p_.value(); }
    [[nodiscard]] PExponent exponent() const { return p_; }
    [[nodiscard]] int n() const { return static_cast<int>(a_.size()); }
    [[nodiscard]] const Eigen::VectorXd& weights() const { return a_; }
    [[nodiscard]] bool unit_weights() const;

private:
    PExponent p_;
    Eigen::VectorXd a_;
};

/// Codimension m and Mellin exponents; lambdas shorter than n are padded with zeros.
struct MomentRequest {
    int m = 1;
    std::vector<double> lambdas;
};

struct IntrinsicVolumeResult {
    LogValue value;
    int j = 0;
    int theta_nodes = 0;
    double rel_error = 0.0;

    [[nodiscard]] double to_double() const { return value.to_double(); }
};

/// V_j(B_p^n) for unit weights, 0 <= j <= n-1. j = n is volume().
IntrinsicVolumeResult intrinsic_volume(const PBallSpec& spec, int j, const QuadConfig& cfg = {});

LogValue volume(const PBallSpec& spec);

/// V_j(B_p^n(a)) for arbitrary positive weights, 0 <= j <= n-1.
IntrinsicVolumeResult intrinsic_volume_weighted(const PBallSpec& spec, int j, const QuadConfig& cfg = {});

/// Closed-form theta representation of
///   int_{boundary} prod |x_i|^{alpha_i} (sum a_r^{2p} |x_r|^{2p-2})^{-(alpha+1)/2} dH^{n-1}.
/// Requires alpha_i > -1 and 0 < alpha < (n + sum alpha_i)/(p-1).
double key_integral(const PBallSpec& spec, double alpha, const std::vector<double>& alpha_i,
                    const QuadConfig& cfg = {});

/// int_{boundary} prod |x_k|^{lambda_k} dPhi_{n-m}, as a LogValue with diagnostics.
IntrinsicVolumeResult mixed_moment_result(const PBallSpec& spec, const MomentRequest& req,
                                          const QuadConfig& cfg = {});
double mixed_moment(const PBallSpec& spec, const MomentRequest& req, const QuadConfig& cfg = {});

/// int_{boundary} prod |x_k|^{lambda_k} dH^{n-1}.
double surface_moment(const PBallSpec& spec, const std::vector<double>& lambdas, const QuadConfig& cfg = {});

/// Expected j-volume of a uniformly random orthogonal projection, 1 <= j <= n (unit weights).
double mean_projection_volume(const PBallSpec& spec, int j, const QuadConfig& cfg = {});

namespace detail {

/// log of sum_i w_i [z^{m-1}] prod_{r != i} (v_r + z u_r), with coordinates given as groups of
/// identical (lw, lu, lv) triples of multiplicity c. All arguments are logs of nonnegative values.
struct Triple {
    double lw, lu, lv;
    int count;
};
double log_leave_one_out(const std::vector<Triple>& groups, int m);

}  // namespace detail

}  // namespace lpvol
