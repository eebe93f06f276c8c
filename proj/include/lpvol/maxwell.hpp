#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lpvol/asymptotics.hpp"
#include "lpvol/specfun.hpp"

namespace lpvol {

enum class Regime { Bulk, LeftEdge, RightEdge };

const char* regime_name(Regime r);

/// Limit law of one coordinate of a point drawn from the normalized curvature measure.
class LimitLaw {
public:
    static LimitLaw bulk(double p, double alpha, const QuadConfig& cfg = {});
    static LimitLaw left_edge(double p, const QuadConfig& cfg = {});
    static LimitLaw right_edge(double p, const QuadConfig& cfg = {});

    [[nodiscard]] Regime regime() const { return regime_; }
    [[nodiscard]] double p() const { return p_; }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] const PhasePoint& phase_point() const { return phase_; }
    /// (p Gamma((2p-1)/(2p-2)) / sqrt(pi))^{2(p-1)/p}
    [[nodiscard]] double lambda0() const { return lambda0_; }
    /// Factor by which n^{1/p}-scaled coordinates are multiplied before comparing moments.
    [[nodiscard]] double moment_scale() const;
    /// Total mass measured by quadrature when the law was built.
    [[nodiscard]] double measured_mass() const { return mass_; }

private:
    LimitLaw(Regime r, double p, double alpha, const QuadConfig& cfg);

    Regime regime_;
    double p_, alpha_;
    PhasePoint phase_{};
    double lambda0_ = 0.0;
    double mass_ = 0.0;
    QuadConfig cfg_;
};

double limit_density(const LimitLaw& law, double u);

/// E|xi|^lambda in closed form (unscaled).
double limit_moment(const LimitLaw& law, double lambda);
/// Same moment by direct quadrature of |u|^lambda times the density.
double limit_moment_quadrature(const LimitLaw& law, double lambda, const QuadConfig& cfg = {});

/// E prod |X_k|^{lambda_k} for X distributed as Phi_j(B_p^n, .) / V_j, optionally times n^{Lambda/p}.
double finite_n_moment_ratio(double p, int n, int j, const std::vector<double>& lambdas, bool scaled = false,
                             const QuadConfig& cfg = {}, double* rel_error = nullptr);

struct RegimeIndex {
    Regime regime = Regime::Bulk;
    double alpha = 0.5;  ///< bulk: j(n) = floor(alpha n)
    int j = 1;           ///< left edge: fixed j
    int m = 1;           ///< right edge: j = n - m

    [[nodiscard]] int j_of(int n) const;
};

struct ConvergenceRow {
    int n = 0, j = 0;
    double scaled_moment = 0.0;
    double limit = 0.0;
    double rel_gap = 0.0;
    double rel_error = 0.0;  ///< quadrature estimate for scaled_moment
};

std::vector<ConvergenceRow> convergence_table(double p, const RegimeIndex& idx, const std::vector<double>& lambdas,
                                              const std::vector<int>& n_list, const QuadConfig& cfg = {});

struct EmpiricalSample {
    Eigen::MatrixXd draws;  ///< count x r
    std::uint64_t seed = 0;
    std::string source;
};

/// Uniform points on the j-skeleton of [-1,1]^n, first r coordinates kept.
EmpiricalSample sample_cube_skeleton(int n, int j, std::int64_t count, std::uint64_t seed, int r = 1);
/// Uniform points on the j-skeleton of n B_1^n, first r coordinates kept.
EmpiricalSample sample_crosspolytope_skeleton(int n, int j, std::int64_t count, std::uint64_t seed, int r = 1);

/// CDF (and left limit) of alpha Unif[-1,1] + (1-alpha)(delta_{-1} + delta_{1})/2.
double cube_skeleton_limit_cdf(double alpha, double x, bool left = false);
/// CDF (and left limit) of (1-alpha) delta_0 + alpha Laplace with density (alpha/2) e^{-alpha |x|}.
double crosspolytope_skeleton_limit_cdf(double alpha, double x, bool left = false);

/// sup |F_n - F| for a target that may have atoms; cdf(x, left) returns F(x) or F(x-).
double kolmogorov_distance(std::vector<double> xs, const std::function<double(double, bool)>& cdf,
                           const std::vector<double>& atoms = {});

}  // namespace lpvol
