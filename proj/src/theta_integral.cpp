#include "theta_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lpvol/errors.hpp"

namespace lpvol::detail {

namespace {

constexpr double kStep = 0.5;
constexpr double kSMax = 600.0;  // e^600 is still a finite double with room for a_i^2

struct Sampled {
    double s, v;
};

}  // namespace

LogIntegral integrate_log_theta(const std::function<double(double)>& f, const QuadConfig& cfg) {
    const double margin = cfg.theta_truncation_factor;
    int evals = 0;
    auto g = [&](double s) {
        ++evals;
        const double v = f(s);
        if (std::isnan(v)) throw OverflowGuard("log-integrand is NaN");
        return v;
    };

    std::vector<Sampled> grid;
    for (double s = -20.0; s <= 20.0 + 1e-12; s += kStep) grid.push_back({s, g(s)});
    auto peak = [&] {
        return std::max_element(grid.begin(), grid.end(), [](auto& a, auto& b) { return a.v < b.v; })->v;
    };
    double M = peak();
    if (!std::isfinite(M)) throw OverflowGuard("log-integrand has no finite value on the scan grid");

    // Extend until both ends sit well below the running maximum.
    while (grid.front().v > M - margin - 5.0 && grid.front().s > -kSMax) {
        std::vector<Sampled> ext;
        for (int k = 20; k >= 1; --k) ext.push_back({grid.front().s - k * kStep, 0.0});
        for (auto& e : ext) e.v = g(e.s);
        grid.insert(grid.begin(), ext.begin(), ext.end());
        M = std::max(M, peak());
    }
    while (grid.back().v > M - margin - 5.0 && grid.back().s < kSMax) {
        const double s0 = grid.back().s;
        for (int k = 1; k <= 20; ++k) grid.push_back({s0 + k * kStep, g(s0 + k * kStep)});
        M = std::max(M, peak());
    }

    // Golden-section polish of the peak between the neighbours of the best grid node.
    const auto best = std::max_element(grid.begin(), grid.end(), [](auto& a, auto& b) { return a.v < b.v; });
    const size_t ib = static_cast<size_t>(best - grid.begin());
    double a = grid[ib == 0 ? 0 : ib - 1].s, b = grid[std::min(ib + 1, grid.size() - 1)].s;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 40 && b - a > 1e-7; ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = g(x2);
        } else {
            b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = g(x1);
        }
    }
    double s_star = f1 > f2 ? x1 : x2;
    M = std::max({M, f1, f2});
    if (best->v >= M) s_star = best->s;

    // Outermost grid nodes above the cut level, then bisect to the crossing.
    const double level = M - margin;
    size_t lo = 0, hi = grid.size() - 1;
    while (lo < grid.size() && grid[lo].v <= level) ++lo;
    while (hi > 0 && grid[hi].v <= level) --hi;
    auto cross = [&](double in, double out) {
        for (int it = 0; it < 60 && std::abs(in - out) > 1e-9; ++it) {
            const double mid = 0.5 * (in + out);
            (g(mid) > level ? in : out) = mid;
        }
        return out;
    };
    const double s_lo = lo > 0 ? cross(grid[lo].s, grid[lo - 1].s) : grid.front().s;
    const double s_hi = hi + 1 < grid.size() ? cross(grid[hi].s, grid[hi + 1].s) : grid.back().s;

    auto h = [&](double s) { return std::exp(g(s) - M); };
    std::vector<double> bp;
    if (s_star > s_lo && s_star < s_hi) bp.push_back(s_star);
    const quad::Result core = quad::gauss_kronrod(h, s_lo, s_hi, cfg.tolerance(), bp);
    if (!core.converged || !(core.value > 0.0))
        throw QuadratureFailure("theta integral did not converge");
    // An end that never dropped below the cut carries an uncontrolled tail.
    if (grid.front().v > level || grid.back().v > level)
        throw QuadratureFailure("theta integrand does not decay within |log theta| <= 600");

    // Doubling check: the pieces beyond the cut, each as wide as the kept half.
    const double wl = std::min(s_star - s_lo, s_lo + kSMax), wr = std::min(s_hi - s_star, kSMax - s_hi);
    quad::Tolerance loose = cfg.tolerance();
    loose.rel = 1e-3;
    double tails = 0.0;
    if (wl > 0.0) tails += quad::gauss_kronrod(h, s_lo - wl, s_lo, loose).value;
    if (wr > 0.0) tails += quad::gauss_kronrod(h, s_hi, s_hi + wr, loose).value;
    const double total = core.value + tails;

    LogIntegral out;
    out.log_value = M + std::log(total);
    out.rel_error = core.abs_error / core.value + tails / total;
    out.nodes = evals;
    return out;
}

}  // namespace lpvol::detail
