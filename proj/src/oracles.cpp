#include "lpvol/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "lpvol/errors.hpp"
#include "lpvol/quadrature.hpp"
#include "lpvol/rng.hpp"
#include "lpvol/symmetric.hpp"

namespace lpvol {

namespace {

double integrate(const std::function<double(double)>& f, double a, double b, const QuadConfig& cfg,
                 const std::vector<double>& bp = {}) {
    const quad::Result r = quad::gauss_kronrod(f, a, b, cfg.tightened(1e-12).tolerance(), bp);
    if (!r.converged) throw QuadratureFailure("oracle quadrature did not converge");
    return r.value;
}

// 2 Phi(x) - 1.
double centered_cdf(double x) { return std::erf(x / std::numbers::sqrt2); }

}  // namespace

double ball_vj(int n, int j) {
    if (n < 0 || j < 0 || j > n) throw DomainError("ball_vj needs 0 <= j <= n");
    return std::exp(log_binomial(n, j) + log_kappa(n) - log_kappa(n - j));
}

double cube_vj(int n, int j) {
    if (n < 0 || j < 0 || j > n) throw DomainError("cube_vj needs 0 <= j <= n");
    // Exact while C(n, j) 2^j fits in 53 bits.
    double v = std::ldexp(1.0, j);
    for (int i = 1; i <= j; ++i) v = v * (n - j + i) / i;
    return v;
}

double box_vj(const Eigen::VectorXd& half_sides, int j) {
    if (j < 0 || j > half_sides.size()) throw DomainError("box_vj needs 0 <= j <= n");
    return std::ldexp(elementary_symmetric(half_sides, j)[j], j);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double crosspolytope_vj(int n, int j, const QuadConfig& cfg) {
    if (n < 1 || j < 0 || j > n) throw DomainError("crosspolytope_vj needs 0 <= j <= n");
    if (j == n) return std::exp(n * std::log(2.0) - log_gamma(n + 1.0));
    const double r = std::sqrt(j + 1.0);
    const int k = n - j - 1;
    auto f = [&](double t) { return normal_pdf(r * t) * std::pow(centered_cdf(t), k); };
    const double upper = 10.0 / r;
    const double I = integrate(f, 0.0, upper, cfg);
    return std::exp((j + 1) * std::log(2.0) + log_binomial(n, j + 1) + std::log(j + 1.0) - log_gamma(j + 1.0)) * I;
}

double crosspolytope_vj_weighted(const Eigen::VectorXd& a, int j, const QuadConfig& cfg) {
    const int n = static_cast<int>(a.size());
    if (n > 20) throw DomainError("weighted crosspolytope enumeration is limited to n <= 20");
    if (j < 0 || j > n) throw DomainError("crosspolytope_vj_weighted needs 0 <= j <= n");
    if (j == n) return std::exp(n * std::log(2.0) - log_gamma(n + 1.0) - a.array().log().sum());
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != j + 1) continue;
        double S = 0.0, prod = 1.0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1u) {
                S += a[i] * a[i];
                prod *= a[i];
            }
        const double r = std::sqrt(S);
        auto f = [&](double x) {
            double v = normal_pdf(r * x);
            for (int i = 0; i < n; ++i)
                if (!(mask >> i & 1u)) v *= centered_cdf(a[i] * x);
            return v;
        };
        total += S / prod * integrate(f, 0.0, 10.0 / r, cfg);
    }
    return std::exp((j + 1) * std::log(2.0) - log_gamma(j + 1.0)) * total;
}

double ellipsoid_vj(const Eigen::VectorXd& b, int j, const QuadConfig& cfg, EllipsoidForm form) {
    const int n = static_cast<int>(b.size());
    if (form == EllipsoidForm::A && (j < 0 || j > n - 1)) throw DomainError("ellipsoid form A needs 0 <= j <= n-1");
    if (form == EllipsoidForm::B && (j < 1 || j > n)) throw DomainError("ellipsoid form B needs 1 <= j <= n");
    const Eigen::VectorXd b2 = b.array().square();
    const int k = form == EllipsoidForm::A ? j : j - 1;
    const int power = form == EllipsoidForm::A ? j + 1 : j - 1;

    std::vector<double> bp;
    for (int i = 0; i < n; ++i) bp.push_back(-std::log(b[i]));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    const double lo = bp.front() - 60.0, hi = bp.back() + 60.0;

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sig = elementary_symmetric_without(b2, i, k);
        if (sig == 0.0) continue;
        // t = e^s, dt = t ds
        auto f = [&](double s) {
            const double t = std::exp(s), t2 = t * t;
            double log_den = std::log1p(b2[i] * t2);
            for (int r = 0; r < n; ++r) log_den += 0.5 * std::log1p(b2[r] * t2);
            return std::exp((power + 1) * s - log_den);
        };
        total += b2[i] * sig * integrate(f, lo, hi, cfg, bp);
    }
    return kappa(j) * total;
}

Eigen::VectorXd project_lp_ball(const PBallSpec& spec, const Eigen::VectorXd& x) {
    const int n = spec.n();
    if (x.size() != n) throw DomainError("point dimension does not match the body");
    const double p = spec.p();
    const Eigen::VectorXd ap = spec.weights().array().pow(p);
    const Eigen::ArrayXd xa = x.array().abs();
    if ((ap.array() * xa.pow(p)).sum() <= 1.0) return x;

    // z + c z^{p-1} = |x_i| has a unique root in [0, |x_i|].
    auto coord = [&](double xi, double c) {
        if (xi == 0.0 || c == 0.0) return xi;
        double lo = 0.0, hi = xi, z = xi / (1.0 + c * std::pow(xi, p - 2.0));
        z = std::clamp(z, 0.0, xi);
        for (int it = 0; it < 200; ++it) {
            const double phi = z + c * std::pow(z, p - 1.0) - xi;
            if (phi > 0.0) hi = z; else lo = z;
            if (hi - lo <= 1e-16 * xi) break;
            const double d = 1.0 + c * (p - 1.0) * std::pow(z, p - 2.0);
            double zn = z - phi / d;
            if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
            if (std::abs(zn - z) <= 1e-16 * xi) { z = zn; break; }
            z = zn;
        }
        return z;
    };

    Eigen::ArrayXd z(n);
    auto residual = [&](double mu, double* slope) {
        double v = -1.0, dv = 0.0;
        for (int i = 0; i < n; ++i) {
            const double c = mu * p * ap[i];
            z[i] = coord(xa[i], c);
            v += ap[i] * std::pow(z[i], p);
            if (slope && z[i] > 0.0) {
                const double dz = -p * ap[i] * std::pow(z[i], p - 1.0) / (1.0 + c * (p - 1.0) * std::pow(z[i], p - 2.0));
                dv += p * ap[i] * std::pow(z[i], p - 1.0) * dz;
            }
        }
        if (slope) *slope = dv;
        return v;
    };

    double lo = 0.0, hi = 1.0;
    while (residual(hi, nullptr) > 0.0) {
        hi *= 2.0;
        if (hi > 1e300) throw ConvergenceFailure("projection multiplier bracket failed");
    }
    double mu = 0.5 * hi;
    bool done = false;
    for (int it = 0; it < 300; ++it) {
        double dv = 0.0;
        const double v = residual(mu, &dv);
        if (std::abs(v) <= 1e-13) { done = true; break; }
        if (v > 0.0) lo = mu; else hi = mu;
        double next = dv < 0.0 ? mu - v / dv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 1e-15 * hi) { mu = next; done = true; break; }
        mu = next;
    }
    if (!done) throw ConvergenceFailure("projection onto the l_p ball did not converge");
    residual(mu, nullptr);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = std::copysign(z[i], x[i]);
    return y;
}

void McConfig::validate() const {
    if (sample_count < 10'000) throw DomainError("Monte Carlo sample_count must be at least 1e4");
    if (batch < 1) throw DomainError("Monte Carlo batch must be positive");
    if (threads < 1) throw DomainError("Monte Carlo threads must be positive");
}

McEstimate steiner_mc_volume(const PBallSpec& spec, double t, const McConfig& mc) {
    mc.validate();
    const int n = spec.n();
    if (n != 2 && n != 3) throw DomainError("steiner_mc_volume supports n = 2 or 3");
    if (!(t >= 0.0)) throw DomainError("offset radius t must be >= 0");
    const double p = spec.p(), q = p / (p - 1.0);
    const Eigen::VectorXd& a = spec.weights();
    const Eigen::ArrayXd half = a.array().inverse() + t;
    const double box = (2.0 * half).prod();

    const std::int64_t nb = (mc.sample_count + mc.batch - 1) / mc.batch;
    std::vector<std::int64_t> hits(nb, 0), projs(nb, 0);

    auto run_batch = [&](std::int64_t b) {
        CounterRng rng(mc.seed, static_cast<std::uint64_t>(b));
        const std::int64_t count = std::min(mc.batch, mc.sample_count - b * mc.batch);
        Eigen::VectorXd x(n);
        std::int64_t h = 0, pr = 0;
        for (std::int64_t s = 0; s < count; ++s) {
            for (int i = 0; i < n; ++i) x[i] = rng.uniform(-half[i], half[i]);
            const double F = (a.array() * x.array()).abs().pow(p).sum();
            if (F <= 1.0) { ++h; continue; }
            const double r = x.norm();
            const double hu = std::pow((x.array() / (r * a.array())).abs().pow(q).sum(), 1.0 / q);
            if (r - hu > t) continue;  // a supporting halfspace already separates
            if (r * (1.0 - std::pow(F, -1.0 / p)) <= t) { ++h; continue; }  // radial boundary point is close
            ++pr;
            if ((x - project_lp_ball(spec, x)).norm() <= t) ++h;
        }
        hits[b] = h;
        projs[b] = pr;
    };

    const int threads = static_cast<int>(std::min<std::int64_t>(mc.threads, nb));
    if (threads <= 1) {
        for (std::int64_t b = 0; b < nb; ++b) run_batch(b);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (std::int64_t b = w; b < nb; b += threads) run_batch(b);
            });
        for (auto& th : pool) th.join();
    }

    McEstimate out;
    for (std::int64_t b = 0; b < nb; ++b) {
        out.hits += hits[b];
        out.projections += projs[b];
    }
    out.samples = mc.sample_count;
    const double f = static_cast<double>(out.hits) / static_cast<double>(out.samples);
    out.estimate = box * f;
    out.std_err = box * std::sqrt(f * (1.0 - f) / static_cast<double>(out.samples));
    out.seed = mc.seed;
    out.generator = std::string(CounterRng::name);
    return out;
}

}  // namespace lpvol
