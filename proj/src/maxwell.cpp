#include "lpvol/maxwell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lpvol/errors.hpp"
#include "lpvol/exactvol.hpp"
#include "lpvol/rng.hpp"
#include "theta_integral.hpp"

namespace lpvol {

namespace {

const double kLogSqrtPi = 0.5 * std::log(std::numbers::pi);

// log of the density at u = e^s.
double log_density_at(const LimitLaw& law, double s) {
    const double p = law.p();
    switch (law.regime()) {
        case Regime::Bulk: {
            const PhasePoint& pt = law.phase_point();
            const double a = law.alpha();
            const double A = std::exp(p * s) + pt.theta_star * std::exp((2.0 * p - 2.0) * s);
            return log_add(std::log(a) - A - pt.log_I, std::log1p(-a) + (p - 2.0) * s - A - pt.log_J);
        }
        case Regime::LeftEdge: {
            const double l0 = law.lambda0();
            return std::log(p - 1.0) + 0.5 * std::log(l0) - kLogSqrtPi + (p - 2.0) * s -
                   l0 * std::exp((2.0 * p - 2.0) * s);
        }
        case Regime::RightEdge:
            return -std::exp(p * s) - std::log(2.0) - log_gamma(1.0 + 1.0 / p);
    }
    return 0.0;
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Bulk: return "bulk";
        case Regime::LeftEdge: return "left";
        case Regime::RightEdge: return "right";
    }
    return "?";
}

LimitLaw::LimitLaw(Regime r, double p, double alpha, const QuadConfig& cfg) : regime_(r), p_(p), alpha_(alpha), cfg_(cfg) {
    static_cast<void>(PExponent(p));
    if (r == Regime::Bulk) phase_ = phase_maximizer(p, alpha, cfg);
    lambda0_ = std::pow(p * std::exp(log_gamma((2.0 * p - 1.0) / (2.0 * p - 2.0))) / std::sqrt(std::numbers::pi),
                        2.0 * (p - 1.0) / p);
    mass_ = limit_moment_quadrature(*this, 0.0, cfg);
    if (std::abs(mass_ - 1.0) > 1e-8) {
        std::ostringstream os;
        os << regime_name(r) << " limit density integrates to " << mass_ << " instead of 1";
        throw QuadratureFailure(os.str());
    }
}

LimitLaw LimitLaw::bulk(double p, double alpha, const QuadConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("bulk regime needs 0 < alpha < 1");
    return {Regime::Bulk, p, alpha, cfg};
}
LimitLaw LimitLaw::left_edge(double p, const QuadConfig& cfg) { return {Regime::LeftEdge, p, 0.0, cfg}; }
LimitLaw LimitLaw::right_edge(double p, const QuadConfig& cfg) { return {Regime::RightEdge, p, 1.0, cfg}; }

double LimitLaw::moment_scale() const {
    return regime_ == Regime::Bulk ? std::pow(p_ / alpha_, 1.0 / p_) : std::pow(p_, 1.0 / p_);
}

double limit_density(const LimitLaw& law, double u) {
    if (u == 0.0) {
        const double p = law.p();
        const double sing = p < 2.0 ? INFINITY : (p == 2.0 ? 1.0 : 0.0);  // |u|^{p-2} at 0
        switch (law.regime()) {
            case Regime::Bulk: {
                const PhasePoint& pt = law.phase_point();
                return law.alpha() * std::exp(-pt.log_I) + (1.0 - law.alpha()) * sing * std::exp(-pt.log_J);
            }
            case Regime::LeftEdge:
                return (p - 1.0) * std::sqrt(law.lambda0() / std::numbers::pi) * sing;
            case Regime::RightEdge:
                return std::exp(log_density_at(law, -INFINITY));
        }
    }
    return std::exp(log_density_at(law, std::log(std::abs(u))));
}

double limit_moment(const LimitLaw& law, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("limit_moment needs lambda >= 0");
    const double p = law.p();
    switch (law.regime()) {
        case Regime::Bulk: {
            const PhasePoint& pt = law.phase_point();
            const double a = law.alpha();
            const QuadConfig cfg = QuadConfig{}.tightened(1e-13);
            return a * std::exp(log_f_family(p, pt.theta_star, lambda, cfg) - pt.log_I) +
                   (1.0 - a) * std::exp(log_f_family(p, pt.theta_star, lambda + p - 2.0, cfg) - pt.log_J);
        }
        case Regime::LeftEdge:
            return std::exp(log_gamma((lambda + p - 1.0) / (2.0 * p - 2.0)) - kLogSqrtPi -
                            lambda / (2.0 * p - 2.0) * std::log(law.lambda0()));
        case Regime::RightEdge:
            return std::exp(log_gamma((lambda + 1.0) / p) - log_gamma(1.0 / p));
    }
    return 0.0;
}

double limit_moment_quadrature(const LimitLaw& law, double lambda, const QuadConfig& cfg) {
    if (!(lambda >= 0.0)) throw DomainError("limit_moment needs lambda >= 0");
    // 2 int_0^inf u^lambda f(u) du with u = e^s.
    auto lh = [&](double s) { return (lambda + 1.0) * s + log_density_at(law, s); };
    return 2.0 * std::exp(detail::integrate_log_theta(lh, cfg.tightened(1e-12)).log_value);
}

double finite_n_moment_ratio(double p, int n, int j, const std::vector<double>& lambdas, bool scaled,
                             const QuadConfig& cfg, double* rel_error) {
    if (j < 0 || j >= n) throw DomainError("finite_n_moment_ratio needs 0 <= j <= n-1");
    const PBallSpec spec = PBallSpec::unit(p, n);
    const IntrinsicVolumeResult num = mixed_moment_result(spec, MomentRequest{n - j, lambdas}, cfg);
    const IntrinsicVolumeResult den = mixed_moment_result(spec, MomentRequest{n - j, {}}, cfg);
    if (rel_error) *rel_error = num.rel_error + den.rel_error;
    double lr = num.value.log_abs() - den.value.log_abs();
    if (scaled) {
        double L = 0.0;
        for (double l : lambdas) L += l;
        lr += L / p * std::log(static_cast<double>(n));
    }
    return std::exp(lr);
}

int RegimeIndex::j_of(int n) const {
    switch (regime) {
        case Regime::Bulk: return static_cast<int>(std::floor(alpha * n));
        case Regime::LeftEdge: return j;
        case Regime::RightEdge: return n - m;
    }
    return 0;
}

std::vector<ConvergenceRow> convergence_table(double p, const RegimeIndex& idx, const std::vector<double>& lambdas,
                                              const std::vector<int>& n_list, const QuadConfig& cfg) {
    const LimitLaw law = idx.regime == Regime::Bulk ? LimitLaw::bulk(p, idx.alpha, cfg)
                         : idx.regime == Regime::LeftEdge ? LimitLaw::left_edge(p, cfg)
                                                          : LimitLaw::right_edge(p, cfg);
    double limit = 1.0;
    for (double l : lambdas) limit *= std::pow(law.moment_scale(), l) * limit_moment(law, l);

    std::vector<ConvergenceRow> rows;
    for (int n : n_list) {
        ConvergenceRow r;
        r.n = n;
        r.j = idx.j_of(n);
        if (r.j < 0 || r.j >= n) throw DomainError("regime index maps outside 0 <= j <= n-1");
        r.scaled_moment = finite_n_moment_ratio(p, n, r.j, lambdas, true, cfg, &r.rel_error);
        r.limit = limit;
        r.rel_gap = std::abs(r.scaled_moment / limit - 1.0);
        rows.push_back(r);
    }
    return rows;
}

namespace {

constexpr std::int64_t kSampleBatch = 4096;

// First k entries of a uniform random permutation of 0..n-1, with indices < r flagged.
void choose_subset(CounterRng& rng, std::vector<int>& perm, int k) {
    const int n = static_cast<int>(perm.size());
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = 0; i < k; ++i) {
        const int pick = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(perm[i], perm[pick]);
    }
}

template <typename Fill>
EmpiricalSample sample(int n, std::int64_t count, std::uint64_t seed, int r, const std::string& source, Fill fill) {
    if (count < 1) throw DomainError("sample count must be positive");
    if (r < 1 || r > n) throw DomainError("number of kept coordinates must lie in [1, n]");
    EmpiricalSample out;
    out.draws.resize(count, r);
    out.seed = seed;
    out.source = source;
    std::vector<int> perm(n);
    Eigen::VectorXd x(n);
    for (std::int64_t b = 0; b * kSampleBatch < count; ++b) {
        CounterRng rng(seed, static_cast<std::uint64_t>(b));
        const std::int64_t end = std::min(count, (b + 1) * kSampleBatch);
        for (std::int64_t s = b * kSampleBatch; s < end; ++s) {
            fill(rng, perm, x);
            out.draws.row(s) = x.head(r).transpose();
        }
    }
    return out;
}

}  // namespace

EmpiricalSample sample_cube_skeleton(int n, int j, std::int64_t count, std::uint64_t seed, int r) {
    if (n < 1 || j < 0 || j > n) throw DomainError("cube skeleton needs 0 <= j <= n");
    std::ostringstream src;
    src << "cube-skeleton n=" << n << " j=" << j << " rng=" << CounterRng::name;
    return sample(n, count, seed, r, src.str(), [&](CounterRng& rng, std::vector<int>& perm, Eigen::VectorXd& x) {
        choose_subset(rng, perm, j);
        for (int i = 0; i < n; ++i) x[perm[i]] = i < j ? rng.uniform(-1.0, 1.0) : static_cast<double>(rng.sign());
    });
}

EmpiricalSample sample_crosspolytope_skeleton(int n, int j, std::int64_t count, std::uint64_t seed, int r) {
    if (n < 1 || j < 0 || j > n - 1) throw DomainError("crosspolytope skeleton needs 0 <= j <= n-1");
    std::ostringstream src;
    src << "crosspolytope-skeleton n=" << n << " j=" << j << " rng=" << CounterRng::name;
    std::vector<double> e(j + 1);
    return sample(n, count, seed, r, src.str(), [&](CounterRng& rng, std::vector<int>& perm, Eigen::VectorXd& x) {
        choose_subset(rng, perm, j + 1);
        x.setZero();
        double total = 0.0;
        for (int i = 0; i <= j; ++i) total += e[i] = rng.exponential();
        for (int i = 0; i <= j; ++i) x[perm[i]] = rng.sign() * n * e[i] / total;
    });
}

double cube_skeleton_limit_cdf(double alpha, double x, bool left) {
    const double atom = 0.5 * (1.0 - alpha);
    double F = alpha * std::clamp(0.5 * (x + 1.0), 0.0, 1.0);
    if (x > -1.0 || (x == -1.0 && !left)) F += atom;
    if (x > 1.0 || (x == 1.0 && !left)) F += atom;
    return F;
}

double crosspolytope_skeleton_limit_cdf(double alpha, double x, bool left) {
    const double lap = x < 0.0 ? 0.5 * std::exp(alpha * x) : 1.0 - 0.5 * std::exp(-alpha * x);
    double F = alpha * lap;
    if (x > 0.0 || (x == 0.0 && !left)) F += 1.0 - alpha;
    return F;
}

double kolmogorov_distance(std::vector<double> xs, const std::function<double(double, bool)>& cdf,
                           const std::vector<double>& atoms) {
    if (xs.empty()) throw DomainError("empty sample");
    std::sort(xs.begin(), xs.end());
    const double N = static_cast<double>(xs.size());
    double D = 0.0;
    size_t i = 0;
    while (i < xs.size()) {
        size_t k = i;
        while (k < xs.size() && xs[k] == xs[i]) ++k;
        const double below = static_cast<double>(i) / N, at = static_cast<double>(k) / N;
        D = std::max({D, std::abs(below - cdf(xs[i], true)), std::abs(at - cdf(xs[i], false))});
        i = k;
    }
    // Jumps of the target where the sample has no mass.
    for (double a : atoms) {
        const double below = static_cast<double>(std::lower_bound(xs.begin(), xs.end(), a) - xs.begin()) / N;
        const double at = static_cast<double>(std::upper_bound(xs.begin(), xs.end(), a) - xs.begin()) / N;
        D = std::max({D, std::abs(below - cdf(a, true)), std::abs(at - cdf(a, false))});
    }
    return D;
}

}  // namespace lpvol
