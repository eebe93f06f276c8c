#include "lpvol/exactvol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lpvol/errors.hpp"
#include "theta_integral.hpp"

namespace lpvol {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogPi = std::log(std::numbers::pi);

double lse(const std::vector<double>& xs) {
    double M = kNegInf;
    for (double x : xs) M = std::max(M, x);
    if (M == kNegInf) return M;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - M);
    return M + std::log(s);
}

// k * lx with 0 * (-inf) read as 0.
double times(double k, double lx) { return k == 0.0 ? 0.0 : k * lx; }

using LogPoly = std::vector<double>;

LogPoly binomial_poly(double lu, double lv, int c, int deg) {
    LogPoly out(deg + 1, kNegInf);
    for (int k = 0; k <= std::min(c, deg); ++k)
        out[k] = log_binomial(c, k) + times(k, lu) + times(c - k, lv);
    return out;
}

LogPoly multiply(const LogPoly& a, const LogPoly& b, int deg) {
    LogPoly out(deg + 1, kNegInf);
    std::vector<double> terms;
    for (int k = 0; k <= deg; ++k) {
        terms.clear();
        for (int i = 0; i <= k; ++i)
            if (a[i] != kNegInf && b[k - i] != kNegInf) terms.push_back(a[i] + b[k - i]);
        out[k] = lse(terms);
    }
    return out;
}

// Coordinates with equal (a_k, lambda_k) share every F evaluation.
struct Group {
    double a, lambda;
    int count;
};

std::vector<Group> group_coordinates(const Eigen::VectorXd& a, const std::vector<double>& lambdas) {
    std::vector<Group> gs;
    for (int k = 0; k < a.size(); ++k) {
        const double lam = k < static_cast<int>(lambdas.size()) ? lambdas[k] : 0.0;
        auto it = std::find_if(gs.begin(), gs.end(), [&](const Group& g) { return g.a == a[k] && g.lambda == lam; });
        if (it == gs.end())
            gs.push_back({a[k], lam, 1});
        else
            ++it->count;
    }
    return gs;
}

void check_lambdas(const PBallSpec& spec, const std::vector<double>& lambdas) {
    if (static_cast<int>(lambdas.size()) > spec.n()) throw DomainError("more Mellin exponents than coordinates");
    for (double l : lambdas)
        if (!std::isfinite(l)) throw DomainError("Mellin exponents must be finite");
}

IntrinsicVolumeResult finish(double log_prefactor, const detail::LogIntegral& li, int j) {
    IntrinsicVolumeResult r;
    const double lv = log_prefactor + li.log_value;
    if (!std::isfinite(lv)) throw OverflowGuard("log-space result is not finite");
    r.value = LogValue::from_log(lv);
    r.j = j;
    r.theta_nodes = li.nodes;
    r.rel_error = li.rel_error;
    return r;
}

}  // namespace

PBallSpec::PBallSpec(PExponent p, Eigen::VectorXd weights) : p_(p), a_(std::move(weights)) {
    if (a_.size() < 2) throw DomainError("dimension n must be at least 2");
    for (int i = 0; i < a_.size(); ++i)
        if (!(a_[i] > 0.0) || !std::isfinite(a_[i])) throw DomainError("weights must be positive and finite");
}

PBallSpec PBallSpec::unit(double p, int n) {
    if (n < 2) throw DomainError("dimension n must be at least 2");
    return {PExponent(p), Eigen::VectorXd::Ones(n)};
}

bool PBallSpec::unit_weights() const { return (a_.array() == 1.0).all(); }

namespace detail {

double log_leave_one_out(const std::vector<Triple>& groups, int m) {
    const int deg = m - 1;
    const size_t G = groups.size();
    std::vector<LogPoly> P(G);
    for (size_t g = 0; g < G; ++g) P[g] = binomial_poly(groups[g].lu, groups[g].lv, groups[g].count, deg);

    LogPoly one(deg + 1, kNegInf);
    one[0] = 0.0;
    std::vector<LogPoly> suffix(G + 1, one);
    for (size_t g = G; g-- > 0;) suffix[g] = multiply(P[g], suffix[g + 1], deg);

    std::vector<double> terms;
    LogPoly prefix = one;
    for (size_t g = 0; g < G; ++g) {
        const Triple& t = groups[g];
        const LogPoly rest = multiply(prefix, suffix[g + 1], deg);
        const LogPoly Q = binomial_poly(t.lu, t.lv, t.count - 1, deg);
        std::vector<double> c;
        for (int k = 0; k <= deg; ++k)
            if (rest[k] != kNegInf && Q[deg - k] != kNegInf) c.push_back(rest[k] + Q[deg - k]);
        const double coef = lse(c);
        if (coef != kNegInf) terms.push_back(std::log(static_cast<double>(t.count)) + t.lw + coef);
        prefix = multiply(prefix, P[g], deg);
    }
    return lse(terms);
}

}  // namespace detail

LogValue volume(const PBallSpec& spec) {
    const double p = spec.p();
    const int n = spec.n();
    const double lv = -spec.weights().array().log().sum() + n * (std::log(2.0) + log_gamma(1.0 + 1.0 / p)) -
                      log_gamma(1.0 + n / p);
    return LogValue::from_log(lv);
}

IntrinsicVolumeResult intrinsic_volume(const PBallSpec& spec, int j, const QuadConfig& cfg) {
    cfg.validate();
    const int n = spec.n();
    if (j < 0 || j >= n) {
        std::ostringstream os;
        os << "intrinsic_volume needs 0 <= j <= n-1 (j = n is volume()), got j=" << j << " n=" << n;
        throw DomainError(os.str());
    }
    if (!spec.unit_weights()) return intrinsic_volume_weighted(spec, j, cfg);
    if (j == 0) return {LogValue::one(), 0, 0, 0.0};

    const double p = spec.p();
    const int m = n - j;
    auto log_h = [&](double s) {
        const double t = std::exp(s);
        double r = 0.5 * m * s + j * log_f_family(p, t, 0.0, cfg) + log_f_family(p, t, 2.0 * p - 2.0, cfg);
        if (m > 1) r += (m - 1) * log_f_family(p, t, p - 2.0, cfg);
        return r;
    };
    const double pre = std::log(p) + (m - 1) * std::log(p - 1.0) + log_binomial(n, j) - log_kappa(m) -
                       log_gamma(1.0 + j / p) - log_gamma(0.5 * m);
    return finish(pre, detail::integrate_log_theta(log_h, cfg), j);
}

IntrinsicVolumeResult mixed_moment_result(const PBallSpec& spec, const MomentRequest& req, const QuadConfig& cfg) {
    cfg.validate();
    check_lambdas(spec, req.lambdas);
    const int n = spec.n(), m = req.m;
    const double p = spec.p();
    if (m < 1 || m > n) throw DomainError("codimension m must lie in [1, n]");

    double Lambda = 0.0;
    for (double l : req.lambdas) {
        Lambda += l;
        const bool ok = m == 1 ? l > -1.0 : (m == n ? l > 1.0 - p : l > std::max(-1.0, 1.0 - p));
        if (!ok) {
            std::ostringstream os;
            os << "Mellin exponent " << l << " outside the admissible range for m=" << m << ", p=" << p;
            throw DomainError(os.str());
        }
    }
    if (!(Lambda > m - n - p)) throw DomainError("sum of Mellin exponents must exceed m - n - p");

    const auto& a = spec.weights();
    const auto groups = group_coordinates(a, req.lambdas);
    double log_weights = 0.0;
    for (const auto& g : groups) log_weights += g.count * (g.lambda + 1.0) * std::log(g.a);

    auto log_h = [&](double s) {
        const double th = std::exp(s);
        std::vector<detail::Triple> tr;
        tr.reserve(groups.size());
        for (const auto& g : groups) {
            const double t = th * g.a * g.a, la2 = 2.0 * std::log(g.a);
            detail::Triple x{la2 + log_f_family(p, t, g.lambda + 2.0 * p - 2.0, cfg), kNegInf, kNegInf, g.count};
            if (m > 1) x.lu = la2 + log_f_family(p, t, g.lambda + p - 2.0, cfg);
            if (m < n) x.lv = log_f_family(p, t, g.lambda, cfg);
            tr.push_back(x);
        }
        return 0.5 * m * s + detail::log_leave_one_out(tr, m);
    };
    const double pre = std::log(p) + (m - 1) * std::log(p - 1.0) - std::log(2.0) - 0.5 * m * kLogPi -
                       log_gamma((n + Lambda + p - m) / p) - log_weights;
    return finish(pre, detail::integrate_log_theta(log_h, cfg), n - m);
}

double mixed_moment(const PBallSpec& spec, const MomentRequest& req, const QuadConfig& cfg) {
    return mixed_moment_result(spec, req, cfg).to_double();
}

IntrinsicVolumeResult intrinsic_volume_weighted(const PBallSpec& spec, int j, const QuadConfig& cfg) {
    const int n = spec.n();
    if (j < 0 || j >= n) throw DomainError("intrinsic_volume_weighted needs 0 <= j <= n-1");
    if (j == 0) return {LogValue::one(), 0, 0, 0.0};
    return mixed_moment_result(spec, MomentRequest{n - j, {}}, cfg);
}

double key_integral(const PBallSpec& spec, double alpha, const std::vector<double>& alpha_i, const QuadConfig& cfg) {
    cfg.validate();
    const int n = spec.n();
    const double p = spec.p();
    if (static_cast<int>(alpha_i.size()) != n) throw DomainError("key_integral needs one exponent per coordinate");
    double sum = 0.0;
    for (double x : alpha_i) {
        if (!(x > -1.0)) throw DomainError("key_integral needs alpha_i > -1");
        sum += x;
    }
    const double upper = (n + sum) / (p - 1.0);
    if (!(alpha > 0.0 && alpha < upper)) {
        std::ostringstream os;
        os << "key_integral needs 0 < alpha < " << upper << ", got " << alpha;
        throw DomainError(os.str());
    }
    const double mu = (n + sum - alpha * (p - 1.0)) / p;
    const auto groups = group_coordinates(spec.weights(), alpha_i);
    double log_weights = 0.0;
    for (const auto& g : groups) log_weights += g.count * (g.lambda + 1.0) * std::log(g.a);

    auto log_h = [&](double s) {
        const double th = std::exp(s);
        double r = 0.5 * alpha * s;
        for (const auto& g : groups) r += g.count * log_f_family(p, th * g.a * g.a, g.lambda, cfg);
        return r;
    };
    const double pre = std::log(p) - log_weights - log_gamma(mu) - log_gamma(0.5 * alpha);
    return std::exp(pre + detail::integrate_log_theta(log_h, cfg).log_value);
}

double surface_moment(const PBallSpec& spec, const std::vector<double>& lambdas, const QuadConfig& cfg) {
    cfg.validate();
    check_lambdas(spec, lambdas);
    const int n = spec.n();
    const double p = spec.p();
    double Lambda = 0.0;
    for (double l : lambdas) {
        if (!(l > -1.0)) throw DomainError("surface_moment needs lambda_k > -1");
        Lambda += l;
    }
    const auto groups = group_coordinates(spec.weights(), lambdas);
    double log_weights = 0.0;
    for (const auto& g : groups) log_weights += g.count * (g.lambda + 1.0) * std::log(g.a);

    auto lf0 = [&](double nu) { return std::log(2.0 / p) + log_gamma((nu + 1.0) / p); };
    const double q = 2.0 * p - 2.0;

    // log(G(0) - G(theta)) - s/2, telescoping the product difference group by group so
    // every summand is positive.
    auto log_h = [&](double s) {
        const double th = std::exp(s);
        const size_t G = groups.size();
        std::vector<double> lX(G), lY(G), lD(G);
        for (size_t g = 0; g < G; ++g) {
            const double lam = groups[g].lambda, c = groups[g].count;
            const double t = th * groups[g].a * groups[g].a;
            const double lx = lf0(lam);
            double ratio;  // (F(0) - F(t)) / F(0)
            if (t < 1e-4) {
                ratio = t * std::exp(lf0(lam + q) - lx) - 0.5 * t * t * std::exp(lf0(lam + 2 * q) - lx) +
                        t * t * t / 6.0 * std::exp(lf0(lam + 3 * q) - lx);
            } else {
                ratio = -std::expm1(log_f_family(p, t, lam, cfg) - lx);
            }
            const double lr = std::log1p(-ratio);  // log(F(t)/F(0))
            lX[g] = c * lx;
            lY[g] = c * (lx + lr);
            lD[g] = c * lx + std::log(-std::expm1(c * lr));
        }
        std::vector<double> terms(G);
        for (size_t g = 0; g < G; ++g) {
            double t = lD[g];
            for (size_t h = 0; h < G; ++h)
                if (h != g) t += h < g ? lY[h] : lX[h];
            terms[g] = t;
        }
        return lse(terms) - 0.5 * s;
    };
    const double pre = std::log(p) - log_weights - std::log(2.0) - log_gamma((n + Lambda + p - 1.0) / p) -
                       0.5 * kLogPi;
    return std::exp(pre + detail::integrate_log_theta(log_h, cfg).log_value);
}

double mean_projection_volume(const PBallSpec& spec, int j, const QuadConfig& cfg) {
    const int n = spec.n();
    if (j < 1 || j > n) throw DomainError("mean_projection_volume needs 1 <= j <= n");
    const double lv = j == n ? volume(spec).log_abs() : intrinsic_volume(spec, j, cfg).value.log_abs();
    return std::exp(log_kappa(j) + log_kappa(n - j) - log_kappa(n) - log_binomial(n, j) + lv);
}

}  // namespace lpvol
