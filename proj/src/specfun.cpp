#include "lpvol/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lpvol/errors.hpp"

namespace lpvol {

namespace {

constexpr double kTailMargin = 46.0;  // e^-46 ~ 1e-20 relative to the peak

std::string fmt(double p, double t, double nu) {
    std::ostringstream os;
    os.precision(17);
    os << "F_p(t;nu) with p=" << p << " t=" << t << " nu=" << nu;
    return os.str();
}

// Log of the integrand after y = log x: (nu+1) y - A e^{p y} - B e^{(2p-2) y}.
// Concave in y, which makes the peak and the cutoff straightforward to bracket.
struct LogIntegrand {
    double p, nu, A, B;

    double value(double y) const {
        double r = (nu + 1.0) * y - A * std::exp(p * y);
        if (B > 0.0) r -= B * std::exp((2.0 * p - 2.0) * y);
        return r;
    }
    double slope(double y) const {
        double r = (nu + 1.0) - p * A * std::exp(p * y);
        if (B > 0.0) r -= (2.0 * p - 2.0) * B * std::exp((2.0 * p - 2.0) * y);
        return r;
    }
};

double argmax(const LogIntegrand& f) {
    double lo = -1.0, hi = 1.0;
    while (f.slope(lo) <= 0.0) lo *= 2.0;
    while (f.slope(hi) >= 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        (f.slope(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Smallest y > y0 with value(y) <= level; value is decreasing past the peak.
double right_cut(const LogIntegrand& f, double y0, double level) {
    if (f.value(y0) <= level) return y0;
    double step = 1.0, hi = y0 + step;
    while (f.value(hi) > level) {
        step *= 2.0;
        hi = y0 + step;
    }
    double lo = hi - step;
    for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        (f.value(mid) > level ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

PExponent::PExponent(double p) : p_(p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "p must satisfy 1 < p < inf, got " << p;
        throw DomainError(os.str());
    }
}

void QuadConfig::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
    if (max_subdivisions < 8) throw DomainError("max_subdivisions must be at least 8");
    if (!(theta_truncation_factor > 0.0)) throw DomainError("theta_truncation_factor must be positive");
    if (!(singularity_split > 0.0 && singularity_split < 1.0))
        throw DomainError("singularity_split must lie in (0, 1)");
}

QuadConfig QuadConfig::tightened(double rel) const {
    QuadConfig c = *this;
    c.rel_tol = std::min(c.rel_tol, rel);
    return c;
}

double log_gamma(double x) {
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "log_gamma requires x > 0, got " << x;
        throw DomainError(os.str());
    }
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);  // reentrant, avoids the global signgam write
#else
    return std::lgamma(x);
#endif
}

double log_kappa(int m) {
    if (m < 0) throw DomainError("kappa requires m >= 0");
    return 0.5 * m * std::log(std::numbers::pi) - log_gamma(1.0 + 0.5 * m);
}

double kappa(int m) { return std::exp(log_kappa(m)); }

double log_binomial(double n, double k) {
    if (k < 0.0 || k > n) return -std::numeric_limits<double>::infinity();
    return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

double log_f_family(double p, double t, double nu, const QuadConfig& cfg) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must satisfy 1 < p < inf");
    if (!(nu > -1.0)) throw DomainError("nu must be > -1 in " + fmt(p, t, nu));
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("t must be finite and >= 0 in " + fmt(p, t, nu));
    if (t == 0.0) return std::log(2.0 / p) + log_gamma((nu + 1.0) / p);

    // u = c x. For t > 1 pick c so the t-term becomes x^{2p-2}.
    double log_c = 0.0, A = 1.0, B = t;
    if (t > 1.0) {
        log_c = -std::log(t) / (2.0 * p - 2.0);
        A = std::exp(p * log_c);
        B = 1.0;
    }
    const LogIntegrand li{p, nu, A, B};
    const quad::Tolerance tol = cfg.tolerance();

    const double s = cfg.singularity_split;
    const double ys = std::log(s);

    // [0, s] in w = x^{nu+1}: (1/(nu+1)) int_0^{s^{nu+1}} exp(-A w^{p/(nu+1)} - B w^{(2p-2)/(nu+1)}) dw
    const double e1 = p / (nu + 1.0), e2 = (2.0 * p - 2.0) / (nu + 1.0);
    auto left = [&](double w) {
        if (w <= 0.0) return 1.0;
        const double lw = std::log(w);
        return std::exp(-A * std::exp(e1 * lw) - B * std::exp(e2 * lw));
    };
    const double wmax = std::exp((nu + 1.0) * ys);
    quad::Result rl = quad::gauss_kronrod(left, 0.0, wmax, tol);
    if (!rl.converged) throw QuadratureFailure("left piece did not converge for " + fmt(p, t, nu));
    const double left_val = rl.value / (nu + 1.0);

    // [s, inf) in y = log x, measured relative to the peak value of the log-integrand.
    const double ystar = argmax(li);
    const double y0 = std::max(ys, ystar);
    const double lmax = li.value(y0);
    const double yhi = right_cut(li, y0, lmax - kTailMargin);
    double log_right = -std::numeric_limits<double>::infinity();
    if (yhi > ys) {
        auto right = [&](double y) { return std::exp(li.value(y) - lmax); };
        std::vector<double> bp;
        if (ystar > ys && ystar < yhi) bp.push_back(ystar);
        quad::Result rr = quad::gauss_kronrod(right, ys, yhi, tol, bp);
        if (!rr.converged) throw QuadratureFailure("right piece did not converge for " + fmt(p, t, nu));
        // Concavity bounds the remaining tail by e^{l(yhi)} / |l'(yhi)|.
        const double tail = std::exp(li.value(yhi) - lmax) / std::abs(li.slope(yhi));
        if (tail > cfg.rel_tol * rr.value + cfg.abs_tol)
            throw QuadratureFailure("tail bound too large for " + fmt(p, t, nu));
        log_right = lmax + std::log(rr.value + tail);
    }

    const double log_half = log_add(std::log(left_val), log_right);
    return std::log(2.0) + (nu + 1.0) * log_c + log_half;
}

double f_family(const PExponent& p, double t, double nu, const QuadConfig& cfg) {
    return std::exp(log_f_family(p.value(), t, nu, cfg));
}

double LargeTExpansion::two_term(double t) const {
    return leading * (1.0 - first_correction * std::pow(t, -exponent));
}

LargeTExpansion f_family_large_t(const PExponent& p, double t, double nu) {
    if (!(t > 0.0)) throw DomainError("large-t expansion requires t > 0");
    if (!(nu > -1.0)) throw DomainError("nu must be > -1");
    const double q = 2.0 * p - 2.0;
    const double a = (nu + 1.0) / q;
    LargeTExpansion e{};
    e.leading = std::exp(log_gamma(a) - std::log(p - 1.0) - a * std::log(t));
    e.first_correction = std::exp(log_gamma((nu + p + 1.0) / q) - log_gamma(a));
    e.exponent = p / q;
    return e;
}

IJKL ijkl(const PExponent& p, double t, const QuadConfig& cfg) {
    const double pv = p.value();
    IJKL r{};
    r.I = std::exp(log_f_family(pv, t, 0.0, cfg));
    r.J = std::exp(log_f_family(pv, t, pv - 2.0, cfg));
    r.K = std::exp(log_f_family(pv, t, 2.0 * pv - 2.0, cfg));
    r.L = std::exp(log_f_family(pv, t, 3.0 * pv - 4.0, cfg));
    return r;
}

LogIJK log_ijk(double p, double t, const QuadConfig& cfg) {
    return {log_f_family(p, t, 0.0, cfg), log_f_family(p, t, p - 2.0, cfg),
            log_f_family(p, t, 2.0 * p - 2.0, cfg)};
}

}  // namespace lpvol
