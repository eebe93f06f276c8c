#include "lpvol/asymptotics.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "lpvol/errors.hpp"
#include "lpvol/oracles.hpp"

namespace lpvol {

namespace {

const double kLogPi = std::log(std::numbers::pi);

// x log x with the 0 log 0 = 0 convention.
double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
        std::ostringstream os;
        os << "beta must lie in (0, 1), got " << beta;
        throw DomainError(os.str());
    }
}

// Golden section on [a, b] followed by a few guarded Newton steps.
double maximize(const std::function<double(double)>& f, const std::function<double(double)>& df,
                const std::function<double(double)>& d2f, double a, double b) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    const double a0 = a, b0 = b;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a), f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-8) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = f(x1);
        }
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 8; ++it) {
        const double h = d2f(x);
        if (!(h < 0.0)) break;
        const double xn = x - df(x) / h;
        if (!(xn >= a0 && xn <= b0) || !(f(xn) >= f(x) - 1e-15)) break;
        if (std::abs(xn - x) < 1e-15 * (1.0 + std::abs(x))) { x = xn; break; }
        x = xn;
    }
    // An endpoint can beat the interior when the supremum sits at the bracket edge.
    if (f(a0) > f(x)) x = a0;
    if (f(b0) > f(x)) x = b0;
    return x;
}

}  // namespace

double phase(double p, double beta, double theta, const QuadConfig& cfg) {
    check_beta(beta);
    if (!(theta > 0.0)) throw DomainError("phase needs theta > 0");
    return 0.5 * (1.0 - beta) * std::log(theta) + beta * log_f_family(p, theta, 0.0, cfg) +
           (1.0 - beta) * log_f_family(p, theta, p - 2.0, cfg);
}

double phase_ratio(double p, double theta, const QuadConfig& cfg) {
    return theta * std::exp(log_f_family(p, theta, p - 2.0, cfg) - log_f_family(p, theta, 0.0, cfg));
}

PhasePoint phase_maximizer(double p, double beta, const QuadConfig& cfg_in) {
    check_beta(beta);
    static_cast<void>(PExponent(p));
    const QuadConfig cfg = cfg_in.tightened(1e-13);
    const double log_target = std::log((1.0 - beta) * p / (2.0 * (p - 1.0) * beta));

    struct Eval {
        double G, dG, lI, lJ, lK;
    };
    // G(s) = log g(e^s) - log target, increasing in s; dG = theta g' / g.
    auto eval = [&](double s) {
        const double th = std::exp(s);
        const LogIJK v = log_ijk(p, th, cfg);
        const double I = std::exp(v.log_I), J = std::exp(v.log_J), K = std::exp(v.log_K);
        const double g = th * J / I;
        const double dg = (I * (0.5 * J + p * K / (2.0 * (p - 1.0))) + th * J * K) / (I * I);
        return Eval{std::log(g) - log_target, th * dg / g, v.log_I, v.log_J, v.log_K};
    };

    double lo = 0.0, hi = 0.0;
    Eval e = eval(0.0);
    double step = std::log(2.0);
    if (e.G < 0.0) {
        hi = step;
        while (eval(hi).G < 0.0) {
            lo = hi;
            step *= 2.0;
            hi += step;
            if (hi > 700.0) throw ConvergenceFailure("phase maximizer bracket exceeded theta range");
        }
    } else {
        lo = -step;
        while (eval(lo).G > 0.0) {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if (lo < -700.0) throw ConvergenceFailure("phase maximizer bracket exceeded theta range");
        }
    }

    double s = 0.5 * (lo + hi);
    bool ok = false;
    for (int it = 0; it < 200; ++it) {
        e = eval(s);
        if (std::abs(e.G) <= 1e-14) { ok = true; break; }
        (e.G < 0.0 ? lo : hi) = s;
        double next = s - e.G / e.dG;
        if (!std::isfinite(next) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-15 * (1.0 + std::abs(s))) { s = next; ok = true; break; }
        s = next;
    }
    if (!ok) throw ConvergenceFailure("phase maximizer did not converge");
    e = eval(s);

    PhasePoint pt;
    pt.beta = beta;
    pt.theta_star = std::exp(s);
    pt.log_I = e.lI;
    pt.log_J = e.lJ;
    pt.log_K = e.lK;
    pt.residual = std::abs(std::expm1(e.G));
    pt.psi_at_star = 0.5 * (1.0 - beta) * s + beta * e.lI + (1.0 - beta) * e.lJ;
    const double I = std::exp(e.lI), J = std::exp(e.lJ), K = std::exp(e.lK), th = pt.theta_star;
    const double g = th * J / I;
    const double dg = (I * (0.5 * J + p * K / (2.0 * (p - 1.0))) + th * J * K) / (I * I);
    pt.psi2_at_star = -beta * K / (I * g) * dg;
    return pt;
}

LogValue bulk_asymptotic(double p, int n, int j, const QuadConfig& cfg) {
    if (!(j > 0 && j < n)) throw DomainError("bulk asymptotic needs 0 < j < n");
    const double alpha = static_cast<double>(j) / n;
    const PhasePoint pt = phase_maximizer(p, alpha, cfg);
    const double lv = std::log(p) + (n - j - 1) * std::log(p - 1.0) + std::log(static_cast<double>(n)) +
                      log_binomial(n - 1, j) - std::log(2.0) - 0.5 * (n - j) * kLogPi - log_gamma((j + p) / p) +
                      pt.log_K - std::log(pt.theta_star) - pt.log_J + n * pt.psi_at_star +
                      0.5 * std::log(2.0 * std::numbers::pi / (n * std::abs(pt.psi2_at_star)));
    return LogValue::from_log(lv);
}

double left_edge_asymptotic(double p, int n, int j) {
    static_cast<void>(PExponent(p));
    if (j < 0 || n < 1) throw DomainError("left edge asymptotic needs j >= 0, n >= 1");
    const double c = std::log(2.0 * std::sqrt(std::numbers::pi)) / p +
                     (1.0 - 1.0 / p) * (log_gamma(1.0 / (2.0 * p - 2.0)) - std::log(p - 1.0));
    return std::exp(-log_gamma(j + 1.0) + j * c + j * (1.0 - 1.0 / p) * std::log(static_cast<double>(n)));
}

LogValue right_edge_asymptotic(double p, int n, int m) {
    static_cast<void>(PExponent(p));
    if (m < 1 || m > n) throw DomainError("right edge asymptotic needs 1 <= m <= n");
    const double c = std::log(p * (p - 1.0)) + log_gamma(1.0 - 1.0 / p) - kLogPi - log_gamma(1.0 / p);
    const double lv = log_gamma(0.5 * m) - std::log(2.0) - log_gamma(m) + 0.5 * m * c +
                      n * (std::log(2.0 / p) + log_gamma(1.0 / p)) + 0.5 * m * std::log(static_cast<double>(n)) -
                      log_gamma((n + p - m) / p);
    return LogValue::from_log(lv);
}

double profile_kappa(double p, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    const double a = alpha, b = 1.0 - alpha;
    const double first = a == 0.0 ? 0.0 : (a / p) * (1.0 - std::log(a / p));
    return first + b * std::log(p - 1.0) - xlogx(a) - xlogx(b) - 0.5 * b * kLogPi;
}

ProfilePoint exp_profile(double p, double alpha, const QuadConfig& cfg) {
    static_cast<void>(PExponent(p));
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    ProfilePoint pt;
    pt.alpha = alpha;
    pt.kappa_term = profile_kappa(p, alpha);
    if (alpha == 0.0) {
        pt.g_value = 0.0;
        pt.sup_psi = -pt.kappa_term;
        return pt;
    }
    if (alpha == 1.0) {
        pt.g_value = std::log(2.0) + (1.0 + std::log(p)) / p + log_gamma(1.0 + 1.0 / p);
        pt.sup_psi = pt.g_value - pt.kappa_term;
        return pt;
    }
    pt.sup_psi = phase_maximizer(p, alpha, cfg).psi_at_star;
    pt.g_value = pt.kappa_term + pt.sup_psi;
    return pt;
}

ProfileReferences profile_references(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    const double a = alpha, b = 1.0 - alpha;
    ProfileReferences r{};
    r.g_inf = -xlogx(a) - xlogx(b) + a * std::log(2.0);
    r.g_2 = -xlogx(a) - 0.5 * xlogx(b) + a * 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

    // Crosspolytope: sup_{t >= 0} -a t^2/2 + b log(2 Phi(t) - 1).
    {
        auto h = [](double t) { return std::erf(t / std::numbers::sqrt2); };
        auto f = [&](double t) {
            if (b == 0.0) return -0.5 * a * t * t;
            const double v = h(t);
            return v > 0.0 ? -0.5 * a * t * t + b * std::log(v) : -INFINITY;
        };
        auto df = [&](double t) { return -a * t + b * 2.0 * normal_pdf(t) / h(t); };
        auto d2f = [&](double t) {
            const double H = h(t), ph = normal_pdf(t);
            return -a + b * (-2.0 * t * ph / H - 4.0 * ph * ph / (H * H));
        };
        const double t = maximize(f, df, d2f, 0.0, 10.0);
        r.g_1 = a * std::log(2.0 * std::numbers::e) - 2.0 * xlogx(a) - xlogx(b) + f(t);
    }
    // Simplex: sup_x -a x^2/2 + b log Phi(x).
    {
        auto f = [&](double x) { return -0.5 * a * x * x + (b == 0.0 ? 0.0 : b * std::log(normal_cdf(x))); };
        auto df = [&](double x) { return -a * x + b * normal_pdf(x) / normal_cdf(x); };
        auto d2f = [&](double x) {
            const double r1 = normal_pdf(x) / normal_cdf(x);
            return -a + b * (-x * r1 - r1 * r1);
        };
        const double x = maximize(f, df, d2f, 0.0, 10.0);
        r.g_simplex = a - 2.0 * xlogx(a) - xlogx(b) + f(x);
    }
    return r;
}

LogValue surface_area_asymptotic(double p, int n, bool normalized) {
    static_cast<void>(PExponent(p));
    if (n < 2) throw DomainError("surface area asymptotic needs n >= 2");
    if (normalized) {
        const double c = 2.0 * std::exp(1.0 / p) *
                         std::sqrt(std::numbers::pi * (p - 1.0) / (p * std::sin(std::numbers::pi / p)));
        return LogValue::from_double(c * std::sqrt(static_cast<double>(n)));
    }
    const double lv = 0.5 * (std::log(p * (p - 1.0)) + log_gamma(1.0 - 1.0 / p) - log_gamma(1.0 / p)) +
                      n * (std::log(2.0 / p) + log_gamma(1.0 / p)) + 0.5 * std::log(static_cast<double>(n)) -
                      log_gamma((n + p - 1.0) / p);
    return LogValue::from_log(lv);
}

}  // namespace lpvol
