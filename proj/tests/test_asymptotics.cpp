#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lpvol/asymptotics.hpp"
#include "lpvol/errors.hpp"
#include "lpvol/exactvol.hpp"
#include "lpvol/maxwell.hpp"
#include "lpvol/oracles.hpp"
#include "support.hpp"

using namespace lpvol;
using testing::rel;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double exact_log(double p, int n, int j) { return intrinsic_volume(PBallSpec::unit(p, n), j).value.log_abs(); }
}  // namespace

TEST_CASE("phase function") {
    for (double beta : {0.2, 0.5, 0.9})
        for (double th : {0.01, 1.0, 30.0}) {
            const double closed = 0.5 * (1 - beta) * std::log(th) + 0.5 * std::log(kPi) - 0.5 * std::log1p(th);
            CHECK(std::abs(phase(2.0, beta, th) - closed) < 1e-10);
        }
    CHECK(std::abs(phase(2.0, 0.5, 1.0) - (0.5 * std::log(kPi) - 0.5 * std::log(2.0))) < 1e-10);

    // Psi tends to -inf at both ends.
    for (double p : {1.3, 2.0, 4.0})
        for (double beta : {0.1, 0.5, 0.9}) {
            const double top = phase_maximizer(p, beta).psi_at_star;
            double prev = top;
            for (double th = 1e-2; th > 1e-280; th *= 1e-20) {
                const double v = phase(p, beta, th);
                CHECK(v < prev);
                prev = v;
            }
            CHECK(prev < top - 5.0);
            prev = top;
            for (double th = 1e3; th < 1e280; th *= 1e20) {
                const double v = phase(p, beta, th);
                CHECK(v < prev);
                prev = v;
            }
            CHECK(prev < top - 5.0);
        }

    CHECK_THROWS_AS(phase(2.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(phase(2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(phase(2.0, 0.5, 0.0), DomainError);
}

TEST_CASE("phase maximizer") {
    CHECK(std::abs(phase_maximizer(2.0, 0.25).theta_star - 3.0) < 1e-10);
    CHECK(std::abs(phase_maximizer(2.0, 0.5).theta_star - 1.0) < 1e-10);

    const QuadConfig tight = QuadConfig{}.tightened(1e-13);
    for (double p : {1.2, 1.5, 2.0, 3.0, 5.0})
        for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const PhasePoint pt = phase_maximizer(p, beta);
            CAPTURE(p);
            CAPTURE(beta);
            CHECK(pt.residual <= 1e-10);
            CHECK(pt.psi2_at_star < 0.0);
            CHECK(std::abs(pt.psi_at_star - phase(p, beta, pt.theta_star, tight)) < 1e-11);
            const double th = pt.theta_star, h = 1e-3 * th;
            const double d2 = (phase(p, beta, th + h, tight) - 2.0 * phase(p, beta, th, tight) + phase(p, beta, th - h, tight)) / (h * h);
            CHECK(rel(d2, pt.psi2_at_star) < 1e-5);
        }
    CHECK_THROWS_AS(phase_maximizer(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(phase_maximizer(0.5, 0.5), DomainError);
}

TEST_CASE("g = theta J / I increases and theta* decreases in beta") {
    for (double p : {1.2, 2.0, 3.5}) {
        double prev = 0.0;
        for (double th = 1e-6; th < 1e6; th *= 2.0) {
            const double g = phase_ratio(p, th);
            CHECK(g > prev);
            prev = g;
        }
        double prev_theta = INFINITY;
        for (int k = 1; k < 20; ++k) {
            const double t = phase_maximizer(p, 0.05 * k).theta_star;
            CHECK(t < prev_theta);
            prev_theta = t;
        }
    }
}

TEST_CASE("phase maximizer at the edges of beta") {
    for (double p : {1.5, 3.0}) {
        const double l0 = LimitLaw::left_edge(p).lambda0();
        for (double a : {0.001, 0.01}) CHECK(rel(std::pow(a, 2 * (p - 1) / p) * phase_maximizer(p, a).theta_star, l0) < 0.05);
        const double t99 = phase_maximizer(p, 0.99).theta_star, t999 = phase_maximizer(p, 0.999).theta_star;
        CHECK(t999 < t99);
        CHECK(t99 < 0.05);
        CHECK(t999 < 0.005);
    }
}

TEST_CASE("bulk asymptotic (tolerance-based, finite n)") {
    CHECK(std::abs(std::exp(exact_log(2.0, 40, 20) - bulk_asymptotic(2.0, 40, 20).log_abs()) - 1.0) < 0.10);
    double prev = INFINITY;
    for (int n : {20, 40, 80}) {
        const double gap = std::abs(std::exp(exact_log(3.0, n, n / 2) - bulk_asymptotic(3.0, n, n / 2).log_abs()) - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(rel(std::exp(bulk_asymptotic(2.0, 60, 30).log_abs()), ball_vj(60, 30)) < 0.10);
    CHECK_THROWS_AS(bulk_asymptotic(2.0, 10, 0), DomainError);
    CHECK_THROWS_AS(bulk_asymptotic(2.0, 10, 10), DomainError);
}

TEST_CASE("edge asymptotics (tolerance-based, finite n)") {
    for (int n : {5, 50, 5000}) CHECK(left_edge_asymptotic(2.5, n, 0) == 1.0);
    for (int n : {10, 100, 1000}) CHECK(rel(left_edge_asymptotic(2.0, n, 1), std::sqrt(2.0 * kPi * n)) < 1e-13);
    CHECK(std::abs(std::exp(exact_log(3.0, 500, 1)) / left_edge_asymptotic(3.0, 500, 1) - 1.0) < 0.05);

    for (double p : {1.5, 2.0, 4.0})
        for (int n : {10, 100})
            CHECK(std::abs(right_edge_asymptotic(p, n, 1).log_abs() + std::log(2.0) -
                           surface_area_asymptotic(p, n, false).log_abs()) < 1e-12);
    CHECK(rel(std::exp(right_edge_asymptotic(2.0, 50, 1).log_abs()), ball_vj(50, 49)) < 0.05);
    CHECK(std::abs(std::exp(exact_log(1.5, 60, 58) - right_edge_asymptotic(1.5, 60, 2).log_abs()) - 1.0) < 0.10);
    CHECK_THROWS_AS(right_edge_asymptotic(2.0, 5, 0), DomainError);
}

TEST_CASE("exponential profile") {
    CHECK(exp_profile(2.0, 0.0).g_value == 0.0);
    CHECK(std::abs(exp_profile(2.0, 1.0).g_value - std::log(2.0 * std::sqrt(2.0 * kE) * std::tgamma(1.5))) < 1e-12);
    for (double p : {1.3, 2.0, 5.0}) {
        const double closed = std::log(2.0 * std::pow(kE * p, 1.0 / p) * std::tgamma(1.0 + 1.0 / p));
        CHECK(std::abs(exp_profile(p, 1.0).g_value - closed) < 1e-10);
    }
    for (int k = 0; k <= 20; ++k) {
        const double a = 0.05 * k;
        const ProfilePoint g = exp_profile(2.0, a);
        CHECK(std::abs(g.g_value - profile_references(a).g_2) < 1e-8);
        if (k > 0 && k < 20) CHECK(std::abs(g.g_value - g.kappa_term - g.sup_psi) < 1e-14);
    }
    for (double p : {1.5, 3.0, 8.0}) {
        std::vector<double> g;
        for (int k = 0; k <= 20; ++k) g.push_back(exp_profile(p, 0.05 * k).g_value);
        for (int k = 1; k < 20; ++k) CHECK(g[k + 1] - 2.0 * g[k] + g[k - 1] <= 1e-6);
    }
    CHECK_THROWS_AS(exp_profile(2.0, 1.5), DomainError);
}

TEST_CASE("reference profiles") {
    CHECK(profile_references(0.0).g_inf == 0.0);
    CHECK(std::abs(profile_references(1.0).g_inf - std::log(2.0)) < 1e-15);
    CHECK(std::abs(profile_references(1.0).g_1 - std::log(2.0 * kE)) < 1e-12);
    CHECK(std::abs(profile_references(0.0).g_1) < 1e-12);
    CHECK(std::abs(profile_references(0.0).g_simplex) < 1e-12);
    for (double a : {0.3, 0.7}) CHECK(std::abs(exp_profile(64.0, a).g_value - profile_references(a).g_inf) <= 0.02);
    // Near p = 1 the profile approaches the crosspolytope one.
    for (double a : {0.3, 0.7}) CHECK(std::abs(exp_profile(1.02, a).g_value - profile_references(a).g_1) <= 0.05);
    std::vector<ProfileReferences> r;
    for (int k = 0; k <= 20; ++k) r.push_back(profile_references(0.05 * k));
    for (int k = 1; k < 20; ++k) {
        CHECK(r[k + 1].g_1 - 2 * r[k].g_1 + r[k - 1].g_1 <= 1e-9);
        CHECK(r[k + 1].g_simplex - 2 * r[k].g_simplex + r[k - 1].g_simplex <= 1e-9);
    }
}

TEST_CASE("surface area asymptotics") {
    const double c1 = std::exp(surface_area_asymptotic(1.0001, 100, true).log_abs()) / 10.0;
    CHECK(rel(c1, 2.0 * kE) < 1e-3);

    const int n = 80;
    CHECK(rel(std::exp(surface_area_asymptotic(2.0, n, false).log_abs()), 2.0 * ball_vj(n, n - 1)) < 0.02);

    // Exact unit-volume sphere: n kappa_n^{1/n} = sqrt(2 pi e n) (pi n)^{-1/(2n)} (1 + O(1/n)).
    for (int m : {80, 400, 2000}) {
        const double exact = m * std::exp((0.5 * m * std::log(kPi) - std::lgamma(0.5 * m + 1.0)) / m);
        const double asym = std::exp(surface_area_asymptotic(2.0, m, true).log_abs());
        CHECK(std::abs(exact / asym - std::pow(kPi * m, -0.5 / m)) < 2.0 / m);
    }
}

TEST_CASE("normalized sphere area within 2% at n = 80" * doctest::may_fail()) {
    // The leading term misses the (pi n)^{-1/(2n)} factor, about 3.5% at n = 80.
    const int n = 80;
    CHECK(rel(std::exp(surface_area_asymptotic(2.0, n, true).log_abs()), n * std::pow(kappa(n), 1.0 / n)) < 0.02);
}

TEST_CASE("isoperimetric floor") {

    for (double p : {2.0, 3.0})
        CHECK(std::exp(surface_area_asymptotic(p, 100, true).log_abs()) >= std::sqrt(2.0 * kPi * kE * 100) * (1 - 1e-12));
}
