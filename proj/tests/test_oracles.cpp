#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "lpvol/errors.hpp"
#include "lpvol/exactvol.hpp"
#include "lpvol/oracles.hpp"
#include "lpvol/rng.hpp"
#include "support.hpp"

using namespace lpvol;
using testing::rel;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double e : v) x[i++] = e;
    return x;
}

double gauge(const PBallSpec& s, const Eigen::VectorXd& y) {
    double f = 0.0;
    for (int i = 0; i < y.size(); ++i) f += std::pow(std::abs(s.weights()[i] * y[i]), s.p());
    return f;
}

}  // namespace

TEST_CASE("closed-form ball, cube and box values") {
    CHECK(rel(ball_vj(3, 1), 4.0) < 1e-15);
    CHECK(ball_vj(7, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rel(ball_vj(3, 3), 4.0 * kPi / 3.0) < 1e-15);
    CHECK(cube_vj(2, 1) == 4.0);
    CHECK(cube_vj(3, 2) == 12.0);
    CHECK(rel(box_vj(vec({1.0, 0.5}), 1), 3.0) < 1e-15);
    CHECK(rel(box_vj(vec({1.0, 0.5}), 2), 2.0) < 1e-15);
    CHECK(rel(box_vj(Eigen::VectorXd::Ones(5), 3), cube_vj(5, 3)) < 1e-15);
}

TEST_CASE("normal distribution helpers") {
    boost::math::normal_distribution<double> N;
    for (double x : {-8.0, -3.0, -1.0, 0.0, 0.4, 2.0, 6.0}) {
        CHECK(rel(normal_cdf(x), boost::math::cdf(N, x)) < 1e-12);
        CHECK(rel(normal_pdf(x), boost::math::pdf(N, x)) < 1e-14);
    }
}

TEST_CASE("crosspolytope intrinsic volumes") {
    for (int n = 2; n <= 8; ++n) CHECK(rel(crosspolytope_vj(n, n), std::pow(2.0, n) / std::tgamma(n + 1.0)) < 1e-14);
    CHECK(rel(crosspolytope_vj(2, 1), 2.0 * std::sqrt(2.0)) < 1e-10);
    CHECK(rel(crosspolytope_vj(5, 0), 1.0) < 1e-10);
    for (int n : {3, 4}) CHECK(rel(2.0 * crosspolytope_vj(n, n - 1), std::pow(2.0, n) * std::sqrt(n) / std::tgamma(n)) < 1e-10);

    for (int j = 0; j <= 4; ++j) CHECK(rel(crosspolytope_vj_weighted(Eigen::VectorXd::Ones(4), j), crosspolytope_vj(4, j)) < 1e-10);
    // Diamond with vertices (+-1, 0), (0, +-1/2).
    CHECK(rel(crosspolytope_vj_weighted(vec({1.0, 2.0}), 1), 2.0 * std::sqrt(1.25)) < 1e-10);
    CHECK(rel(crosspolytope_vj_weighted(vec({1.0, 2.0}), 2), 1.0) < 1e-14);
    CHECK_THROWS_AS(crosspolytope_vj(3, 4), DomainError);
}

TEST_CASE("ellipsoid oracle") {
    for (int n : {3, 5})
        for (int j = 1; j < n; ++j) {
            CHECK(rel(ellipsoid_vj(Eigen::VectorXd::Ones(n), j, {}, EllipsoidForm::A), ball_vj(n, j)) < 1e-9);
            CHECK(rel(ellipsoid_vj(Eigen::VectorXd::Ones(n), j, {}, EllipsoidForm::B), ball_vj(n, j)) < 1e-9);
        }
    const Eigen::VectorXd b = vec({1.0, 2.0, 3.0});
    for (int j = 1; j <= 2; ++j)
        CHECK(rel(ellipsoid_vj(b, j, {}, EllipsoidForm::A), ellipsoid_vj(b, j, {}, EllipsoidForm::B)) < 1e-8);
    CHECK(rel(ellipsoid_vj(b, 3, {}, EllipsoidForm::B), 6.0 * 4.0 * kPi / 3.0) < 1e-9);

    const double half_perimeter =
        2.0 * testing::quadrant_arclength(2.0, 1.0, 2.0, [](double, double) { return 1.0; });
    CHECK(rel(ellipsoid_vj(vec({1.0, 0.5}), 1, {}, EllipsoidForm::A), half_perimeter) < 1e-9);
    CHECK(rel(ellipsoid_vj(vec({1.0, 0.5}), 1, {}, EllipsoidForm::B), half_perimeter) < 1e-9);
}

TEST_CASE("projection onto weighted lp balls") {
    const PBallSpec s2 = PBallSpec::unit(2.0, 3);
    const Eigen::VectorXd inside = vec({0.1, -0.2, 0.3});
    CHECK(project_lp_ball(s2, inside) == inside);
    const Eigen::VectorXd x = vec({1.0, -2.0, 2.0});
    CHECK((project_lp_ball(s2, x) - x / 3.0).norm() < 1e-12);

    const Eigen::VectorXd axis = project_lp_ball(PBallSpec::unit(4.0, 2), vec({2.0, 0.0}));
    CHECK(std::abs(axis[0] - 1.0) < 1e-12);
    CHECK(std::abs(axis[1]) < 1e-12);

    // KKT: on the boundary, x - y parallel to the gradient, and no boundary point is closer.
    CounterRng rng(11, 0);
    for (double p : {1.2, 1.5, 3.0, 7.0}) {
        const PBallSpec spec(PExponent(p), vec({1.0, 0.6, 1.8}));
        for (int k = 0; k < 50; ++k) {
            Eigen::VectorXd z(3);
            for (int i = 0; i < 3; ++i) z[i] = rng.uniform(-3.0, 3.0);
            if (gauge(spec, z) <= 1.0) continue;
            const Eigen::VectorXd y = project_lp_ball(spec, z);
            CHECK(std::abs(gauge(spec, y) - 1.0) < 1e-10);
            Eigen::VectorXd g(3);
            for (int i = 0; i < 3; ++i) {
                const double a = spec.weights()[i];
                g[i] = std::pow(a, p) * std::copysign(std::pow(std::abs(y[i]), p - 1.0), y[i]);
            }
            const Eigen::VectorXd d = z - y;
            CHECK(d.dot(g) > 0.0);
            CHECK((d / d.norm() - g / g.norm()).norm() < 1e-6);
            for (int t = 0; t < 20; ++t) {
                Eigen::VectorXd w(3);
                for (int i = 0; i < 3; ++i) w[i] = rng.uniform(-1.0, 1.0);
                w /= std::pow(gauge(spec, w), 1.0 / p);
                if ((z - w).norm() < d.norm() - 1e-9) FAIL("found a closer boundary point");
            }
        }
    }
}

TEST_CASE("Monte Carlo Steiner volumes") {
    McConfig mc;
    mc.sample_count = 200'000;
    const McEstimate disk = steiner_mc_volume(PBallSpec::unit(2.0, 2), 1.0, mc);
    CHECK(std::abs(disk.estimate - 4.0 * kPi) <= 3.0 * disk.std_err);
    CHECK(disk.samples == mc.sample_count);
    CHECK(disk.seed == mc.seed);
    CHECK(disk.generator == "splitmix64-counter/v1");

    const double t = 0.5;
    const McEstimate d2 = steiner_mc_volume(PBallSpec::unit(2.0, 2), t, mc);
    CHECK(std::abs(d2.estimate - kPi * (1 + 2 * t + t * t)) <= 3.0 * d2.std_err);

    const PBallSpec s3 = PBallSpec::unit(3.0, 2);
    const double exact = volume(s3).to_double() + kappa(1) * intrinsic_volume(s3, 1).to_double() * t + kappa(2) * t * t;
    const McEstimate e3 = steiner_mc_volume(s3, t, mc);
    CHECK(std::abs(e3.estimate - exact) <= 3.0 * e3.std_err);
    CHECK(e3.projections > 0);

    // Same seed, any thread count, same bits.
    McConfig mt = mc;
    mt.threads = 4;
    const McEstimate e4 = steiner_mc_volume(s3, t, mt);
    CHECK(e4.hits == e3.hits);
    CHECK(e4.estimate == e3.estimate);
    mt.seed += 1;
    CHECK(steiner_mc_volume(s3, t, mt).hits != e3.hits);

    McConfig bad = mc;
    bad.sample_count = 100;
    CHECK_THROWS_AS(steiner_mc_volume(s3, t, bad), DomainError);
    CHECK_THROWS_AS(steiner_mc_volume(PBallSpec::unit(3.0, 4), t, mc), DomainError);
    CHECK_THROWS_AS(steiner_mc_volume(s3, -0.1, mc), DomainError);
}
