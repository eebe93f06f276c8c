#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lpvol/errors.hpp"
#include "lpvol/exactvol.hpp"
#include "lpvol/symmetric.hpp"

namespace lpvol {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A point of the boundary of B_p^n(a).
template <typename Scalar = double>
class BoundaryPoint {
public:
    /// Requires sum |a_i x_i|^p = 1 to within 1e-12.
    BoundaryPoint(const PBallSpec& spec, Vec<Scalar> x) : spec_(spec), x_(std::move(x)) {
        if (x_.size() != spec_.n()) throw DomainError("point dimension does not match the body");
        const Scalar F = gauge_power(spec_, x_);
        if (!(std::abs(F - Scalar(1)) <= Scalar(1e-12))) throw DomainError("point is not on the boundary");
    }

    /// Radial projection x / F(x)^{1/p} of a nonzero vector.
    static BoundaryPoint normalize(const PBallSpec& spec, const Vec<Scalar>& x) {
        const Scalar F = gauge_power(spec, x);
        if (!(F > Scalar(0))) throw DomainError("cannot normalize the zero vector");
        return BoundaryPoint(spec, Vec<Scalar>(x / std::pow(F, Scalar(1) / Scalar(spec.p()))));
    }

    /// sum |a_i x_i|^p
    static Scalar gauge_power(const PBallSpec& spec, const Vec<Scalar>& x) {
        const Scalar p = spec.p();
        Scalar s(0);
        for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(Scalar(spec.weights()[i]) * x[i]), p);
        return s;
    }

    [[nodiscard]] const PBallSpec& spec() const { return spec_; }
    [[nodiscard]] const Vec<Scalar>& x() const { return x_; }
    [[nodiscard]] Eigen::Index n() const { return x_.size(); }

private:
    PBallSpec spec_;
    Vec<Scalar> x_;
};

namespace detail {

// w_i = a_i^{2p} |x_i|^{2p-2}, d_i = a_i^p |x_i|^{p-2}, S = sqrt(sum w).
template <typename Scalar>
struct CurvatureData {
    Vec<Scalar> w, d;
    Scalar S;
};

template <typename Scalar>
CurvatureData<Scalar> curvature_data(const BoundaryPoint<Scalar>& pt) {
    const Scalar p = pt.spec().p();
    const auto& a = pt.spec().weights();
    const Eigen::Index n = pt.n();
    CurvatureData<Scalar> c{Vec<Scalar>(n), Vec<Scalar>(n), Scalar(0)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar xi = std::abs(pt.x()[i]);
        if (xi == Scalar(0)) throw DegenerateInput("curvature is only defined where every coordinate is nonzero");
        const Scalar ap = std::pow(Scalar(a[i]), p);
        c.d[i] = ap * std::pow(xi, p - Scalar(2));
        c.w[i] = ap * ap * std::pow(xi, Scalar(2) * p - Scalar(2));
    }
    c.S = std::sqrt(c.w.sum());
    return c;
}

}  // namespace detail

/// sum_i w_i prod_{j != i} (delta_j - lambda), whose roots are the principal curvatures.
template <typename Scalar>
Scalar characteristic_value(const BoundaryPoint<Scalar>& pt, Scalar lambda, Scalar* scale = nullptr) {
    const auto c = detail::curvature_data(pt);
    const Scalar p = pt.spec().p();
    const Eigen::Index n = pt.n();
    Scalar v(0), sc(0);
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar t = c.w[i], ta = c.w[i];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const Scalar dj = (p - Scalar(1)) * c.d[j] / c.S;
            t *= dj - lambda;
            ta *= std::abs(dj) + std::abs(lambda);
        }
        v += t;
        sc += ta;
    }
    if (scale) *scale = sc;
    return v;
}

/// Principal curvatures in ascending order.
///
/// They are the roots of the secular equation sum_i w_i / (delta_i - lambda) = 0 with
/// delta_i = (p-1) d_i / S, so one root lies strictly between consecutive distinct delta
/// values and a delta repeated k times is itself a root of multiplicity k-1.
template <typename Scalar>
Vec<Scalar> principal_curvatures(const BoundaryPoint<Scalar>& pt) {
    const auto c = detail::curvature_data(pt);
    const Scalar p = pt.spec().p();
    const Eigen::Index n = pt.n();

    std::vector<std::pair<Scalar, Scalar>> dw(n);  // (delta, w)
    for (Eigen::Index i = 0; i < n; ++i) dw[i] = {(p - Scalar(1)) * c.d[i] / c.S, c.w[i]};
    std::sort(dw.begin(), dw.end());

    struct Group {
        Scalar delta, weight;
        int count;
    };
    std::vector<Group> groups;
    const Scalar tie = Scalar(1e-12);
    for (const auto& [dl, wt] : dw) {
        if (!groups.empty() && dl - groups.back().delta <= tie * std::abs(dl)) {
            ++groups.back().count;
            groups.back().weight += wt;
        } else {
            groups.push_back({dl, wt, 1});
        }
    }

    std::vector<Scalar> roots;
    roots.reserve(n - 1);
    for (const auto& g : groups)
        for (int k = 1; k < g.count; ++k) roots.push_back(g.delta);

    auto secular = [&](Scalar lam) {
        Scalar s(0);
        for (const auto& g : groups) s += g.weight / (g.delta - lam);
        return s;
    };
    for (size_t l = 0; l + 1 < groups.size(); ++l) {
        Scalar lo = groups[l].delta, hi = groups[l + 1].delta;
        for (int it = 0; it < 300; ++it) {
            const Scalar mid = lo + (hi - lo) / Scalar(2);
            if (mid <= lo || mid >= hi) break;
            (secular(mid) < Scalar(0) ? lo : hi) = mid;
        }
        roots.push_back(lo + (hi - lo) / Scalar(2));
    }
    std::sort(roots.begin(), roots.end());
    Vec<Scalar> out(static_cast<Eigen::Index>(roots.size()));
    for (size_t i = 0; i < roots.size(); ++i) out[static_cast<Eigen::Index>(i)] = roots[i];
    return out;
}

/// sigma_{m-1} of the principal curvatures, from the closed form rather than the roots.
template <typename Scalar>
Scalar sigma_curvatures(const BoundaryPoint<Scalar>& pt, int m) {
    const Eigen::Index n = pt.n();
    if (m < 1 || m > n) throw DomainError("sigma_curvatures needs 1 <= m <= n");
    const auto c = detail::curvature_data(pt);
    const Scalar p = pt.spec().p();
    Scalar s(0);
    for (Eigen::Index i = 0; i < n; ++i) s += c.w[i] * elementary_symmetric_without(c.d, i, m - 1);
    return std::pow(p - Scalar(1), Scalar(m - 1)) * s / std::pow(c.S, Scalar(m + 1));
}

template <typename Scalar>
Scalar gauss_curvature(const BoundaryPoint<Scalar>& pt) {
    const auto c = detail::curvature_data(pt);
    const Scalar p = pt.spec().p();
    const Eigen::Index n = pt.n();
    return std::pow(p - Scalar(1), Scalar(n - 1)) * c.d.prod() / std::pow(c.S, Scalar(n + 1));
}

/// Density of Phi_{n-m} with respect to the surface measure.
template <typename Scalar>
Scalar curvature_density(const BoundaryPoint<Scalar>& pt, int m) {
    return sigma_curvatures(pt, m) / (Scalar(m) * Scalar(kappa(m)));
}

template <typename Scalar>
Scalar support_function(const PBallSpec& spec, const Vec<Scalar>& u) {
    if (u.size() != spec.n()) throw DomainError("direction dimension does not match the body");
    if (u.cwiseAbs().maxCoeff() == Scalar(0)) throw DomainError("support function of the zero vector");
    const Scalar p = spec.p(), q = p / (p - Scalar(1));
    Scalar s(0);
    for (Eigen::Index i = 0; i < u.size(); ++i) s += std::pow(std::abs(u[i] / Scalar(spec.weights()[i])), q);
    return std::pow(s, Scalar(1) / q);
}

/// Outer unit normal.
template <typename Scalar>
Vec<Scalar> gauss_map(const BoundaryPoint<Scalar>& pt) {
    const Scalar p = pt.spec().p();
    Vec<Scalar> g(pt.n());
    for (Eigen::Index i = 0; i < pt.n(); ++i) {
        const Scalar xi = pt.x()[i];
        g[i] = std::pow(Scalar(pt.spec().weights()[i]), p) * std::copysign(std::pow(std::abs(xi), p - Scalar(1)), xi);
    }
    return g / g.norm();
}

/// The boundary point whose outer normal is the unit vector u.
template <typename Scalar>
BoundaryPoint<Scalar> inverse_gauss_map(const PBallSpec& spec, const Vec<Scalar>& u) {
    const Scalar h = support_function(spec, u);
    if (std::abs(u.norm() - Scalar(1)) > Scalar(1e-10)) throw DomainError("inverse Gauss map needs a unit vector");
    const Scalar p = spec.p(), q = p / (p - Scalar(1));
    Vec<Scalar> x(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const Scalar ai = spec.weights()[i];
        x[i] = std::pow(ai, -q) * std::copysign(std::pow(std::abs(u[i]), q - Scalar(1)), u[i]) /
               std::pow(h, q - Scalar(1));
    }
    return BoundaryPoint<Scalar>(spec, std::move(x));
}

}  // namespace lpvol
