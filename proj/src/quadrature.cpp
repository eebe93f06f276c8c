#include "lpvol/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace lpvol::quad {

namespace {

// Kronrod abscissae (descending) and weights for the 15-point rule; the Gauss 7-point
// rule uses the odd-indexed nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment qk15(const std::function<double(double)>& f, double a, double b) {
    constexpr double epmach = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::fabs(resk);
    std::array<double, 7> fv1{}, fv2{};
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = half * kXgk[jtw];
        const double f1 = f(center - dx), f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = half * kXgk[jtwm1];
        const double f1 = f(center - dx), f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
    }
    const double result = resk * half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);
    double abserr = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && abserr != 0.0) {
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    }
    if (resabs > uflow / (50.0 * epmach)) {
        abserr = std::max(epmach * 50.0 * resabs, abserr);
    }
    if (!std::isfinite(result)) abserr = std::numeric_limits<double>::infinity();
    return {a, b, result, abserr};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Tolerance& tol, std::initializer_list<double> breakpoints) {
    return gauss_kronrod(f, a, b, tol, std::vector<double>(breakpoints));
}

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Tolerance& tol, const std::vector<double>& breakpoints) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::vector<double> cuts{a};
    for (double x : breakpoints) {
        if (x > std::min(a, b) && x < std::max(a, b)) cuts.push_back(x);
    }
    cuts.push_back(b);
    if (a < b) std::sort(cuts.begin(), cuts.end());
    else std::sort(cuts.begin(), cuts.end(), std::greater<>());

    std::priority_queue<Segment> heap;
    double total = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = qk15(f, cuts[i], cuts[i + 1]);
        total += s.value;
        error += s.error;
        heap.push(s);
        out.evaluations += 15;
    }
    constexpr double epmach = std::numeric_limits<double>::epsilon();
    int subdivisions = static_cast<int>(heap.size());
    auto target = [&] { return std::max(tol.abs, tol.rel * std::fabs(total)); };
    while (!(error <= target()) && subdivisions < tol.max_subdivisions) {
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        // Interval too small to split further in floating point.
        if (std::fabs(worst.b - worst.a) <= 4.0 * epmach * std::max(std::fabs(worst.a), std::fabs(worst.b))) {
            break;
        }
        heap.pop();
        Segment left = qk15(f, worst.a, mid);
        Segment right = qk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }
    // Re-sum from the leaves to shed drift accumulated by the running updates.
    total = 0.0;
    error = 0.0;
    out.intervals = static_cast<int>(heap.size());
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.abs_error = error;
    out.converged = std::isfinite(total) && error <= std::max(tol.abs, tol.rel * std::fabs(total));
    return out;
}

}  // namespace lpvol::quad
