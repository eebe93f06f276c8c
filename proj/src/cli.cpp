#include "lpvol/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "lpvol/asymptotics.hpp"
#include "lpvol/curvature.hpp"
#include "lpvol/errors.hpp"
#include "lpvol/exactvol.hpp"
#include "lpvol/maxwell.hpp"
#include "lpvol/rng.hpp"
#include "lpvol/symmetric.hpp"

namespace lpvol::cli {

using Json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw DomainError("cannot read " + what + " from '" + text + "'");
    }
    if (used != t.size()) throw DomainError("cannot read " + what + " from '" + text + "'");
    return v;
}

std::int64_t to_integer(const std::string& text, const std::string& what) {
    const double v = to_number(text, what);
    if (!(std::abs(v) < 9e15) || v != std::floor(v)) throw DomainError(what + " must be an integer");
    return static_cast<std::int64_t>(v);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// nlohmann writes non-finite doubles as null; keep them readable instead.
Json num(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

// Runs f(i) for i in [0, count) on up to `threads` workers; results keep index order.
template <typename R>
std::vector<R> parallel_map(int count, int threads, const std::function<R(int)>& f) {
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                slots[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int t = std::max(1, std::min(threads, count));
    if (t == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < t; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<R> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

struct Plot {
    std::string series;  // what the curve is
    std::string x, y;    // column names used as the two plot columns
};

struct Result {
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
    Json record = Json::object();
    Json checks = Json::object();
    Plot plot;
    bool failed = false;  // a check in `checks` did not hold
};

struct Common {
    std::string format = "json";
    std::string output;
    std::string config;
    bool plot = false;
    bool record_time = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("-o,--output", c.output, "Write to this file instead of stdout");
    sub->add_option("--config", c.config, "key=value file overriding tolerances and Monte Carlo settings");
    sub->add_flag("--plot", c.plot, "Emit the command's curve as two-column CSV");
    sub->add_flag("--record-time", c.record_time, "Add wall time to the manifest (output is then not reproducible)");
}

Json config_json(const FileConfig& fc) {
    Json j;
    j["rel_tol"] = fc.quad.rel_tol;
    j["abs_tol"] = fc.quad.abs_tol;
    j["max_subdivisions"] = fc.quad.max_subdivisions;
    j["theta_truncation_factor"] = fc.quad.theta_truncation_factor;
    j["singularity_split"] = fc.quad.singularity_split;
    j["mc_samples"] = fc.mc.sample_count;
    j["mc_seed"] = fc.mc.seed;
    j["mc_batch"] = fc.mc.batch;
    return j;
}

std::string csv_cell(const Json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
        return s;
    }
    return v.dump();
}

void write_result(std::ostream& os, const Result& r, const Json& manifest, const Common& c) {
    if (c.plot) {
        if (r.plot.x.empty()) throw DomainError("this command has no plot series");
        const auto ix = std::find(r.columns.begin(), r.columns.end(), r.plot.x) - r.columns.begin();
        const auto iy = std::find(r.columns.begin(), r.columns.end(), r.plot.y) - r.columns.begin();
        os << "# series: " << r.plot.series << "\n";
        os << "# schema_version: " << kSchemaVersion << "\n";
        os << "# manifest: " << manifest.dump() << "\n";
        os << r.plot.x << "," << r.plot.y << "\n";
        for (const auto& row : r.rows) os << csv_cell(row[ix]) << "," << csv_cell(row[iy]) << "\n";
        return;
    }
    if (c.format == "csv") {
        os << "# schema_version: " << kSchemaVersion << "\n";
        os << "# manifest: " << manifest.dump() << "\n";
        if (!r.record.empty()) os << "# record: " << r.record.dump() << "\n";
        if (!r.checks.empty()) os << "# checks: " << r.checks.dump() << "\n";
        for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
        os << "\n";
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << "\n";
        }
        return;
    }
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["manifest"] = manifest;
    if (!r.record.empty()) doc["record"] = r.record;
    if (!r.checks.empty()) doc["checks"] = r.checks;
    doc["columns"] = r.columns;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json o;
        for (std::size_t i = 0; i < row.size(); ++i) o[r.columns[i]] = row[i];
        rows.push_back(o);
    }
    doc["rows"] = rows;
    os << doc.dump(2) << "\n";
}

double parse_p(const std::string& text, bool allow_limits) {
    const double p = to_number(text, "p");
    if (allow_limits && (p == 1.0 || std::isinf(p))) return p;
    static_cast<void>(PExponent(p));
    return p;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (double v : parse_number_list(text)) {
        if (v != std::floor(v) || std::abs(v) > 1e9) throw DomainError(what + " must hold integers");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw DomainError(what + " is empty");
    return out;
}

Eigen::VectorXd weights_for(const std::string& text, int n) {
    if (text.empty()) return Eigen::VectorXd::Ones(n);
    const auto w = parse_number_list(text);
    if (static_cast<int>(w.size()) != n) throw DomainError("weights must have exactly n entries");
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) {
        if (!(w[i] > 0.0 && std::isfinite(w[i]))) throw DomainError("weights must be positive and finite");
        a[i] = w[i];
    }
    return a;
}

Regime parse_regime(const std::string& s) {
    if (s == "bulk") return Regime::Bulk;
    if (s == "left") return Regime::LeftEdge;
    if (s == "right") return Regime::RightEdge;
    throw DomainError("regime must be bulk, left or right");
}

// ---- intrinsic -------------------------------------------------------------

struct IntrinsicArgs {
    std::string p;
    int n = 0;
    std::optional<int> j;
    bool all = false;
    std::string weights;
};

struct VjRow {
    int j;
    double value, log_value, rel_error;
};

VjRow one_vj(double p, const Eigen::VectorXd& a, int j, const QuadConfig& cfg) {
    const int n = static_cast<int>(a.size());
    const bool unit = (a.array() == 1.0).all();
    if (std::isinf(p)) {
        const double v = box_vj(a.cwiseInverse(), j);
        return {j, v, std::log(v), 0.0};
    }
    if (p == 1.0) {
        if (!unit && n > 20) throw DomainError("weighted crosspolytope needs n <= 20");
        const double v = unit ? crosspolytope_vj(n, j, cfg) : crosspolytope_vj_weighted(a, j, cfg);
        // The one-dimensional quadrature behind these values runs at rel_tol.
        return {j, v, std::log(v), (j == 0 || j == n) ? 0.0 : cfg.rel_tol};
    }
    const PBallSpec spec(PExponent(p), a);
    if (j == n) {
        const LogValue v = volume(spec);
        return {j, v.to_double(), v.log_abs(), 0.0};
    }
    const IntrinsicVolumeResult r = intrinsic_volume(spec, j, cfg);
    return {j, r.to_double(), r.value.log_abs(), r.rel_error};
}

Result cmd_intrinsic(const IntrinsicArgs& a, const FileConfig& fc, Json& params) {
    const double p = parse_p(a.p, true);
    if (a.n < 1) throw DomainError("n must be at least 1");
    const Eigen::VectorXd w = weights_for(a.weights, a.n);
    params["p"] = num(p);
    params["n"] = a.n;
    if (a.j) params["j"] = *a.j;
    params["all"] = a.all;
    if (!a.weights.empty()) {
        Json wj = Json::array();
        for (int i = 0; i < a.n; ++i) wj.push_back(w[i]);
        params["weights"] = wj;
    }

    std::vector<int> js;
    if (a.all) {
        for (int j = 0; j <= a.n; ++j) js.push_back(j);
    } else {
        if (*a.j < 0 || *a.j > a.n) throw DomainError("j must satisfy 0 <= j <= n");
        js.push_back(*a.j);
    }
    const auto rows = parallel_map<VjRow>(static_cast<int>(js.size()), thread_cap(),
                                          [&](int i) { return one_vj(p, w, js[i], fc.quad); });

    Result r;
    r.columns = {"j", "value", "log_value", "rel_error"};
    for (const auto& v : rows) r.rows.push_back({v.j, num(v.value), num(v.log_value), num(v.rel_error)});
    r.plot = {"log V_j of the weighted l_p ball against j", "j", "log_value"};

    if (a.all && a.n >= 2) {
        // V_r^2 >= (r+1)/r V_{r-1} V_{r+1}
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 1; k < a.n; ++k) {
            const double slack = 2.0 * rows[k].log_value - rows[k - 1].log_value - rows[k + 1].log_value -
                                 std::log((k + 1.0) / k);
            const double tol = 10.0 * (rows[k].rel_error + rows[k - 1].rel_error + rows[k + 1].rel_error) + 1e-12;
            worst = std::min(worst, slack + tol);
        }
        const bool ok = worst >= 0.0;
        r.checks["ultra_log_concave"] = ok;
        r.checks["min_slack"] = num(worst);
        r.failed = !ok;
    }
    return r;
}

// ---- asymptotic ------------------------------------------------------------

struct AsymptoticArgs {
    std::string p;
    std::string regime = "bulk";
    std::string n_list;
    double alpha = 0.5;
    int j = 1;
    int m = 1;
    bool no_exact = false;
};

Result cmd_asymptotic(const AsymptoticArgs& a, const FileConfig& fc, Json& params) {
    const double p = parse_p(a.p, false);
    const Regime reg = parse_regime(a.regime);
    const auto ns = parse_int_list(a.n_list, "n list");
    params["p"] = p;
    params["regime"] = a.regime;
    params["n"] = ns;
    if (reg == Regime::Bulk) params["alpha"] = a.alpha;
    if (reg == Regime::LeftEdge) params["j"] = a.j;
    if (reg == Regime::RightEdge) params["m"] = a.m;
    params["exact"] = !a.no_exact;
    const RegimeIndex idx{reg, a.alpha, a.j, a.m};

    struct Row {
        int n, j;
        double asym_log, exact_log, exact_err;
    };
    auto row = [&](int i) {
        const int n = ns[i];
        const int j = idx.j_of(n);
        double al = 0.0;
        switch (reg) {
            case Regime::Bulk:
                if (!(j > 0 && j < n)) throw DomainError("bulk regime needs 0 < floor(alpha n) < n");
                al = bulk_asymptotic(p, n, j, fc.quad).log_abs();
                break;
            case Regime::LeftEdge:
                if (j < 0 || j >= n) throw DomainError("left edge needs 0 <= j < n");
                al = std::log(left_edge_asymptotic(p, n, j));
                break;
            case Regime::RightEdge:
                if (a.m < 1 || a.m > n) throw DomainError("right edge needs 1 <= m <= n");
                al = right_edge_asymptotic(p, n, a.m).log_abs();
                break;
        }
        double el = std::numeric_limits<double>::quiet_NaN(), ee = std::numeric_limits<double>::quiet_NaN();
        if (!a.no_exact) {
            const IntrinsicVolumeResult r = intrinsic_volume(PBallSpec::unit(p, n), j, fc.quad);
            el = r.value.log_abs();
            ee = r.rel_error;
        }
        return Row{n, j, al, el, ee};
    };
    const auto rows = parallel_map<Row>(static_cast<int>(ns.size()), thread_cap(), row);

    Result r;
    r.columns = {"n", "j", "log_asymptotic", "log_exact", "ratio", "rel_error"};
    for (const auto& v : rows)
        r.rows.push_back({v.n, v.j, num(v.asym_log), num(v.exact_log), num(std::exp(v.exact_log - v.asym_log)),
                          num(v.exact_err)});
    r.plot = {std::string("exact over asymptotic intrinsic volume, ") + regime_name(reg) + " regime", "n", "ratio"};
    return r;
}

// ---- profile ---------------------------------------------------------------

Result cmd_profile(const std::string& p_text, double step, const FileConfig& fc, Json& params) {
    const double p = parse_p(p_text, false);
    if (!(step > 0.0 && step <= 1.0)) throw DomainError("grid step must lie in (0, 1]");
    params["p"] = p;
    params["grid"] = step;
    const int k = static_cast<int>(std::ceil(1.0 / step - 1e-9));
    std::vector<double> alphas;
    for (int i = 0; i <= k; ++i) alphas.push_back(std::min(1.0, i * step));

    // The maximizer is solved at a tightened tolerance; Psi is stationary there, so the
    // error in g comes from the quadrature of log I and log J.
    const double err = 10.0 * fc.quad.tightened(1e-13).rel_tol;
    struct Row {
        ProfilePoint g;
        ProfileReferences ref;
    };
    const auto rows = parallel_map<Row>(static_cast<int>(alphas.size()), thread_cap(), [&](int i) {
        return Row{exp_profile(p, alphas[i], fc.quad), profile_references(alphas[i])};
    });

    Result r;
    r.columns = {"alpha", "g", "kappa_term", "sup_psi", "abs_error", "g_inf", "g_2", "g_1", "g_simplex"};
    for (const auto& v : rows)
        r.rows.push_back({num(v.g.alpha), num(v.g.g_value), num(v.g.kappa_term), num(v.g.sup_psi),
                          num(err * (1.0 + std::abs(v.g.sup_psi))), num(v.ref.g_inf), num(v.ref.g_2),
                          num(v.ref.g_1), num(v.ref.g_simplex)});
    r.plot = {"exponential profile g_p(alpha) = kappa_p(alpha) + sup Psi", "alpha", "g"};
    return r;
}

// ---- curvature -------------------------------------------------------------

struct CurvatureArgs {
    std::string p;
    std::string weights;
    std::string point;
    std::optional<int> m;
    bool normalize = false;
};

Result cmd_curvature(const CurvatureArgs& a, Json& params) {
    const double p = parse_p(a.p, false);
    const auto xs = parse_number_list(a.point);
    const int n = static_cast<int>(xs.size());
    if (n < 2) throw DomainError("point needs at least two coordinates");
    const PBallSpec spec(PExponent(p), weights_for(a.weights, n));
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = xs[i];
    params["p"] = p;
    params["point"] = xs;
    if (!a.weights.empty()) params["weights"] = parse_number_list(a.weights);
    params["normalize"] = a.normalize;
    if (a.m) params["m"] = *a.m;

    const BoundaryPoint<double> pt = a.normalize ? BoundaryPoint<double>::normalize(spec, x) : BoundaryPoint<double>(spec, x);
    const Eigen::VectorXd k = principal_curvatures(pt);
    const Eigen::VectorXd nu = gauss_map(pt);

    Result r;
    auto vec = [](const Eigen::VectorXd& v) {
        Json j = Json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(num(v[i]));
        return j;
    };
    r.record["point"] = vec(pt.x());
    r.record["normal"] = vec(nu);
    r.record["support_value"] = num(support_function(spec, nu));
    r.record["principal_curvatures"] = vec(k);
    r.record["gauss_curvature"] = num(gauss_curvature(pt));

    std::vector<int> ms;
    if (a.m) {
        if (*a.m < 1 || *a.m > n) throw DomainError("m must satisfy 1 <= m <= n");
        ms.push_back(*a.m);
    } else {
        for (int m = 1; m <= n; ++m) ms.push_back(m);
    }
    const auto e = elementary_symmetric(k, n - 1);
    r.columns = {"m", "sigma", "sigma_from_roots", "density", "abs_error"};
    for (int m : ms) {
        const double s = sigma_curvatures(pt, m);
        // The gap to the root-based value estimates the error of both.
        const double gap = std::abs(s - e[m - 1]);
        r.rows.push_back({m, num(s), num(e[m - 1]), num(curvature_density(pt, m)), num(gap)});
    }
    r.plot = {"sigma_{m-1} of the principal curvatures against m", "m", "sigma"};
    return r;
}

// ---- maxwell ---------------------------------------------------------------

struct MaxwellArgs {
    std::string p;
    std::string regime = "bulk";
    std::string lambdas = "2";
    std::string n_list;
    double alpha = 0.5;
    int j = 1;
    int m = 1;
};

Result cmd_maxwell(const MaxwellArgs& a, const FileConfig& fc, Json& params) {
    const double p = parse_p(a.p, false);
    const Regime reg = parse_regime(a.regime);
    const auto ns = parse_int_list(a.n_list, "n list");
    const auto lambdas = parse_number_list(a.lambdas);
    for (double l : lambdas)
        if (!(l >= 0.0)) throw DomainError("lambda values must be nonnegative");
    params["p"] = p;
    params["regime"] = a.regime;
    params["lambda"] = lambdas;
    params["n"] = ns;
    if (reg == Regime::Bulk) params["alpha"] = a.alpha;
    if (reg == Regime::LeftEdge) params["j"] = a.j;
    if (reg == Regime::RightEdge) params["m"] = a.m;

    const RegimeIndex idx{reg, a.alpha, a.j, a.m};
    const auto rows = parallel_map<ConvergenceRow>(static_cast<int>(ns.size()), thread_cap(), [&](int i) {
        return convergence_table(p, idx, lambdas, {ns[i]}, fc.quad).front();
    });

    Result r;
    r.columns = {"n", "j", "scaled_moment", "limit", "rel_gap", "rel_error"};
    for (const auto& v : rows)
        r.rows.push_back({v.n, v.j, num(v.scaled_moment), num(v.limit), num(v.rel_gap), num(v.rel_error)});
    r.plot = {std::string("relative gap of the scaled mixed moment to its limit, ") + regime_name(reg) + " regime",
              "n", "rel_gap"};
    return r;
}

// ---- validate --------------------------------------------------------------

struct Check {
    std::string name;
    double value, reference, error, tolerance;
    bool pass;
};

void closeness(std::vector<Check>& out, const std::string& name, double value, double ref, double err, double tol) {
    const double rel = std::abs(value / ref - 1.0);
    out.push_back({name, value, ref, err, tol, rel <= tol});
}

std::vector<Check> suite_closed_form(const FileConfig& fc) {
    std::vector<Check> out;
    for (int n = 2; n <= 10; ++n)
        for (int j = 0; j < n; ++j) {
            const auto r = intrinsic_volume(PBallSpec::unit(2.0, n), j, fc.quad);
            closeness(out, "ball n=" + std::to_string(n) + " j=" + std::to_string(j), r.to_double(), ball_vj(n, j),
                      r.rel_error, 1e-8);
        }
    return out;
}

std::vector<Check> suite_ellipsoid(const FileConfig& fc) {
    std::vector<Check> out;
    Eigen::VectorXd a(3), b(3);
    a << 1.0, 2.0, 4.0;
    b = a.cwiseInverse();
    const PBallSpec spec(PExponent(2.0), a);
    for (int j = 1; j <= 2; ++j) {
        const auto r = intrinsic_volume_weighted(spec, j, fc.quad);
        const double fa = ellipsoid_vj(b, j, fc.quad, EllipsoidForm::A);
        const double fb = ellipsoid_vj(b, j, fc.quad, EllipsoidForm::B);
        const std::string tag = " j=" + std::to_string(j);
        closeness(out, "weighted vs form A" + tag, r.to_double(), fa, r.rel_error, 1e-7);
        closeness(out, "weighted vs form B" + tag, r.to_double(), fb, r.rel_error, 1e-7);
        closeness(out, "form A vs form B" + tag, fa, fb, fc.quad.rel_tol, 1e-8);
    }
    return out;
}

std::vector<Check> suite_steiner(int n, const FileConfig& fc, Json& seeds) {
    std::vector<Check> out;
    const double ps[] = {1.5, 3.0};
    const double ts[] = {0.1, 0.5, 1.0};
    for (int pi = 0; pi < 2; ++pi)
        for (int ti = 0; ti < 3; ++ti) {
            const double p = ps[pi], t = ts[ti];
            const PBallSpec spec = PBallSpec::unit(p, n);
            double exact = volume(spec).to_double();
            for (int j = 0; j < n; ++j)
                exact += kappa(n - j) * intrinsic_volume(spec, j, fc.quad).to_double() * std::pow(t, n - j);
            McConfig mc = fc.mc;
            mc.seed = fc.mc.seed + static_cast<std::uint64_t>(100 * n + 10 * pi + ti);
            mc.threads = thread_cap();
            const McEstimate e = steiner_mc_volume(spec, t, mc);
            seeds.push_back(mc.seed);
            std::ostringstream name;
            name << "steiner n=" << n << " p=" << p << " t=" << t;
            // Tolerance here is in standard errors.
            const double z = std::abs(e.estimate - exact) / e.std_err;
            out.push_back({name.str(), e.estimate, exact, e.std_err, 3.0, z <= 3.0});
        }
    return out;
}

std::vector<Check> suite_phase(const FileConfig& fc) {
    std::vector<Check> out;
    for (int k = 1; k <= 9; ++k) {
        const double beta = 0.1 * k;
        const PhasePoint pt = phase_maximizer(2.0, beta, fc.quad);
        const double ref = (1.0 - beta) / beta;
        const double d = std::abs(pt.theta_star - ref);
        std::ostringstream name;
        name << "theta p=2 beta=" << beta;
        out.push_back({name.str(), pt.theta_star, ref, pt.residual, 1e-10, d <= 1e-10});
    }
    for (double p : {1.2, 1.5, 3.0, 5.0})
        for (int k = 1; k <= 9; ++k) {
            const PhasePoint pt = phase_maximizer(p, 0.1 * k, fc.quad);
            std::ostringstream name;
            name << "critical residual p=" << p << " beta=" << 0.1 * k;
            out.push_back({name.str(), pt.residual, 0.0, pt.residual, 1e-10, pt.residual <= 1e-10});
        }
    return out;
}

std::vector<Check> suite_identities(const FileConfig& fc) {
    std::vector<Check> out;
    for (double p : {1.2, 1.5, 2.0, 3.0, 5.0})
        for (double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const IJKL v = ijkl(PExponent(p), t, fc.quad);
            const double lhs = (p - 1.0) * v.J, rhs = p * v.K + 2.0 * (p - 1.0) * t * v.L;
            std::ostringstream name;
            name << "JKL p=" << p << " t=" << t;
            closeness(out, name.str(), lhs, rhs, fc.quad.rel_tol, 10.0 * fc.quad.rel_tol);
        }
    return out;
}

Result cmd_validate(const std::string& suite, const FileConfig& fc, Json& params, Json& seeds) {
    params["suite"] = suite;
    std::vector<Check> checks;
    auto run = [&](const std::string& s) {
        std::vector<Check> c;
        if (s == "closed-form") c = suite_closed_form(fc);
        else if (s == "ellipsoid") c = suite_ellipsoid(fc);
        else if (s == "steiner-n2") c = suite_steiner(2, fc, seeds);
        else if (s == "steiner-n3") c = suite_steiner(3, fc, seeds);
        else if (s == "phase") c = suite_phase(fc);
        else if (s == "identities") c = suite_identities(fc);
        else throw DomainError("unknown suite '" + s + "'");
        checks.insert(checks.end(), c.begin(), c.end());
    };
    if (suite == "all") {
        for (const char* s : {"closed-form", "ellipsoid", "phase", "identities", "steiner-n2", "steiner-n3"}) run(s);
    } else {
        run(suite);
    }

    Result r;
    r.columns = {"check", "value", "reference", "error", "tolerance", "status"};
    int failed = 0;
    for (const auto& c : checks) {
        r.rows.push_back({c.name, num(c.value), num(c.reference), num(c.error), num(c.tolerance),
                          c.pass ? "PASS" : "FAIL"});
        failed += c.pass ? 0 : 1;
    }
    r.checks["total"] = checks.size();
    r.checks["failed"] = failed;
    r.checks["status"] = failed == 0 ? "PASS" : "FAIL";
    r.failed = failed > 0;
    return r;
}

}  // namespace

FileConfig parse_config(std::istream& in) {
    FileConfig fc;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + " has no '='");
        const std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
        if (key == "rel_tol") fc.quad.rel_tol = to_number(val, key);
        else if (key == "abs_tol") fc.quad.abs_tol = to_number(val, key);
        else if (key == "max_subdivisions") fc.quad.max_subdivisions = static_cast<int>(to_integer(val, key));
        else if (key == "theta_truncation_factor") fc.quad.theta_truncation_factor = to_number(val, key);
        else if (key == "singularity_split") fc.quad.singularity_split = to_number(val, key);
        else if (key == "mc_samples") fc.mc.sample_count = to_integer(val, key);
        else if (key == "mc_seed") fc.mc.seed = static_cast<std::uint64_t>(std::stoull(val, nullptr, 0));
        else if (key == "mc_batch") fc.mc.batch = to_integer(val, key);
        else throw DomainError("unknown config key '" + key + "'");
    }
    fc.quad.validate();
    fc.mc.validate();
    return fc;
}

FileConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::vector<double> parse_number_list(const std::string& text) {
    std::string body = text;
    if (text.find(',') == std::string::npos) {
        std::ifstream f(text);
        if (f) {
            std::stringstream ss;
            ss << f.rdbuf();
            body = ss.str();
        }
    }
    for (char& c : body)
        if (c == ',' || c == '\n' || c == '\t' || c == '\r') c = ' ';
    std::istringstream is(body);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(to_number(tok, "number"));
    if (out.empty()) throw DomainError("expected a list of numbers, got '" + text + "'");
    return out;
}

int thread_cap() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("LPVOL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
    }
    return hw;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intrinsic volumes, curvature measures and limit laws of weighted l_p balls", "lpvol"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Common common;
    IntrinsicArgs ia;
    AsymptoticArgs aa;
    std::string profile_p;
    double profile_step = 0.05;
    CurvatureArgs ca;
    MaxwellArgs ma;
    std::string suite;
    int cli_j = -1, cli_m = -1;

    auto* intr = app.add_subcommand("intrinsic", "Intrinsic volumes V_j of B_p^n(a); p may be 1 or inf");
    intr->add_option("-p", ia.p, "Exponent")->required();
    intr->add_option("-n", ia.n, "Dimension")->required();
    auto* jopt = intr->add_option("-j", cli_j, "Index j, 0 <= j <= n");
    auto* allopt = intr->add_flag("--all", ia.all, "All j from 0 to n");
    jopt->excludes(allopt);
    intr->add_option("--weights", ia.weights, "Comma list or file of n positive weights");
    add_common(intr, common);

    auto* asym = app.add_subcommand("asymptotic", "Exact intrinsic volumes against their large-n asymptotics");
    asym->add_option("-p", aa.p, "Exponent")->required();
    asym->add_option("--regime", aa.regime, "bulk, left or right")->check(CLI::IsMember({"bulk", "left", "right"}));
    asym->add_option("--n", aa.n_list, "Comma list of dimensions")->required();
    asym->add_option("--alpha", aa.alpha, "Bulk: j = floor(alpha n)");
    asym->add_option("-j", aa.j, "Left edge: fixed j");
    asym->add_option("-m,--m", aa.m, "Right edge: j = n - m");
    asym->add_flag("--no-exact", aa.no_exact, "Skip the exact values");
    add_common(asym, common);

    auto* prof = app.add_subcommand("profile", "Exponential profile g_p on an alpha grid");
    prof->add_option("-p", profile_p, "Exponent")->required();
    prof->add_option("--grid", profile_step, "Grid step in alpha");
    add_common(prof, common);

    auto* curv = app.add_subcommand("curvature", "Principal curvatures and curvature densities at a boundary point");
    curv->add_option("-p", ca.p, "Exponent")->required();
    curv->add_option("--point", ca.point, "Comma list of coordinates")->required();
    curv->add_option("--weights", ca.weights, "Comma list or file of positive weights");
    curv->add_option("-m,--m", cli_m, "Only this m (default: all 1..n)");
    curv->add_flag("--normalize", ca.normalize, "Radially project the point onto the boundary first");
    add_common(curv, common);

    auto* maxw = app.add_subcommand("maxwell", "Scaled mixed moments against the limit law");
    maxw->add_option("-p", ma.p, "Exponent")->required();
    maxw->add_option("--regime", ma.regime, "bulk, left or right")->check(CLI::IsMember({"bulk", "left", "right"}));
    maxw->add_option("--lambda", ma.lambdas, "Comma list of Mellin exponents for the first coordinates");
    maxw->add_option("--n", ma.n_list, "Comma list of dimensions")->required();
    maxw->add_option("--alpha", ma.alpha, "Bulk: j = floor(alpha n)");
    maxw->add_option("-j", ma.j, "Left edge: fixed j");
    maxw->add_option("-m,--m", ma.m, "Right edge: j = n - m");
    add_common(maxw, common);

    auto* val = app.add_subcommand("validate", "Run a validation suite");
    val->add_option("suite", suite, "closed-form, ellipsoid, steiner-n2, steiner-n3, phase, identities or all")
        ->required()
        ->check(CLI::IsMember({"closed-form", "ellipsoid", "steiner-n2", "steiner-n3", "phase", "identities", "all"}));
    add_common(val, common);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidArgs;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const FileConfig fc = common.config.empty() ? FileConfig{} : load_config(common.config);
        Json params = Json::object();
        Json seeds = Json::array();
        Result r;
        std::string command;
        if (intr->parsed()) {
            command = "intrinsic";
            if (!ia.all && jopt->count() == 0) throw DomainError("give -j or --all");
            if (jopt->count()) ia.j = cli_j;
            r = cmd_intrinsic(ia, fc, params);
        } else if (asym->parsed()) {
            command = "asymptotic";
            r = cmd_asymptotic(aa, fc, params);
        } else if (prof->parsed()) {
            command = "profile";
            r = cmd_profile(profile_p, profile_step, fc, params);
        } else if (curv->parsed()) {
            command = "curvature";
            if (cli_m != -1) ca.m = cli_m;
            r = cmd_curvature(ca, params);
        } else if (maxw->parsed()) {
            command = "maxwell";
            r = cmd_maxwell(ma, fc, params);
        } else {
            command = "validate";
            r = cmd_validate(suite, fc, params, seeds);
        }

        Json manifest;
        manifest["command"] = command;
        manifest["parameters"] = params;
        manifest["config"] = config_json(fc);
        manifest["seeds"] = seeds;
        manifest["rng"] = std::string(CounterRng::name);
        manifest["tool_version"] = kToolVersion;
        if (common.record_time)
            manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (common.output.empty()) {
            write_result(out, r, manifest, common);
        } else {
            std::ofstream f(common.output, std::ios::binary);
            if (!f) throw DomainError("cannot write '" + common.output + "'");
            write_result(f, r, manifest, common);
        }
        if (r.failed) {
            err << "lpvol: " << command << ": a check failed\n";
            return kCheckFailed;
        }
        return kOk;
    } catch (const DomainError& e) {
        err << "lpvol: invalid argument: " << e.what() << "\n";
        return kInvalidArgs;
    } catch (const DegenerateInput& e) {
        err << "lpvol: invalid argument: " << e.what() << "\n";
        return kInvalidArgs;
    } catch (const QuadratureFailure& e) {
        err << "lpvol: quadrature failure: " << e.what() << "\n";
        return kQuadratureFailure;
    } catch (const ConvergenceFailure& e) {
        err << "lpvol: solver failure: " << e.what() << "\n";
        return kQuadratureFailure;
    } catch (const OverflowGuard& e) {
        err << "lpvol: overflow: " << e.what() << "\n";
        return kQuadratureFailure;
    }
}

}  // namespace lpvol::cli
