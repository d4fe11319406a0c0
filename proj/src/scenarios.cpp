// scenarios.cpp

#include "bemlab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bemlab/jacobi.hpp"

namespace bemlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Warp functions

double WarpFunction::value(double t) const {
    const double x = scale * t;
    if (kind == "constant") return scale;
    if (kind == "cosh") return std::cosh(x);
    if (kind == "sech") return 1.0 / std::cosh(x);
    if (kind == "cos") return std::cos(x);
    if (kind == "exp") return std::exp(x);
    throw std::invalid_argument("unknown warp function '" + kind + "'");
}

double WarpFunction::first(double t) const {
    const double a = scale, x = a * t;
    if (kind == "constant") return 0.0;
    if (kind == "cosh") return a * std::sinh(x);
    if (kind == "sech") return -a * std::tanh(x) / std::cosh(x);
    if (kind == "cos") return -a * std::sin(x);
    if (kind == "exp") return a * std::exp(x);
    throw std::invalid_argument("unknown warp function '" + kind + "'");
}

double WarpFunction::second(double t) const {
    const double a = scale, x = a * t;
    if (kind == "constant") return 0.0;
    if (kind == "cosh") return a * a * std::cosh(x);
    if (kind == "sech") {
        const double s = 1.0 / std::cosh(x), th = std::tanh(x);
        return a * a * s * (th * th - s * s);
    }
    if (kind == "cos") return -a * a * std::cos(x);
    if (kind == "exp") return a * a * std::exp(x);
    throw std::invalid_argument("unknown warp function '" + kind + "'");
}

json WarpFunction::to_json() const { return json{{"kind", kind}, {"scale", scale}}; }

WarpFunction WarpFunction::from_json(const json& j) {
    WarpFunction w;
    w.kind = j.at("kind").get<std::string>();
    w.scale = j.value("scale", 1.0);
    w.value(0.0);
    return w;
}

// ---------------------------------------------------------------------------
// Metrics

namespace {

// d_j d_k of prod_{l<i} sin^2 theta_l; j, k = 0 means no derivative.
double fiber_factor(const Vec& p, int i, int j, int k) {
    if (j >= i || k >= i) return 0.0;
    double out = 1.0;
    for (int l = 1; l < i; ++l) {
        const int hits = (l == j) + (l == k);
        const double th = p(l);
        if (hits == 0) {
            const double s = std::sin(th);
            out *= s * s;
        } else if (hits == 1) {
            out *= std::sin(2.0 * th);
        } else {
            out *= 2.0 * std::cos(2.0 * th);
        }
    }
    return out;
}

std::vector<CoordinateInterval> sphere_domain(int n, CoordinateInterval time) {
    std::vector<CoordinateInterval> d(static_cast<std::size_t>(n));
    d[0] = time;
    for (int i = 1; i < n - 1; ++i) d[static_cast<std::size_t>(i)] = {kPoleMargin, M_PI - kPoleMargin};
    return d;
}

}  // namespace

MetricField warped_metric(const WarpFunction& phi, double lambda, int n) {
    if (n < 3) throw std::invalid_argument("warped products need n >= 3");
    if (!(lambda > 0.0)) throw std::invalid_argument("fiber Einstein constant must be positive");
    const double r2 = (n - 2.0) / lambda;
    CoordinateInterval time;
    if (phi.kind == "cos") {
        const double edge = M_PI / (2.0 * std::abs(phi.scale));
        time = {-edge, edge};
    }
    auto value = [phi, r2, n](const Vec& p) {
        Mat g = Mat::Zero(n, n);
        g(0, 0) = -1.0;
        const double ph = phi.value(p(0));
        for (int i = 1; i < n; ++i) g(i, i) = ph * ph * r2 * fiber_factor(p, i, 0, 0);
        return g;
    };
    auto first = [phi, r2, n](const Vec& p) {
        MatrixList out(static_cast<std::size_t>(n), Mat::Zero(n, n));
        const double ph = phi.value(p(0)), dph = phi.first(p(0));
        const double pp = ph * ph * r2, dp = 2.0 * ph * dph * r2;
        for (int i = 1; i < n; ++i) {
            out[0](i, i) = dp * fiber_factor(p, i, 0, 0);
            for (int j = 1; j < i; ++j) out[static_cast<std::size_t>(j)](i, i) = pp * fiber_factor(p, i, j, 0);
        }
        return out;
    };
    auto second = [phi, r2, n](const Vec& p) {
        MatrixList out(static_cast<std::size_t>(n * n), Mat::Zero(n, n));
        const double ph = phi.value(p(0)), dph = phi.first(p(0)), ddph = phi.second(p(0));
        const double pp = ph * ph * r2, dp = 2.0 * ph * dph * r2;
        const double ddp = 2.0 * (dph * dph + ph * ddph) * r2;
        auto at = [&](int c, int d) -> Mat& { return out[static_cast<std::size_t>(c * n + d)]; };
        for (int i = 1; i < n; ++i) {
            at(0, 0)(i, i) = ddp * fiber_factor(p, i, 0, 0);
            for (int j = 1; j < i; ++j) {
                const double v = dp * fiber_factor(p, i, j, 0);
                at(0, j)(i, i) = v;
                at(j, 0)(i, i) = v;
                for (int k = 1; k < i; ++k) at(j, k)(i, i) = pp * fiber_factor(p, i, j, k);
            }
        }
        return out;
    };
    return MetricField::analytic(n, value, first, second, sphere_domain(n, time));
}

MetricField minkowski_metric(int n) {
    if (n < 2) throw std::invalid_argument("minkowski needs n >= 2");
    Mat eta = Mat::Identity(n, n);
    eta(0, 0) = -1.0;
    return MetricField::analytic(
        n, [eta](const Vec&) { return eta; },
        [n](const Vec&) { return MatrixList(static_cast<std::size_t>(n), Mat::Zero(n, n)); },
        [n](const Vec&) { return MatrixList(static_cast<std::size_t>(n * n), Mat::Zero(n, n)); },
        std::vector<CoordinateInterval>(static_cast<std::size_t>(n)));
}

// ---------------------------------------------------------------------------
// Weights

namespace {

ScalarField time_only(std::function<double(double)> f0, std::function<double(double)> f1,
                      std::function<double(double)> f2, std::optional<double> bound = {}) {
    return ScalarField::analytic(
        [f0](const Vec& p) { return f0(p(0)); },
        [f1](const Vec& p) {
            Vec g = Vec::Zero(p.size());
            g(0) = f1(p(0));
            return g;
        },
        [f2](const Vec& p) {
            Mat h = Mat::Zero(p.size(), p.size());
            h(0, 0) = f2(p(0));
            return h;
        },
        bound);
}

}  // namespace

ScalarField sinh_squared_f(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("sinh_squared_f needs K > 0");
    return time_only([k](double t) { const double s = std::sinh(k * t); return s * s; },
                     [k](double t) { return k * std::sinh(2.0 * k * t); },
                     [k](double t) { return 2.0 * k * k * std::cosh(2.0 * k * t); });
}

ScalarField linear_t_f(double a) {
    return time_only([a](double t) { return a * t; }, [a](double) { return a; },
                     [](double) { return 0.0; });
}

ScalarField t_squared_f(double a) {
    return time_only([a](double t) { return a * t * t; }, [a](double t) { return 2.0 * a * t; },
                     [a](double) { return 2.0 * a; });
}

ScalarField WeightSpec::field() const {
    if (kind == "zero") return ScalarField::constant(0.0);
    if (kind == "constant") return ScalarField::constant(a);
    if (kind == "linear_t") return linear_t_f(a);
    if (kind == "t_squared") return t_squared_f(a);
    if (kind == "sinh_squared") return sinh_squared_f(a);
    throw std::invalid_argument("unknown weight '" + kind + "'");
}

json WeightSpec::to_json() const { return json{{"kind", kind}, {"a", a}}; }

WeightSpec WeightSpec::from_json(const json& j) {
    WeightSpec w;
    w.kind = j.at("kind").get<std::string>();
    w.a = j.value("a", 0.0);
    w.field();
    return w;
}

// ---------------------------------------------------------------------------
// Scenario specs

namespace {

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vec json_vec(const json& a) {
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

Vec reference_point(const ScenarioSpec& s) {
    Vec p(s.n);
    p(0) = 0.3;
    if (s.geometry == "minkowski") {
        for (int i = 1; i < s.n; ++i) p(i) = 0.1 * i * (i % 2 ? 1.0 : -1.0);
    } else {
        for (int i = 1; i < s.n - 1; ++i) p(i) = 1.2 - 0.1 * (i - 1);
        p(s.n - 1) = 0.5;
    }
    return p;
}

Vec time_origin(const ScenarioSpec& s) {
    Vec p = reference_point(s);
    p(0) = 0.0;
    return p;
}

}  // namespace

json ScenarioSpec::to_json() const {
    json j;
    j["name"] = name;
    j["geometry"] = geometry;
    j["n"] = n;
    if (geometry == "warped") {
        j["warp"] = warp.to_json();
        j["lambda"] = lambda;
    }
    j["weight"] = weight.to_json();
    j["m"] = m ? json(*m) : json("inf");
    if (k) j["k"] = *k;
    json u = json::object();
    if (std::isfinite(time_bound)) u["time_bound"] = time_bound;
    if (std::isfinite(angle_bound)) u["angle_bound"] = angle_bound;
    if (!u.empty()) j["uniqueness"] = u;
    json gs = json::array();
    for (const auto& g : geodesics)
        gs.push_back({{"name", g.name},
                      {"point", vec_json(g.point)},
                      {"velocity", vec_json(g.velocity)},
                      {"a", g.a},
                      {"b", g.b}});
    j["geodesics"] = gs;
    json ms = json::array();
    for (const auto& e : manifest)
        ms.push_back({{"key", e.key},
                      {"expected", e.expected},
                      {"tolerance", e.tolerance},
                      {"basis", e.basis}});
    j["manifest"] = ms;
    return j;
}

ScenarioSpec ScenarioSpec::from_json(const json& j) {
    ScenarioSpec s;
    s.name = j.at("name").get<std::string>();
    s.geometry = j.value("geometry", std::string("warped"));
    if (s.geometry != "warped" && s.geometry != "minkowski")
        throw std::invalid_argument("geometry must be 'warped' or 'minkowski'");
    s.n = j.at("n").get<int>();
    if (s.geometry == "warped") {
        s.warp = WarpFunction::from_json(j.at("warp"));
        s.lambda = j.value("lambda", static_cast<double>(s.n - 2));
    }
    if (j.contains("weight")) s.weight = WeightSpec::from_json(j.at("weight"));
    if (j.contains("m") && !j.at("m").is_string()) s.m = j.at("m").get<double>();
    if (j.contains("k")) s.k = j.at("k").get<double>();
    if (j.contains("uniqueness")) {
        const auto& u = j.at("uniqueness");
        s.time_bound = u.value("time_bound", s.time_bound);
        s.angle_bound = u.value("angle_bound", s.angle_bound);
    }
    if (j.contains("geodesics"))
        for (const auto& g : j.at("geodesics"))
            s.geodesics.push_back({g.at("name").get<std::string>(), json_vec(g.at("point")),
                                   json_vec(g.at("velocity")), g.value("a", 0.0),
                                   g.value("b", 1.0)});
    if (j.contains("manifest"))
        for (const auto& e : j.at("manifest"))
            s.manifest.push_back({e.at("key").get<std::string>(), e.at("expected").get<double>(),
                                  e.at("tolerance").get<double>(),
                                  e.value("basis", std::string())});
    return s;
}

// ---------------------------------------------------------------------------
// Scenarios

Scenario build_scenario(const ScenarioSpec& spec) {
    MetricField g = spec.geometry == "minkowski" ? minkowski_metric(spec.n)
                                                 : warped_metric(spec.warp, spec.lambda, spec.n);
    BakryEmeryParams params;
    params.m = spec.m ? SyntheticDimension::finite(*spec.m) : SyntheticDimension::infinite();
    params.k = spec.k;
    for (const auto& geo : spec.geodesics)
        if (geo.point.size() != spec.n || geo.velocity.size() != spec.n)
            throw std::invalid_argument("geodesic '" + geo.name + "' has the wrong dimension");
    return Scenario{spec, std::move(g), spec.weight.field(), params};
}

Scenario scenario_from_json(const json& j) { return build_scenario(ScenarioSpec::from_json(j)); }

UniquenessRegion Scenario::uniqueness_region() const {
    const double tb = spec.time_bound, ab = spec.angle_bound;
    return [tb, ab](const Vec& apex, const Vec& q) {
        if (std::abs(apex(0) - q(0)) > tb) return false;
        for (Eigen::Index i = 1; i < apex.size(); ++i)
            if (std::abs(apex(i) - q(i)) > ab) return false;
        return true;
    };
}

double Scenario::measure(const std::string& key) const {
    const Vec p = reference_point(spec);
    const int n = spec.n;
    if (key == "riemann_max_abs") {
        const Riemann r = riemann(metric, p);
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) worst = std::max(worst, std::abs(r(a, b, c, d)));
        return worst;
    }
    if (key == "ricci_unit_timelike") return ricci(metric, p)(0, 0);
    if (key == "einstein_residual")
        return (ricci(metric, p) - (n - 1.0) * metric.eval(p)).cwiseAbs().maxCoeff();
    if (key == "constant_curvature_residual") {
        const Mat g = metric.eval(p);
        const std::vector<double> low = riemann(metric, p).lowered(g);
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        const double want = g(a, c) * g(b, d) - g(a, d) * g(b, c);
                        const auto idx = static_cast<std::size_t>(((a * n + b) * n + c) * n + d);
                        worst = std::max(worst, std::abs(low[idx] - want));
                    }
        return worst;
    }
    if (key == "hess_f_tt_origin") return hessian_scalar(metric, f, time_origin(spec))(0, 0);
    if (key == "f_origin") return f.eval(time_origin(spec));
    if (key == "theta_point_t2" || key == "endomorphism_trace_start") {
        if (spec.geodesics.empty()) throw std::invalid_argument("scenario declares no geodesic");
        const DeclaredGeodesic& dg = spec.geodesics.front();
        const GeodesicTrajectory geo = integrate_geodesic(metric, dg.point, dg.velocity, dg.a,
                                                          std::min(dg.b, dg.a + 2.0));
        const FrameField frame = parallel_frame(metric, geo);
        if (key == "endomorphism_trace_start")
            return curvature_endomorphism(metric, geo, frame, dg.a).trace();
        auto source = std::make_shared<MetricSource>(metric, frame, f);
        const int d = source->dim();
        const JacobiTrajectory traj = integrate_jacobi(source, Mat::Zero(d, d),
                                                       Mat::Identity(d, d), dg.a, geo.t_end());
        const JacobiSample& s = traj.samples().back();
        return s.a.transpose().partialPivLu().solve(s.ap.transpose()).transpose().trace();
    }
    throw std::invalid_argument("unknown manifest key '" + key + "'");
}

std::vector<Scenario::ValidationIssue> Scenario::validate() const {
    std::vector<ValidationIssue> issues;
    for (const auto& e : spec.manifest) {
        const double got = measure(e.key);
        if (!(std::abs(got - e.expected) <= e.tolerance)) issues.push_back({e.key, e.expected, got});
    }
    for (const auto& dg : spec.geodesics) {
        const GeodesicTrajectory geo = integrate_geodesic(metric, dg.point, dg.velocity, dg.a, dg.b);
        const double mid = 0.5 * (geo.t_begin() + geo.t_end());
        const double res = geo.equation_residual(mid);
        if (geo.exited_domain() || !(res <= 1e-5))
            issues.push_back({"geodesic_residual:" + dg.name, 0.0, res});
    }
    return issues;
}

namespace {

ScenarioSpec warped_spec(const std::string& name, const WarpFunction& phi, double lambda, int n) {
    ScenarioSpec s;
    s.name = name;
    s.geometry = "warped";
    s.n = n;
    s.warp = phi;
    s.lambda = lambda;
    return s;
}

Vec equator(int n, double t0) {
    Vec p = Vec::Constant(n, M_PI / 2.0);
    p(0) = t0;
    p(n - 1) = 0.0;
    return p;
}

DeclaredGeodesic comoving(const std::string& name, int n, double a, double b) {
    Vec v = Vec::Zero(n);
    v(0) = 1.0;
    return {name, equator(n, a), v, a, b};
}

}  // namespace

DeclaredGeodesic equatorial_geodesic(const Scenario& s, double chi, double t0, double length) {
    const int n = s.spec.n;
    DeclaredGeodesic out;
    out.name = "equatorial";
    out.a = t0;
    out.b = t0 + length;
    out.velocity = Vec::Zero(n);
    out.velocity(0) = std::cosh(chi);
    if (s.spec.geometry == "minkowski") {
        out.point = Vec::Zero(n);
        out.point(0) = t0;
        out.velocity(1) = std::sinh(chi);
    } else {
        out.point = equator(n, t0);
        const double r = std::sqrt((n - 2.0) / s.spec.lambda);
        out.velocity(n - 1) = std::sinh(chi) / (s.spec.warp.value(t0) * r);
    }
    return out;
}

Scenario minkowski(int n) {
    ScenarioSpec s;
    s.name = "minkowski" + std::to_string(n);
    s.geometry = "minkowski";
    s.n = n;
    Vec v = Vec::Zero(n);
    v(0) = 1.0;
    s.geodesics.push_back({"rest", Vec::Zero(n), v, 0.0, 10.0});
    s.manifest = {{"riemann_max_abs", 0.0, 1e-12, "flat metric"},
                  {"theta_point_t2", (n - 1) / 2.0, 1e-8, "closed form (n-1)/t"}};
    return build_scenario(s);
}

Scenario warped_product(const WarpFunction& phi, double lambda, int n) {
    ScenarioSpec s = warped_spec("warped_" + phi.kind, phi, lambda, n);
    s.geodesics.push_back(comoving("comoving", n, 0.0, 1.0));
    return build_scenario(s);
}

Scenario de_sitter(int n) {
    ScenarioSpec s = warped_spec("de_sitter" + std::to_string(n), {"cosh", 1.0}, n - 2.0, n);
    s.time_bound = 2.0;
    s.angle_bound = 0.5;
    s.geodesics.push_back(comoving("comoving", n, 0.0, 3.0));
    s.manifest = {{"ricci_unit_timelike", -(n - 1.0), 1e-8, "constant curvature"},
                  {"einstein_residual", 0.0, 1e-8, "constant curvature"},
                  {"constant_curvature_residual", 0.0, 1e-8, "constant curvature"},
                  {"endomorphism_trace_start", -(n - 1.0), 1e-8, "constant curvature"}};
    Scenario sc = build_scenario(s);
    sc.spec.geodesics.push_back(equatorial_geodesic(sc, 0.5, 0.0, 2.0));
    return sc;
}

Scenario closed_frw_toy() {
    ScenarioSpec s = warped_spec("closed_frw4", {"cos", 0.25}, 2.0, 4);
    s.geodesics.push_back(comoving("comoving", 4, 0.0, 4.0));
    s.manifest = {{"endomorphism_trace_start", 3.0 / 16.0, 1e-8, "warped product formula"}};
    Scenario sc = build_scenario(s);
    DeclaredGeodesic eq = equatorial_geodesic(sc, 1.0, 0.0, 2.4);
    eq.name = "equatorial_boost";
    sc.spec.geodesics.push_back(eq);
    return sc;
}

Scenario product_sphere() {
    ScenarioSpec s = warped_spec("product4", {"constant", 1.0}, 2.0, 4);
    s.weight = {"constant", 0.5};
    s.k = 0.5;
    s.geodesics.push_back(comoving("comoving", 4, 0.0, 2.0));
    s.manifest = {{"endomorphism_trace_start", 0.0, 1e-10, "product metric"}};
    return build_scenario(s);
}

Scenario example7(double k) {
    Scenario ds = de_sitter(4);
    ScenarioSpec s = ds.spec;
    s.name = "example7";
    s.weight = {"sinh_squared", k};
    s.manifest.push_back({"hess_f_tt_origin", 2.0 * k * k, 1e-8, "closed form 2K^2"});
    s.manifest.push_back({"f_origin", 0.0, 0.0, "closed form"});
    return build_scenario(s);
}

std::vector<std::string> builtin_scenarios() {
    return {"closed_frw4", "de_sitter4", "example7", "minkowski4", "product4"};
}

Scenario builtin_scenario(const std::string& name) {
    if (name == "minkowski4") return minkowski(4);
    if (name == "de_sitter4") return de_sitter(4);
    if (name == "example7") return example7(2.0);
    if (name == "closed_frw4") return closed_frw_toy();
    if (name == "product4") return product_sphere();
    throw std::invalid_argument("unknown built-in scenario '" + name + "'");
}

// ---------------------------------------------------------------------------
// Certification of the sinh^2 weight on de Sitter

Example7Options default_example7_options() {
    Example7Options o;
    for (int i = 1; i <= 12; ++i) o.k_grid.push_back(0.5 * i);
    o.spec.axes = {{-3.0, 3.0, 61}, {M_PI / 2, M_PI / 2, 1}, {M_PI / 2, M_PI / 2, 1}, {0.0, 0.0, 1}};
    o.spec.timelike_per_point = 64;
    o.spec.null_per_point = 8;
    o.spec.chi_max = 3.0;
    o.spec.seed = 7;
    return o;
}

Example7Report certify_example7(const Example7Options& opts) {
    const int n = opts.n;
    const Scenario ds = de_sitter(n);
    BakryEmeryParams params;
    Example7Report rep;
    std::optional<std::size_t> first_pass;

    for (std::size_t ki = 0; ki < opts.k_grid.size(); ++ki) {
        const double k = opts.k_grid[ki];
        const ScalarField f = sinh_squared_f(k);
        Example7Row row;
        row.k = k;
        row.report = check_timelike_convergence(ds.metric, f, params, opts.spec);
        row.slack_time_bound = std::numeric_limits<double>::infinity();
        row.slack_timelike_bound = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < opts.spec.point_count(); ++i) {
            const Vec p = opts.spec.point(i);
            if (!ds.metric.in_domain(p)) continue;
            const Mat ric = bakry_emery_ricci_tensor(ds.metric, f, params.m, p);
            const double t = p(0);
            const double ch = std::cosh(k * t);
            row.slack_time_bound =
                std::min(row.slack_time_bound, ric(0, 0) - (2 * k * k - (n - 1.0)));
            const double lower = 4 * k * k * ch * ch - 2 * k * k - k * ch * ch;
            for (const Vec& v : sample_timelike(ds.metric.eval(p), opts.spec.timelike_per_point,
                                                opts.spec.chi_max, opts.spec.seed, i)) {
                const double slack = v.dot(ric * v) - lower;
                row.slack_timelike_bound = std::min(row.slack_timelike_bound, slack);
                if (slack < -1e-9) ++row.timelike_bound_violations;
            }
        }
        if (row.report.pass && !first_pass) first_pass = ki;
        if (!row.report.pass && first_pass) {
            std::ostringstream os;
            os << "K = " << k << " fails although K = " << opts.k_grid[*first_pass] << " passes";
            rep.findings.push_back(os.str());
        }
        if (row.slack_time_bound < -1e-9) {
            std::ostringstream os;
            os << "K = " << k << ": Ric_f(d_t,d_t) >= 2K^2-(n-1) violated, slack "
               << row.slack_time_bound;
            rep.findings.push_back(os.str());
        }
        if (row.timelike_bound_violations > 0) {
            std::ostringstream os;
            os << "K = " << k << ": timelike lower bound violated at "
               << row.timelike_bound_violations << " samples, min slack "
               << row.slack_timelike_bound;
            rep.findings.push_back(os.str());
        }
        rep.rows.push_back(std::move(row));
    }
    if (first_pass) rep.k_star = opts.k_grid[*first_pass];

    const SampleSpec dense = opts.spec.densified(opts.density_factor);
    std::optional<std::size_t> dense_pass;
    for (std::size_t ki = 0; ki < opts.k_grid.size() && !dense_pass; ++ki)
        if (check_timelike_convergence(ds.metric, sinh_squared_f(opts.k_grid[ki]), params, dense)
                .pass)
            dense_pass = ki;
    if (dense_pass) rep.k_star_dense = opts.k_grid[*dense_pass];
    rep.stable = first_pass && dense_pass &&
                 (*first_pass > *dense_pass ? *first_pass - *dense_pass
                                            : *dense_pass - *first_pass) <= 1;
    return rep;
}

}  // namespace bemlab
