// cli_runner.cpp

#include "bemlab/cli_runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "bemlab/comparison.hpp"
#include "bemlab/jacobi.hpp"
#include "bemlab/numerics.hpp"

namespace bemlab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string num(double x) { return shortest_repr(x); }

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error("invalid configuration: " + join(violations, "; ")),
      violations_(std::move(violations)) {}

const std::vector<CheckInfo>& available_checks() {
    static const std::vector<CheckInfo> checks = {
        {"conjugate_points", "zeros of det A for the point congruence", false},
        {"example7_certification", "sampled Ric_f >= 0 over a K grid for sinh^2(Kt)", false},
        {"f_generic", "R_f nonzero somewhere along the geodesic", true},
        {"f_laplacian", "distance f-Laplacian against the comparison bounds", false},
        {"geodesic_residual", "geodesic equation and normalisation", false},
        {"lagrange_defect", "conservation of (A')^T A - A^T A'", false},
        {"manifest", "expected values declared by the scenario", false},
        {"mean_curvature", "evolution of H_f along the normal congruence", false},
        {"null_convergence", "sampled Ric_f^m on null directions", true},
        {"raychaudhuri_residual", "weighted Raychaudhuri identity", false},
        {"timelike_convergence", "sampled Ric_f^m on unit timelike directions", false},
        {"trace_identity", "tr R_f against Ric_f^m(c',c')", false},
    };
    return checks;
}

namespace {

const CheckInfo* find_check(const std::string& id) {
    for (const auto& c : available_checks())
        if (c.id == id) return &c;
    return nullptr;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
}

template <typename T>
void read_field(const json& obj, const std::string& key, const std::string& path, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError("field '" + path + "' has the wrong type: " + e.what(), 0, path);
    }
}

bool is_builtin(const std::string& name) {
    const auto names = builtin_scenarios();
    return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

json RunConfig::echo() const {
    json j;
    j["scenario"] = scenario;
    j["checks"] = checks;
    j["geodesic"] = geodesic;
    j["tolerances"] = {{"rel", rel_tol}, {"abs", abs_tol}, {"spacing", spacing},
                       {"residual", residual_tol}};
    j["sample"] = {{"timelike_per_point", timelike_per_point},
                   {"null_per_point", null_per_point},
                   {"chi_max", chi_max},
                   {"t_min", t_min},
                   {"t_max", t_max},
                   {"t_count", t_count}};
    j["weight"] = weight ? weight->to_json() : json(nullptr);
    j["m"] = m ? json(*m) : json(nullptr);
    j["seed"] = seed;
    j["out"] = out_dir;
    return j;
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), line_of(text, e.byte), "");
    }
    if (!j.is_object()) throw ParseError("configuration must be a JSON object", 1, "");

    RunConfig c;
    std::vector<std::string> violations;
    static const std::vector<std::string> known = {"scenario", "checks",  "geodesic", "tolerances",
                                                   "sample",   "weight",  "m",        "seed",
                                                   "out"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            violations.push_back("unknown field '" + key + "'");

    read_field(j, "scenario", "scenario", c.scenario);
    read_field(j, "checks", "checks", c.checks);
    read_field(j, "geodesic", "geodesic", c.geodesic);
    read_field(j, "seed", "seed", c.seed);
    read_field(j, "out", "out", c.out_dir);
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) throw ParseError("field 'tolerances' must be an object", 0, "tolerances");
        read_field(t, "rel", "tolerances.rel", c.rel_tol);
        read_field(t, "abs", "tolerances.abs", c.abs_tol);
        read_field(t, "spacing", "tolerances.spacing", c.spacing);
        read_field(t, "residual", "tolerances.residual", c.residual_tol);
    }
    if (j.contains("sample")) {
        const json& s = j.at("sample");
        if (!s.is_object()) throw ParseError("field 'sample' must be an object", 0, "sample");
        read_field(s, "timelike_per_point", "sample.timelike_per_point", c.timelike_per_point);
        read_field(s, "null_per_point", "sample.null_per_point", c.null_per_point);
        read_field(s, "chi_max", "sample.chi_max", c.chi_max);
        read_field(s, "t_min", "sample.t_min", c.t_min);
        read_field(s, "t_max", "sample.t_max", c.t_max);
        read_field(s, "t_count", "sample.t_count", c.t_count);
    }
    if (j.contains("weight")) {
        try {
            c.weight = WeightSpec::from_json(j.at("weight"));
        } catch (const json::exception& e) {
            throw ParseError(std::string("field 'weight': ") + e.what(), 0, "weight");
        } catch (const std::invalid_argument& e) {
            violations.push_back(e.what());
        }
    }
    if (j.contains("m")) {
        const json& m = j.at("m");
        if (m.is_string()) {
            if (m.get<std::string>() != "inf") violations.push_back("m must be a positive number or \"inf\"");
            c.m = "inf";
        } else if (m.is_number()) {
            if (!(m.get<double>() > 0.0)) violations.push_back("m must be positive");
            c.m = num(m.get<double>());
        } else {
            throw ParseError("field 'm' must be a number or \"inf\"", 0, "m");
        }
    }

    if (c.checks.empty())
        for (const auto& info : available_checks())
            if (info.id != "example7_certification") c.checks.push_back(info.id);
    for (const auto& id : c.checks)
        if (!find_check(id)) violations.push_back("unknown check '" + id + "'");
    std::sort(c.checks.begin(), c.checks.end());
    c.checks.erase(std::unique(c.checks.begin(), c.checks.end()), c.checks.end());

    for (auto [name, v] : {std::pair{"tolerances.rel", c.rel_tol}, {"tolerances.abs", c.abs_tol},
                           {"tolerances.spacing", c.spacing},
                           {"tolerances.residual", c.residual_tol}})
        if (!(v > 0.0)) violations.push_back(std::string(name) + " must be > 0");
    if (c.timelike_per_point < 1) violations.push_back("sample.timelike_per_point must be >= 1");
    if (c.null_per_point < 1) violations.push_back("sample.null_per_point must be >= 1");
    if (c.t_count < 1) violations.push_back("sample.t_count must be >= 1");
    if (!(c.chi_max >= 0.0)) violations.push_back("sample.chi_max must be >= 0");
    if (c.t_max < c.t_min) violations.push_back("sample.t_max must be >= sample.t_min");

    if (!is_builtin(c.scenario)) {
        fs::path p(c.scenario);
        if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
        if (fs::exists(p))
            c.scenario_path = p.string();
        else
            violations.push_back("unknown scenario '" + c.scenario + "'");
    }
    if (!violations.empty()) throw ValidationError(violations);
    return c;
}

Scenario resolve_scenario(const RunConfig& config) {
    ScenarioSpec spec;
    if (config.scenario_path.empty()) {
        spec = builtin_scenario(config.scenario).spec;
    } else {
        std::ifstream in(config.scenario_path);
        if (!in) throw std::runtime_error("cannot read scenario file " + config.scenario_path);
        std::stringstream ss;
        ss << in.rdbuf();
        spec = ScenarioSpec::from_json(json::parse(ss.str()));
    }
    if (config.weight) spec.weight = *config.weight;
    if (config.m) {
        if (*config.m == "inf")
            spec.m.reset();
        else
            spec.m = std::stod(*config.m);
    }
    return build_scenario(spec);
}

// ---------------------------------------------------------------------------
// Checks

namespace {

class Context {
public:
    Context(const RunConfig& cfg, Scenario sc) : cfg_(cfg), sc_(std::move(sc)) {
        if (sc_.spec.geodesics.empty()) throw std::runtime_error("scenario declares no geodesic");
        dg_ = sc_.spec.geodesics.front();
        if (!cfg.geodesic.empty()) {
            bool found = false;
            for (const auto& g : sc_.spec.geodesics)
                if (g.name == cfg.geodesic) {
                    dg_ = g;
                    found = true;
                }
            if (!found) throw std::runtime_error("no declared geodesic named '" + cfg.geodesic + "'");
        }
    }

    const RunConfig& cfg() const { return cfg_; }
    const Scenario& scenario() const { return sc_; }
    const DeclaredGeodesic& declared() const { return dg_; }

    const GeodesicTrajectory& geodesic() {
        if (!geo_) geo_.emplace(integrate_geodesic(sc_.metric, dg_.point, dg_.velocity, dg_.a, dg_.b));
        return *geo_;
    }
    const FrameField& frame() {
        if (!frame_) frame_.emplace(parallel_frame(sc_.metric, geodesic()));
        return *frame_;
    }
    JacobiOptions jacobi_options() const {
        JacobiOptions o;
        o.rel_tol = cfg_.rel_tol;
        o.abs_tol = cfg_.abs_tol;
        o.spacing = cfg_.spacing;
        return o;
    }
    const JacobiTrajectory& point_congruence() {
        if (!point_) {
            auto src = std::make_shared<MetricSource>(sc_.metric, frame(), sc_.f);
            const int d = src->dim();
            point_.emplace(integrate_jacobi(src, Mat::Zero(d, d), Mat::Identity(d, d),
                                            geodesic().t_begin(), geodesic().t_end(),
                                            jacobi_options(), "point"));
        }
        return *point_;
    }
    SampleSpec sample_spec() const {
        SampleSpec s;
        s.axes.push_back({cfg_.t_min, cfg_.t_max, cfg_.t_count});
        for (Eigen::Index i = 1; i < dg_.point.size(); ++i)
            s.axes.push_back({dg_.point(i), dg_.point(i), 1});
        s.timelike_per_point = cfg_.timelike_per_point;
        s.null_per_point = cfg_.null_per_point;
        s.chi_max = cfg_.chi_max;
        s.seed = cfg_.seed;
        return s;
    }

private:
    const RunConfig& cfg_;
    Scenario sc_;
    DeclaredGeodesic dg_;
    std::optional<GeodesicTrajectory> geo_;
    std::optional<FrameField> frame_;
    std::optional<JacobiTrajectory> point_;
};

// Samples this close to a zero of det A are masked before differencing theta_f.
constexpr double kConjugateCollar = 0.1;

CheckStatus verdict(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

std::string series_csv(const CongruenceDiagnostics& diag, const RaychaudhuriReport& rep) {
    std::ostringstream os;
    os << "t,theta_f,theta,det_A,tr_sigma2,tr_omega2,residual,mask\n";
    for (std::size_t i = 0; i < diag.samples.size(); ++i) {
        const auto& s = diag.samples[i];
        const bool mask = s.valid && rep.residual[i].has_value();
        os << num(s.t) << ',' << (s.valid ? num(s.theta_f) : "") << ','
           << (s.valid ? num(s.theta) : "") << ',' << num(s.det_a) << ','
           << (s.valid ? num(s.tr_sigma2) : "") << ',' << (s.valid ? num(s.tr_omega2) : "")
           << ',' << (rep.residual[i] ? num(*rep.residual[i]) : "") << ',' << (mask ? 1 : 0)
           << '\n';
    }
    return os.str();
}

CheckOutcome run_check(const std::string& id, Context& ctx, RunResult& result) {
    CheckOutcome out{id, CheckStatus::Fail, ""};
    const Scenario& sc = ctx.scenario();
    const RunConfig& cfg = ctx.cfg();
    std::ostringstream os;

    if (id == "geodesic_residual") {
        double worst_res = 0.0, worst_drift = 0.0;
        bool exited = false;
        for (const auto& dg : sc.spec.geodesics) {
            const GeodesicTrajectory geo = integrate_geodesic(sc.metric, dg.point, dg.velocity, dg.a, dg.b);
            exited = exited || geo.exited_domain();
            for (int i = 1; i <= 5; ++i) {
                const double t = geo.t_begin() + (geo.t_end() - geo.t_begin()) * i / 6.0;
                worst_res = std::max(worst_res, geo.equation_residual(t));
            }
            worst_drift = std::max(worst_drift, geo.max_norm_drift());
        }
        out.status = verdict(!exited && worst_res <= 1e-6 && worst_drift <= 1e-8);
        os << "geodesics=" << sc.spec.geodesics.size() << " max_residual=" << num(worst_res)
           << " max_norm_drift=" << num(worst_drift);
    } else if (id == "raychaudhuri_residual") {
        const JacobiTrajectory& traj = ctx.point_congruence();
        CongruenceDiagnostics diag = kinematics(traj);
        const ConjugateReport zeros = detect_conjugate(traj);
        for (auto& smp : diag.samples)
            for (const auto& z : zeros.zeros)
                if (std::abs(smp.t - z.t) < kConjugateCollar) smp.valid = false;
        const std::vector<double> ric = bakry_emery_along(traj, sc.params.m);
        RaychaudhuriWindow w{traj.t_begin() + 0.2, traj.t_end()};
        const RaychaudhuriReport rep = raychaudhuri_residual(diag, ric, sc.params.m, w);
        result.csv["raychaudhuri_residual.csv"] = series_csv(diag, rep);
        out.status = verdict(rep.max_abs_residual <= cfg.residual_tol);
        os << "max_abs_residual=" << num(rep.max_abs_residual) << " evaluated=" << rep.evaluated
           << " min_slack=" << num(rep.min_slack) << " m=" << sc.params.m.to_string();
        if (!zeros.zeros.empty()) os << " conjugate_collars=" << zeros.zeros.size();
    } else if (id == "lagrange_defect") {
        const double defect = max_lagrange_defect(ctx.point_congruence());
        out.status = verdict(defect <= 1e-9);
        os << "max_defect=" << num(defect);
    } else if (id == "conjugate_points") {
        const ConjugateReport rep = detect_conjugate(ctx.point_congruence());
        bool ok = true;
        std::vector<std::string> zs;
        for (const auto& z : rep.zeros) {
            ok = ok && (z.sign_change || z.sigma_min < 1e-9) && z.theta_blows_up;
            zs.push_back(num(z.t));
        }
        out.status = verdict(ok);
        os << "zeros=" << rep.zeros.size() << (zs.empty() ? "" : " at " + join(zs, ","));
    } else if (id == "trace_identity") {
        const GeodesicTrajectory& geo = ctx.geodesic();
        double worst = 0.0;
        for (int i = 0; i <= 4; ++i) {
            const double t = geo.t_begin() + (geo.t_end() - geo.t_begin()) * i / 4.0;
            worst = std::max(worst, trace_identity_check(sc.metric, sc.f, sc.params, ctx.frame(), t));
        }
        out.status = verdict(worst <= 1e-6);
        os << "max_residual=" << num(worst);
    } else if (id == "f_generic") {
        const FGenericResult r = check_f_generic(sc.metric, sc.f, ctx.frame());
        out.status = CheckStatus::Info;
        os << "generic=" << (r.generic ? "yes" : "no") << " max_norm=" << num(r.max_norm);
        if (r.witness) os << " witness_t=" << num(*r.witness);
    } else if (id == "timelike_convergence" || id == "null_convergence") {
        const bool timelike = id == "timelike_convergence";
        const ConditionReport r = timelike
                                      ? check_timelike_convergence(sc.metric, sc.f, sc.params, ctx.sample_spec())
                                      : check_null_convergence(sc.metric, sc.f, sc.params, ctx.sample_spec());
        out.status = timelike ? verdict(r.pass) : CheckStatus::Info;
        os << "min=" << num(r.min_value) << " evaluated=" << r.evaluated
           << " m=" << sc.params.m.to_string();
        if (r.argmin_point.size()) os << " argmin_t=" << num(r.argmin_point(0));
    } else if (id == "mean_curvature") {
        const DeclaredGeodesic& dg = ctx.declared();
        const int n = sc.dim();
        NormalCongruenceSpec spec;
        spec.point = dg.point;
        spec.normal = Vec::Zero(n);
        spec.normal(0) = 1.0;
        double h = 0.0;
        if (sc.spec.geometry == "warped")
            h = sc.spec.warp.first(dg.point(0)) / sc.spec.warp.value(dg.point(0));
        spec.shape = h * Mat::Identity(n - 1, n - 1);
        spec.length = std::min(2.0, dg.b - dg.a);
        const MeanCurvatureReport r = mean_curvature_evolution(sc.metric, sc.f, spec, ctx.jacobi_options());
        out.status = verdict(r.max_abs_residual <= cfg.residual_tol);
        os << "max_abs_residual=" << num(r.max_abs_residual) << " H(0)=" << num(r.h.front());
    } else if (id == "f_laplacian") {
        const DeclaredGeodesic& dg = ctx.declared();
        const double len = std::min(2.0, dg.b - dg.a);
        const GeodesicTrajectory geo = integrate_geodesic(sc.metric, dg.point, dg.velocity, dg.a, dg.a + len);
        FLaplacianOptions fo;
        fo.spacing = cfg.spacing;
        fo.m = sc.params.m;
        fo.region = sc.uniqueness_region();
        const Vec apex = geo.samples().back().point;
        const Vec q = geo.samples().front().point;
        const FLaplacianResult r = f_laplacian_distance(sc.metric, sc.f, apex, q, fo);
        const bool certified = check_timelike_convergence(sc.metric, sc.f, sc.params, ctx.sample_spec()).pass;
        const double bound = r.bound_finite_m ? *r.bound_finite_m : r.bound_weighted;
        out.status = certified ? verdict(r.value >= bound - 1e-6) : CheckStatus::Info;
        os << "rho=" << num(r.rho) << " value=" << num(r.value) << " bound=" << num(bound)
           << " hypothesis=" << (certified ? "certified" : "not certified");
    } else if (id == "manifest") {
        const auto issues = sc.validate();
        out.status = verdict(issues.empty());
        os << "entries=" << sc.spec.manifest.size() << " issues=" << issues.size();
        for (const auto& is : issues)
            os << "\n    " << is.key << ": expected " << num(is.expected) << ", measured " << num(is.measured);
    } else if (id == "example7_certification") {
        Example7Options opts = default_example7_options();
        opts.spec.seed = cfg.seed;
        opts.spec.timelike_per_point = cfg.timelike_per_point;
        opts.spec.chi_max = cfg.chi_max;
        const Example7Report r = certify_example7(opts);
        out.status = verdict(r.k_star.has_value());
        os << "K*=" << (r.k_star ? num(*r.k_star) : "none")
           << " dense_K*=" << (r.k_star_dense ? num(*r.k_star_dense) : "none")
           << " stable=" << (r.stable ? "yes" : "no") << " findings=" << r.findings.size();
        for (const auto& row : r.rows)
            os << "\n    K=" << num(row.k) << " min=" << num(row.report.min_value)
               << (row.report.pass ? " pass" : " fail");
        for (const auto& f : r.findings) os << "\n    finding: " << f;
    } else {
        throw std::runtime_error("unknown check '" + id + "'");
    }
    out.summary = os.str();
    return out;
}

const char* status_tag(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Info: return "INFO";
    }
    return "?";
}

}  // namespace

RunResult run(const RunConfig& config) {
    RunResult result;
    std::ostringstream rep;
    rep << "bemlab report\n";
    rep << "config: " << config.echo().dump() << "\n";
    try {
        Context ctx(config, resolve_scenario(config));
        rep << "scenario: " << ctx.scenario().name() << " (n=" << ctx.scenario().dim()
            << ", m=" << ctx.scenario().params.m.to_string() << ", weight="
            << ctx.scenario().spec.weight.kind << ")\n";
        rep << "geodesic: " << ctx.declared().name << "\n";
        for (const auto& id : config.checks) {
            CheckOutcome o = run_check(id, ctx, result);
            rep << "[" << status_tag(o.status) << "] " << o.id << ": " << o.summary
                << " (basis: " << find_check(id)->basis << ")\n";
            result.outcomes.push_back(std::move(o));
        }
        std::size_t pass = 0, fail = 0, info = 0;
        for (const auto& o : result.outcomes) {
            pass += o.status == CheckStatus::Pass;
            fail += o.status == CheckStatus::Fail;
            info += o.status == CheckStatus::Info;
        }
        rep << "summary: " << pass << " pass, " << fail << " fail, " << info << " info\n";
        result.exit_code = fail ? 1 : 0;
    } catch (const std::exception& e) {
        rep << "FAILED: " << e.what() << "\n";
        result.exit_code = 2;
    }
    result.report = rep.str();
    return result;
}

void write_artifacts(const RunConfig& config, const RunResult& result) {
    fs::create_directories(config.out_dir);
    {
        std::ofstream out(fs::path(config.out_dir) / "report.txt", std::ios::binary);
        out << result.report;
    }
    for (const auto& [name, body] : result.csv) {
        std::ofstream out(fs::path(config.out_dir) / name, std::ios::binary);
        out << body;
    }
}

}  // namespace bemlab
