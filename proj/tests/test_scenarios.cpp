#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bemlab/scenarios.hpp"

using namespace bemlab;

namespace {

double max_abs_diff(const Riemann& a, const Riemann& b) {
    double worst = 0.0;
    const int n = a.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) worst = std::max(worst, std::abs(a(i, j, k, l) - b(i, j, k, l)));
    return worst;
}

Vec random_point(std::mt19937_64& rng, int n, double t_span) {
    std::uniform_real_distribution<double> t(-t_span, t_span), polar(0.2, M_PI - 0.2), az(-3, 3);
    Vec p(n);
    p(0) = t(rng);
    for (int i = 1; i < n - 1; ++i) p(i) = polar(rng);
    p(n - 1) = az(rng);
    return p;
}

}  // namespace

TEST(Warped, ConstantWarpIsProduct) {
    const Scenario s = warped_product({"constant", 1.0}, 2.0, 4);
    Vec p(4);
    p << 0.3, 1.0, 2.0, 0.5;
    const Riemann r = riemann(s.metric, p);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                EXPECT_NEAR(r(a, 0, b, c), 0.0, 1e-12);
                EXPECT_NEAR(r(0, a, b, c), 0.0, 1e-12);
            }
    EXPECT_NEAR(ricci(s.metric, p)(0, 0), 0.0, 1e-12);
    // the fiber is Einstein with constant lambda = 2
    EXPECT_NEAR(ricci(s.metric, p)(1, 1), 2.0 * s.metric.eval(p)(1, 1), 1e-10);
}

TEST(Warped, DeSitterIdentification) {
    const Scenario ds = de_sitter(4);
    const Scenario wp = warped_product({"cosh", 1.0}, 2.0, 4);
    std::mt19937_64 rng(50);
    for (int i = 0; i < 50; ++i) {
        const Vec p = random_point(rng, 4, 2.0);
        const Mat g = ds.metric.eval(p);
        EXPECT_LT((g - wp.metric.eval(p)).cwiseAbs().maxCoeff(), 1e-12);
        const Riemann r = riemann(ds.metric, p);
        EXPECT_LT(max_abs_diff(r, riemann(wp.metric, p)), 1e-8);
        // constant curvature one: R_abcd = g_ac g_bd - g_ad g_bc
        const auto low = r.lowered(g);
        double worst = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d) {
                        const double expect = g(a, c) * g(b, d) - g(a, d) * g(b, c);
                        worst = std::max(worst, std::abs(low[((a * 4 + b) * 4 + c) * 4 + d] - expect));
                    }
        EXPECT_LT(worst, 1e-8 * std::max(1.0, g.cwiseAbs().maxCoeff() * g.cwiseAbs().maxCoeff()));
    }
}

TEST(Warped, SechWarpIsNotDeSitter) {
    const Scenario s = warped_product({"sech", 1.0}, 2.0, 4);
    Vec p(4);
    p << 0.8, M_PI / 2, M_PI / 2, 0.0;
    const double sech = 1.0 / std::cosh(0.8);
    EXPECT_NEAR(ricci(s.metric, p)(0, 0), -3.0 * (1.0 - 2.0 * sech * sech), 1e-9);
}

TEST(Warped, AnalyticMatchesFiniteDifferences) {
    std::mt19937_64 rng(3);
    for (const WarpFunction& w : {WarpFunction{"cosh", 1.0}, WarpFunction{"cos", 0.25},
                                  WarpFunction{"exp", 0.5}, WarpFunction{"sech", 1.0}}) {
        const Scenario s = warped_product(w, 2.0, 4);
        const MetricField fd = s.metric.as_finite_difference();
        for (int i = 0; i < 5; ++i) {
            const Vec p = random_point(rng, 4, 1.5);
            EXPECT_LT(max_abs_diff(riemann(s.metric, p), riemann(fd, p)), 1e-5) << w.kind;
        }
    }
}

TEST(Warped, FiveDimensionalDeSitterRicci) {
    const Scenario s = de_sitter(5);
    Vec p(5);
    p << 0.4, 1.0, 1.3, 2.0, 0.1;
    const Mat g = s.metric.eval(p);
    EXPECT_LT((ricci(s.metric, p) - 4.0 * g).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SinhSquared, ValuesAndHessian) {
    for (double k : {1.0, 2.0, 4.0}) {
        const Scenario s = example7(k);
        Vec p(4);
        p << 0.0, M_PI / 2, M_PI / 2, 0.0;
        EXPECT_EQ(s.f.eval(p), 0.0);
        for (double t : {-3.0, -1.1, 0.0, 0.4, 2.5, 3.0}) {
            p(0) = t;
            const Mat h = hessian_scalar(s.metric, s.f, p);
            const double tt = 4 * k * k * std::cosh(k * t) * std::cosh(k * t) - 2 * k * k;
            EXPECT_NEAR(h(0, 0), tt, 1e-6 * std::abs(tt));
            // d_theta1 is h-unit on the equator (r = 1)
            const double xx = -2 * k * std::sinh(t) * std::cosh(t) * std::sinh(k * t) * std::cosh(k * t);
            EXPECT_NEAR(h(1, 1), xx, 1e-6 * std::max(1.0, std::abs(xx)));
        }
    }
}

TEST(Manifest, BuiltinsValidate) {
    for (const auto& name : builtin_scenarios()) {
        const Scenario s = builtin_scenario(name);
        EXPECT_EQ(s.name(), name);
        const auto issues = s.validate();
        for (const auto& i : issues)
            ADD_FAILURE() << name << ": " << i.key << " expected " << i.expected << " measured " << i.measured;
        EXPECT_FALSE(s.spec.geodesics.empty());
    }
    EXPECT_THROW(builtin_scenario("anti_de_sitter"), std::invalid_argument);
}

TEST(Manifest, TamperedEntryIsReported) {
    ScenarioSpec spec = de_sitter(4).spec;
    spec.manifest.push_back({"ricci_unit_timelike", 3.0, 1e-8, "deliberately wrong"});
    const auto issues = build_scenario(spec).validate();
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(issues[0].key, "ricci_unit_timelike");
    EXPECT_NEAR(issues[0].measured, -3.0, 1e-8);
}

TEST(Manifest, MeasuredValues) {
    EXPECT_NEAR(de_sitter(4).measure("ricci_unit_timelike"), -3.0, 1e-8);
    EXPECT_NEAR(minkowski(4).measure("riemann_max_abs"), 0.0, 1e-14);
    EXPECT_NEAR(example7(3.0).measure("hess_f_tt_origin"), 18.0, 1e-8);
    EXPECT_NEAR(closed_frw_toy().measure("endomorphism_trace_start"), 3.0 / 16.0, 1e-8);
    EXPECT_THROW(minkowski(4).measure("nonsense"), std::invalid_argument);
}

TEST(Json, RoundTrip) {
    for (const auto& name : builtin_scenarios()) {
        const Scenario s = builtin_scenario(name);
        const nlohmann::json j = s.spec.to_json();
        const ScenarioSpec back = ScenarioSpec::from_json(j);
        EXPECT_EQ(back.to_json().dump(), j.dump()) << name;
        const Scenario rebuilt = scenario_from_json(j);
        const Vec p = s.spec.geodesics.front().point;
        EXPECT_EQ(rebuilt.metric.eval(p), s.metric.eval(p));
        EXPECT_EQ(rebuilt.f.eval(p), s.f.eval(p));
        EXPECT_EQ(rebuilt.params.m, s.params.m);
    }
}

TEST(Json, SyntheticDimensionField) {
    nlohmann::json j = product_sphere().spec.to_json();
    j["m"] = "inf";
    EXPECT_TRUE(ScenarioSpec::from_json(j).m == std::nullopt);
    j["m"] = 2.5;
    EXPECT_DOUBLE_EQ(*ScenarioSpec::from_json(j).m, 2.5);
    EXPECT_EQ(scenario_from_json(j).params.m, SyntheticDimension::finite(2.5));
}

TEST(Geodesics, DeclaredGeodesicsSatisfyEquation) {
    for (const auto& name : builtin_scenarios()) {
        const Scenario s = builtin_scenario(name);
        for (const auto& d : s.spec.geodesics) {
            const auto geo = integrate_geodesic(s.metric, d.point, d.velocity, d.a, d.b);
            EXPECT_FALSE(geo.exited_domain()) << name << "/" << d.name;
            EXPECT_LT(geo.max_norm_drift(), 1e-7) << name << "/" << d.name;
            EXPECT_LT(geo.equation_residual(0.5 * (d.a + d.b)), 1e-5) << name << "/" << d.name;
        }
    }
}

TEST(Example7, CertificationFindsStableThreshold) {
    const Example7Report rep = certify_example7();
    ASSERT_EQ(rep.rows.size(), 12u);
    ASSERT_TRUE(rep.k_star.has_value());
    ASSERT_TRUE(rep.k_star_dense.has_value());
    EXPECT_TRUE(rep.stable);
    // analytic threshold for n = 4 over the whole boost range is sqrt(3/2)
    EXPECT_GE(*rep.k_star, std::sqrt(1.5));
    EXPECT_LE(*rep.k_star, std::sqrt(1.5) + 0.5);
    EXPECT_LE(std::abs(*rep.k_star_dense - *rep.k_star), 0.5 + 1e-12);
    bool passed = false;
    for (const auto& row : rep.rows) {
        if (passed) EXPECT_TRUE(row.report.pass) << row.k;
        passed = passed || row.report.pass;
        // Ric_f(d_t, d_t) >= 2K^2 - (n-1) holds with equality at t = 0
        EXPECT_GE(row.slack_time_bound, -1e-9);
        EXPECT_EQ(row.report.evaluated, 61u * 64u);
    }
}

TEST(Example7, SmallKFails) {
    Example7Options o = default_example7_options();
    o.k_grid = {0.1};
    const auto rep = certify_example7(o);
    ASSERT_EQ(rep.rows.size(), 1u);
    EXPECT_FALSE(rep.rows[0].report.pass);
    EXPECT_FALSE(rep.k_star.has_value());
    // the rest-frame value at small K is close to the unweighted -3
    const Scenario s = example7(0.1);
    BakryEmeryParams p;
    Vec x(4), v = Vec::Zero(4);
    x << 0.0, M_PI / 2, M_PI / 2, 0.0;
    v(0) = 1.0;
    EXPECT_NEAR(bakry_emery_ricci(s.metric, s.f, p, x, v, v), -3.0 + 0.02, 1e-9);
}

TEST(Example7, DisplayedTimelikeBoundFindings) {
    const auto rep = certify_example7();
    std::size_t with_violations = 0;
    for (const auto& row : rep.rows) with_violations += row.timelike_bound_violations > 0;
    EXPECT_EQ(rep.findings.size(), with_violations);
}
