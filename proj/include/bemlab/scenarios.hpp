// scenarios.hpp - Built-in spacetimes, weights and the sinh^2 certification.
//
// Warped products -dt^2 + phi(t)^2 h on R x S^{n-1}, with h the round metric
// scaled to Ric_h = lambda h, are charted by (t, theta_1, ..., theta_{n-1})
// with h = r^2 sum_i (prod_{j<i} sin^2 theta_j) dtheta_i^2, r^2 = (n-2)/lambda.
// The polar angles theta_1..theta_{n-2} keep a 1e-3 margin from the poles.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bemlab/comparison.hpp"
#include "bemlab/congruence.hpp"
#include "bemlab/manifold_core.hpp"
#include "json.hpp"

namespace bemlab {

inline constexpr double kPoleMargin = 1e-3;

// phi with its first two derivatives.
struct WarpFunction {
    std::string kind;  // "constant", "cosh", "sech", "cos", "exp"
    double scale = 1.0;

    double value(double t) const;
    double first(double t) const;
    double second(double t) const;
    nlohmann::json to_json() const;
    static WarpFunction from_json(const nlohmann::json& j);
};

MetricField warped_metric(const WarpFunction& phi, double lambda, int n);
MetricField minkowski_metric(int n);

// Weights depending on t only.
struct WeightSpec {
    std::string kind = "zero";  // "zero", "constant", "linear_t", "t_squared", "sinh_squared"
    double a = 0.0;             // constant value, slope, coefficient or K

    ScalarField field() const;
    nlohmann::json to_json() const;
    static WeightSpec from_json(const nlohmann::json& j);
};

ScalarField sinh_squared_f(double k);
ScalarField linear_t_f(double a);
ScalarField t_squared_f(double a);

struct DeclaredGeodesic {
    std::string name;
    Vec point;
    Vec velocity;
    double a = 0.0;
    double b = 1.0;
};

struct ManifestEntry {
    std::string key;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string basis;  // how the expected value is known
};

struct ScenarioSpec {
    std::string name;
    std::string geometry = "warped";  // "minkowski" or "warped"
    int n = 4;
    WarpFunction warp;
    double lambda = 2.0;
    WeightSpec weight;
    std::optional<double> m;  // empty = infinity
    std::optional<double> k;
    // (apex, q) pairs with |dt| <= this and every angular difference
    // <= angle_bound count as uniquely connected.
    double time_bound = std::numeric_limits<double>::infinity();
    double angle_bound = std::numeric_limits<double>::infinity();
    std::vector<DeclaredGeodesic> geodesics;
    std::vector<ManifestEntry> manifest;

    nlohmann::json to_json() const;
    static ScenarioSpec from_json(const nlohmann::json& j);
};

struct Scenario {
    ScenarioSpec spec;
    MetricField metric;
    ScalarField f;
    BakryEmeryParams params;

    const std::string& name() const { return spec.name; }
    int dim() const { return spec.n; }
    UniquenessRegion uniqueness_region() const;
    // Measured value of a manifest key.
    double measure(const std::string& key) const;
    struct ValidationIssue {
        std::string key;
        double expected;
        double measured;
    };
    // Re-checks every manifest entry and the geodesic equation along every
    // declared geodesic; returns the failures.
    std::vector<ValidationIssue> validate() const;
};

Scenario build_scenario(const ScenarioSpec& spec);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario minkowski(int n);
Scenario de_sitter(int n);
Scenario warped_product(const WarpFunction& phi, double lambda, int n);
// -dt^2 + cos^2(t/4) h on R x S^3 (n = 4) and the static product R x S^3.
Scenario closed_frw_toy();
Scenario product_sphere();
// de Sitter n = 4 with f = sinh^2(K t).
Scenario example7(double k);

std::vector<std::string> builtin_scenarios();
Scenario builtin_scenario(const std::string& name);

// Equatorial point and a boosted unit timelike velocity moving in the last
// angle: cosh(chi) d_t + sinh(chi) (phi r)^{-1} d_theta.
DeclaredGeodesic equatorial_geodesic(const Scenario& s, double chi, double t0, double length);

struct Example7Options {
    int n = 4;
    std::vector<double> k_grid;       // default 0.5, 1.0, ..., 6.0
    SampleSpec spec;                  // default t in [-3, 3] step 0.1
    int density_factor = 10;
};

Example7Options default_example7_options();

struct Example7Row {
    double k = 0.0;
    ConditionReport report;
    // pointwise slack of the two displayed lower bounds (min over samples)
    double slack_time_bound = 0.0;
    double slack_timelike_bound = 0.0;
    std::size_t timelike_bound_violations = 0;
};

struct Example7Report {
    std::vector<Example7Row> rows;
    std::optional<double> k_star;
    std::optional<double> k_star_dense;
    bool stable = false;  // dense K* within one grid step
    std::vector<std::string> findings;
};

Example7Report certify_example7(const Example7Options& opts = default_example7_options());

}  // namespace bemlab
