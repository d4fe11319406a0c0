// comparison.hpp - Curvature-condition certificates and comparison bounds.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bemlab/congruence.hpp"
#include "bemlab/jacobi.hpp"
#include "bemlab/manifold_core.hpp"

namespace bemlab {

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;  // count == 1 samples lo only

    double node(int i) const;
};

// Points are the Cartesian product of the axes (first axis slowest).
// Directions at each point come from a generator seeded by (seed, point index).
struct SampleSpec {
    std::vector<GridAxis> axes;
    int timelike_per_point = 32;
    int null_per_point = 8;
    double chi_max = 3.0;
    std::uint64_t seed = 1;

    void validate() const;
    std::size_t point_count() const;
    Vec point(std::size_t index) const;
    // Same points with `factor` times as many directions per point.
    SampleSpec densified(int factor) const;
};

struct ConditionReport {
    double min_value = std::numeric_limits<double>::infinity();
    Vec argmin_point;
    Vec argmin_vector;
    double threshold = -1e-9;
    bool pass = false;
    std::size_t evaluated = 0;
    std::size_t skipped_points = 0;  // outside the metric domain
};

// g-orthonormal frame at p from the eigenvectors of g: column 0 timelike.
Mat orthonormal_frame(const Mat& g);

// Unit timelike directions v = cosh(chi) e0 + sinh(chi) u, chi uniform on
// [0, chi_max], u uniform on the unit sphere of e0's complement.
std::vector<Vec> sample_timelike(const Mat& g, int count, double chi_max, std::uint64_t seed,
                                 std::uint64_t stream);
// Null directions e0 + u.
std::vector<Vec> sample_null(const Mat& g, int count, std::uint64_t seed, std::uint64_t stream);

// min Ric_f^m(v, v) over sampled unit timelike v; pass iff min >= -1e-9.
ConditionReport check_timelike_convergence(const MetricField& g, const ScalarField& f,
                                           const BakryEmeryParams& params,
                                           const SampleSpec& spec);
// Same over sampled null directions.
ConditionReport check_null_convergence(const MetricField& g, const ScalarField& f,
                                       const BakryEmeryParams& params, const SampleSpec& spec);

// Ric_f^m(v, v) at every sampled timelike direction, in sampling order.
std::vector<double> timelike_convergence_values(const MetricField& g, const ScalarField& f,
                                                const BakryEmeryParams& params,
                                                const SampleSpec& spec);

struct FGenericResult {
    bool generic = false;
    std::optional<double> witness;
    double max_norm = 0.0;
};

// True iff |R_f(t)| > 1e-9 (max entry) at some frame sample.
FGenericResult check_f_generic(const MetricField& g, const ScalarField& f,
                               const FrameField& frame);

// |tr R_f - Ric_f^m(c',c') - (1/d + 1/m) ((f o c)')^2| at t.
double trace_identity_check(const MetricField& g, const ScalarField& f,
                            const BakryEmeryParams& params, const FrameField& frame, double t);

struct SchwarzGap {
    double lhs = 0.0;
    double rhs_plus = 0.0;
    double rhs_minus = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

// lhs = theta^2/(n-1) + f'^2/m, rhs = max over the sign of
// (theta +- f')^2 / (n+m-1). Requires n >= 2 and finite m > 0.
SchwarzGap schwarz_gap(double theta, double fprime, int n, double m);

// Equality witnesses: |theta| = c |f'| with c = sqrt((n-1)/m) (as commonly
// quoted) or c = (n-1)/m (the Cauchy-Schwarz equality case).
double schwarz_ratio_stated(int n, double m);
double schwarz_ratio_exact(int n, double m);

using UniquenessRegion = std::function<bool(const Vec& apex, const Vec& q)>;

struct FLaplacianOptions {
    double spacing = 1e-3;
    double newton_tol = 1e-12;
    int newton_max_iter = 40;
    std::optional<SyntheticDimension> m;
    UniquenessRegion region;
};

struct FLaplacianResult {
    double rho = 0.0;
    Vec initial_velocity;        // unit, past directed, at the apex
    double laplacian = 0.0;      // Delta d_r(q) = -theta(rho)
    double drift = 0.0;          // (f o sigma)'(rho)
    double value = 0.0;          // Delta_f d_r(q)
    std::optional<double> bound_finite_m;  // -(n+m-1)/rho
    double bound_weighted = 0.0;           // -(n-1)/rho + 2 f(q)/rho - 2/rho^2 int f o sigma
    int newton_iterations = 0;
};

// Delta_f d_r(q) for the distance to the apex, through the congruence of
// past-directed geodesics leaving the apex. Throws NoMaximalGeodesic or
// OutsideUniquenessRegion.
FLaplacianResult f_laplacian_distance(const MetricField& g, const ScalarField& f,
                                      const Vec& apex, const Vec& q,
                                      const FLaplacianOptions& opts = {});

}  // namespace bemlab
