// manifold_core.hpp - Pointwise Lorentzian geometry from a coordinate metric.
//
// Conventions: signature (-,+,...,+); R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z
// with components R(d_c, d_d) d_b = R^a_{bcd} d_a; Ric_{bd} = R^a_{bad}.
// With these conventions a space of constant curvature +1 has
// R_{abcd} = g_{ac} g_{bd} - g_{ad} g_{bc} and Ric = (n-1) g.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bemlab/errors.hpp"

namespace bemlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using MatrixList = std::vector<Mat>;

struct CoordinateInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return x > lo && x < hi; }
};

enum class DerivativeMode { Analytic, FiniteDifference };

// Central-difference defaults. The first-derivative step is
// kDefaultFdStep * max(1, |x_c|); second derivatives use ten times that.
inline constexpr double kDefaultFdStep = 1e-5;
inline constexpr double kSecondStepWidening = 10.0;

class MetricField {
public:
    using ValueFn = std::function<Mat(const Vec&)>;
    // Returns d_c g_{ab} as element [c].
    using FirstFn = std::function<MatrixList(const Vec&)>;
    // Returns d_c d_d g_{ab} as element [c * n + d].
    using SecondFn = std::function<MatrixList(const Vec&)>;

    static MetricField analytic(int dim, ValueFn value, FirstFn first, SecondFn second,
                                std::vector<CoordinateInterval> domain);
    static MetricField finite_difference(int dim, ValueFn value,
                                         std::vector<CoordinateInterval> domain,
                                         double step = kDefaultFdStep);

    int dim() const { return dim_; }
    DerivativeMode mode() const { return mode_; }
    double fd_step() const { return step_; }
    const std::vector<CoordinateInterval>& domain() const { return domain_; }

    bool in_domain(const Vec& p) const;
    void require_in_domain(const Vec& p) const;

    Mat eval(const Vec& p) const;
    MatrixList first_derivatives(const Vec& p) const;
    MatrixList second_derivatives(const Vec& p) const;

    // Same metric, derivatives by central differences with the given step.
    MetricField as_finite_difference(double step = kDefaultFdStep) const;

private:
    MetricField() = default;

    int dim_ = 0;
    DerivativeMode mode_ = DerivativeMode::FiniteDifference;
    double step_ = kDefaultFdStep;
    ValueFn value_;
    FirstFn first_;
    SecondFn second_;
    std::vector<CoordinateInterval> domain_;
};

class ScalarField {
public:
    using ValueFn = std::function<double(const Vec&)>;
    using GradFn = std::function<Vec(const Vec&)>;
    using PartialsFn = std::function<Mat(const Vec&)>;

    static ScalarField analytic(ValueFn value, GradFn gradient, PartialsFn second_partials,
                                std::optional<double> upper_bound = std::nullopt);
    static ScalarField finite_difference(ValueFn value, double step = kDefaultFdStep,
                                         std::optional<double> upper_bound = std::nullopt);
    static ScalarField constant(double c);

    DerivativeMode mode() const { return mode_; }
    double eval(const Vec& p) const;
    // Coordinate partials d_a f (the differential df, not the metric gradient).
    Vec differential(const Vec& p) const;
    Mat second_partials(const Vec& p) const;

    const std::optional<double>& upper_bound() const { return upper_bound_; }
    // True when no bound is declared or eval(p) <= bound.
    bool respects_bound(const Vec& p) const;

private:
    ScalarField() = default;

    DerivativeMode mode_ = DerivativeMode::FiniteDifference;
    double step_ = kDefaultFdStep;
    ValueFn value_;
    GradFn gradient_;
    PartialsFn partials_;
    std::optional<double> upper_bound_;
};

// The synthetic dimension m of Ric_f^m: a positive real or infinity.
class SyntheticDimension {
public:
    static SyntheticDimension finite(double m);
    static SyntheticDimension infinite() { return SyntheticDimension(); }

    bool is_infinite() const { return !m_.has_value(); }
    double value() const;
    // 1/m, zero for m = infinity.
    double reciprocal() const { return m_ ? 1.0 / *m_ : 0.0; }
    std::string to_string() const;

    friend bool operator==(const SyntheticDimension&, const SyntheticDimension&) = default;

private:
    SyntheticDimension() = default;
    std::optional<double> m_;
};

struct BakryEmeryParams {
    SyntheticDimension m = SyntheticDimension::infinite();
    std::optional<double> k;  // declared upper bound for f
};

struct PointVector {
    Vec point;
    Vec vector;
};

// Rank-(1,2) array Gamma^a_{bc}.
class Christoffel {
public:
    explicit Christoffel(int n) : n_(n), data_(static_cast<size_t>(n * n * n), 0.0) {}
    int dim() const { return n_; }
    double& operator()(int a, int b, int c) { return data_[idx(a, b, c)]; }
    double operator()(int a, int b, int c) const { return data_[idx(a, b, c)]; }
    // Gamma^a_{bc} u^b w^c
    Vec contract(const Vec& u, const Vec& w) const;

private:
    size_t idx(int a, int b, int c) const { return static_cast<size_t>((a * n_ + b) * n_ + c); }
    int n_;
    std::vector<double> data_;
};

// Rank-(1,3) array R^a_{bcd}, R(d_c, d_d) d_b = R^a_{bcd} d_a.
class Riemann {
public:
    explicit Riemann(int n) : n_(n), data_(static_cast<size_t>(n * n * n * n), 0.0) {}
    int dim() const { return n_; }
    double& operator()(int a, int b, int c, int d) { return data_[idx(a, b, c, d)]; }
    double operator()(int a, int b, int c, int d) const { return data_[idx(a, b, c, d)]; }
    // R(X,Y)Z
    Vec apply(const Vec& x, const Vec& y, const Vec& z) const;
    // R_{abcd} = g_{ae} R^e_{bcd}, returned flat in the same index order.
    std::vector<double> lowered(const Mat& g) const;

private:
    size_t idx(int a, int b, int c, int d) const {
        return static_cast<size_t>(((a * n_ + b) * n_ + c) * n_ + d);
    }
    int n_;
    std::vector<double> data_;
};

// Metric, inverse, first derivatives and connection at one point.
struct PointGeometry {
    Mat g;
    Mat g_inv;
    MatrixList dg;
    Christoffel gamma;
};

enum class CausalCharacter { Timelike, Null, Spacelike };

std::string to_string(CausalCharacter c);

inline double inner(const Mat& g, const Vec& a, const Vec& b) { return a.dot(g * b); }

// Throws DomainViolation / SingularMetric.
PointGeometry point_geometry(const MetricField& g, const Vec& p);

// Symmetry to 1e-12 and signature (-,+,...,+); throws SignatureViolation.
void validate_metric(const MetricField& g, const Vec& p);

Christoffel christoffel(const MetricField& g, const Vec& p);
Riemann riemann(const MetricField& g, const Vec& p);
Riemann riemann(const MetricField& g, const Vec& p, const PointGeometry& pg);
// J with R(x, u)u = J x, without forming the full tensor.
Mat jacobi_operator(const MetricField& g, const Vec& p, const PointGeometry& pg, const Vec& u);
Mat ricci(const MetricField& g, const Vec& p);
Mat hessian_scalar(const MetricField& g, const ScalarField& f, const Vec& p);

Mat bakry_emery_ricci_tensor(const MetricField& g, const ScalarField& f,
                             const SyntheticDimension& m, const Vec& p);
double bakry_emery_ricci(const MetricField& g, const ScalarField& f,
                         const BakryEmeryParams& params, const Vec& p, const Vec& v,
                         const Vec& w);

inline constexpr double kNullBand = 1e-10;

// |g(v,v)| <= eps * |v|^2 (Euclidean norm of the components) counts as null.
CausalCharacter causal_character(const MetricField& g, const Vec& p, const Vec& v,
                                 double eps = kNullBand);

// Largest violation of the algebraic Riemann symmetries at p:
// antisymmetry in (c,d), in (a,b) after lowering, pair symmetry, first Bianchi.
struct RiemannSymmetryResiduals {
    double antisym_cd = 0.0;
    double antisym_ab = 0.0;
    double pair = 0.0;
    double bianchi = 0.0;
    double max() const;
};
RiemannSymmetryResiduals riemann_symmetry_residuals(const Riemann& r, const Mat& g);

}  // namespace bemlab
