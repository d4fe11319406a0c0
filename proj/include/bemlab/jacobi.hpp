// jacobi.hpp - Jacobi tensor fields, modified kinematics and conjugate points.
//
// A Jacobi tensor A(t) solves A'' + R(t) A = 0 in a parallel orthonormal
// frame (so adjoints are transposes). With d the frame dimension (n-1 for
// timelike, n-2 for null geodesics) the modified kinematics are
//
//   B_f     = A' A^{-1} - (f o c)'/d E
//   theta_f = tr B_f                (theta = tr A'A^{-1} = theta_f + (f o c)')
//   omega_f = (B_f - B_f^T)/2
//   sigma_f = (B_f + B_f^T)/2 - theta_f/d E
//
// and they satisfy the weighted Raychaudhuri identity
//
//   theta_f' = -Ric_f^m(c',c') - tr omega_f^2 - tr sigma_f^2 - theta^2/d - ((f o c)')^2/m
//
// (the last term absent for m = infinity).
#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bemlab/congruence.hpp"
#include "bemlab/manifold_core.hpp"
#include "bemlab/ode.hpp"

namespace bemlab {

// Supplies R(t) for the Jacobi equation. Sources derived from a metric
// carry auxiliary state (geodesic point, velocity and frame) that is
// integrated alongside A.
class EndomorphismSource {
public:
    virtual ~EndomorphismSource() = default;

    virtual int dim() const = 0;
    virtual Eigen::Index aux_size() const { return 0; }
    virtual Vec aux_initial(double /*t*/) const { return Vec(); }
    virtual void aux_rhs(double /*t*/, const Vec& /*aux*/, Vec& daux) const { daux.resize(0); }
    virtual Mat eval(double t, const Vec& aux) const = 0;
    // aux_rhs and eval together; sources may share work between them.
    virtual Mat eval_with_rhs(double t, const Vec& aux, Vec& daux) const;
    // f along the curve; zero when no weight is attached.
    virtual ScalarAlongCurve weight(double t, const Vec& aux) const;
    // Ric_f^m(c', c') by an independent route where one exists.
    virtual double bakry_emery_ricci(double t, const Vec& aux, const SyntheticDimension& m) const;
};

using SourcePtr = std::shared_ptr<const EndomorphismSource>;

// R(t) prescribed directly, optionally with a prescribed weight along the
// curve (f, f', f'' as functions of t).
class PrescribedSource : public EndomorphismSource {
public:
    using MatrixFn = std::function<Mat(double)>;
    using WeightFn = std::function<ScalarAlongCurve(double)>;

    PrescribedSource(int dim, MatrixFn r, WeightFn weight = {})
        : dim_(dim), r_(std::move(r)), weight_(std::move(weight)) {}

    static SourcePtr constant(const Mat& r, WeightFn weight = {});
    static SourcePtr scalar(int dim, double kappa, WeightFn weight = {});

    int dim() const override { return dim_; }
    Mat eval(double t, const Vec&) const override { return r_(t); }
    ScalarAlongCurve weight(double t, const Vec&) const override;

private:
    int dim_;
    MatrixFn r_;
    WeightFn weight_;
};

// R(t) from the Riemann tensor along a geodesic in its parallel frame.
class MetricSource : public EndomorphismSource {
public:
    MetricSource(MetricField g, FrameField frame, std::optional<ScalarField> f = std::nullopt);

    int dim() const override { return frame_.transverse_dim(); }
    Eigen::Index aux_size() const override;
    Vec aux_initial(double t) const override;
    void aux_rhs(double t, const Vec& aux, Vec& daux) const override;
    Mat eval(double t, const Vec& aux) const override;
    Mat eval_with_rhs(double t, const Vec& aux, Vec& daux) const override;
    ScalarAlongCurve weight(double t, const Vec& aux) const override;
    double bakry_emery_ricci(double t, const Vec& aux, const SyntheticDimension& m) const override;

    const MetricField& metric() const { return g_; }
    const FrameField& frame() const { return frame_; }
    FrameSample frame_state(double t, const Vec& aux) const { return frame_.unpack(t, aux); }

private:
    MetricField g_;
    FrameField frame_;
    std::optional<ScalarField> f_;
};

struct JacobiOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // Output grid spacing; the integrator stops exactly on every node.
    double spacing = 1e-3;

    OdeOptions ode() const;
};

struct JacobiSample {
    double t;
    Mat a;
    Mat ap;
    Mat r;
    ScalarAlongCurve f;
};

struct JacobiInitialData {
    double t0;
    Mat a0;
    Mat a0p;
    std::string label;
};

class JacobiTrajectory {
public:
    int dim() const { return source_->dim(); }
    const SourcePtr& source() const { return source_; }
    const std::vector<JacobiSample>& samples() const { return samples_; }
    const JacobiInitialData& initial() const { return initial_; }
    double spacing() const { return spacing_; }
    double t_begin() const { return samples_.front().t; }
    double t_end() const { return samples_.back().t; }

    JacobiSample at(double t) const;
    // Auxiliary source state (e.g. geodesic and frame) at sample i.
    Vec aux_state(std::size_t i) const;

    // |A'' + R A| with A'' by central differences of A'.
    double ode_residual(double t, double h = 1e-4) const;
    // min over samples of the smallest singular value of [A; A'].
    double min_kernel_sigma() const;

    // The solution A X (solutions are closed under right multiplication).
    JacobiTrajectory right_multiply(const Mat& x) const;
    const Checkpoints& checkpoints() const { return checkpoints_; }
    Eigen::Index aux_size() const { return source_->aux_size(); }

private:
    friend JacobiTrajectory integrate_jacobi(SourcePtr, const Mat&, const Mat&, double, double,
                                             const JacobiOptions&, std::string);
    JacobiSample unpack(double t, const Vec& y) const;

    SourcePtr source_;
    JacobiInitialData initial_;
    double spacing_ = 0.0;
    std::vector<JacobiSample> samples_;
    Checkpoints checkpoints_;
};

// Integrates A'' + R A = 0 from (A0, A0') at t0 to t1 (either direction);
// samples are stored in ascending t. Throws InvalidInitialData when
// ker A0 and ker A0' intersect.
JacobiTrajectory integrate_jacobi(SourcePtr source, const Mat& a0, const Mat& a0p, double t0,
                                  double t1, const JacobiOptions& opts = {},
                                  std::string label = "");

// Frobenius norm of (A')^T A - A^T A'.
double lagrange_defect(const JacobiTrajectory& traj, double t);
double lagrange_defect(const JacobiSample& s);
double max_lagrange_defect(const JacobiTrajectory& traj);

struct DiagnosticSample {
    double t = 0.0;
    bool valid = false;
    Mat b_f;
    Mat omega_f;
    Mat sigma_f;
    double theta_f = 0.0;
    double theta = 0.0;
    double det_a = 0.0;
    double tr_sigma2 = 0.0;
    double tr_omega2 = 0.0;
    double fprime = 0.0;
    double sigma_min = 0.0;
};

struct CongruenceDiagnostics {
    int dim = 0;
    double spacing = 0.0;
    std::vector<DiagnosticSample> samples;
    // max |omega_f - omega|, |sigma_f - sigma| over valid samples
    double max_f_independence_gap = 0.0;
    // max |theta - (det A)'/det A| / max(1, |theta|) where the stencil exists
    double max_log_det_mismatch = 0.0;
    double min_tr_sigma2 = 0.0;
};

inline constexpr double kThetaBlowUp = 1e6;

DiagnosticSample diagnose(const JacobiSample& s, int dim);
// Samples where A is numerically singular or |theta_f| > 1e6 are masked.
CongruenceDiagnostics kinematics(const JacobiTrajectory& traj);

// Ric_f^m(c', c') at every sample of the trajectory.
std::vector<double> bakry_emery_along(const JacobiTrajectory& traj, const SyntheticDimension& m);

struct RaychaudhuriWindow {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct RaychaudhuriReport {
    std::vector<double> t;
    std::vector<std::optional<double>> theta_f_prime;
    std::vector<std::optional<double>> residual;
    // slack of the one-sided inequality (finite-m or m = infinity form)
    std::vector<std::optional<double>> slack;
    double max_abs_residual = 0.0;
    double min_slack = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
};

// Throws InsufficientSamples when fewer than five consecutive valid samples
// lie in the window.
RaychaudhuriReport raychaudhuri_residual(const CongruenceDiagnostics& diag,
                                         const std::vector<double>& ric_fm,
                                         const SyntheticDimension& m,
                                         RaychaudhuriWindow window = {});

struct ConjugatePoint {
    double t = 0.0;
    bool sign_change = false;
    double sigma_min = 0.0;
    // |theta_f| > 1e3 at distance 1e-4 from t
    bool theta_blows_up = false;
};

enum class IntervalVerdict { Contained, NotContained, OutsideRange, HypothesisViolated };

std::string to_string(IntervalVerdict v);

struct ConjugateReport {
    std::vector<ConjugatePoint> zeros;
    double predicted_lo = 0.0;
    double predicted_hi = 0.0;
    double theta1 = 0.0;
    IntervalVerdict verdict = IntervalVerdict::NotContained;
    std::string detail;
};

// Interior zeros of det A, bisection-refined, excluding an initial zero.
ConjugateReport detect_conjugate(const JacobiTrajectory& traj);

inline constexpr double kIntervalTolerance = 1e-6;

// det A = 0 inside [t1, t1 - (n+m-1)/theta1] (theta1 < 0) or
// [t1 - (n+m-1)/theta1, t1] (theta1 > 0), theta1 = theta_f(t1).
// Throws PreconditionViolated if theta_f(t1) = 0 or A is not Lagrange.
ConjugateReport verify_interval_finite_m(const JacobiTrajectory& traj, double t1, int n,
                                         double m);

// m = infinity with f <= k: sigma = (n - 1 + 2k - 2 f(c(t1))) / theta_f(t1).
ConjugateReport verify_interval_infinite(const JacobiTrajectory& traj, double t1, int n,
                                         double k);

struct BoundaryJacobi {
    JacobiTrajectory trajectory;
    Mat derivative_at_t1;
    Mat derivative_at_s;
    // |D(t1) - E_target|; D(s) = 0 holds by construction
    double boundary_residual = 0.0;
};

// Unique D with D'' + R D = 0, D(t1) = target, D(s) = 0, found by shooting
// from s. Throws ConjugatePointInRange if the point congruence from t1 has a
// conjugate point in (t1, s].
BoundaryJacobi boundary_jacobi(SourcePtr source, double t1, double s, const Mat& target,
                               const JacobiOptions& opts = {});

inline constexpr double kQuadratureCollar = 1e-4;

// D_s(t) = A(t) int_t^s (A^T A)^{-1}(tau) dtau for the trajectory with
// A(t1) = 0, A'(t1) = E. The integral is accumulated alongside A by the
// adaptive integrator. Throws QuadratureNearSingularity within 1e-4 of t1.
Mat d_s_integral_formula(const JacobiTrajectory& a_traj, double t, double s);

struct AsymptoticReport {
    std::vector<double> s_values;
    std::vector<Mat> values;           // D_s(t_eval)
    std::vector<Mat> initial_slopes;   // D_s'(t1)
    std::vector<double> cauchy_diffs;  // |D_{s_{i+1}} - D_{s_i}| (max entry)
    std::vector<double> ratios;
    // differences decrease monotonically (or sit below 1e-9)
    bool converged = false;
    Mat limit;
};

AsymptoticReport asymptotic_lagrange(SourcePtr source, double t1,
                                     const std::vector<double>& s_list, double t_eval,
                                     const JacobiOptions& opts = {});

struct FocalReport {
    ConjugateReport report;
    JacobiTrajectory trajectory;
};

// Focal point along a null congruence on the (n-2)-dimensional quotient:
// A(t1) = E, A'(t1) = B0 with tr B0 - (f o c)'(t1) = theta1 (isotropic B0
// unless one is given). Checks the interval [t1, t1 - (n-2)/theta1].
FocalReport verify_null_focal_bound(SourcePtr source, double theta1, double t1, int n,
                                    const SyntheticDimension& m,
                                    std::optional<Mat> b0 = std::nullopt,
                                    const JacobiOptions& opts = {});

struct NormalCongruenceSpec {
    Vec point;
    Vec normal;        // future unit timelike normal N
    Mat shape;         // S = A'(0) in the parallel frame
    double length = 1.0;
};

struct MeanCurvatureReport {
    std::vector<double> t;
    std::vector<double> h;
    std::vector<double> h_f;
    std::vector<std::optional<double>> residual;
    double max_abs_residual = 0.0;
};

// Checks dH_f/dt = -Ric(N,N) - Hess f(N,N) - |grad N|^2 along the normal
// geodesic, H = div N = tr A'A^{-1}, H_f = H - <grad f, N>.
MeanCurvatureReport mean_curvature_evolution(const MetricField& g, const ScalarField& f,
                                             const NormalCongruenceSpec& spec,
                                             const JacobiOptions& opts = {});

}  // namespace bemlab
