// congruence.hpp - Geodesics, parallel frames and curvature endomorphisms.
//
// Timelike geodesics carry an orthonormal frame E_1..E_{n-1} of the
// orthogonal complement of c'. Null geodesics carry a pseudo-orthonormal
// completion {b', N, E_1..E_{n-2}} with g(N, b') = -1, g(N, N) = 0; the
// quotient bundle b'^perp / [b'] is represented by span{E_i}.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bemlab/manifold_core.hpp"
#include "bemlab/ode.hpp"

namespace bemlab {

enum class GeodesicCharacter { Timelike, Null };

std::string to_string(GeodesicCharacter c);

struct GeodesicOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double max_step = 0.01;
    // Rescale a timelike initial velocity to g(v0, v0) = -1.
    bool normalize = true;

    OdeOptions ode() const;
};

struct GeodesicSample {
    double t;
    Vec point;
    Vec velocity;
};

class GeodesicTrajectory {
public:
    const MetricField& metric() const { return metric_; }
    GeodesicCharacter character() const { return character_; }
    // Target value of g(c', c'): -1 or 0 (or the unnormalised value).
    double norm() const { return norm_; }
    const std::vector<GeodesicSample>& samples() const { return samples_; }
    double t_begin() const { return samples_.front().t; }
    double t_end() const { return samples_.back().t; }
    bool exited_domain() const { return exited_domain_; }
    const OdeStats& stats() const { return stats_; }
    const GeodesicOptions& options() const { return opts_; }

    GeodesicSample at(double t) const;
    // max over samples of |g(c', c') - norm|
    double max_norm_drift() const;
    // |c'' + Gamma(c', c')| with c'' by Richardson-extrapolated central differences of at().
    double equation_residual(double t, double h = 1e-3) const;

private:
    friend GeodesicTrajectory integrate_geodesic(const MetricField&, const Vec&, const Vec&,
                                                 double, double, const GeodesicOptions&);
    GeodesicTrajectory(MetricField g) : metric_(std::move(g)) {}

    MetricField metric_;
    GeodesicCharacter character_ = GeodesicCharacter::Timelike;
    double norm_ = -1.0;
    GeodesicOptions opts_;
    std::vector<GeodesicSample> samples_;
    Checkpoints checkpoints_;
    bool exited_domain_ = false;
    OdeStats stats_;
};

// Solves c'' + Gamma(c', c') = 0 on [a, b] from c(a) = p0, c'(a) = v0.
// Leaving the coordinate domain ends the trajectory early with
// exited_domain() set.
GeodesicTrajectory integrate_geodesic(const MetricField& g, const Vec& p0, const Vec& v0,
                                      double a, double b, const GeodesicOptions& opts = {});

// Right-hand side of the geodesic system y = (x, v).
void geodesic_rhs(const MetricField& g, const Vec& y, Vec& dydt);

struct FrameSample {
    double t;
    Vec point;
    Vec velocity;
    Mat frame;      // n x k, columns E_i
    Vec null_aux;   // N for null geodesics, empty otherwise
};

struct ReorthogonalizationEvent {
    double t;
    double gram_error;
};

class FrameField {
public:
    GeodesicCharacter character() const { return character_; }
    int transverse_dim() const { return k_; }
    int dim() const { return n_; }
    const std::vector<FrameSample>& samples() const { return samples_; }
    const std::vector<ReorthogonalizationEvent>& reorthogonalizations() const { return events_; }

    FrameSample at(double t) const;
    // Largest |Gram - I| entry over samples (restricted to the E_i).
    double max_gram_error() const;
    // Largest |g(E_i, c')| over samples.
    double max_velocity_overlap() const;
    // |dE_i/dt + Gamma(c', E_i)| by central differences, max over i.
    double transport_residual(double t, double h = 1e-3) const;

    // Packs/unpacks (x, v, E_1..E_k[, N]) into an ODE state.
    Vec pack(const FrameSample& s) const;
    FrameSample unpack(double t, const Vec& y) const;

private:
    friend FrameField parallel_frame(const MetricField&, const GeodesicTrajectory&);
    FrameField(MetricField g) : metric_(std::move(g)) {}

    MetricField metric_;
    GeodesicCharacter character_ = GeodesicCharacter::Timelike;
    int n_ = 0;
    int k_ = 0;
    std::vector<FrameSample> samples_;
    std::vector<ReorthogonalizationEvent> events_;
    Checkpoints checkpoints_;
};

// Builds the frame at the first sample by pivoted Gram-Schmidt and
// propagates it by the parallel-transport ODE, re-orthogonalising (and
// recording the event) only where the Gram error exceeds 1e-6.
FrameField parallel_frame(const MetricField& g, const GeodesicTrajectory& geo);

// Initial frame at one point; throws FrameDegeneracy if a Gram-Schmidt
// pivot falls below 1e-10.
FrameSample initial_frame(const MetricField& g, double t, const Vec& point, const Vec& velocity,
                          GeodesicCharacter character);

// Transport right-hand side for the packed frame state.
void frame_rhs(const MetricField& g, int k, bool has_null_aux, const Vec& y, Vec& dydt);
void frame_rhs(const PointGeometry& pg, int k, bool has_null_aux, const Vec& y, Vec& dydt);

// Matrix of v -> R(v, c')c' in the frame: entry (j, i) = g(R(E_i, c')c', E_j).
Mat endomorphism_matrix(const Riemann& r, const Mat& g, const Vec& velocity, const Mat& frame);

Mat curvature_endomorphism(const MetricField& g, const GeodesicTrajectory& geo,
                           const FrameField& frame, double t);

// Values of f along the curve: f(c(t)), (f o c)'(t), Hess f(c', c')(t).
struct ScalarAlongCurve {
    double value = 0.0;
    double derivative = 0.0;
    double hessian = 0.0;
};
ScalarAlongCurve scalar_along(const MetricField& g, const ScalarField& f, const Vec& point,
                              const Vec& velocity);

// R_f = R + (1/d) Hess f(c',c') E + (1/d)^2 ((f o c)')^2 E, d = n-1 for
// timelike geodesics and n-2 (quotient dimension) for null ones.
Mat modified_endomorphism_from(const Mat& r, const ScalarAlongCurve& s);
Mat modified_endomorphism(const MetricField& g, const ScalarField& f,
                          const GeodesicTrajectory& geo, const FrameField& frame, double t, int n);

// Null case: how far R(., b')b' is from descending to the quotient,
// max(|g(R(b', b')b', E_j)|, |g(R(E_i, b')b', b')|).
double quotient_invariance_residual(const MetricField& g, const FrameField& frame, double t);

struct EndomorphismSample {
    double t;
    Mat r;
    std::optional<Mat> r_f;
    ScalarAlongCurve f;
};

struct EndomorphismSeries {
    int dim = 0;
    std::vector<EndomorphismSample> samples;

    // max over samples of |R - R^T|
    double max_asymmetry() const;
};

// R(t) (and R_f(t) when f is given) at the frame sample times.
EndomorphismSeries sample_endomorphisms(const MetricField& g, const FrameField& frame,
                                        const ScalarField* f = nullptr);

}  // namespace bemlab
