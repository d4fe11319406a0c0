// congruence.cpp - Geodesic integration and parallel-transported frames.

#include "bemlab/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bemlab {

namespace {

constexpr double kGramReorthoThreshold = 1e-6;
constexpr double kPivotFloor = 1e-10;

// Pivoted Gram-Schmidt over the coordinate basis. `project` removes the
// components along the fixed (non-spacelike or already chosen) directions.
Mat spacelike_completion(const Mat& gv, int k,
                         const std::function<Vec(const Vec&)>& project) {
    const int n = static_cast<int>(gv.rows());
    Mat frame(n, k);
    std::vector<bool> used(static_cast<size_t>(n), false);
    for (int col = 0; col < k; ++col) {
        int best = -1;
        double best_pivot = -1.0;
        Vec best_w;
        for (int c = 0; c < n; ++c) {
            if (used[static_cast<size_t>(c)]) continue;
            Vec w = project(Vec::Unit(n, c));
            for (int j = 0; j < col; ++j) w -= inner(gv, w, frame.col(j)) * frame.col(j);
            const double pivot = inner(gv, w, w);
            if (pivot > best_pivot + 1e-12) {
                best = c;
                best_pivot = pivot;
                best_w = w;
            }
        }
        if (best < 0 || best_pivot < kPivotFloor) {
            std::ostringstream os;
            os << "Gram-Schmidt pivot " << best_pivot << " below " << kPivotFloor
               << " while building frame vector " << col;
            throw FrameDegeneracy(os.str());
        }
        used[static_cast<size_t>(best)] = true;
        frame.col(col) = best_w / std::sqrt(best_pivot);
    }
    return frame;
}

// Re-orthonormalises an existing frame (kept close to its current span).
Mat reorthonormalize(const Mat& gv, const Mat& frame, const std::function<Vec(const Vec&)>& project) {
    Mat out = frame;
    for (int col = 0; col < frame.cols(); ++col) {
        Vec w = project(frame.col(col));
        for (int j = 0; j < col; ++j) w -= inner(gv, w, out.col(j)) * out.col(j);
        const double pivot = inner(gv, w, w);
        if (pivot < kPivotFloor) throw FrameDegeneracy("frame collapsed during transport");
        out.col(col) = w / std::sqrt(pivot);
    }
    return out;
}

}  // namespace

std::string to_string(GeodesicCharacter c) {
    return c == GeodesicCharacter::Timelike ? "timelike" : "null";
}

OdeOptions GeodesicOptions::ode() const {
    OdeOptions o;
    o.rel_tol = rel_tol;
    o.abs_tol = abs_tol;
    o.max_step = max_step;
    return o;
}

// ---------------------------------------------------------------------------
// Geodesics

void geodesic_rhs(const MetricField& g, const Vec& y, Vec& dydt) {
    const auto n = g.dim();
    const Vec x = y.head(n);
    const Vec v = y.tail(n);
    const PointGeometry pg = point_geometry(g, x);
    dydt.resize(2 * n);
    dydt.head(n) = v;
    dydt.tail(n) = -pg.gamma.contract(v, v);
}

GeodesicTrajectory integrate_geodesic(const MetricField& g, const Vec& p0, const Vec& v0,
                                      double a, double b, const GeodesicOptions& opts) {
    const int n = g.dim();
    if (p0.size() != n || v0.size() != n)
        throw std::invalid_argument("initial point/velocity dimension mismatch");
    if (!(b > a)) throw std::invalid_argument("geodesic range must satisfy a < b");
    g.require_in_domain(p0);

    GeodesicTrajectory traj(g);
    traj.opts_ = opts;
    Vec v = v0;
    const Mat g0 = g.eval(p0);
    const auto character = causal_character(g, p0, v0);
    if (character == CausalCharacter::Spacelike)
        throw PreconditionViolated("spacelike initial velocity: only timelike and null geodesics");
    if (character == CausalCharacter::Timelike) {
        traj.character_ = GeodesicCharacter::Timelike;
        if (opts.normalize) {
            v /= std::sqrt(-inner(g0, v, v));
            traj.norm_ = -1.0;
        } else {
            traj.norm_ = inner(g0, v, v);
        }
    } else {
        traj.character_ = GeodesicCharacter::Null;
        traj.norm_ = 0.0;
    }

    const OdeOptions ode = opts.ode();
    OdeRhs rhs = [g](double, const Vec& y, Vec& dy) { geodesic_rhs(g, y, dy); };
    traj.checkpoints_ = Checkpoints(rhs, ode);

    Vec y(2 * n);
    y << p0, v;
    traj.samples_.push_back({a, p0, v});
    traj.checkpoints_.push(a, y);

    DormandPrince solver(ode);
    auto observer = [&](double t, const Vec& s) {
        const Vec x = s.head(n);
        if (!g.in_domain(x)) {
            traj.exited_domain_ = true;
            return false;
        }
        traj.samples_.push_back({t, x, s.tail(n)});
        traj.checkpoints_.push(t, s);
        return true;
    };
    try {
        solver.integrate(rhs, a, y, b, observer);
    } catch (const DomainViolation&) {
        traj.exited_domain_ = true;
    } catch (const SingularMetric&) {
        traj.exited_domain_ = true;
    }
    traj.stats_ = solver.stats();
    return traj;
}

GeodesicSample GeodesicTrajectory::at(double t) const {
    const Vec y = checkpoints_.state_at(t);
    const auto n = metric_.dim();
    return {t, y.head(n), y.tail(n)};
}

double GeodesicTrajectory::max_norm_drift() const {
    double worst = 0.0;
    for (const auto& s : samples_) {
        const double q = inner(metric_.eval(s.point), s.velocity, s.velocity);
        worst = std::max(worst, std::abs(q - norm_));
    }
    return worst;
}

double GeodesicTrajectory::equation_residual(double t, double h) const {
    h = std::min({h, t - t_begin(), t_end() - t});
    const auto s = at(t);
    const PointGeometry pg = point_geometry(metric_, s.point);
    if (!(h > 0.0)) {
        // endpoint: one-sided first-order difference
        const double step = 1e-4 * std::max(1.0, t_end() - t_begin());
        const double lo = std::max(t_begin(), t - step), hi = std::min(t_end(), t + step);
        const Vec accel = (at(hi).velocity - at(lo).velocity) / (hi - lo);
        return (accel + pg.gamma.contract(s.velocity, s.velocity)).norm();
    }
    auto central = [&](double w) { return Vec((at(t + w).velocity - at(t - w).velocity) / (2 * w)); };
    const Vec accel = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    return (accel + pg.gamma.contract(s.velocity, s.velocity)).norm();
}

// ---------------------------------------------------------------------------
// Frames

FrameSample initial_frame(const MetricField& g, double t, const Vec& point, const Vec& velocity,
                          GeodesicCharacter character) {
    const int n = g.dim();
    const Mat gv = g.eval(point);
    FrameSample s{t, point, velocity, Mat(), Vec()};
    if (character == GeodesicCharacter::Timelike) {
        const double q = inner(gv, velocity, velocity);
        if (!(q < 0.0)) throw FrameDegeneracy("velocity is not timelike");
        const Vec u = velocity / std::sqrt(-q);
        auto project = [&](const Vec& w) -> Vec { return w + inner(gv, w, u) * u; };
        s.frame = spacelike_completion(gv, n - 1, project);
        return s;
    }
    if (n < 3) throw FrameDegeneracy("null quotient bundle needs dimension >= 3");
    Eigen::SelfAdjointEigenSolver<Mat> es(gv);
    Vec u = es.eigenvectors().col(0);
    const double uu = inner(gv, u, u);
    if (!(uu < 0.0)) throw FrameDegeneracy("no timelike direction at point");
    u /= std::sqrt(-uu);
    if (inner(gv, u, velocity) > 0.0) u = -u;
    const double alpha = -inner(gv, velocity, u);
    if (!(alpha > 0.0)) throw FrameDegeneracy("degenerate null velocity");
    const Vec e = velocity / alpha - u;
    auto project = [&](const Vec& w) -> Vec {
        return w + inner(gv, w, u) * u - inner(gv, w, e) * e;
    };
    s.frame = spacelike_completion(gv, n - 2, project);
    s.null_aux = (u - e) / (2.0 * alpha);
    return s;
}

void frame_rhs(const MetricField& g, int k, bool has_null_aux, const Vec& y, Vec& dydt) {
    frame_rhs(point_geometry(g, y.head(g.dim())), k, has_null_aux, y, dydt);
}

void frame_rhs(const PointGeometry& pg, int k, bool has_null_aux, const Vec& y, Vec& dydt) {
    const auto n = pg.g.rows();
    const Vec v = y.segment(n, n);
    dydt.resize(y.size());
    dydt.head(n) = v;
    dydt.segment(n, n) = -pg.gamma.contract(v, v);
    const int extra = k + (has_null_aux ? 1 : 0);
    for (int i = 0; i < extra; ++i) {
        const Eigen::Index off = 2 * n + i * n;
        dydt.segment(off, n) = -pg.gamma.contract(v, y.segment(off, n));
    }
}

Vec FrameField::pack(const FrameSample& s) const {
    const bool aux = character_ == GeodesicCharacter::Null;
    Vec y(2 * n_ + n_ * k_ + (aux ? n_ : 0));
    y.head(n_) = s.point;
    y.segment(n_, n_) = s.velocity;
    for (int i = 0; i < k_; ++i) y.segment(2 * n_ + i * n_, n_) = s.frame.col(i);
    if (aux) y.tail(n_) = s.null_aux;
    return y;
}

FrameSample FrameField::unpack(double t, const Vec& y) const {
    FrameSample s{t, y.head(n_), y.segment(n_, n_), Mat(n_, k_), Vec()};
    for (int i = 0; i < k_; ++i) s.frame.col(i) = y.segment(2 * n_ + i * n_, n_);
    if (character_ == GeodesicCharacter::Null) s.null_aux = y.tail(n_);
    return s;
}

FrameField parallel_frame(const MetricField& g, const GeodesicTrajectory& geo) {
    FrameField ff(g);
    ff.character_ = geo.character();
    ff.n_ = g.dim();
    ff.k_ = ff.character_ == GeodesicCharacter::Timelike ? ff.n_ - 1 : ff.n_ - 2;
    const int k = ff.k_;
    const bool aux = ff.character_ == GeodesicCharacter::Null;

    const auto& gs = geo.samples();
    FrameSample first = initial_frame(g, gs.front().t, gs.front().point, gs.front().velocity,
                                      ff.character_);
    const OdeOptions ode = geo.options().ode();
    OdeRhs rhs = [g, k, aux](double, const Vec& y, Vec& dy) { frame_rhs(g, k, aux, y, dy); };
    ff.checkpoints_ = Checkpoints(rhs, ode);

    Vec y = ff.pack(first);
    ff.samples_.push_back(first);
    ff.checkpoints_.push(first.t, y);
    DormandPrince solver(ode);
    for (std::size_t i = 1; i < gs.size(); ++i) {
        solver.integrate(rhs, gs[i - 1].t, y, gs[i].t);
        FrameSample s = ff.unpack(gs[i].t, y);
        const Mat gv = g.eval(s.point);
        const double gram = (s.frame.transpose() * gv * s.frame - Mat::Identity(k, k))
                                .cwiseAbs()
                                .maxCoeff();
        if (gram > kGramReorthoThreshold) {
            ff.events_.push_back({s.t, gram});
            if (!aux) {
                const Vec u = s.velocity / std::sqrt(-inner(gv, s.velocity, s.velocity));
                s.frame = reorthonormalize(gv, s.frame, [&](const Vec& w) -> Vec {
                    return w + inner(gv, w, u) * u;
                });
            } else {
                const Vec& b = s.velocity;
                const Vec& nn = s.null_aux;
                s.frame = reorthonormalize(gv, s.frame, [&](const Vec& w) -> Vec {
                    // remove components along b and N using g(N,b) = -1
                    return w + inner(gv, w, nn) * b + inner(gv, w, b) * nn;
                });
            }
            y = ff.pack(s);
        }
        ff.samples_.push_back(s);
        ff.checkpoints_.push(s.t, y);
    }
    return ff;
}

FrameSample FrameField::at(double t) const { return unpack(t, checkpoints_.state_at(t)); }

double FrameField::max_gram_error() const {
    double worst = 0.0;
    for (const auto& s : samples_) {
        const Mat gv = metric_.eval(s.point);
        worst = std::max(worst, (s.frame.transpose() * gv * s.frame - Mat::Identity(k_, k_))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    return worst;
}

double FrameField::max_velocity_overlap() const {
    double worst = 0.0;
    for (const auto& s : samples_) {
        const Mat gv = metric_.eval(s.point);
        worst = std::max(worst, (s.frame.transpose() * gv * s.velocity).cwiseAbs().maxCoeff());
    }
    return worst;
}

double FrameField::transport_residual(double t, double h) const {
    const double lo = std::max(samples_.front().t, t - h);
    const double hi = std::min(samples_.back().t, t + h);
    const FrameSample a = at(lo), b = at(hi), s = at(t);
    const PointGeometry pg = point_geometry(metric_, s.point);
    double worst = 0.0;
    for (int i = 0; i < k_; ++i) {
        const Vec dE = (b.frame.col(i) - a.frame.col(i)) / (hi - lo);
        worst = std::max(worst, (dE + pg.gamma.contract(s.velocity, s.frame.col(i))).norm());
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Endomorphisms

Mat endomorphism_matrix(const Riemann& r, const Mat& g, const Vec& velocity, const Mat& frame) {
    const auto k = frame.cols();
    Mat w(frame.rows(), k);
    for (Eigen::Index i = 0; i < k; ++i) w.col(i) = r.apply(frame.col(i), velocity, velocity);
    return frame.transpose() * g * w;
}

Mat curvature_endomorphism(const MetricField& g, const GeodesicTrajectory& geo,
                           const FrameField& frame, double t) {
    if (t < geo.t_begin() - 1e-12 || t > geo.t_end() + 1e-12)
        throw std::out_of_range("t outside geodesic range");
    const FrameSample s = frame.at(t);
    return endomorphism_matrix(riemann(g, s.point), g.eval(s.point), s.velocity, s.frame);
}

ScalarAlongCurve scalar_along(const MetricField& g, const ScalarField& f, const Vec& point,
                              const Vec& velocity) {
    ScalarAlongCurve s;
    s.value = f.eval(point);
    s.derivative = f.differential(point).dot(velocity);
    s.hessian = velocity.dot(hessian_scalar(g, f, point) * velocity);
    return s;
}

Mat modified_endomorphism_from(const Mat& r, const ScalarAlongCurve& s) {
    const double d = static_cast<double>(r.rows());
    const double shift = s.hessian / d + (s.derivative * s.derivative) / (d * d);
    return r + shift * Mat::Identity(r.rows(), r.cols());
}

Mat modified_endomorphism(const MetricField& g, const ScalarField& f,
                          const GeodesicTrajectory& geo, const FrameField& frame, double t, int n) {
    if (n != g.dim()) throw std::invalid_argument("n does not match the metric dimension");
    const Mat r = curvature_endomorphism(g, geo, frame, t);
    const FrameSample s = frame.at(t);
    return modified_endomorphism_from(r, scalar_along(g, f, s.point, s.velocity));
}

double quotient_invariance_residual(const MetricField& g, const FrameField& frame, double t) {
    if (frame.character() != GeodesicCharacter::Null)
        throw std::invalid_argument("quotient residual only applies to null frames");
    const FrameSample s = frame.at(t);
    const Riemann r = riemann(g, s.point);
    const Mat gv = g.eval(s.point);
    const Vec& b = s.velocity;
    double worst = (s.frame.transpose() * gv * r.apply(b, b, b)).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < s.frame.cols(); ++i)
        worst = std::max(worst, std::abs(inner(gv, r.apply(s.frame.col(i), b, b), b)));
    return worst;
}

double EndomorphismSeries::max_asymmetry() const {
    double worst = 0.0;
    for (const auto& s : samples)
        worst = std::max(worst, (s.r - s.r.transpose()).cwiseAbs().maxCoeff());
    return worst;
}

EndomorphismSeries sample_endomorphisms(const MetricField& g, const FrameField& frame,
                                        const ScalarField* f) {
    EndomorphismSeries out;
    out.dim = frame.transverse_dim();
    for (const auto& s : frame.samples()) {
        EndomorphismSample e{s.t,
                             endomorphism_matrix(riemann(g, s.point), g.eval(s.point), s.velocity,
                                                 s.frame),
                             std::nullopt, {}};
        if (f) {
            e.f = scalar_along(g, *f, s.point, s.velocity);
            e.r_f = modified_endomorphism_from(e.r, e.f);
        }
        out.samples.push_back(std::move(e));
    }
    return out;
}

}  // namespace bemlab
