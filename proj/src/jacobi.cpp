// jacobi.cpp

#include "bemlab/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bemlab/numerics.hpp"

namespace bemlab {

namespace {

double smallest_singular(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double largest_singular(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Sources

ScalarAlongCurve EndomorphismSource::weight(double, const Vec&) const { return {}; }

Mat EndomorphismSource::eval_with_rhs(double t, const Vec& aux, Vec& daux) const {
    aux_rhs(t, aux, daux);
    return eval(t, aux);
}

double EndomorphismSource::bakry_emery_ricci(double t, const Vec& aux,
                                             const SyntheticDimension& m) const {
    const ScalarAlongCurve w = weight(t, aux);
    return eval(t, aux).trace() + w.hessian - m.reciprocal() * w.derivative * w.derivative;
}

SourcePtr PrescribedSource::constant(const Mat& r, WeightFn weight) {
    return std::make_shared<PrescribedSource>(
        static_cast<int>(r.rows()), [r](double) { return r; }, std::move(weight));
}

SourcePtr PrescribedSource::scalar(int dim, double kappa, WeightFn weight) {
    return constant(kappa * Mat::Identity(dim, dim), std::move(weight));
}

ScalarAlongCurve PrescribedSource::weight(double t, const Vec&) const {
    return weight_ ? weight_(t) : ScalarAlongCurve{};
}

MetricSource::MetricSource(MetricField g, FrameField frame, std::optional<ScalarField> f)
    : g_(std::move(g)), frame_(std::move(frame)), f_(std::move(f)) {}

Eigen::Index MetricSource::aux_size() const {
    const int n = frame_.dim();
    const int k = frame_.transverse_dim();
    return 2 * n + n * k + (frame_.character() == GeodesicCharacter::Null ? n : 0);
}

Vec MetricSource::aux_initial(double t) const { return frame_.pack(frame_.at(t)); }

void MetricSource::aux_rhs(double, const Vec& aux, Vec& daux) const {
    frame_rhs(g_, frame_.transverse_dim(), frame_.character() == GeodesicCharacter::Null, aux,
              daux);
}

Mat MetricSource::eval(double t, const Vec& aux) const {
    const FrameSample s = frame_.unpack(t, aux);
    const PointGeometry pg = point_geometry(g_, s.point);
    return s.frame.transpose() * pg.g * jacobi_operator(g_, s.point, pg, s.velocity) * s.frame;
}

Mat MetricSource::eval_with_rhs(double t, const Vec& aux, Vec& daux) const {
    const FrameSample s = frame_.unpack(t, aux);
    const PointGeometry pg = point_geometry(g_, s.point);
    frame_rhs(pg, frame_.transverse_dim(), frame_.character() == GeodesicCharacter::Null, aux, daux);
    return s.frame.transpose() * pg.g * jacobi_operator(g_, s.point, pg, s.velocity) * s.frame;
}

ScalarAlongCurve MetricSource::weight(double t, const Vec& aux) const {
    if (!f_) return {};
    const FrameSample s = frame_.unpack(t, aux);
    return scalar_along(g_, *f_, s.point, s.velocity);
}

double MetricSource::bakry_emery_ricci(double t, const Vec& aux,
                                       const SyntheticDimension& m) const {
    const FrameSample s = frame_.unpack(t, aux);
    const Mat ric = f_ ? bakry_emery_ricci_tensor(g_, *f_, m, s.point) : ricci(g_, s.point);
    return s.velocity.dot(ric * s.velocity);
}

// ---------------------------------------------------------------------------
// Trajectories

OdeOptions JacobiOptions::ode() const {
    OdeOptions o;
    o.rel_tol = rel_tol;
    o.abs_tol = abs_tol;
    return o;
}

JacobiSample JacobiTrajectory::unpack(double t, const Vec& y) const {
    const int d = dim();
    const Eigen::Index na = source_->aux_size();
    const Vec aux = y.head(na);
    JacobiSample s;
    s.t = t;
    s.a = Eigen::Map<const Mat>(y.data() + na, d, d);
    s.ap = Eigen::Map<const Mat>(y.data() + na + d * d, d, d);
    s.r = source_->eval(t, aux);
    s.f = source_->weight(t, aux);
    return s;
}

JacobiSample JacobiTrajectory::at(double t) const { return unpack(t, checkpoints_.state_at(t)); }

Vec JacobiTrajectory::aux_state(std::size_t i) const {
    return checkpoints_.states().at(i).head(source_->aux_size());
}

double JacobiTrajectory::ode_residual(double t, double h) const {
    const double lo = std::max(t_begin(), t - h);
    const double hi = std::min(t_end(), t + h);
    const JacobiSample a = at(lo), b = at(hi), s = at(t);
    const Mat app = (b.ap - a.ap) / (hi - lo);
    return max_abs(app + s.r * s.a);
}

double JacobiTrajectory::min_kernel_sigma() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : samples_) {
        Mat stacked(2 * s.a.rows(), s.a.cols());
        stacked << s.a, s.ap;
        worst = std::min(worst, smallest_singular(stacked));
    }
    return worst;
}

JacobiTrajectory JacobiTrajectory::right_multiply(const Mat& x) const {
    const int d = dim();
    if (x.rows() != d || x.cols() != d) throw std::invalid_argument("multiplier has wrong shape");
    JacobiTrajectory out = *this;
    out.initial_.a0 = initial_.a0 * x;
    out.initial_.a0p = initial_.a0p * x;
    for (auto& s : out.samples_) {
        s.a = s.a * x;
        s.ap = s.ap * x;
    }
    const Eigen::Index na = source_->aux_size();
    Checkpoints cp(checkpoints_.rhs(), checkpoints_.options());
    for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
        Vec y = checkpoints_.states()[i];
        Eigen::Map<Mat>(y.data() + na, d, d) = Eigen::Map<const Mat>(y.data() + na, d, d) * x;
        Eigen::Map<Mat>(y.data() + na + d * d, d, d) =
            Eigen::Map<const Mat>(y.data() + na + d * d, d, d) * x;
        cp.push(checkpoints_.times()[i], y);
    }
    out.checkpoints_ = std::move(cp);
    return out;
}

JacobiTrajectory integrate_jacobi(SourcePtr source, const Mat& a0, const Mat& a0p, double t0,
                                  double t1, const JacobiOptions& opts, std::string label) {
    if (!source) throw std::invalid_argument("null endomorphism source");
    const int d = source->dim();
    if (a0.rows() != d || a0.cols() != d || a0p.rows() != d || a0p.cols() != d)
        throw std::invalid_argument("initial data does not match the frame dimension");
    if (t0 == t1) throw std::invalid_argument("empty integration range");
    Mat stacked(2 * d, d);
    stacked << a0, a0p;
    const double sig = smallest_singular(stacked);
    if (!(sig >= 1e-10))
        throw InvalidInitialData("ker A(t0) and ker A'(t0) intersect (sigma_min = " + fmt(sig) +
                                 ")");

    const Eigen::Index na = source->aux_size();
    OdeRhs rhs = [source, d, na](double t, const Vec& y, Vec& dy) {
        dy.resize(y.size());
        const Vec aux = y.head(na);
        Vec daux;
        const Mat r = source->eval_with_rhs(t, aux, daux);
        if (na > 0) dy.head(na) = daux;
        Eigen::Map<const Mat> a(y.data() + na, d, d);
        Eigen::Map<const Mat> ap(y.data() + na + d * d, d, d);
        Eigen::Map<Mat>(dy.data() + na, d, d) = ap;
        Eigen::Map<Mat>(dy.data() + na + d * d, d, d) = -r * a;
    };

    JacobiTrajectory traj;
    traj.source_ = source;
    traj.initial_ = {t0, a0, a0p, std::move(label)};
    traj.checkpoints_ = Checkpoints(rhs, opts.ode());

    Vec y(na + 2 * d * d);
    if (na > 0) y.head(na) = source->aux_initial(t0);
    Eigen::Map<Mat>(y.data() + na, d, d) = a0;
    Eigen::Map<Mat>(y.data() + na + d * d, d, d) = a0p;

    const std::vector<double> grid = uniform_grid(t0, t1, opts.spacing);
    traj.spacing_ = std::abs(t1 - t0) / static_cast<double>(grid.size() - 1);
    DormandPrince solver(opts.ode());
    solver.integrate_grid(rhs, grid, y, [&](double t, const Vec& state) {
        traj.samples_.push_back(traj.unpack(t, state));
        traj.checkpoints_.push(t, state);
        return true;
    });
    if (t1 < t0) std::reverse(traj.samples_.begin(), traj.samples_.end());
    return traj;
}

double lagrange_defect(const JacobiSample& s) {
    return (s.ap.transpose() * s.a - s.a.transpose() * s.ap).norm();
}

double lagrange_defect(const JacobiTrajectory& traj, double t) {
    return lagrange_defect(traj.at(t));
}

double max_lagrange_defect(const JacobiTrajectory& traj) {
    double worst = 0.0;
    for (const auto& s : traj.samples()) worst = std::max(worst, lagrange_defect(s));
    return worst;
}

// ---------------------------------------------------------------------------
// Kinematics

DiagnosticSample diagnose(const JacobiSample& s, int dim) {
    DiagnosticSample o;
    o.t = s.t;
    o.det_a = s.a.determinant();
    o.fprime = s.f.derivative;
    Eigen::JacobiSVD<Mat> svd(s.a);
    o.sigma_min = svd.singularValues()(dim - 1);
    const double scale = std::max(1.0, svd.singularValues()(0));
    if (!(o.sigma_min > 1e-10 * scale)) return o;

    const double d = static_cast<double>(dim);
    const Mat id = Mat::Identity(dim, dim);
    const Mat b = s.a.transpose().partialPivLu().solve(s.ap.transpose()).transpose();
    o.theta = b.trace();
    o.b_f = b - (o.fprime / d) * id;
    o.theta_f = o.b_f.trace();
    o.omega_f = 0.5 * (o.b_f - o.b_f.transpose());
    o.sigma_f = 0.5 * (o.b_f + o.b_f.transpose()) - (o.theta_f / d) * id;
    o.tr_sigma2 = (o.sigma_f * o.sigma_f).trace();
    o.tr_omega2 = (o.omega_f * o.omega_f).trace();
    o.valid = std::isfinite(o.theta_f) && std::abs(o.theta_f) <= kThetaBlowUp;
    return o;
}

CongruenceDiagnostics kinematics(const JacobiTrajectory& traj) {
    CongruenceDiagnostics out;
    out.dim = traj.dim();
    out.spacing = traj.spacing();
    const double d = static_cast<double>(out.dim);
    const Mat id = Mat::Identity(out.dim, out.dim);
    out.min_tr_sigma2 = std::numeric_limits<double>::infinity();

    std::vector<double> dets;
    std::vector<bool> clear;
    for (const auto& s : traj.samples()) {
        DiagnosticSample o = diagnose(s, out.dim);
        if (o.valid) {
            const Mat b = o.b_f + (o.fprime / d) * id;
            const Mat omega = 0.5 * (b - b.transpose());
            const Mat sigma = 0.5 * (b + b.transpose()) - (o.theta / d) * id;
            out.max_f_independence_gap =
                std::max({out.max_f_independence_gap, max_abs(omega - o.omega_f),
                          max_abs(sigma - o.sigma_f)});
            out.min_tr_sigma2 = std::min(out.min_tr_sigma2, o.tr_sigma2);
        }
        dets.push_back(o.det_a);
        clear.push_back(o.valid && o.sigma_min >= 1e-2 * std::max(1.0, s.a.norm()));
        out.samples.push_back(std::move(o));
    }
    const auto ddet = differentiate_uniform(dets, clear, out.spacing);
    for (std::size_t i = 0; i < ddet.size(); ++i) {
        if (!ddet[i]) continue;
        const auto& o = out.samples[i];
        const double mismatch = std::abs(o.theta - *ddet[i] / o.det_a) /
                                std::max(1.0, std::abs(o.theta));
        out.max_log_det_mismatch = std::max(out.max_log_det_mismatch, mismatch);
    }
    return out;
}

std::vector<double> bakry_emery_along(const JacobiTrajectory& traj,
                                      const SyntheticDimension& m) {
    std::vector<double> out;
    out.reserve(traj.samples().size());
    for (std::size_t i = 0; i < traj.samples().size(); ++i)
        out.push_back(
            traj.source()->bakry_emery_ricci(traj.samples()[i].t, traj.aux_state(i), m));
    return out;
}

RaychaudhuriReport raychaudhuri_residual(const CongruenceDiagnostics& diag,
                                         const std::vector<double>& ric_fm,
                                         const SyntheticDimension& m,
                                         RaychaudhuriWindow window) {
    const std::size_t n = diag.samples.size();
    if (ric_fm.size() != n) throw std::invalid_argument("Ricci series length mismatch");
    const double d = static_cast<double>(diag.dim);
    std::vector<double> theta_f(n);
    std::vector<bool> valid(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = diag.samples[i];
        theta_f[i] = s.theta_f;
        valid[i] = s.valid && s.t >= window.lo && s.t <= window.hi;
    }
    const auto dtheta = differentiate_uniform(theta_f, valid, diag.spacing);

    RaychaudhuriReport rep;
    rep.t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = diag.samples[i];
        rep.t.push_back(s.t);
        rep.theta_f_prime.push_back(dtheta[i]);
        if (!dtheta[i]) {
            rep.residual.push_back(std::nullopt);
            rep.slack.push_back(std::nullopt);
            continue;
        }
        const double tp = *dtheta[i];
        const double fp = s.fprime;
        const double res = tp + ric_fm[i] + s.tr_omega2 + s.tr_sigma2 + s.theta * s.theta / d +
                           m.reciprocal() * fp * fp;
        const double bound =
            m.is_infinite()
                ? -ric_fm[i] - s.tr_sigma2 - s.tr_omega2 - s.theta_f * s.theta_f / d -
                      2.0 * s.theta_f * fp / d
                : -ric_fm[i] - s.tr_sigma2 - s.tr_omega2 -
                      s.theta_f * s.theta_f / (d + m.value());
        rep.residual.push_back(res);
        rep.slack.push_back(bound - tp);
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(res));
        rep.min_slack = std::min(rep.min_slack, bound - tp);
        ++rep.evaluated;
    }
    if (rep.evaluated == 0)
        throw InsufficientSamples("no five consecutive valid samples inside the window");
    return rep;
}

// ---------------------------------------------------------------------------
// Conjugate points

std::string to_string(IntervalVerdict v) {
    switch (v) {
        case IntervalVerdict::Contained: return "contained";
        case IntervalVerdict::NotContained: return "not_contained";
        case IntervalVerdict::OutsideRange: return "outside_range";
        case IntervalVerdict::HypothesisViolated: return "hypothesis_violated";
    }
    return "unknown";
}

namespace {

bool initial_zero(const JacobiTrajectory& traj) {
    const Mat& a0 = traj.initial().a0;
    return smallest_singular(a0) <= 1e-9 * std::max(1.0, largest_singular(a0));
}

void flag_blow_up(const JacobiTrajectory& traj, ConjugatePoint& z) {
    for (double off : {-1e-4, 1e-4}) {
        const double t = z.t + off;
        if (t < traj.t_begin() || t > traj.t_end()) continue;
        const JacobiSample s = traj.at(t);
        const DiagnosticSample d = diagnose(s, traj.dim());
        const double theta = d.sigma_min > 0.0
                                 ? std::abs(d.theta_f)
                                 : std::numeric_limits<double>::infinity();
        if (d.sigma_min <= 1e-10 || theta > 1e3) z.theta_blows_up = true;
    }
}

}  // namespace

ConjugateReport detect_conjugate(const JacobiTrajectory& traj) {
    ConjugateReport rep;
    const auto& ss = traj.samples();
    const std::size_t n = ss.size();
    const bool t0_is_begin = traj.initial().t0 == traj.t_begin();
    const bool skip_initial = initial_zero(traj);
    const double t_init = traj.initial().t0;
    const double h = traj.spacing();

    std::vector<double> det(n), sig(n);
    for (std::size_t i = 0; i < n; ++i) {
        det[i] = ss[i].a.determinant();
        sig[i] = smallest_singular(ss[i].a);
    }
    auto near_initial = [&](double t) { return skip_initial && std::abs(t - t_init) <= 2.0 * h; };
    auto det_at = [&](double t) { return traj.at(t).a.determinant(); };
    auto sig_at = [&](double t) { return smallest_singular(traj.at(t).a); };

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (skip_initial && ((t0_is_begin && i == 0) || (!t0_is_begin && i + 1 == n - 1)))
            continue;
        if ((det[i] > 0.0 && det[i + 1] < 0.0) || (det[i] < 0.0 && det[i + 1] > 0.0)) {
            ConjugatePoint z;
            z.t = bisect_sign_change(det_at, ss[i].t, ss[i + 1].t, 1e-11);
            z.sign_change = true;
            z.sigma_min = sig_at(z.t);
            rep.zeros.push_back(z);
        }
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(sig[i] <= sig[i - 1] && sig[i] <= sig[i + 1])) continue;
        const double scale = std::max(1.0, largest_singular(ss[i].ap));
        if (sig[i] > 2.0 * h * scale) continue;
        if (near_initial(ss[i].t)) continue;
        bool known = false;
        for (const auto& z : rep.zeros) known = known || std::abs(z.t - ss[i].t) <= 2.0 * h;
        if (known) continue;
        const double t = golden_section_min(sig_at, ss[i - 1].t, ss[i + 1].t, 1e-11);
        const double s = sig_at(t);
        if (s < 1e-9 * scale) rep.zeros.push_back({t, false, s, false});
    }
    std::sort(rep.zeros.begin(), rep.zeros.end(),
              [](const ConjugatePoint& a, const ConjugatePoint& b) { return a.t < b.t; });
    for (auto& z : rep.zeros) flag_blow_up(traj, z);
    return rep;
}

namespace {

// Shared tail of the interval checks: hypothesis over the covered part of
// [lo, hi], then containment of a zero of det A.
void settle_interval(const JacobiTrajectory& traj, ConjugateReport& rep,
                     const std::vector<std::string>& violations) {
    const ConjugateReport zeros = detect_conjugate(traj);
    rep.zeros = zeros.zeros;
    if (initial_zero(traj)) {
        ConjugatePoint z;
        z.t = traj.initial().t0;
        rep.zeros.insert(rep.zeros.begin(), z);
    }
    bool found = false;
    for (const auto& z : rep.zeros)
        found = found || (z.t >= rep.predicted_lo - kIntervalTolerance &&
                          z.t <= rep.predicted_hi + kIntervalTolerance);
    std::ostringstream os;
    os << "theta1=" << fmt(rep.theta1) << " interval=[" << fmt(rep.predicted_lo) << ", "
       << fmt(rep.predicted_hi) << "] zeros=" << rep.zeros.size();
    if (!violations.empty()) {
        rep.verdict = IntervalVerdict::HypothesisViolated;
        os << " hypothesis: " << violations.front();
    } else if (found) {
        rep.verdict = IntervalVerdict::Contained;
    } else if (rep.predicted_lo < traj.t_begin() - kIntervalTolerance ||
               rep.predicted_hi > traj.t_end() + kIntervalTolerance) {
        rep.verdict = IntervalVerdict::OutsideRange;
    } else {
        rep.verdict = IntervalVerdict::NotContained;
    }
    rep.detail = os.str();
}

DiagnosticSample measured_theta(const JacobiTrajectory& traj, double t1, JacobiSample& s) {
    if (t1 < traj.t_begin() || t1 > traj.t_end())
        throw PreconditionViolated("t1 outside the trajectory");
    s = traj.at(t1);
    const DiagnosticSample d = diagnose(s, traj.dim());
    if (!d.valid) throw PreconditionViolated("A(t1) is singular");
    if (std::abs(d.theta_f) < 1e-12) throw PreconditionViolated("theta_f(t1) = 0");
    const double scale = std::max(1.0, s.a.norm() * s.ap.norm());
    if (lagrange_defect(s) > 1e-8 * scale)
        throw PreconditionViolated("A is not a Lagrange tensor");
    return d;
}

void check_ricci(const JacobiTrajectory& traj, const std::vector<double>& ric, double lo,
                 double hi, std::vector<std::string>& violations) {
    for (std::size_t i = 0; i < ric.size(); ++i) {
        const double t = traj.samples()[i].t;
        if (t < lo || t > hi) continue;
        if (ric[i] < -1e-9) {
            violations.push_back("Ric_f^m(c',c') = " + fmt(ric[i]) + " at t = " + fmt(t));
            return;
        }
    }
}

}  // namespace

ConjugateReport verify_interval_finite_m(const JacobiTrajectory& traj, double t1, int n,
                                         double m) {
    if (traj.dim() != n - 1) throw std::invalid_argument("expected a timelike frame of size n-1");
    const SyntheticDimension md = SyntheticDimension::finite(m);
    JacobiSample s;
    const DiagnosticSample d = measured_theta(traj, t1, s);
    ConjugateReport rep;
    rep.theta1 = d.theta_f;
    const double end = t1 - (n - 1 + m) / d.theta_f;
    rep.predicted_lo = std::min(t1, end);
    rep.predicted_hi = std::max(t1, end);
    std::vector<std::string> violations;
    check_ricci(traj, bakry_emery_along(traj, md), rep.predicted_lo, rep.predicted_hi,
                violations);
    settle_interval(traj, rep, violations);
    return rep;
}

ConjugateReport verify_interval_infinite(const JacobiTrajectory& traj, double t1, int n,
                                         double k) {
    if (traj.dim() != n - 1) throw std::invalid_argument("expected a timelike frame of size n-1");
    JacobiSample s;
    const DiagnosticSample d = measured_theta(traj, t1, s);
    ConjugateReport rep;
    rep.theta1 = d.theta_f;
    const double sigma = (n - 1 + 2.0 * k - 2.0 * s.f.value) / d.theta_f;
    const double end = t1 - sigma;
    rep.predicted_lo = std::min(t1, end);
    rep.predicted_hi = std::max(t1, end);
    std::vector<std::string> violations;
    for (const auto& smp : traj.samples()) {
        if (smp.t < rep.predicted_lo || smp.t > rep.predicted_hi) continue;
        if (smp.f.value > k + 1e-9) {
            violations.push_back("f = " + fmt(smp.f.value) + " exceeds k = " + fmt(k) +
                                 " at t = " + fmt(smp.t));
            break;
        }
    }
    check_ricci(traj, bakry_emery_along(traj, SyntheticDimension::infinite()), rep.predicted_lo,
                rep.predicted_hi, violations);
    settle_interval(traj, rep, violations);
    return rep;
}

// ---------------------------------------------------------------------------
// Boundary problems

BoundaryJacobi boundary_jacobi(SourcePtr source, double t1, double s, const Mat& target,
                               const JacobiOptions& opts) {
    if (!(s > t1)) throw std::invalid_argument("boundary_jacobi needs s > t1");
    const int d = source->dim();
    const Mat id = Mat::Identity(d, d);

    const JacobiTrajectory point = integrate_jacobi(source, Mat::Zero(d, d), id, t1, s, opts);
    const ConjugateReport conj = detect_conjugate(point);
    for (const auto& z : conj.zeros)
        if (z.t > t1) throw ConjugatePointInRange("conjugate point at t = " + fmt(z.t));
    const Mat& a_s = point.samples().back().a;
    if (smallest_singular(a_s) <= 1e-9 * std::max(1.0, largest_singular(a_s)))
        throw ConjugatePointInRange("conjugate point at t = " + fmt(s));

    const JacobiTrajectory z = integrate_jacobi(source, Mat::Zero(d, d), id, s, t1, opts);
    const Mat& z1 = z.samples().front().a;
    const Mat x = z1.partialPivLu().solve(target);
    BoundaryJacobi out{z.right_multiply(x), Mat(), x, 0.0};
    out.derivative_at_t1 = out.trajectory.samples().front().ap;
    out.boundary_residual = max_abs(out.trajectory.samples().front().a - target);
    return out;
}

Mat d_s_integral_formula(const JacobiTrajectory& a_traj, double t, double s) {
    const auto& init = a_traj.initial();
    const int d = a_traj.dim();
    if (max_abs(init.a0) != 0.0 || max_abs(init.a0p - Mat::Identity(d, d)) > 1e-14)
        throw PreconditionViolated("expected A(t1) = 0, A'(t1) = E");
    const double t1 = init.t0;
    if (t - t1 < kQuadratureCollar)
        throw QuadratureNearSingularity("t = " + fmt(t) + " is within " + fmt(kQuadratureCollar) +
                                        " of t1");
    if (!(s >= t) || s > a_traj.t_end())
        throw std::invalid_argument("need t <= s within the trajectory");

    const Eigen::Index na = a_traj.aux_size();
    const Eigen::Index ny = na + 2 * d * d;
    const OdeRhs& base = a_traj.checkpoints().rhs();
    OdeRhs rhs = [&base, na, ny, d](double tau, const Vec& y, Vec& dy) {
        Vec dbase;
        base(tau, y.head(ny), dbase);
        dy.resize(y.size());
        dy.head(ny) = dbase;
        Eigen::Map<const Mat> a(y.data() + na, d, d);
        const Mat ata = a.transpose() * a;
        Eigen::Map<Mat>(dy.data() + ny, d, d) = ata.llt().solve(Mat::Identity(d, d));
    };
    Vec y0 = a_traj.checkpoints().state_at(t);
    Vec y(ny + d * d);
    y.head(ny) = y0;
    y.tail(d * d).setZero();
    DormandPrince solver(a_traj.checkpoints().options());
    solver.integrate(rhs, t, y, s);
    const Mat a_t = Eigen::Map<const Mat>(y0.data() + na, d, d);
    return a_t * Eigen::Map<const Mat>(y.data() + ny, d, d);
}

AsymptoticReport asymptotic_lagrange(SourcePtr source, double t1,
                                     const std::vector<double>& s_list, double t_eval,
                                     const JacobiOptions& opts) {
    if (s_list.empty()) throw std::invalid_argument("empty s list");
    AsymptoticReport rep;
    rep.s_values = s_list;
    std::sort(rep.s_values.begin(), rep.s_values.end());
    if (t_eval < t1 || t_eval > rep.s_values.front())
        throw std::invalid_argument("t_eval must lie in [t1, min s]");
    const int d = source->dim();
    for (double s : rep.s_values) {
        const BoundaryJacobi bj = boundary_jacobi(source, t1, s, Mat::Identity(d, d), opts);
        rep.values.push_back(bj.trajectory.at(t_eval).a);
        rep.initial_slopes.push_back(bj.derivative_at_t1);
    }
    for (std::size_t i = 0; i + 1 < rep.values.size(); ++i)
        rep.cauchy_diffs.push_back(std::max(max_abs(rep.values[i + 1] - rep.values[i]),
                                            max_abs(rep.initial_slopes[i + 1] -
                                                    rep.initial_slopes[i])));
    rep.converged = true;
    for (std::size_t i = 0; i + 1 < rep.cauchy_diffs.size(); ++i) {
        const double a = rep.cauchy_diffs[i], b = rep.cauchy_diffs[i + 1];
        rep.ratios.push_back(a > 0.0 ? b / a : 0.0);
        rep.converged = rep.converged && (b < a || b < 1e-9);
    }
    rep.limit = rep.values.back();
    const std::size_t k = rep.values.size();
    if (k >= 3) {
        const Mat& x0 = rep.values[k - 3];
        const Mat& x1 = rep.values[k - 2];
        const Mat& x2 = rep.values[k - 1];
        for (Eigen::Index i = 0; i < x2.rows(); ++i)
            for (Eigen::Index j = 0; j < x2.cols(); ++j) {
                const double d1 = x2(i, j) - x1(i, j), d0 = x1(i, j) - x0(i, j);
                const double den = d1 - d0;
                if (std::abs(den) > 1e-12 && std::abs(d1) > 1e-12)
                    rep.limit(i, j) = x2(i, j) - d1 * d1 / den;
            }
    }
    return rep;
}

FocalReport verify_null_focal_bound(SourcePtr source, double theta1, double t1, int n,
                                    const SyntheticDimension& m, std::optional<Mat> b0,
                                    const JacobiOptions& opts) {
    const int d = source->dim();
    if (d != n - 2) throw std::invalid_argument("expected a quotient frame of size n-2");
    if (theta1 == 0.0) throw PreconditionViolated("theta1 = 0");
    const double fp = source->weight(t1, source->aux_initial(t1)).derivative;
    const Mat id = Mat::Identity(d, d);
    Mat b = b0 ? *b0 : Mat(((theta1 + fp) / d) * id);
    if (std::abs(b.trace() - fp - theta1) > 1e-10 * std::max(1.0, std::abs(theta1)))
        throw PreconditionViolated("tr B0 - f' does not equal theta1");
    if (max_abs(b - b.transpose()) > 1e-12) throw PreconditionViolated("B0 is not symmetric");

    const double end = t1 - (n - 2) / theta1;
    const double stop = t1 + 1.1 * (end - t1);
    FocalReport out{ConjugateReport{}, integrate_jacobi(source, id, b, t1, stop, opts, "focal")};
    ConjugateReport& rep = out.report;
    rep.theta1 = theta1;
    rep.predicted_lo = std::min(t1, end);
    rep.predicted_hi = std::max(t1, end);
    std::vector<std::string> violations;
    check_ricci(out.trajectory, bakry_emery_along(out.trajectory, m), rep.predicted_lo,
                rep.predicted_hi, violations);
    settle_interval(out.trajectory, rep, violations);
    return out;
}

MeanCurvatureReport mean_curvature_evolution(const MetricField& g, const ScalarField& f,
                                             const NormalCongruenceSpec& spec,
                                             const JacobiOptions& opts) {
    GeodesicOptions gopt;
    const GeodesicTrajectory geo =
        integrate_geodesic(g, spec.point, spec.normal, 0.0, spec.length, gopt);
    if (geo.exited_domain()) throw DomainViolation("normal geodesic leaves the chart");
    if (geo.character() != GeodesicCharacter::Timelike)
        throw PreconditionViolated("the normal must be timelike");
    auto source = std::make_shared<MetricSource>(g, parallel_frame(g, geo), f);
    const int d = source->dim();
    if (spec.shape.rows() != d || spec.shape.cols() != d)
        throw std::invalid_argument("shape operator has wrong size");
    const JacobiTrajectory traj = integrate_jacobi(source, Mat::Identity(d, d), spec.shape, 0.0,
                                                   spec.length, opts, "hypersurface");
    const std::vector<double> ric_f = bakry_emery_along(traj, SyntheticDimension::infinite());

    MeanCurvatureReport rep;
    std::vector<double> grad2;
    std::vector<bool> valid;
    for (const auto& s : traj.samples()) {
        const Mat b = s.a.transpose().partialPivLu().solve(s.ap.transpose()).transpose();
        rep.t.push_back(s.t);
        rep.h.push_back(b.trace());
        rep.h_f.push_back(b.trace() - s.f.derivative);
        grad2.push_back((b.transpose() * b).trace());
        valid.push_back(smallest_singular(s.a) > 1e-8);
    }
    const auto dh = differentiate_uniform(rep.h_f, valid, traj.spacing());
    for (std::size_t i = 0; i < dh.size(); ++i) {
        if (!dh[i]) {
            rep.residual.push_back(std::nullopt);
            continue;
        }
        const double r = *dh[i] + ric_f[i] + grad2[i];
        rep.residual.push_back(r);
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r));
    }
    return rep;
}

}  // namespace bemlab
