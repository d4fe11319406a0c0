// comparison.cpp

#include "bemlab/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bemlab/numerics.hpp"

namespace bemlab {

double GridAxis::node(int i) const {
    if (count <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void SampleSpec::validate() const {
    if (axes.empty()) throw std::invalid_argument("sample spec has no axes");
    for (const auto& a : axes)
        if (a.count < 1) throw std::invalid_argument("grid axis count must be >= 1");
    if (timelike_per_point < 1 || null_per_point < 1)
        throw std::invalid_argument("direction counts must be >= 1");
    if (!(chi_max >= 0.0)) throw std::invalid_argument("chi_max must be nonnegative");
}

std::size_t SampleSpec::point_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
    return n;
}

Vec SampleSpec::point(std::size_t index) const {
    Vec p(static_cast<Eigen::Index>(axes.size()));
    for (std::size_t k = axes.size(); k-- > 0;) {
        const auto c = static_cast<std::size_t>(axes[k].count);
        p(static_cast<Eigen::Index>(k)) = axes[k].node(static_cast<int>(index % c));
        index /= c;
    }
    return p;
}

SampleSpec SampleSpec::densified(int factor) const {
    SampleSpec out = *this;
    out.timelike_per_point *= factor;
    out.null_per_point *= factor;
    return out;
}

Mat orthonormal_frame(const Mat& g) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const Vec& lam = es.eigenvalues();
    if (!(lam(0) < 0.0) || (lam.size() > 1 && !(lam(1) > 0.0)))
        throw SignatureViolation("metric is not Lorentzian at the sample point");
    Mat e(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.cols(); ++i)
        e.col(i) = es.eigenvectors().col(i) / std::sqrt(std::abs(lam(i)));
    if (e(0, 0) < 0.0) e.col(0) = -e.col(0);
    return e;
}

namespace {

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

Vec unit_sphere(std::mt19937_64& rng, Eigen::Index k) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec u(k);
    do {
        for (Eigen::Index i = 0; i < k; ++i) u(i) = normal(rng);
    } while (u.norm() < 1e-12);
    return u / u.norm();
}

ConditionReport scan(const MetricField& g, const ScalarField& f, const BakryEmeryParams& params,
                     const SampleSpec& spec, bool null_dirs, std::vector<double>* values) {
    spec.validate();
    if (static_cast<int>(spec.axes.size()) != g.dim())
        throw std::invalid_argument("sample grid dimension does not match the metric");
    ConditionReport rep;
    for (std::size_t i = 0; i < spec.point_count(); ++i) {
        const Vec p = spec.point(i);
        if (!g.in_domain(p)) {
            ++rep.skipped_points;
            continue;
        }
        const Mat ric = bakry_emery_ricci_tensor(g, f, params.m, p);
        const Mat gp = g.eval(p);
        const std::vector<Vec> dirs =
            null_dirs ? sample_null(gp, spec.null_per_point, spec.seed, i)
                      : sample_timelike(gp, spec.timelike_per_point, spec.chi_max, spec.seed, i);
        for (const Vec& v : dirs) {
            const double val = v.dot(ric * v);
            if (values) values->push_back(val);
            ++rep.evaluated;
            if (val < rep.min_value) {
                rep.min_value = val;
                rep.argmin_point = p;
                rep.argmin_vector = v;
            }
        }
    }
    rep.pass = rep.evaluated > 0 && rep.min_value >= rep.threshold;
    return rep;
}

}  // namespace

std::vector<Vec> sample_timelike(const Mat& g, int count, double chi_max, std::uint64_t seed,
                                 std::uint64_t stream) {
    const Mat e = orthonormal_frame(g);
    const Eigen::Index k = g.rows() - 1;
    auto rng = stream_rng(seed, stream);
    std::uniform_real_distribution<double> chi_dist(0.0, chi_max);
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        const double chi = chi_dist(rng);
        const Vec u = unit_sphere(rng, k);
        out.push_back(std::cosh(chi) * e.col(0) + std::sinh(chi) * (e.rightCols(k) * u));
    }
    return out;
}

std::vector<Vec> sample_null(const Mat& g, int count, std::uint64_t seed, std::uint64_t stream) {
    const Mat e = orthonormal_frame(g);
    const Eigen::Index k = g.rows() - 1;
    auto rng = stream_rng(seed, stream ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) out.push_back(e.col(0) + e.rightCols(k) * unit_sphere(rng, k));
    return out;
}

ConditionReport check_timelike_convergence(const MetricField& g, const ScalarField& f,
                                           const BakryEmeryParams& params,
                                           const SampleSpec& spec) {
    return scan(g, f, params, spec, false, nullptr);
}

ConditionReport check_null_convergence(const MetricField& g, const ScalarField& f,
                                       const BakryEmeryParams& params, const SampleSpec& spec) {
    return scan(g, f, params, spec, true, nullptr);
}

std::vector<double> timelike_convergence_values(const MetricField& g, const ScalarField& f,
                                                const BakryEmeryParams& params,
                                                const SampleSpec& spec) {
    std::vector<double> values;
    scan(g, f, params, spec, false, &values);
    return values;
}

FGenericResult check_f_generic(const MetricField& g, const ScalarField& f,
                               const FrameField& frame) {
    FGenericResult out;
    for (const auto& s : sample_endomorphisms(g, frame, &f).samples) {
        const double norm = s.r_f->cwiseAbs().maxCoeff();
        out.max_norm = std::max(out.max_norm, norm);
        if (norm > 1e-9 && !out.witness) {
            out.generic = true;
            out.witness = s.t;
        }
    }
    return out;
}

double trace_identity_check(const MetricField& g, const ScalarField& f,
                            const BakryEmeryParams& params, const FrameField& frame, double t) {
    const FrameSample s = frame.at(t);
    const Mat gp = g.eval(s.point);
    const Mat r = endomorphism_matrix(riemann(g, s.point), gp, s.velocity, s.frame);
    const ScalarAlongCurve w = scalar_along(g, f, s.point, s.velocity);
    const double lhs = modified_endomorphism_from(r, w).trace();
    const double d = static_cast<double>(frame.transverse_dim());
    const Mat ric = bakry_emery_ricci_tensor(g, f, params.m, s.point);
    const double rhs = s.velocity.dot(ric * s.velocity) +
                       (1.0 / d + params.m.reciprocal()) * w.derivative * w.derivative;
    return std::abs(lhs - rhs);
}

SchwarzGap schwarz_gap(double theta, double fprime, int n, double m) {
    if (n < 2) throw std::invalid_argument("schwarz_gap needs n >= 2");
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("schwarz_gap needs finite m > 0");
    SchwarzGap s;
    const double d = n - 1.0;
    s.lhs = theta * theta / d + fprime * fprime / m;
    s.rhs_plus = (theta + fprime) * (theta + fprime) / (d + m);
    s.rhs_minus = (theta - fprime) * (theta - fprime) / (d + m);
    s.rhs = std::max(s.rhs_plus, s.rhs_minus);
    s.gap = s.lhs - s.rhs;
    return s;
}

double schwarz_ratio_stated(int n, double m) { return std::sqrt((n - 1.0) / m); }
double schwarz_ratio_exact(int n, double m) { return (n - 1.0) / m; }

namespace {

Vec shoot_endpoint(const MetricField& g, const Vec& apex, const Vec& w) {
    const int n = g.dim();
    Vec y(2 * n);
    y << apex, w;
    OdeOptions o;
    o.rel_tol = 1e-12;
    o.abs_tol = 1e-14;
    o.max_step = 0.01;
    DormandPrince solver(o);
    solver.integrate([&g](double, const Vec& s, Vec& ds) { geodesic_rhs(g, s, ds); }, 0.0, y,
                     1.0);
    return y.head(n);
}

}  // namespace

FLaplacianResult f_laplacian_distance(const MetricField& g, const ScalarField& f,
                                      const Vec& apex, const Vec& q,
                                      const FLaplacianOptions& opts) {
    if (opts.region && !opts.region(apex, q))
        throw OutsideUniquenessRegion("(apex, q) outside the declared uniqueness region");
    const int n = g.dim();
    FLaplacianResult out;

    Vec w = q - apex;
    const double scale = std::max(1.0, q.norm());
    bool converged = false;
    try {
        for (int it = 0; it < opts.newton_max_iter; ++it) {
            const Vec res = shoot_endpoint(g, apex, w) - q;
            out.newton_iterations = it;
            if (res.norm() <= opts.newton_tol * scale) {
                converged = true;
                break;
            }
            Mat jac(n, n);
            for (int c = 0; c < n; ++c) {
                const double h = 1e-6 * std::max(1.0, std::abs(w(c)));
                Vec wp = w, wm = w;
                wp(c) += h;
                wm(c) -= h;
                jac.col(c) = (shoot_endpoint(g, apex, wp) - shoot_endpoint(g, apex, wm)) / (2 * h);
            }
            w -= jac.partialPivLu().solve(res);
        }
    } catch (const GeometryError& e) {
        throw NoMaximalGeodesic(std::string("shooting to q failed: ") + e.what());
    }
    if (!converged) throw NoMaximalGeodesic("shooting to q did not converge");

    const double nw = inner(g.eval(apex), w, w);
    if (!(nw < 0.0) || !(w(0) < 0.0))
        throw NoMaximalGeodesic("q is not in the chronological past of the apex");
    out.rho = std::sqrt(-nw);
    out.initial_velocity = w / out.rho;

    const GeodesicTrajectory geo = integrate_geodesic(g, apex, out.initial_velocity, 0.0, out.rho);
    if (geo.exited_domain()) throw NoMaximalGeodesic("geodesic leaves the chart");
    auto source = std::make_shared<MetricSource>(g, parallel_frame(g, geo), f);
    const int d = source->dim();
    JacobiOptions jo;
    jo.spacing = std::min(opts.spacing, out.rho / 20.0);
    const JacobiTrajectory traj = integrate_jacobi(source, Mat::Zero(d, d), Mat::Identity(d, d),
                                                   0.0, out.rho, jo, "distance");
    const JacobiSample& end = traj.samples().back();
    const Mat b = end.a.transpose().partialPivLu().solve(end.ap.transpose()).transpose();
    out.laplacian = -b.trace();
    out.drift = end.f.derivative;
    out.value = out.laplacian + out.drift;

    AdaptiveSimpson<double> quad([&](double s) { return f.eval(geo.at(s).point); }, 1e-11, 30);
    const double integral = quad.integrate(0.0, out.rho);
    out.bound_weighted = -(n - 1.0) / out.rho + 2.0 * end.f.value / out.rho -
                         2.0 * integral / (out.rho * out.rho);
    if (opts.m && !opts.m->is_infinite())
        out.bound_finite_m = -(n - 1.0 + opts.m->value()) / out.rho;
    return out;
}

}  // namespace bemlab
