// manifold_core.cpp - Connection, curvature and Bakry-Emery-Ricci tensor.

#include "bemlab/manifold_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bemlab {

namespace {

double scaled_step(double base, double x) { return base * std::max(1.0, std::abs(x)); }

MatrixList fd_first(const MetricField::ValueFn& value, int n, double step, const Vec& p) {
    MatrixList out(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) {
        const double h = scaled_step(step, p(c));
        Vec plus = p, minus = p;
        plus(c) += h;
        minus(c) -= h;
        out[static_cast<size_t>(c)] = (value(plus) - value(minus)) / (2.0 * h);
    }
    return out;
}

MatrixList fd_second(const MetricField::ValueFn& value, int n, double step, const Vec& p) {
    MatrixList out(static_cast<size_t>(n * n));
    const Mat centre = value(p);
    for (int c = 0; c < n; ++c) {
        const double hc = kSecondStepWidening * scaled_step(step, p(c));
        for (int d = c; d < n; ++d) {
            Mat block;
            if (c == d) {
                Vec plus = p, minus = p;
                plus(c) += hc;
                minus(c) -= hc;
                block = (value(plus) - 2.0 * centre + value(minus)) / (hc * hc);
            } else {
                const double hd = kSecondStepWidening * scaled_step(step, p(d));
                Vec pp = p, pm = p, mp = p, mm = p;
                pp(c) += hc; pp(d) += hd;
                pm(c) += hc; pm(d) -= hd;
                mp(c) -= hc; mp(d) += hd;
                mm(c) -= hc; mm(d) -= hd;
                block = (value(pp) - value(pm) - value(mp) + value(mm)) / (4.0 * hc * hd);
            }
            out[static_cast<size_t>(c * n + d)] = block;
            out[static_cast<size_t>(d * n + c)] = block;
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// MetricField

MetricField MetricField::analytic(int dim, ValueFn value, FirstFn first, SecondFn second,
                                  std::vector<CoordinateInterval> domain) {
    if (dim < 2) throw std::invalid_argument("metric dimension must be >= 2");
    if (domain.empty()) domain.assign(static_cast<size_t>(dim), CoordinateInterval{});
    if (static_cast<int>(domain.size()) != dim)
        throw std::invalid_argument("coordinate domain size does not match dimension");
    MetricField m;
    m.dim_ = dim;
    m.mode_ = DerivativeMode::Analytic;
    m.value_ = std::move(value);
    m.first_ = std::move(first);
    m.second_ = std::move(second);
    m.domain_ = std::move(domain);
    return m;
}

MetricField MetricField::finite_difference(int dim, ValueFn value,
                                           std::vector<CoordinateInterval> domain, double step) {
    if (dim < 2) throw std::invalid_argument("metric dimension must be >= 2");
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    if (domain.empty()) domain.assign(static_cast<size_t>(dim), CoordinateInterval{});
    if (static_cast<int>(domain.size()) != dim)
        throw std::invalid_argument("coordinate domain size does not match dimension");
    MetricField m;
    m.dim_ = dim;
    m.mode_ = DerivativeMode::FiniteDifference;
    m.step_ = step;
    m.value_ = std::move(value);
    m.domain_ = std::move(domain);
    return m;
}

MetricField MetricField::as_finite_difference(double step) const {
    return finite_difference(dim_, value_, domain_, step);
}

bool MetricField::in_domain(const Vec& p) const {
    if (p.size() != dim_) return false;
    for (int i = 0; i < dim_; ++i) {
        if (!std::isfinite(p(i)) || !domain_[static_cast<size_t>(i)].contains(p(i))) return false;
    }
    return true;
}

void MetricField::require_in_domain(const Vec& p) const {
    if (p.size() != dim_) {
        throw DomainViolation("point has " + std::to_string(p.size()) +
                              " coordinates, metric dimension is " + std::to_string(dim_));
    }
    for (int i = 0; i < dim_; ++i) {
        const auto& iv = domain_[static_cast<size_t>(i)];
        if (!std::isfinite(p(i)) || !iv.contains(p(i))) {
            std::ostringstream os;
            os << "coordinate " << i << " = " << p(i) << " outside (" << iv.lo << ", " << iv.hi
               << ")";
            throw DomainViolation(os.str());
        }
    }
}

Mat MetricField::eval(const Vec& p) const {
    require_in_domain(p);
    return value_(p);
}

MatrixList MetricField::first_derivatives(const Vec& p) const {
    require_in_domain(p);
    if (mode_ == DerivativeMode::Analytic) return first_(p);
    return fd_first(value_, dim_, step_, p);
}

MatrixList MetricField::second_derivatives(const Vec& p) const {
    require_in_domain(p);
    if (mode_ == DerivativeMode::Analytic) return second_(p);
    return fd_second(value_, dim_, step_, p);
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField ScalarField::analytic(ValueFn value, GradFn gradient, PartialsFn second_partials,
                                  std::optional<double> upper_bound) {
    ScalarField f;
    f.mode_ = DerivativeMode::Analytic;
    f.value_ = std::move(value);
    f.gradient_ = std::move(gradient);
    f.partials_ = std::move(second_partials);
    f.upper_bound_ = upper_bound;
    return f;
}

ScalarField ScalarField::finite_difference(ValueFn value, double step,
                                           std::optional<double> upper_bound) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    ScalarField f;
    f.mode_ = DerivativeMode::FiniteDifference;
    f.step_ = step;
    f.value_ = std::move(value);
    f.upper_bound_ = upper_bound;
    return f;
}

ScalarField ScalarField::constant(double c) {
    return analytic([c](const Vec&) { return c; },
                    [](const Vec& p) { return Vec::Zero(p.size()); },
                    [](const Vec& p) { return Mat::Zero(p.size(), p.size()); }, c);
}

double ScalarField::eval(const Vec& p) const { return value_(p); }

Vec ScalarField::differential(const Vec& p) const {
    if (mode_ == DerivativeMode::Analytic) return gradient_(p);
    const auto n = p.size();
    Vec out(n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const double h = scaled_step(step_, p(c));
        Vec plus = p, minus = p;
        plus(c) += h;
        minus(c) -= h;
        out(c) = (value_(plus) - value_(minus)) / (2.0 * h);
    }
    return out;
}

Mat ScalarField::second_partials(const Vec& p) const {
    if (mode_ == DerivativeMode::Analytic) return partials_(p);
    const int n = static_cast<int>(p.size());
    auto wrapped = [this](const Vec& x) {
        Mat m(1, 1);
        m(0, 0) = value_(x);
        return m;
    };
    const MatrixList blocks = fd_second(wrapped, n, step_, p);
    Mat out(n, n);
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out(c, d) = blocks[static_cast<size_t>(c * n + d)](0, 0);
    return out;
}

bool ScalarField::respects_bound(const Vec& p) const {
    return !upper_bound_ || eval(p) <= *upper_bound_;
}

// ---------------------------------------------------------------------------
// SyntheticDimension

SyntheticDimension SyntheticDimension::finite(double m) {
    if (!(m > 0.0) || !std::isfinite(m))
        throw std::invalid_argument("synthetic dimension m must be a positive real");
    SyntheticDimension d;
    d.m_ = m;
    return d;
}

double SyntheticDimension::value() const {
    if (!m_) throw std::logic_error("synthetic dimension is infinite");
    return *m_;
}

std::string SyntheticDimension::to_string() const {
    if (!m_) return "infinity";
    std::ostringstream os;
    os << *m_;
    return os.str();
}

// ---------------------------------------------------------------------------
// Tensors

Vec Christoffel::contract(const Vec& u, const Vec& w) const {
    Vec out = Vec::Zero(n_);
    for (int a = 0; a < n_; ++a) {
        double s = 0.0;
        for (int b = 0; b < n_; ++b) {
            if (u(b) == 0.0) continue;
            for (int c = 0; c < n_; ++c) s += (*this)(a, b, c) * u(b) * w(c);
        }
        out(a) = s;
    }
    return out;
}

Vec Riemann::apply(const Vec& x, const Vec& y, const Vec& z) const {
    Vec out = Vec::Zero(n_);
    for (int a = 0; a < n_; ++a) {
        double s = 0.0;
        for (int b = 0; b < n_; ++b) {
            if (z(b) == 0.0) continue;
            for (int c = 0; c < n_; ++c) {
                if (x(c) == 0.0) continue;
                for (int d = 0; d < n_; ++d) s += (*this)(a, b, c, d) * z(b) * x(c) * y(d);
            }
        }
        out(a) = s;
    }
    return out;
}

std::vector<double> Riemann::lowered(const Mat& g) const {
    std::vector<double> out(data_.size(), 0.0);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            for (int c = 0; c < n_; ++c)
                for (int d = 0; d < n_; ++d) {
                    double s = 0.0;
                    for (int e = 0; e < n_; ++e) s += g(a, e) * (*this)(e, b, c, d);
                    out[idx(a, b, c, d)] = s;
                }
    return out;
}

double RiemannSymmetryResiduals::max() const {
    return std::max({antisym_cd, antisym_ab, pair, bianchi});
}

RiemannSymmetryResiduals riemann_symmetry_residuals(const Riemann& r, const Mat& g) {
    const int n = r.dim();
    const auto low = r.lowered(g);
    auto L = [&](int a, int b, int c, int d) {
        return low[static_cast<size_t>(((a * n + b) * n + c) * n + d)];
    };
    RiemannSymmetryResiduals res;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    res.antisym_cd = std::max(res.antisym_cd, std::abs(L(a, b, c, d) + L(a, b, d, c)));
                    res.antisym_ab = std::max(res.antisym_ab, std::abs(L(a, b, c, d) + L(b, a, c, d)));
                    res.pair = std::max(res.pair, std::abs(L(a, b, c, d) - L(c, d, a, b)));
                    res.bianchi = std::max(
                        res.bianchi, std::abs(r(a, b, c, d) + r(a, c, d, b) + r(a, d, b, c)));
                }
    return res;
}

std::string to_string(CausalCharacter c) {
    switch (c) {
        case CausalCharacter::Timelike: return "timelike";
        case CausalCharacter::Null: return "null";
        case CausalCharacter::Spacelike: return "spacelike";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Pointwise operations

namespace {

Christoffel connection_from(const Mat& g_inv, const MatrixList& dg) {
    const int n = static_cast<int>(g_inv.rows());
    Christoffel gamma(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = b; c < n; ++c) {
                double s = 0.0;
                for (int d = 0; d < n; ++d) {
                    s += g_inv(a, d) * (dg[static_cast<size_t>(b)](d, c) +
                                        dg[static_cast<size_t>(c)](d, b) -
                                        dg[static_cast<size_t>(d)](b, c));
                }
                gamma(a, b, c) = 0.5 * s;
                gamma(a, c, b) = 0.5 * s;
            }
    return gamma;
}

void check_invertible(const Mat& g, double det, const Vec& p) {
    const double scale = std::pow(std::max(1.0, g.cwiseAbs().maxCoeff()), static_cast<double>(g.rows()));
    if (!std::isfinite(det) || std::abs(det) < 1e-13 * scale) {
        std::ostringstream os;
        os << "metric is singular at (" << p.transpose() << "), det = " << det;
        throw SingularMetric(os.str());
    }
}

}  // namespace

PointGeometry point_geometry(const MetricField& g, const Vec& p) {
    Mat gv = g.eval(p);
    const Eigen::PartialPivLU<Mat> lu(gv);
    check_invertible(gv, lu.determinant(), p);
    Mat g_inv = lu.inverse();
    MatrixList dg = g.first_derivatives(p);
    Christoffel gamma = connection_from(g_inv, dg);
    return PointGeometry{std::move(gv), std::move(g_inv), std::move(dg), std::move(gamma)};
}

void validate_metric(const MetricField& g, const Vec& p) {
    const Mat gv = g.eval(p);
    const double asym = (gv - gv.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) {
        std::ostringstream os;
        os << "metric not symmetric at (" << p.transpose() << "), residual " << asym;
        throw SignatureViolation(os.str());
    }
    check_invertible(gv, gv.determinant(), p);
    Eigen::SelfAdjointEigenSolver<Mat> es(gv);
    const Vec ev = es.eigenvalues();
    int negative = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < 0.0) ++negative;
    if (negative != 1) {
        std::ostringstream os;
        os << "metric at (" << p.transpose() << ") has " << negative
           << " negative eigenvalues, expected signature (-,+,...,+)";
        throw SignatureViolation(os.str());
    }
}

Christoffel christoffel(const MetricField& g, const Vec& p) { return point_geometry(g, p).gamma; }

Riemann riemann(const MetricField& g, const Vec& p) { return riemann(g, p, point_geometry(g, p)); }

Riemann riemann(const MetricField& g, const Vec& p, const PointGeometry& pg) {
    const int n = g.dim();
    const MatrixList ddg = g.second_derivatives(p);
    const auto sz = [](int x) { return static_cast<size_t>(x); };
    const size_t n2 = sz(n * n), n3 = n2 * sz(n);

    std::vector<double> gi(n2), dg(n3), ddg_f(n3 * sz(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gi[sz(i * n + j)] = pg.g_inv(i, j);
    for (int e = 0; e < n; ++e)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                dg[sz((e * n + i) * n + j)] = pg.dg[sz(e)](i, j);
                for (int f = 0; f < n; ++f)
                    ddg_f[sz(((e * n + f) * n + i) * n + j)] = ddg[sz(e * n + f)](i, j);
            }

    // low[(d*n+b)*n+c] = 2 Gamma_{dbc}; dlow adds a leading derivative index e
    std::vector<double> low(n3), dlow(n3 * sz(n));
    for (int d = 0; d < n; ++d)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                low[sz((d * n + b) * n + c)] =
                    dg[sz((b * n + d) * n + c)] + dg[sz((c * n + d) * n + b)] - dg[sz((d * n + b) * n + c)];
                for (int e = 0; e < n; ++e) {
                    const double* h = &ddg_f[sz(e * n) * n2];
                    dlow[sz(((e * n + d) * n + b) * n + c)] =
                        h[sz((b * n + d) * n + c)] + h[sz((c * n + d) * n + b)] - h[sz((d * n + b) * n + c)];
                }
            }

    // gam[(a*n+b)*n+c] = Gamma^a_{bc}; dgam[e*n3 + ...] = d_e Gamma^a_{bc}
    std::vector<double> gam(n3), dgam(n3 * sz(n)), dginv(n2), tmp(n2);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) gam[sz((a * n + b) * n + c)] = pg.gamma(a, b, c);
    for (int e = 0; e < n; ++e) {
        const double* de = &dg[sz(e) * n2];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += gi[sz(i * n + k)] * de[sz(k * n + j)];
                tmp[sz(i * n + j)] = s;
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += tmp[sz(i * n + k)] * gi[sz(k * n + j)];
                dginv[sz(i * n + j)] = -s;
            }
        const double* dl = &dlow[sz(e) * n3];
        double* out = &dgam[sz(e) * n3];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = b; c < n; ++c) {
                    double s = 0.0;
                    for (int d = 0; d < n; ++d) {
                        const size_t idx = sz((d * n + b) * n + c);
                        s += dginv[sz(a * n + d)] * low[idx] + gi[sz(a * n + d)] * dl[idx];
                    }
                    out[sz((a * n + b) * n + c)] = 0.5 * s;
                    out[sz((a * n + c) * n + b)] = 0.5 * s;
                }
    }

    Riemann r(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    double s = dgam[sz(c) * n3 + sz((a * n + d) * n + b)] -
                               dgam[sz(d) * n3 + sz((a * n + c) * n + b)];
                    for (int e = 0; e < n; ++e)
                        s += gam[sz((a * n + c) * n + e)] * gam[sz((e * n + d) * n + b)] -
                             gam[sz((a * n + d) * n + e)] * gam[sz((e * n + c) * n + b)];
                    r(a, b, c, d) = s;
                    r(a, b, d, c) = -s;
                }
    return r;
}

Mat jacobi_operator(const MetricField& g, const Vec& p, const PointGeometry& pg, const Vec& u) {
    const int n = g.dim();
    const MatrixList ddg = g.second_derivatives(p);
    const auto sz = [](int x) { return static_cast<size_t>(x); };
    const Mat& gi = pg.g_inv;
    const MatrixList& dg = pg.dg;
    const size_t n2 = sz(n * n);

    // scratch: dgu, ddguu, dgcu, ddgcu, lcu_gi, x, mm (n2 each); ddgu (n3); lu, w, q, col (n each)
    std::vector<double> buf(7 * n2 + n2 * sz(n) + 4 * sz(n), 0.0);
    double* dgu = buf.data();       // d_u g
    double* ddguu = dgu + n2;       // d_u d_u g
    double* dgcu = ddguu + n2;      // (d_c g u)_d at [d*n+c]
    double* ddgcu = dgcu + n2;      // (d_c d_u g u)_d at [d*n+c]
    double* gl = ddgcu + n2;        // g^{-1} L_{.cu} at [d*n+c]
    double* x = gl + n2;
    double* mm = x + n2;            // Gamma^a_{ue} at [a*n+e]
    double* ddgu = mm + n2;         // d_c d_u g at [c*n2 + i*n+j]
    double* lu = ddgu + n2 * sz(n); // L_{duu}
    double* w = lu + n;
    double* q = w + n;
    double* col = q + n;
    const auto at = [n, sz](int i, int j) { return sz(i * n + j); };

    for (int e = 0; e < n; ++e) {
        const double ue = u(e);
        if (ue == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                dgu[at(i, j)] += ue * dg[sz(e)](i, j);
                for (int c = 0; c < n; ++c) ddgu[sz(c) * n2 + at(i, j)] += ue * ddg[sz(e * n + c)](i, j);
            }
    }
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double h = ddgu[sz(c) * n2 + at(i, j)];
                ddguu[at(i, j)] += u(c) * h;
                dgcu[at(i, c)] += dg[sz(c)](i, j) * u(j);
                ddgcu[at(i, c)] += h * u(j);
            }
    for (int d = 0; d < n; ++d) {
        double s = 0.0, t = 0.0;
        for (int j = 0; j < n; ++j) {
            s += dgu[at(d, j)] * u(j);
            t += u(j) * dgcu[at(j, d)];
        }
        lu[d] = 2.0 * s - t;
    }
    for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += gi(a, d) * lu[d];
        w[a] = s;
    }
    // g^{-1} L_{.cu}
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int d = 0; d < n; ++d) s += gi(a, d) * (dgcu[at(d, c)] + dgu[at(d, c)] - dgcu[at(c, d)]);
            gl[at(a, c)] = s;
        }
    // X = [d_c L_{.uu} - d_c g g^{-1} L_{.uu}] - [d_u L_{.cu} - d_u g g^{-1} L_{.cu}]
    for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += u(i) * ddg[sz(c * n + d)](i, j) * u(j);
            col[d] = 2.0 * ddgcu[at(d, c)] - s;
        }
        for (int d = 0; d < n; ++d) {
            double dw = 0.0, dl = 0.0;
            for (int j = 0; j < n; ++j) {
                dw += dg[sz(c)](d, j) * w[j];
                dl += dgu[at(d, j)] * gl[at(j, c)];
            }
            const double dlcu = ddgcu[at(d, c)] + ddguu[at(d, c)] - ddgcu[at(c, d)];
            x[at(d, c)] = col[d] - dw - dlcu + dl;
        }
    }
    for (int a = 0; a < n; ++a)
        for (int e = 0; e < n; ++e) {
            double s = 0.0;
            for (int d = 0; d < n; ++d) s += pg.gamma(a, d, e) * u(d);
            mm[at(a, e)] = s;
        }
    for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int e = 0; e < n; ++e) s += mm[at(a, e)] * u(e);
        q[a] = s;
    }
    // J = (P - Q) + Gamma_c q - M M, with P - Q = g^{-1} X / 2
    Mat j(n, n);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int d = 0; d < n; ++d)
                s += 0.5 * gi(a, d) * x[at(d, c)] + pg.gamma(a, c, d) * q[d] - mm[at(a, d)] * mm[at(d, c)];
            j(a, c) = s;
        }
    return j;
}

Mat ricci(const MetricField& g, const Vec& p) {
    const int n = g.dim();
    const Riemann r = riemann(g, p);
    Mat ric = Mat::Zero(n, n);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) s += r(a, b, a, d);
            ric(b, d) = s;
        }
    return 0.5 * (ric + ric.transpose());
}

Mat hessian_scalar(const MetricField& g, const ScalarField& f, const Vec& p) {
    const int n = g.dim();
    const PointGeometry pg = point_geometry(g, p);
    const Vec df = f.differential(p);
    Mat hess = f.second_partials(p);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int c = 0; c < n; ++c) s += pg.gamma(c, a, b) * df(c);
            hess(a, b) -= s;
        }
    return 0.5 * (hess + hess.transpose());
}

Mat bakry_emery_ricci_tensor(const MetricField& g, const ScalarField& f,
                             const SyntheticDimension& m, const Vec& p) {
    Mat out = ricci(g, p) + hessian_scalar(g, f, p);
    if (!m.is_infinite()) {
        const Vec df = f.differential(p);
        out -= m.reciprocal() * (df * df.transpose());
    }
    return out;
}

double bakry_emery_ricci(const MetricField& g, const ScalarField& f,
                         const BakryEmeryParams& params, const Vec& p, const Vec& v,
                         const Vec& w) {
    return v.dot(bakry_emery_ricci_tensor(g, f, params.m, p) * w);
}

CausalCharacter causal_character(const MetricField& g, const Vec& p, const Vec& v, double eps) {
    const double aux = v.squaredNorm();
    if (aux == 0.0) throw ZeroVector("causal character of the zero vector is undefined");
    const double q = inner(g.eval(p), v, v);
    if (std::abs(q) <= eps * aux) return CausalCharacter::Null;
    return q < 0.0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;
}

}  // namespace bemlab
