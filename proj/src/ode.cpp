// ode.cpp - Dormand-Prince 5(4) with PI-free classic step control.

#include "bemlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bemlab/errors.hpp"

namespace bemlab {

namespace {

namespace dp {
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b_hat (error weights)
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
}  // namespace dp

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const OdeOptions& o) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = o.abs_tol + o.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = err(i) / sc;
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
}

}  // namespace

double DormandPrince::initial_step(const OdeRhs& rhs, double t0, const Vec& y, const Vec& f0,
                                   double dir, double span) {
    // Hairer-Norsett-Wanner starting step heuristic.
    Vec sc = (opts_.abs_tol + opts_.rel_tol * y.cwiseAbs().array()).matrix();
    const double d0 = std::sqrt((y.array() / sc.array()).square().mean());
    const double d1 = std::sqrt((f0.array() / sc.array()).square().mean());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min({h0, span, opts_.max_step});
    Vec y1 = y + dir * h0 * f0;
    Vec f1(y.size());
    rhs(t0 + dir * h0, y1, f1);
    ++stats_.rhs_evals;
    const double d2 = std::sqrt((((f1 - f0).array() / sc.array()).square()).mean()) / h0;
    const double dm = std::max(d1, d2);
    double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
    return std::min({100.0 * h0, h1, span, opts_.max_step});
}

double DormandPrince::integrate(const OdeRhs& rhs, double t0, Vec& y, double t1,
                                const OdeObserver& observer) {
    if (t1 == t0) return t0;
    Vec k1(y.size());
    rhs(t0, y, k1);
    ++stats_.rhs_evals;
    return advance(rhs, t0, y, t1, k1, observer);
}

double DormandPrince::advance(const OdeRhs& rhs, double t0, Vec& y, double t1, Vec& k1,
                              const OdeObserver& observer) {
    using namespace dp;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const auto n = y.size();
    Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

    double t = t0;
    double h = last_step_ > 0.0 ? std::min({last_step_, std::abs(t1 - t0), opts_.max_step})
                                : initial_step(rhs, t0, y, k1, dir, std::abs(t1 - t0));
    std::size_t steps = 0;

    while (dir * (t1 - t) > 0.0) {
        if (++steps > opts_.max_steps) throw IntegratorFailure("step budget exhausted");
        bool last = false;
        const double proposed = h;
        if (h >= std::abs(t1 - t) * (1.0 - 1e-12)) {
            h = std::abs(t1 - t);
            last = true;
        }
        const double hs = dir * h;

        ytmp = y + hs * (a21 * k1);
        rhs(t + c2 * hs, ytmp, k2);
        ytmp = y + hs * (a31 * k1 + a32 * k2);
        rhs(t + c3 * hs, ytmp, k3);
        ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * hs, ytmp, k4);
        ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * hs, ytmp, k5);
        ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + hs, ytmp, k6);
        ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double tnew = last ? t1 : t + hs;
        rhs(tnew, ynew, k7);
        stats_.rhs_evals += 6;

        err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = error_norm(err, y, ynew, opts_);
        if (!std::isfinite(en) || !ynew.allFinite()) {
            ++stats_.rejected;
            h *= 0.25;
        } else if (en <= 1.0) {
            ++stats_.accepted;
            t = tnew;
            y = ynew;
            k1 = k7;
            const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            last_step_ = last ? std::max(h, proposed) : h;
            h = std::min(h * fac, opts_.max_step);
            if (observer && !observer(t, y)) return t;
            continue;
        } else {
            ++stats_.rejected;
            h *= std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
        }
        if (h < opts_.min_step * std::max(1.0, std::abs(t))) {
            std::ostringstream os;
            os << "step size collapsed to " << h << " at t = " << t;
            throw IntegratorFailure(os.str());
        }
    }
    return t;
}

double DormandPrince::integrate_grid(const OdeRhs& rhs, const std::vector<double>& grid, Vec& y,
                                     const OdeObserver& observer) {
    if (grid.empty()) return 0.0;
    if (observer && !observer(grid.front(), y)) return grid.front();
    Vec k(y.size());
    rhs(grid.front(), y, k);
    ++stats_.rhs_evals;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] == grid[i - 1]) continue;
        advance(rhs, grid[i - 1], y, grid[i], k);
        if (observer && !observer(grid[i], y)) return grid[i];
    }
    return grid.back();
}

// ---------------------------------------------------------------------------

void Checkpoints::push(double t, const Vec& y) {
    if (!times_.empty() && t <= times_.back()) {
        // Keep ascending order; backward integrations push in reverse.
        auto it = std::lower_bound(times_.begin(), times_.end(), t);
        const auto pos = it - times_.begin();
        times_.insert(it, t);
        states_.insert(states_.begin() + pos, y);
        return;
    }
    times_.push_back(t);
    states_.push_back(y);
}

std::size_t Checkpoints::nearest(double t) const {
    if (times_.empty()) throw std::logic_error("no checkpoints stored");
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0;
    if (it == times_.end()) return times_.size() - 1;
    const auto hi = static_cast<std::size_t>(it - times_.begin());
    return (t - times_[hi - 1] <= times_[hi] - t) ? hi - 1 : hi;
}

Vec Checkpoints::state_at(double t) const {
    const std::size_t i = nearest(t);
    Vec y = states_[i];
    if (times_[i] == t) return y;
    const double span = std::max(1.0, std::abs(times_.back() - times_.front()));
    if (t < times_.front() - 1e-9 * span || t > times_.back() + 1e-9 * span) {
        std::ostringstream os;
        os << "t = " << t << " outside stored range [" << times_.front() << ", "
           << times_.back() << "]";
        throw std::out_of_range(os.str());
    }
    DormandPrince solver(opts_);
    solver.integrate(rhs_, times_[i], y, t);
    return y;
}

std::vector<double> uniform_grid(double a, double b, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    const double len = std::abs(b - a);
    const auto intervals = std::max<long>(1, static_cast<long>(std::ceil(len / spacing - 1e-9)));
    std::vector<double> grid(static_cast<size_t>(intervals + 1));
    for (long i = 0; i <= intervals; ++i)
        grid[static_cast<size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
    grid.back() = b;
    return grid;
}

}  // namespace bemlab
