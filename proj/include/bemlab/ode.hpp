// ode.hpp - Adaptive Dormand-Prince 5(4) integration of first-order systems.
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace bemlab {

using Vec = Eigen::VectorXd;

struct OdeOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double max_step = std::numeric_limits<double>::infinity();
    // Relative to max(1, |t|); a smaller accepted step is a failure.
    double min_step = 1e-13;
    std::size_t max_steps = 2'000'000;
};

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

using OdeRhs = std::function<void(double t, const Vec& y, Vec& dydt)>;
// Return false to stop the integration after this point.
using OdeObserver = std::function<bool(double t, const Vec& y)>;

class DormandPrince {
public:
    explicit DormandPrince(OdeOptions opts = {}) : opts_(opts) {}

    // Integrates y from t0 to t1 (either direction), calling observer after
    // every accepted step. Returns the final time reached, which is t1
    // unless the observer stopped early. Throws IntegratorFailure on step
    // collapse, non-finite states or step budget exhaustion.
    double integrate(const OdeRhs& rhs, double t0, Vec& y, double t1,
                     const OdeObserver& observer = {});

    // Integrates across a monotone grid, stopping exactly on every node and
    // calling observer there (including the first node). Returns the last
    // node reached.
    double integrate_grid(const OdeRhs& rhs, const std::vector<double>& grid, Vec& y,
                          const OdeObserver& observer);

    const OdeStats& stats() const { return stats_; }
    const OdeOptions& options() const { return opts_; }

private:
    // k holds f(t0, y) on entry and f(t1, y) on exit.
    double advance(const OdeRhs& rhs, double t0, Vec& y, double t1, Vec& k,
                   const OdeObserver& observer = {});
    double initial_step(const OdeRhs& rhs, double t0, const Vec& y, const Vec& f0, double dir,
                        double span);

    OdeOptions opts_;
    OdeStats stats_;
    double last_step_ = 0.0;
};

// Stored states of an integrated system; any intermediate state is
// recovered by re-integrating from the nearest stored state.
class Checkpoints {
public:
    Checkpoints() = default;
    Checkpoints(OdeRhs rhs, OdeOptions opts) : rhs_(std::move(rhs)), opts_(opts) {}

    void push(double t, const Vec& y);
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    double front_time() const { return times_.front(); }
    double back_time() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<Vec>& states() const { return states_; }
    const OdeRhs& rhs() const { return rhs_; }
    const OdeOptions& options() const { return opts_; }

    // Index of the stored time nearest to t.
    std::size_t nearest(double t) const;
    Vec state_at(double t) const;

private:
    OdeRhs rhs_;
    OdeOptions opts_;
    std::vector<double> times_;
    std::vector<Vec> states_;
};

std::vector<double> uniform_grid(double a, double b, double spacing);

}  // namespace bemlab
