// numerics.hpp - Stencils, quadrature and one-dimensional searches.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bemlab {

// Fourth-order central first derivative on a uniform grid. Entries whose
// five-point stencil leaves the series or touches a masked-out sample are
// empty.
std::vector<std::optional<double>> differentiate_uniform(const std::vector<double>& values,
                                                         const std::vector<bool>& valid,
                                                         double spacing);

// Bisection on a sign change of fn over [lo, hi] down to width tol.
double bisect_sign_change(const std::function<double(double)>& fn, double lo, double hi,
                          double tol);

// Golden-section minimisation of a unimodal fn on [lo, hi].
double golden_section_min(const std::function<double(double)>& fn, double lo, double hi,
                          double tol);

// Adaptive Simpson quadrature for scalar or Eigen-valued integrands.
template <typename T>
class AdaptiveSimpson {
public:
    using Integrand = std::function<T(double)>;

    AdaptiveSimpson(Integrand fn, double tol, int max_depth = 40)
        : fn_(std::move(fn)), tol_(tol), max_depth_(max_depth) {}

    T integrate(double a, double b) {
        const double m = 0.5 * (a + b);
        const T fa = fn_(a), fm = fn_(m), fb = fn_(b);
        const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole, tol_, 0);
    }

    int evaluations() const { return evals_ + 3; }

private:
    static double magnitude(double x) { return std::abs(x); }
    template <typename Derived>
    static double magnitude(const Eigen::MatrixBase<Derived>& m) {
        return m.cwiseAbs().maxCoeff();
    }

    T recurse(double a, double b, const T& fa, const T& fm, const T& fb, const T& whole,
              double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const T flm = fn_(lm), frm = fn_(rm);
        evals_ += 2;
        const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const T delta = left + right - whole;
        if (depth >= max_depth_ || magnitude(delta) <= 15.0 * tol) {
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }

    Integrand fn_;
    double tol_;
    int max_depth_;
    int evals_ = 0;
};

// Shortest decimal string that parses back to the same double.
std::string shortest_repr(double x);

}  // namespace bemlab
