// numerics.cpp

#include "bemlab/numerics.hpp"

#include <charconv>
#include <stdexcept>

namespace bemlab {

std::vector<std::optional<double>> differentiate_uniform(const std::vector<double>& values,
                                                         const std::vector<bool>& valid,
                                                         double spacing) {
    const std::size_t n = values.size();
    std::vector<std::optional<double>> out(n);
    if (n < 5) return out;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        bool ok = true;
        for (std::size_t j = i - 2; j <= i + 2; ++j) ok = ok && valid[j];
        if (!ok) continue;
        out[i] = (-values[i + 2] + 8.0 * values[i + 1] - 8.0 * values[i - 1] + values[i - 2]) /
                 (12.0 * spacing);
    }
    return out;
}

double bisect_sign_change(const std::function<double(double)>& fn, double lo, double hi,
                          double tol) {
    double flo = fn(lo);
    const double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("no sign change in bracket");
    while (std::abs(hi - lo) > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_section_min(const std::function<double(double)>& fn, double lo, double hi,
                          double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = fn(c), fd = fn(d);
    while (std::abs(hi - lo) > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = fn(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = fn(d);
        }
    }
    return 0.5 * (lo + hi);
}

std::string shortest_repr(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace bemlab
