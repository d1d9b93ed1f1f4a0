#pragma once
// One-dimensional golden-section search.

#include <cmath>
#include <utility>

namespace pleat {

// Minimizer of a unimodal f on [lo, hi]; returns (argmin, f(argmin)).
template <typename F>
std::pair<double, double> golden_section_minimize(F&& f, double lo, double hi,
                                                  double tol = 1e-12, int max_iter = 200) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    // The interior probes never touch the ends; a monotone f attains its
    // minimum there, so compare against both.
    double x = (fc <= fd) ? c : d;
    double fx = std::min(fc, fd);
    double flo = f(lo), fhi = f(hi);
    if (flo < fx) return {lo, flo};
    if (fhi < fx) return {hi, fhi};
    return {x, fx};
}

template <typename F>
std::pair<double, double> golden_section_maximize(F&& f, double lo, double hi,
                                                  double tol = 1e-12, int max_iter = 200) {
    auto [x, fx] = golden_section_minimize([&](double s) { return -f(s); }, lo, hi, tol, max_iter);
    return {x, -fx};
}

}  // namespace pleat
