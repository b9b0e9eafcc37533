#pragma once

#include <functional>
#include <vector>

namespace saddlerate {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 60;
};

// Adaptive 7/15-point Gauss-Kronrod on [a, b]. Splits the interval with the
// largest error estimate until the total estimate meets the tolerance or the
// interval budget is spent.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

// Integral over [a, b] with the listed interior breakpoints seeded as initial
// interval boundaries (peaks, kinks).
QuadResult integrate_with_breaks(const std::function<double(double)>& f, double a, double b,
                                 const std::vector<double>& breaks, const QuadOptions& opt = {});

// Integral of a nonnegative integrand over [start, inf). The tail is cut where the
// integrand drops below `cutoff` times its largest sampled value; `scale` is a
// rough width used to step outwards. `peaks` are seeded as breakpoints.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double start,
                                 double scale, const std::vector<double>& peaks = {},
                                 double cutoff = 1e-18, const QuadOptions& opt = {});

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of `order` points.
GaussRule composite_rule(double a, double b, int panels, int order);

}  // namespace saddlerate
