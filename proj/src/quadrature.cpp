#include "saddlerate/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace saddlerate {

namespace {

// Kronrod 15-point abscissae (nonnegative half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed abscissae.
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * wgk[7];
    double resg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        resk += wgk[j] * fsum;
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
    }
    return {a, b, resk * h, std::abs((resk - resg) * h)};
}

QuadResult run(const std::function<double(double)>& f, std::vector<double> pts, const QuadOptions& opt) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::priority_queue<Segment> heap;
    double total = 0.0, err = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Segment s = gk15(f, pts[i], pts[i + 1]);
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    int count = static_cast<int>(heap.size());
    auto done = [&] { return err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (!done() && count < opt.max_intervals) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment l = gk15(f, worst.a, mid);
        Segment r = gk15(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // Re-sum to shed accumulated cancellation from the incremental updates.
    double sum = 0.0, esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    QuadResult out;
    out.value = sum;
    out.error = esum;
    out.intervals = count;
    out.converged = esum <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
    return out;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0, 0, true};
        QuadResult r = integrate(f, b, a, opt);
        r.value = -r.value;
        return r;
    }
    return run(f, {a, b}, opt);
}

QuadResult integrate_with_breaks(const std::function<double(double)>& f, double a, double b,
                                 const std::vector<double>& breaks, const QuadOptions& opt) {
    if (!(a < b)) throw std::invalid_argument("integrate_with_breaks: need a < b");
    std::vector<double> pts{a, b};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    QuadOptions o = opt;
    o.max_intervals = std::max(opt.max_intervals, static_cast<int>(pts.size()) * 4);
    return run(f, pts, o);
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f, double start, double scale,
                                 const std::vector<double>& peaks, double cutoff, const QuadOptions& opt) {
    if (!(scale > 0)) throw std::invalid_argument("integrate_to_infinity: scale must be positive");
    double peak = std::abs(f(start));
    for (double p : peaks)
        if (p > start) peak = std::max(peak, std::abs(f(p)));
    double far = start;
    for (double p : peaks) far = std::max(far, p);
    // Step outwards until the tail is negligible and no longer growing.
    double step = scale;
    double end = far + step;
    for (int i = 0; i < 200; ++i) {
        const double v = std::abs(f(end));
        peak = std::max(peak, v);
        if (v <= cutoff * peak) break;
        step *= 1.5;
        end += step;
    }
    std::vector<double> breaks;
    for (double p : peaks)
        if (p > start && p < end) breaks.push_back(p);
    if (breaks.empty()) return integrate(f, start, end, opt);
    return integrate_with_breaks(f, start, end, breaks, opt);
}

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

GaussRule composite_rule(double a, double b, int panels, int order) {
    const GaussRule base = gauss_legendre(order);
    GaussRule r;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < order; ++i) {
            r.nodes.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
            r.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return r;
}

}  // namespace saddlerate
