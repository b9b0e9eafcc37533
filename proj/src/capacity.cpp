#include "saddlerate/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "saddlerate/landscape.hpp"
#include "saddlerate/quadrature.hpp"

namespace saddlerate {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Node {
    Vec y;  // transverse coordinates y2..yd
    double w;
};

void check_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::domain_error("eps must be positive");
}

void check_box(const SaddleFrame& f, const BoxSpec& box) {
    const int d = static_cast<int>(f.eigenvalues.size());
    if (d > 3) throw std::invalid_argument("capacity quadrature supports d <= 3");
    if (box.ball_dim != f.ball_dim) throw std::invalid_argument("box ball dimension differs from the saddle frame");
    if (1 + box.ball_dim + static_cast<int>(box.deltaj.size()) != d)
        throw std::invalid_argument("box does not cover every saddle direction");
    if (!(box.delta1 > 0.0) || (box.ball_dim > 0 && !(box.delta2 > 0.0)))
        throw std::invalid_argument("box half-widths must be positive");
    for (double dj : box.deltaj)
        if (!(dj > 0.0)) throw std::invalid_argument("box half-widths must be positive");
}

// Tensor rule over the transverse part of the box.
std::vector<Node> transverse_rule(const BoxSpec& box, const GridSpec& g) {
    std::vector<Node> nodes{{Vec(0), 1.0}};
    auto extend = [&](const GaussRule& r) {
        std::vector<Node> next;
        for (const Node& n : nodes)
            for (size_t i = 0; i < r.nodes.size(); ++i) {
                Vec y(n.y.size() + 1);
                y.head(n.y.size()) = n.y;
                y(n.y.size()) = r.nodes[i];
                next.push_back({y, n.w * r.weights[i]});
            }
        nodes = std::move(next);
    };
    if (box.ball_dim == 1) {
        extend(composite_rule(-box.delta2, box.delta2, g.panels, g.order));
    } else if (box.ball_dim == 2) {
        const GaussRule rr = composite_rule(0.0, box.delta2, g.panels, g.order);
        const GaussRule rp = composite_rule(0.0, two_pi, g.panels, g.order);
        std::vector<Node> disc;
        for (size_t i = 0; i < rr.nodes.size(); ++i)
            for (size_t j = 0; j < rp.nodes.size(); ++j) {
                Vec y(2);
                y << rr.nodes[i] * std::cos(rp.nodes[j]), rr.nodes[i] * std::sin(rp.nodes[j]);
                disc.push_back({y, rr.weights[i] * rp.weights[j] * rr.nodes[i]});
            }
        nodes = std::move(disc);
    } else if (box.ball_dim > 2) {
        throw std::invalid_argument("ball dimension above two is not supported");
    }
    for (double dj : box.deltaj) extend(composite_rule(-dj, dj, g.panels, g.order));
    return nodes;
}

// Potential relative to the saddle level at eigen-coordinates (t, y_perp).
struct LocalPotential {
    const PotentialModel& model;
    const SaddleFrame& f;
    Vec x;
    double operator()(double t, const Vec& yperp) {
        x = f.location + f.axes.col(0) * t;
        for (int i = 0; i < yperp.size(); ++i) x += f.axes.col(i + 1) * yperp(i);
        return model.value(x) - f.value;
    }
};

double upper_value(const PotentialModel& model, const SaddleFrame& f, double eps, const BoxSpec& box,
                   const GridSpec& g) {
    LocalPotential v{model, f, Vec()};
    const GaussRule r1 = composite_rule(-box.delta1, box.delta1, g.panels, g.order);
    const Vec origin = Vec::Zero(static_cast<int>(f.eigenvalues.size()) - 1);
    std::vector<double> axis(r1.nodes.size());
    double denom = 0.0;
    for (size_t i = 0; i < r1.nodes.size(); ++i) {
        axis[i] = v(r1.nodes[i], origin);
        denom += r1.weights[i] * std::exp(axis[i] / eps);
    }
    double sum = 0.0;
    for (const Node& n : transverse_rule(box, g)) {
        double fiber = 0.0;
        for (size_t i = 0; i < r1.nodes.size(); ++i)
            fiber += r1.weights[i] * std::exp((2.0 * axis[i] - v(r1.nodes[i], n.y)) / eps);
        sum += n.w * fiber;
    }
    return eps * sum / (denom * denom);
}

double lower_value(const PotentialModel& model, const SaddleFrame& f, double eps, const BoxSpec& box,
                   const GridSpec& g) {
    LocalPotential v{model, f, Vec()};
    const GaussRule r1 = composite_rule(-box.delta1, box.delta1, g.panels, g.order);
    std::vector<double> expo(r1.nodes.size());
    double sum = 0.0;
    for (const Node& n : transverse_rule(box, g)) {
        double m = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < r1.nodes.size(); ++i) {
            expo[i] = v(r1.nodes[i], n.y) / eps;
            m = std::max(m, expo[i]);
        }
        double fiber = 0.0;
        for (size_t i = 0; i < r1.nodes.size(); ++i) fiber += r1.weights[i] * std::exp(expo[i] - m);
        sum += n.w * std::exp(-m) / fiber;
    }
    return eps * sum;
}

// Smallest t > 0 with g(t) >= level, marching geometrically and bisecting. If g
// turns down before reaching the level, the location of its largest value is used.
double threshold_radius(const std::function<double(double)>& g, double level, double start, bool& reached) {
    reached = true;
    double prev = 0.0, t = start, best_t = start, best_g = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 400; ++i) {
        const double gt = g(t);
        if (gt >= level) {
            double lo = prev, hi = t;
            for (int k = 0; k < 80; ++k) {
                const double mid = 0.5 * (lo + hi);
                (g(mid) >= level ? hi : lo) = mid;
            }
            return hi;
        }
        if (gt > best_g) {
            best_g = gt;
            best_t = t;
        } else if (gt < best_g - 1e-12 && t > 2.0 * best_t) {
            reached = false;
            return best_t;
        }
        prev = t;
        t *= 1.05;
        if (t > 1e4) break;
    }
    reached = false;
    if (best_g > 0.0) return best_t;
    throw std::runtime_error("default_box: potential never reaches the threshold level");
}

}  // namespace

nlohmann::json BoxSpec::to_json() const {
    return {{"delta1", delta1}, {"delta2", delta2}, {"ball_dim", ball_dim}, {"deltaj", deltaj}, {"warnings", warnings}};
}

nlohmann::json GridSpec::to_json() const { return {{"panels", panels}, {"order", order}}; }

nlohmann::json CapacityEstimate::to_json() const {
    return {{"method", method},
            {"eps", eps},
            {"value", value},
            {"saddle_value", saddle_value},
            {"error_estimate", error_estimate},
            {"notes", notes},
            {"box", box.to_json()},
            {"grid", grid.to_json()}};
}

SaddleFrame saddle_frame(const PotentialModel& model, const Vec& z, double zero_tol_factor) {
    const EigenFrame ef = eigen_frame(model.hessian(z), zero_tol_factor);
    const int d = model.dim();
    std::vector<int> order{0};
    for (int i = 1; i < d; ++i)
        if (std::abs(ef.values[i]) <= ef.zero_tol) order.push_back(i);
    const int ball = static_cast<int>(order.size()) - 1;
    for (int i = 1; i < d; ++i)
        if (std::abs(ef.values[i]) > ef.zero_tol) order.push_back(i);
    SaddleFrame f;
    f.location = z;
    f.value = model.value(z);
    f.axes = Mat(d, d);
    for (int c = 0; c < d; ++c) {
        f.axes.col(c) = ef.vectors.col(order[c]);
        f.eigenvalues.push_back(ef.values[order[c]]);
    }
    f.ball_dim = ball;
    for (int c = 1 + ball; c < d; ++c)
        if (!(f.eigenvalues[c] > 0.0)) throw std::domain_error("saddle_frame: more than one unstable direction");
    return f;
}

BoxSpec default_box(const PotentialModel& model, const SaddleFrame& f, double eps) {
    check_eps(eps);
    const int d = static_cast<int>(f.eigenvalues.size());
    const double level = d * eps * std::abs(std::log(eps));
    auto along = [&](const Vec& dir) {
        return [&model, &f, dir](double t) { return model.value(f.location + t * dir) - f.value; };
    };
    BoxSpec box;
    box.ball_dim = f.ball_dim;
    const Vec e1 = f.axes.col(0);
    auto u1p = along(e1), u1m = along(-e1);
    bool ok_p = true, ok_m = true;
    box.delta1 = std::max(threshold_radius([&](double t) { return -u1p(t); }, level, 1e-3, ok_p),
                          threshold_radius([&](double t) { return -u1m(t); }, level, 1e-3, ok_m));
    if (!ok_p || !ok_m)
        box.warnings.push_back("u1 never reaches d eps|log eps| along the unstable axis; delta1 set at its maximum");
    bool ball_ok = true;
    if (f.ball_dim == 1) {
        const Vec e2 = f.axes.col(1);
        auto p = along(e2), m = along(-e2);
        bool a = true, b = true;
        box.delta2 = std::max(threshold_radius(p, 2.0 * level, 1e-3, a), threshold_radius(m, 2.0 * level, 1e-3, b));
        ball_ok = a && b;
    } else if (f.ball_dim == 2) {
        for (int k = 0; k < 64; ++k) {
            const double phi = two_pi * k / 64.0;
            const Vec dir = std::cos(phi) * f.axes.col(1) + std::sin(phi) * f.axes.col(2);
            bool a = true;
            box.delta2 = std::max(box.delta2, threshold_radius(along(dir), 2.0 * level, 1e-3, a));
            ball_ok = ball_ok && a;
        }
    }
    if (!ball_ok) box.warnings.push_back("u2 never reaches 2 d eps|log eps| on the ball; delta2 set at its maximum");
    for (int c = 1 + f.ball_dim; c < d; ++c) box.deltaj.push_back(2.0 * std::sqrt(level / f.eigenvalues[c]));
    return box;
}

CapacityEstimate dirichlet_upper_bound(const PotentialModel& model, const SaddleFrame& f, double eps,
                                       const BoxSpec& box, const GridSpec& grid) {
    check_eps(eps);
    check_box(f, box);
    CapacityEstimate e;
    e.method = "dirichlet_upper";
    e.notes = {"contribution from outside the box dropped"};
    e.eps = eps;
    e.value = upper_value(model, f, eps, box, grid);
    e.error_estimate = std::abs(e.value - upper_value(model, f, eps, box, grid.coarser()));
    e.saddle_value = f.value;
    e.box = box;
    e.grid = grid;
    return e;
}

CapacityEstimate fiber_lower_bound(const PotentialModel& model, const SaddleFrame& f, double eps, const BoxSpec& box,
                                   const GridSpec& grid) {
    check_eps(eps);
    check_box(f, box);
    CapacityEstimate e;
    e.method = "fiber_lower";
    e.notes = {"contribution from outside the box dropped", "boundary values fixed at 1 and 0"};
    e.eps = eps;
    e.value = lower_value(model, f, eps, box, grid);
    e.error_estimate = std::abs(e.value - lower_value(model, f, eps, box, grid.coarser()));
    e.saddle_value = f.value;
    e.box = box;
    e.grid = grid;
    return e;
}

CapacityEstimate reduced_capacity(const std::function<double(double)>& u1, const std::function<double(const Vec&)>& u2,
                                  int ball_dim, const std::vector<double>& lambdas, double eps, const BoxSpec& box) {
    check_eps(eps);
    if (ball_dim < 0 || ball_dim > 2) throw std::invalid_argument("reduced_capacity: ball dimension must be 0, 1 or 2");
    const QuadOptions opt{1e-14, 1e-12, 400};
    const double den =
        integrate_with_breaks([&](double t) { return std::exp(-u1(t) / eps); }, -box.delta1, box.delta1, {0.0}, opt).value;
    double num = 1.0;
    if (ball_dim == 1) {
        num = integrate_with_breaks(
                  [&](double y) {
                      Vec v(1);
                      v << y;
                      return std::exp(-u2(v) / eps);
                  },
                  -box.delta2, box.delta2, {0.0}, opt)
                  .value;
    } else if (ball_dim == 2) {
        auto radial = [&](double phi) {
            return integrate(
                       [&](double r) {
                           Vec v(2);
                           v << r * std::cos(phi), r * std::sin(phi);
                           return r * std::exp(-u2(v) / eps);
                       },
                       0.0, box.delta2, opt)
                .value;
        };
        std::vector<double> breaks;
        for (int i = 1; i < 8; ++i) breaks.push_back(i * two_pi / 8.0);
        num = integrate_with_breaks(radial, 0.0, two_pi, breaks, {1e-13, 1e-10, 200}).value;
    }
    double gauss = 1.0;
    for (double l : lambdas) {
        if (!(l > 0.0)) throw std::domain_error("reduced_capacity: quadratic eigenvalues must be positive");
        gauss *= std::sqrt(two_pi * eps / l);
    }
    CapacityEstimate e;
    e.method = "reduced_integral";
    e.eps = eps;
    e.value = eps * num / den * gauss;
    e.box = box;
    return e;
}

CapacityEstimate capacity_1d_exact(const std::function<double(double)>& v, double a, double b, double eps) {
    check_eps(eps);
    if (!(a < b)) throw std::invalid_argument("capacity_1d_exact: need a < b");
    // Locate the top of the barrier for scaling and as a breakpoint.
    const int n = 4001;
    double top = a, vmax = v(a);
    for (int i = 1; i < n; ++i) {
        const double x = a + (b - a) * i / (n - 1);
        const double vx = v(x);
        if (vx > vmax) { vmax = vx; top = x; }
    }
    const double h = (b - a) / (n - 1);
    double lo = std::max(a, top - h), hi = std::min(b, top + h);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (v(m1) < v(m2)) lo = m1;
        else hi = m2;
    }
    top = 0.5 * (lo + hi);
    vmax = std::max(vmax, v(top));
    const double w = std::sqrt(eps);
    const std::vector<double> breaks{top - 4 * w, top - w, top, top + w, top + 4 * w};
    const double integral =
        integrate_with_breaks([&](double x) { return std::exp((v(x) - vmax) / eps); }, a, b, breaks, {1e-15, 1e-13, 400})
            .value;
    CapacityEstimate e;
    e.method = "exact_1d";
    e.eps = eps;
    e.value = eps / integral;
    e.saddle_value = vmax;
    e.box.delta1 = 0.5 * (b - a);
    return e;
}

}  // namespace saddlerate
