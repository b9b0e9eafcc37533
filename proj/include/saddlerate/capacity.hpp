#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "saddlerate/potentials.hpp"

namespace saddlerate {

// Box around a saddle in its eigen-coordinates: y1 in [-delta1, delta1], the
// `ball_dim` soft directions in a ball of radius delta2, and the remaining
// quadratic directions in [-delta_j, delta_j].
struct BoxSpec {
    double delta1 = 0.0;
    double delta2 = 0.0;
    int ball_dim = 0;
    std::vector<double> deltaj;
    std::vector<std::string> warnings;  // threshold equations that could not be met

    nlohmann::json to_json() const;
};

// Composite Gauss-Legendre resolution used on every axis.
struct GridSpec {
    int panels = 24;
    int order = 8;

    GridSpec coarser() const { return {std::max(1, panels / 2), order}; }
    nlohmann::json to_json() const;
};

// All capacity values are reported relative to the saddle level: the capacity
// itself is value * exp(-saddle_value / eps).
struct CapacityEstimate {
    std::string method;
    double eps = 0.0;
    double value = 0.0;
    double saddle_value = 0.0;
    double error_estimate = 0.0;  // change against the half-resolution grid
    BoxSpec box;
    GridSpec grid;
    std::vector<std::string> notes;  // approximations behind the value

    nlohmann::json to_json() const;
};

// Saddle coordinates: axes[:, 0] is the eigenvector of the smallest eigenvalue,
// followed by the remaining zero-eigenvalue directions (the ball), then the
// positive ones.
struct SaddleFrame {
    Vec location;
    double value = 0.0;
    Mat axes;
    std::vector<double> eigenvalues;
    int ball_dim = 0;
};
SaddleFrame saddle_frame(const PotentialModel& model, const Vec& z, double zero_tol_factor = 1e-6);

// Box from the threshold equations u1(delta1) = d eps|log eps| along y1 and
// u2 = 2 d eps|log eps| on the ball boundary; quadratic widths 2 sqrt(d eps|log eps| / lambda_j).
BoxSpec default_box(const PotentialModel& model, const SaddleFrame& frame, double eps);

// Dirichlet form of the trial function f(y1) = int_{y1}^{delta1} e^{V(t,0)/eps} dt / int e^{V(t,0)/eps} dt
// over the box. An upper bound for the capacity up to the exponentially small outside part.
CapacityEstimate dirichlet_upper_bound(const PotentialModel& model, const SaddleFrame& frame, double eps,
                                       const BoxSpec& box, const GridSpec& grid = {});

// eps * int over transverse coordinates of [int_{-delta1}^{delta1} e^{V(t, y_perp)/eps} dt]^{-1}:
// the one-dimensional capacity of each fiber, which bounds the box Dirichlet form from below.
CapacityEstimate fiber_lower_bound(const PotentialModel& model, const SaddleFrame& frame, double eps,
                                   const BoxSpec& box, const GridSpec& grid = {});

// eps * [int_{B_delta2} e^{-u2/eps}] / [int_{-delta1}^{delta1} e^{-u1/eps}] * prod_j sqrt(2 pi eps / lambda_j).
// u2 acts on the ball coordinates (ball_dim of 0, 1 or 2).
CapacityEstimate reduced_capacity(const std::function<double(double)>& u1,
                                  const std::function<double(const Vec&)>& u2, int ball_dim,
                                  const std::vector<double>& lambdas, double eps, const BoxSpec& box);

// Exact one-dimensional capacity eps / int_a^b e^{V/eps}, reported relative to max_{[a,b]} V.
CapacityEstimate capacity_1d_exact(const std::function<double(double)>& v, double a, double b, double eps);

}  // namespace saddlerate
