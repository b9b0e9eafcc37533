#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace saddlerate {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dense derivative tensor of order k in dimension d, stored row-major with
// flat index i_1 d^{k-1} + ... + i_k.
struct DerivativeTensor {
    int dim = 0;
    int order = 0;
    std::vector<double> data;

    DerivativeTensor() = default;
    DerivativeTensor(int d, int k);

    double& at(std::initializer_list<int> idx);
    double at(std::initializer_list<int> idx) const;

    // Full contraction with one direction per slot.
    double contract(const std::vector<Vec>& dirs) const;
    // Contraction of the first order-1 slots with `dirs`, leaving the last slot free.
    Vec contract_partial(const std::vector<Vec>& dirs) const;
};

class PotentialModel {
public:
    using ValueFn = std::function<double(const Vec&)>;
    using GradientFn = std::function<Vec(const Vec&)>;
    using HessianFn = std::function<Mat(const Vec&)>;
    using TensorFn = std::function<DerivativeTensor(const Vec&)>;

    PotentialModel() = default;
    PotentialModel(int dim, ValueFn value, std::string name = "closure");

    PotentialModel& with_gradient(GradientFn g);
    PotentialModel& with_hessian(HessianFn h);
    PotentialModel& with_third(TensorFn t);
    PotentialModel& with_fourth(TensorFn t);
    PotentialModel& set_confining(bool c);

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    bool confining() const { return confining_; }
    // Highest derivative order supplied in closed form (0 = value only).
    int exact_order() const;

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;
    DerivativeTensor third(const Vec& x) const;
    DerivativeTensor fourth(const Vec& x) const;

    // Finite-difference step for an order-k derivative at x.
    static double fd_step(int k, const Vec& x);

private:
    DerivativeTensor tensor(int k, const Vec& x, double h) const;
    std::optional<DerivativeTensor> exact_tensor(int k, const Vec& x) const;

    int dim_ = 0;
    std::string name_;
    bool confining_ = false;
    ValueFn value_;
    GradientFn gradient_;
    HessianFn hessian_;
    TensorFn third_;
    TensorFn fourth_;
};

struct Monomial {
    std::vector<int> exponents;
    double coeff = 0.0;
};

class Polynomial {
public:
    Polynomial(int dim, std::vector<Monomial> terms);

    int dim() const { return dim_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    int degree() const;

    double value(const Vec& x) const;
    // Mixed partial derivative with the given per-coordinate derivative orders.
    double partial(const Vec& x, const std::vector<int>& orders) const;
    DerivativeTensor tensor(const Vec& x, int k) const;

    // Polynomial in the rotated coordinates y, x = Q y.
    Polynomial rotated(const Mat& q) const;

    PotentialModel model(std::string name = "polynomial") const;

    nlohmann::json to_json() const;
    static Polynomial from_json(const nlohmann::json& j);

private:
    int dim_;
    std::vector<Monomial> terms_;
};

// Periodic chain sum_i U(x_i) + (gamma/4) sum_i (x_i - x_{i+1})^2 with U = x^4/4 - x^2/2.
PotentialModel chain(int n, double gamma);

// Two-particle chain in rotated coordinates:
// -y1^2/2 - (1-2 gamma) y2^2/2 + (y1^4 + 6 y1^2 y2^2 + y2^4)/8.
Polynomial rotated2(double gamma);

// One-dimensional double well x^4/4 - x^2/2.
Polynomial double_well();

// Hessian eigenvalues of the chain at the origin, eta_k = -1 + 2 gamma sin^2(k pi/N), k = 0..N-1.
std::vector<double> chain_origin_spectrum(int n, double gamma);
// Hessian eigenvalues at the minima +-(1,...,1): nu_k = 2 + 2 gamma sin^2(k pi/N), k = 0..N-1.
std::vector<double> chain_minimum_spectrum(int n, double gamma);
// eta_k for k = -floor((N-1)/2) .. floor(N/2), in that order (N values).
std::vector<double> fourier_eigenvalues(int n, double gamma);
// nu_k sorted ascending: 2, then the pairs 2 + 2 gamma sin^2(k pi/N). Needs N >= 3.
std::vector<double> uniform_minimum_spectrum(int n, double gamma);
// Coupling at which eta_1 vanishes: 1 / (2 sin^2(pi/N)). Needs N >= 3.
double critical_coupling(int n);
// Orthonormal real Fourier vectors for modes 0, 1 (cos), 1 (sin), 2 (cos), ...
Mat chain_fourier_basis(int n);

// Builds a model from a JSON document: a polynomial {"dimension", "terms"} or a
// named family {"family": "chain"|"rotated2"|"double_well", ...}.
PotentialModel model_from_json(const nlohmann::json& j);
// Resolves a built-in name with key=value parameters.
PotentialModel model_from_name(const std::string& name, const std::vector<std::pair<std::string, double>>& params);

}  // namespace saddlerate
