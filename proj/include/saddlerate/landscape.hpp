#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "saddlerate/potentials.hpp"

namespace saddlerate {

struct StationaryPoint {
    Vec location;
    double value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    int seed_index = 0;
};

struct SeedFailure {
    int seed_index = 0;
    std::string reason;
};

struct StationarySearch {
    std::vector<StationaryPoint> points;  // deduplicated
    std::vector<SeedFailure> failures;
};

// Newton iteration on the gradient from each seed. Singular Hessians are handled
// with a least-squares step, so degenerate points still converge (linearly).
StationarySearch find_stationary_points(const PotentialModel& model, const std::vector<Vec>& seeds,
                                        double grad_tol = 1e-10, int max_iter = 200);

// Single Newton solve; throws std::runtime_error on non-convergence.
StationaryPoint refine_stationary_point(const PotentialModel& model, const Vec& seed, double grad_tol = 1e-10,
                                        int max_iter = 200);

enum class CriticalTag { LocalMinimum, NondegenerateSaddle, MultipleNegative, Codim1, Codim2, HigherCodim };
enum class Verdict { Saddle, NotSaddle, Undetermined };

std::string to_string(CriticalTag t);
std::string to_string(Verdict v);

// Sorted Hessian eigenpairs; each eigenvector is oriented so that its first
// nonzero component is positive.
struct EigenFrame {
    std::vector<double> values;
    Mat vectors;  // columns
    double zero_tol = 0.0;
};
EigenFrame eigen_frame(const Mat& hessian, double zero_tol_factor = 1e-6);

// Homogeneous binary form sum_i coeffs[i] u^{n-i} v^i.
struct BinaryForm {
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double operator()(double u, double v) const;
};

// Angular profile k(phi) = form(cos phi, sin phi) of a homogeneous form, or a constant.
class AngularFunction {
public:
    explicit AngularFunction(BinaryForm form);
    static AngularFunction constant(double value);

    double operator()(double phi) const;
    double k_minus() const { return k_minus_; }
    double k_plus() const { return k_plus_; }
    bool is_constant() const { return constant_; }
    // Degree of the underlying form, or 0 for a constant.
    int degree() const { return constant_ ? 0 : form_.degree(); }
    // int_0^{2 pi} k(phi)^{-s} dphi; requires k_minus > 0.
    double inverse_power_integral(double s) const;

private:
    AngularFunction() = default;
    void locate_extrema();

    BinaryForm form_;
    bool constant_ = false;
    double value_ = 0.0;
    double k_minus_ = 0.0;
    double k_plus_ = 0.0;
};

struct Codim1Coefficients {
    int soft_index = 0;           // index of the zero eigenvalue
    int distinguished_index = 0;  // index of the distinguished nonzero eigenvalue
    double lambda2 = 0.0;         // distinguished nonzero eigenvalue
    double c3 = 0.0;
    double c4 = 0.0;
    // Filled by the higher-order probe when c3 and c4 both vanish.
    std::optional<int> probed_order;
    std::optional<double> probed_coeff;
};

struct Codim2Form {
    int order = 0;  // 3 or 4, the degree of the first non-vanishing form on the null space
    BinaryForm form;
    std::vector<int> null_indices;     // indices of the two zero eigenvalues
    std::optional<double> lambda3;     // distinguished nonzero eigenvalue, absent when d = 2
    std::string discriminant_shape;    // simple_real_roots | positive_definite | negative_definite | non_simple
    int real_roots = 0;                // projective count
    std::optional<double> k_minus;     // extrema of the quartic on the unit circle
    std::optional<double> k_plus;
};

struct HigherCodimReport {
    int null_dimension = 0;
    int order = 0;          // degree of the sampled form on the null space
    double form_min = 0.0;  // extrema of that form on sampled unit vectors
    double form_max = 0.0;
};

struct ClassifyOptions {
    double zero_tol_factor = 1e-6;
    // Relative threshold below which C3, C4 or a null-space form counts as vanishing.
    double coeff_tol = 1e-8;
    bool probe_higher_order = false;
};

struct Classification {
    Vec location;
    double value = 0.0;
    std::vector<double> eigenvalues;
    Mat eigenvectors;
    CriticalTag tag = CriticalTag::LocalMinimum;
    Verdict verdict = Verdict::Undetermined;
    std::optional<Codim1Coefficients> codim1;
    std::optional<Codim2Form> codim2;
    std::optional<HigherCodimReport> higher;
    std::string note;

    nlohmann::json to_json() const;
};

Classification classify(const PotentialModel& model, const Vec& point, const ClassifyOptions& opt = {});

// C3 and C4 along the soft direction of a codimension-one point.
Codim1Coefficients codim1_coefficients(const PotentialModel& model, const Vec& point, const EigenFrame& frame,
                                       int soft_index);

// Lowest non-vanishing form on the two-dimensional null space, including the
// second-order correction from cubic couplings to the nondegenerate directions.
Codim2Form codim2_normal_form(const PotentialModel& model, const Vec& point, const EigenFrame& frame,
                              const std::vector<int>& null_indices, double coeff_tol = 1e-8);

// Real-root structure of the dehomogenized form.
struct RootAnalysis {
    int real_roots = 0;  // projective count, infinity included
    bool all_simple = true;
    int sign_if_rootless = 0;
};
RootAnalysis analyze_roots(const BinaryForm& form);

struct GridBox {
    double xmin = -2, xmax = 2, ymin = -2, ymax = 2;
    int nx = 401, ny = 401;
};

struct GateResult {
    double height = 0.0;
    std::vector<Vec> gate_cells;
    std::vector<Vec> path;
    // True when the merge level reaches the lowest boundary value, so paths
    // leaving the box could lower the result.
    bool limited_by_box = false;
};

// Communication height between a and b on a grid: ascending sweep with
// union-find over 8-connected cells.
GateResult communication_height_2d(const PotentialModel& model, const Vec& a, const Vec& b, const GridBox& box);

}  // namespace saddlerate
