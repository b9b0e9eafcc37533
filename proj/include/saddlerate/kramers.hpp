#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "saddlerate/landscape.hpp"

namespace saddlerate {

// Quadratic local minimum the process starts from.
struct MinimumSpec {
    double value = 0.0;
    double hessian_det = 0.0;
    std::vector<double> eigenvalues;  // optional, informational
};

MinimumSpec minimum_from_point(const PotentialModel& model, const Vec& x);

struct QuadraticRegime {};
// Normal form -coeff y1^{2p} + sum_j lambda_j y_j^2 / 2.
struct FlatUnstableRegime {
    int p = 2;
    double coeff = 0.0;
};
// Normal form -|lambda1| y1^2 / 2 + coeff y2^{2p} + ...
struct FlatStableRegime {
    int p = 2;
    double coeff = 0.0;
};
// Normal form -|lambda1| y1^2 / 2 + r^{2p} k(phi) in the two null directions + ...
struct Codim2Regime {
    AngularFunction k = AngularFunction::constant(1.0);
    int p = 2;
};

using SaddleRegime = std::variant<QuadraticRegime, FlatUnstableRegime, FlatStableRegime, Codim2Regime>;

struct SaddleSpec {
    double value = 0.0;
    double unstable = 0.0;       // |lambda1|; unused for the flat unstable regime
    std::vector<double> stable;  // positive eigenvalues of the remaining quadratic directions
    SaddleRegime regime;

    int dimension() const;
};

struct RateResult {
    double eps = 0.0;
    double barrier = 0.0;
    double prefactor = 0.0;
    double expected_time = 0.0;  // prefactor * exp(barrier / eps)
    double log_expected_time = 0.0;
    double saddle_value = 0.0;
    double capacity = 0.0;         // includes exp(-V(z)/eps)
    double capacity_scaled = 0.0;  // capacity * exp(V(z)/eps)
    int dimension = 0;
    std::string regime_tag;
    std::string error_order;
    double error_scale = 0.0;  // error_order evaluated with unit constant

    nlohmann::json to_json() const;
};

// Numerator of the capacity formula for the mean hitting time:
// (2 pi eps)^{d/2} exp(-V(x)/eps) / sqrt(det Hess V(x)).
double laplace_numerator(const MinimumSpec& min, int dimension, double eps);

RateResult ek_classical(const MinimumSpec& min, const SaddleSpec& saddle, double eps);
RateResult ek_flat_unstable(const MinimumSpec& min, const SaddleSpec& saddle, double eps);
RateResult ek_flat_stable(const MinimumSpec& min, const SaddleSpec& saddle, double eps);
RateResult ek_codim2(const MinimumSpec& min, const SaddleSpec& saddle, double eps);
RateResult ek_rate(const MinimumSpec& min, const SaddleSpec& saddle, double eps);

// Regime and spectrum of a classified saddle. Throws std::domain_error when the
// point is not a saddle or its normal form has no rate formula (odd order, d = 2 codim2
// cubic, higher codimension).
SaddleSpec saddle_spec_from_classification(const Classification& c);

// Quadratic data of a critical point: value, |unstable eigenvalue| and the
// remaining positive eigenvalues.
struct CriticalSpectrum {
    double value = 0.0;
    double unstable = 0.0;
    std::vector<double> stable;
};

// Spectra on both sides of a symmetric pitchfork. `center` describes z, used for
// the unsplit sign of the control parameter; `split` describes the pair z+-,
// with `split_soft` the eigenvalue that vanishes at the bifurcation
// (mu2 for the transverse case, |mu1| for the longitudinal case).
struct PitchforkSpectra {
    CriticalSpectrum center;
    std::optional<CriticalSpectrum> split;
    double split_soft = 0.0;
};

// Leading-order location and curvature of the saddles created by a pitchfork.
struct PitchforkSplit {
    double offset = 0.0;    // |y| of z+- along the soft direction
    double mu = 0.0;        // soft eigenvalue at z+- (positive)
    double altitude = 0.0;  // V(z+-) - V(z)
};
// Transverse case, lambda2 < 0: offset sqrt(|lambda2|/4C4), mu2 = -2 lambda2, altitude -lambda2^2/16C4.
PitchforkSplit pitchfork_saddles(double lambda2, double c4);
// Longitudinal case, lambda1 > 0: offset sqrt(lambda1/4C4), |mu1| = 2 lambda1, altitude +lambda1^2/16C4.
PitchforkSplit longitudinal_saddles(double lambda1, double c4);

// Leading-order split spectra built from the center spectrum (other eigenvalues unchanged).
PitchforkSpectra transverse_spectra_leading_order(const CriticalSpectrum& center, double lambda2, double c4);
PitchforkSpectra longitudinal_spectra_leading_order(const CriticalSpectrum& center, double lambda1, double c4);

// Transverse pitchfork: normal form lambda1 y1^2/2 + lambda2 y2^2/2 + C4 y2^4 + ...
// center.unstable = |lambda1|, center.stable = lambda3..lambdad.
RateResult pitchfork_transverse_time(const MinimumSpec& min, const PitchforkSpectra& spectra, double lambda2,
                                     double c4, double eps);

// Longitudinal pitchfork: normal form lambda1 y1^2/2 - C4 y1^4 + ...
// center.stable = lambda2..lambdad; center.unstable is ignored.
RateResult pitchfork_longitudinal_time(const MinimumSpec& min, const PitchforkSpectra& spectra, double lambda1,
                                       double c4, double eps);

// Double-zero bifurcation with lambda2 = lambda3 and quartic r^4 k(phi).
// saddle.unstable = |lambda1|, saddle.stable = lambda4..lambdad, saddle.value = V(z).
// Valid for lambda2 >= -sqrt(eps |log eps|).
RateResult doublezero_time(const MinimumSpec& min, const CriticalSpectrum& saddle, double lambda2,
                           const AngularFunction& k, double eps);

// Gate of 2M saddles on the rim of a sombrero. mu.unstable = |mu1|, mu.value = V(z*),
// mu2 the angular and mu3 the radial eigenvalue, rest = mu4..muN.
struct SombreroSpectrum {
    double value = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu3 = 0.0;
    std::vector<double> rest;
};
RateResult sombrero_time(const MinimumSpec& min, const SombreroSpectrum& mu, int m, double c4, double eps);
// Denominator Theta_-(mu3/(8 eps C4)^{1/2}) chi(mu2 mu3/((2M)^2 8 eps C4)).
double sombrero_denominator(const SombreroSpectrum& mu, int m, double c4, double eps);

// Error scale [eps |log eps|^3 / max(|lambda|, (eps |log eps|)^{1/2})]^{1/2}.
double bifurcation_error_scale(double eps, double lambda);

}  // namespace saddlerate
