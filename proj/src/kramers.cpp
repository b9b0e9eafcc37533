#include "saddlerate/kramers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "saddlerate/quadrature.hpp"
#include "saddlerate/special_functions.hpp"

namespace saddlerate {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::domain_error(msg);
}

void check_eps(double eps) { require(eps > 0.0 && std::isfinite(eps), "eps must be positive"); }

void check_min(const MinimumSpec& m) {
    require(m.hessian_det > 0.0 && std::isfinite(m.hessian_det), "minimum Hessian determinant must be positive");
}

double product(const std::vector<double>& v, const char* what) {
    double p = 1.0;
    for (double x : v) {
        require(x > 0.0, std::string(what) + " eigenvalues must be positive");
        p *= x;
    }
    return p;
}

double abs_log(double eps) { return std::abs(std::log(eps)); }

// Error scale eps^{1/2p} |log eps|^{(2p+1)/2p}.
double flat_error(double eps, int p) {
    return std::pow(eps, 1.0 / (2.0 * p)) * std::pow(abs_log(eps), (2.0 * p + 1.0) / (2.0 * p));
}

std::string flat_error_label(int p) {
    std::ostringstream s;
    s << "eps^(1/" << 2 * p << ")|log eps|^(" << 2 * p + 1 << "/" << 2 * p << ")";
    return s.str();
}

RateResult finish(const MinimumSpec& min, double saddle_value, double prefactor, double capacity_scaled, int d,
                  double eps, std::string tag, std::string err_label, double err_scale) {
    RateResult r;
    r.eps = eps;
    r.barrier = saddle_value - min.value;
    r.prefactor = prefactor;
    r.log_expected_time = std::log(prefactor) + r.barrier / eps;
    r.expected_time = prefactor * std::exp(r.barrier / eps);
    r.saddle_value = saddle_value;
    r.capacity_scaled = capacity_scaled;
    r.capacity = capacity_scaled * std::exp(-saddle_value / eps);
    r.dimension = d;
    r.regime_tag = std::move(tag);
    r.error_order = std::move(err_label);
    r.error_scale = err_scale;
    return r;
}

}  // namespace

int SaddleSpec::dimension() const {
    const int n = static_cast<int>(stable.size());
    if (std::holds_alternative<QuadraticRegime>(regime)) return 1 + n;
    if (std::holds_alternative<FlatUnstableRegime>(regime)) return 1 + n;
    if (std::holds_alternative<FlatStableRegime>(regime)) return 2 + n;
    return 3 + n;
}

MinimumSpec minimum_from_point(const PotentialModel& model, const Vec& x) {
    const EigenFrame f = eigen_frame(model.hessian(x));
    MinimumSpec m;
    m.value = model.value(x);
    m.eigenvalues = f.values;
    m.hessian_det = 1.0;
    for (double v : f.values) {
        if (!(v > f.zero_tol)) throw std::domain_error("minimum_from_point: Hessian is not positive definite");
        m.hessian_det *= v;
    }
    return m;
}

double laplace_numerator(const MinimumSpec& min, int d, double eps) {
    return std::pow(two_pi * eps, 0.5 * d) * std::exp(-min.value / eps) / std::sqrt(min.hessian_det);
}

double bifurcation_error_scale(double eps, double lambda) {
    const double l = abs_log(eps);
    return std::sqrt(eps * l * l * l / std::max(std::abs(lambda), std::sqrt(eps * l)));
}

RateResult ek_classical(const MinimumSpec& min, const SaddleSpec& s, double eps) {
    check_eps(eps);
    check_min(min);
    require(std::holds_alternative<QuadraticRegime>(s.regime), "ek_classical needs a quadratic saddle");
    require(s.unstable > 0.0, "unstable eigenvalue magnitude must be positive");
    const double prod = product(s.stable, "stable");
    const int d = s.dimension();
    const double pref = two_pi * std::sqrt(prod / (s.unstable * min.hessian_det));
    const double cap = std::sqrt(std::pow(two_pi * eps, d) * s.unstable / prod) / two_pi;
    const double l = abs_log(eps);
    return finish(min, s.value, pref, cap, d, eps, "quadratic", "eps^(1/2)|log eps|^(3/2)", std::sqrt(eps) * std::pow(l, 1.5));
}

RateResult ek_flat_unstable(const MinimumSpec& min, const SaddleSpec& s, double eps) {
    check_eps(eps);
    check_min(min);
    const auto* reg = std::get_if<FlatUnstableRegime>(&s.regime);
    require(reg != nullptr, "ek_flat_unstable needs a flat unstable saddle");
    require(reg->p >= 2, "flat regimes need p >= 2");
    require(reg->coeff > 0.0, "flat unstable coefficient must be positive");
    const int p = reg->p;
    const double prod = product(s.stable, "stable");
    const int d = s.dimension();
    const double g = std::tgamma(1.0 / (2.0 * p));
    const double croot = std::pow(reg->coeff, 1.0 / (2.0 * p));
    const double pref = g / (p * croot) * std::sqrt(two_pi * prod / min.hessian_det) * std::pow(eps, -(p - 1.0) / (2.0 * p));
    const double cap = p * croot / g * std::sqrt(std::pow(two_pi, d - 1) / prod) *
                       std::pow(eps, 0.5 * d + (p - 1.0) / (2.0 * p));
    return finish(min, s.value, pref, cap, d, eps, "flat_unstable", flat_error_label(p), flat_error(eps, p));
}

RateResult ek_flat_stable(const MinimumSpec& min, const SaddleSpec& s, double eps) {
    check_eps(eps);
    check_min(min);
    const auto* reg = std::get_if<FlatStableRegime>(&s.regime);
    require(reg != nullptr, "ek_flat_stable needs a flat stable saddle");
    require(reg->p >= 2, "flat regimes need p >= 2");
    require(reg->coeff > 0.0, "flat stable coefficient must be positive");
    require(s.unstable > 0.0, "unstable eigenvalue magnitude must be positive");
    const int p = reg->p;
    const double prod = product(s.stable, "stable");
    const int d = s.dimension();
    const double g = std::tgamma(1.0 / (2.0 * p));
    const double croot = std::pow(reg->coeff, 1.0 / (2.0 * p));
    const double pref = p * croot / g * std::sqrt(std::pow(two_pi, 3) * prod / (s.unstable * min.hessian_det)) *
                        std::pow(eps, (p - 1.0) / (2.0 * p));
    const double cap = g / (p * croot) * std::sqrt(std::pow(two_pi, d - 3) * s.unstable / prod) *
                       std::pow(eps, 0.5 * d - (p - 1.0) / (2.0 * p));
    return finish(min, s.value, pref, cap, d, eps, "flat_stable", flat_error_label(p), flat_error(eps, p));
}

RateResult ek_codim2(const MinimumSpec& min, const SaddleSpec& s, double eps) {
    check_eps(eps);
    check_min(min);
    const auto* reg = std::get_if<Codim2Regime>(&s.regime);
    require(reg != nullptr, "ek_codim2 needs a codimension-two saddle");
    require(reg->p >= 2, "codimension-two regime needs p >= 2");
    require(reg->k.is_constant() || reg->k.degree() == 2 * reg->p, "angular function degree must equal 2p");
    require(reg->k.k_minus() > 0.0, "angular function must be positive (K_- > 0)");
    require(s.unstable > 0.0, "unstable eigenvalue magnitude must be positive");
    const int p = reg->p;
    const double prod = product(s.stable, "stable");
    const int d = s.dimension();
    const double integral = reg->k.inverse_power_integral(1.0 / p);
    const double g = std::tgamma(1.0 / p);
    const double pref = 2.0 * p / (g * integral) * std::sqrt(std::pow(two_pi, 4) * prod / (s.unstable * min.hessian_det)) *
                        std::pow(eps, (p - 1.0) / p);
    const double cap = g * integral / (2.0 * p) * std::sqrt(std::pow(two_pi, d - 4) * s.unstable / prod) *
                       std::pow(eps, 0.5 * d - (p - 1.0) / p);
    return finish(min, s.value, pref, cap, d, eps, "codim2", flat_error_label(p), flat_error(eps, p));
}

RateResult ek_rate(const MinimumSpec& min, const SaddleSpec& s, double eps) {
    if (std::holds_alternative<QuadraticRegime>(s.regime)) return ek_classical(min, s, eps);
    if (std::holds_alternative<FlatUnstableRegime>(s.regime)) return ek_flat_unstable(min, s, eps);
    if (std::holds_alternative<FlatStableRegime>(s.regime)) return ek_flat_stable(min, s, eps);
    return ek_codim2(min, s, eps);
}

SaddleSpec saddle_spec_from_classification(const Classification& c) {
    require(c.verdict == Verdict::Saddle, "point is not classified as a saddle (" + to_string(c.tag) + ", " +
                                              to_string(c.verdict) + ")");
    SaddleSpec s;
    s.value = c.value;
    const auto& ev = c.eigenvalues;
    auto rest_without = [&](const std::vector<int>& skip) {
        std::vector<double> out;
        for (int i = 0; i < static_cast<int>(ev.size()); ++i)
            if (std::find(skip.begin(), skip.end(), i) == skip.end()) out.push_back(ev[i]);
        return out;
    };
    switch (c.tag) {
        case CriticalTag::NondegenerateSaddle:
            s.unstable = -ev[0];
            s.stable.assign(ev.begin() + 1, ev.end());
            s.regime = QuadraticRegime{};
            return s;
        case CriticalTag::Codim1: {
            const Codim1Coefficients& k = *c.codim1;
            int p = 2;
            double coeff = k.c4;
            if (k.probed_order) {
                require(*k.probed_order % 2 == 0, "odd leading order along the soft direction");
                p = *k.probed_order / 2;
                coeff = *k.probed_coeff;
            }
            std::vector<double> others = rest_without({k.soft_index});
            if (!others.empty() && others.front() < 0.0) {
                s.unstable = -others.front();
                s.stable.assign(others.begin() + 1, others.end());
                s.regime = FlatStableRegime{p, coeff};
            } else {
                s.stable = others;
                s.regime = FlatUnstableRegime{p, -coeff};
            }
            return s;
        }
        case CriticalTag::Codim2: {
            const Codim2Form& f = *c.codim2;
            require(f.order == 4, "codimension-two rate needs a quartic null-space form");
            std::vector<double> others = rest_without(f.null_indices);
            require(!others.empty() && others.front() < 0.0, "codimension-two rate needs an unstable direction");
            s.unstable = -others.front();
            s.stable.assign(others.begin() + 1, others.end());
            s.regime = Codim2Regime{AngularFunction(f.form), 2};
            return s;
        }
        default:
            break;
    }
    throw std::domain_error("no rate formula for a " + to_string(c.tag) + " point");
}

PitchforkSplit pitchfork_saddles(double lambda2, double c4) {
    require(lambda2 < 0.0, "pitchfork_saddles: the pair exists only for lambda2 < 0");
    require(c4 > 0.0, "pitchfork_saddles: C4 must be positive");
    return {std::sqrt(-lambda2 / (4.0 * c4)), -2.0 * lambda2, -lambda2 * lambda2 / (16.0 * c4)};
}

PitchforkSplit longitudinal_saddles(double lambda1, double c4) {
    require(lambda1 > 0.0, "longitudinal_saddles: the pair exists only for lambda1 > 0");
    require(c4 > 0.0, "longitudinal_saddles: C4 must be positive");
    return {std::sqrt(lambda1 / (4.0 * c4)), 2.0 * lambda1, lambda1 * lambda1 / (16.0 * c4)};
}

PitchforkSpectra transverse_spectra_leading_order(const CriticalSpectrum& center, double lambda2, double c4) {
    PitchforkSpectra s;
    s.center = center;
    if (lambda2 < 0.0) {
        const PitchforkSplit sp = pitchfork_saddles(lambda2, c4);
        s.split = CriticalSpectrum{center.value + sp.altitude, center.unstable, center.stable};
        s.split_soft = sp.mu;
    }
    return s;
}

PitchforkSpectra longitudinal_spectra_leading_order(const CriticalSpectrum& center, double lambda1, double c4) {
    PitchforkSpectra s;
    s.center = center;
    if (lambda1 > 0.0) {
        const PitchforkSplit sp = longitudinal_saddles(lambda1, c4);
        s.split = CriticalSpectrum{center.value + sp.altitude, sp.mu, center.stable};
        s.split_soft = sp.mu;
    }
    return s;
}

RateResult pitchfork_transverse_time(const MinimumSpec& min, const PitchforkSpectra& sp, double lambda2, double c4,
                                     double eps) {
    check_eps(eps);
    check_min(min);
    require(c4 > 0.0, "C4 must be positive");
    const double s = std::sqrt(2.0 * eps * c4);
    const double err = bifurcation_error_scale(eps, lambda2);
    const std::string label = "[eps|log eps|^3/max(|lambda|,(eps|log eps|)^(1/2))]^(1/2)";
    if (lambda2 >= 0.0) {
        const CriticalSpectrum& z = sp.center;
        require(z.unstable > 0.0, "unstable eigenvalue magnitude must be positive");
        const double prod = product(z.stable, "stable");
        const int d = 2 + static_cast<int>(z.stable.size());
        const double psi = psi_plus(lambda2 / s);
        const double pref = two_pi * std::sqrt((lambda2 + s) * prod / (z.unstable * min.hessian_det)) / psi;
        const double cap = std::sqrt(std::pow(two_pi, d - 2) * z.unstable / ((lambda2 + s) * prod)) * psi *
                           std::pow(eps, 0.5 * d);
        return finish(min, z.value, pref, cap, d, eps, "pitchfork_transverse_plus", label, err);
    }
    require(sp.split.has_value(), "lambda2 < 0 needs the spectrum of the split saddles");
    require(sp.split_soft > 0.0, "split soft eigenvalue mu2 must be positive");
    const CriticalSpectrum& z = *sp.split;
    require(z.unstable > 0.0, "unstable eigenvalue magnitude must be positive");
    const double prod = product(z.stable, "stable");
    const int d = 2 + static_cast<int>(z.stable.size());
    const double mu2 = sp.split_soft;
    const double psi = psi_minus(mu2 / s);
    const double pref = two_pi * std::sqrt((mu2 + s) * prod / (z.unstable * min.hessian_det)) / psi;
    const double cap = std::sqrt(std::pow(two_pi, d - 2) * z.unstable / ((mu2 + s) * prod)) * psi * std::pow(eps, 0.5 * d);
    return finish(min, z.value, pref, cap, d, eps, "pitchfork_transverse_minus", label, err);
}

RateResult pitchfork_longitudinal_time(const MinimumSpec& min, const PitchforkSpectra& sp, double lambda1, double c4,
                                       double eps) {
    check_eps(eps);
    check_min(min);
    require(c4 > 0.0, "C4 must be positive");
    const double s = std::sqrt(2.0 * eps * c4);
    const double err = bifurcation_error_scale(eps, lambda1);
    const std::string label = "[eps|log eps|^3/max(|lambda|,(eps|log eps|)^(1/2))]^(1/2)";
    const bool split = lambda1 > 0.0;
    if (split) {
        require(sp.split.has_value(), "lambda1 > 0 needs the spectrum of the split saddles");
        require(sp.split_soft > 0.0, "split soft eigenvalue |mu1| must be positive");
    }
    const CriticalSpectrum& z = split ? *sp.split : sp.center;
    const double soft = split ? sp.split_soft : -lambda1;
    const double prod = product(z.stable, "stable");
    const int d = 1 + static_cast<int>(z.stable.size());
    const double psi = split ? psi_minus(soft / s) : psi_plus(soft / s);
    const double pref = two_pi * std::sqrt(prod / ((soft + s) * min.hessian_det)) * psi;
    const double cap = std::sqrt(std::pow(two_pi, d - 2) * (soft + s) / prod) / psi * std::pow(eps, 0.5 * d);
    return finish(min, z.value, pref, cap, d, eps, split ? "pitchfork_longitudinal_minus" : "pitchfork_longitudinal_plus",
                  label, err);
}

RateResult doublezero_time(const MinimumSpec& min, const CriticalSpectrum& z, double lambda2, const AngularFunction& k,
                           double eps) {
    check_eps(eps);
    check_min(min);
    require(z.unstable > 0.0, "unstable eigenvalue magnitude must be positive");
    require(k.is_constant() || k.degree() == 4, "double-zero regime needs a quartic angular function");
    require(k.k_minus() > 0.0, "angular function must be positive (K_- > 0)");
    const double window = std::sqrt(eps * abs_log(eps));
    require(lambda2 >= -window, "lambda2 is below -sqrt(eps|log eps|); use the sombrero formula");
    const double prod = product(z.stable, "stable");
    const int d = 3 + static_cast<int>(z.stable.size());

    auto integrand = [&](double phi) {
        const double kk = k(phi);
        const double s = std::sqrt(2.0 * eps * kk);
        if (lambda2 >= 0.0) return theta_plus(lambda2 / s) / (lambda2 + s);
        return theta_minus(-lambda2 / s) / s * std::exp(lambda2 * lambda2 / (16.0 * eps * kk));
    };
    double denom;
    if (k.is_constant()) {
        denom = integrand(0.0);
    } else {
        std::vector<double> breaks;
        for (int i = 1; i < 16; ++i) breaks.push_back(i * two_pi / 16.0);
        denom = integrate_with_breaks(integrand, 0.0, two_pi, breaks, {1e-13, 1e-12, 400}).value / two_pi;
    }
    const double pref = two_pi * std::sqrt(prod / (z.unstable * min.hessian_det)) / denom;
    const double cap = std::sqrt(std::pow(two_pi, d - 2) * z.unstable / prod) * denom * std::pow(eps, 0.5 * d);
    return finish(min, z.value, pref, cap, d, eps, lambda2 >= 0.0 ? "doublezero_plus" : "doublezero_minus",
                  "[eps|log eps|^3/max(|lambda|,(eps|log eps|)^(1/2))]^(1/2)", bifurcation_error_scale(eps, lambda2));
}

double sombrero_denominator(const SombreroSpectrum& mu, int m, double c4, double eps) {
    const double base = 8.0 * eps * c4;
    const double two_m = 2.0 * m;
    return theta_minus(mu.mu3 / std::sqrt(base)) * chi(mu.mu2 * mu.mu3 / (two_m * two_m * base));
}

RateResult sombrero_time(const MinimumSpec& min, const SombreroSpectrum& mu, int m, double c4, double eps) {
    check_eps(eps);
    check_min(min);
    require(m >= 2, "M must be at least 2");
    require(c4 > 0.0, "C4 must be positive");
    require(mu.mu1 > 0.0, "|mu1| must be positive");
    require(mu.mu2 >= 0.0 && mu.mu3 > 0.0, "sombrero needs mu2 >= 0 and mu3 > 0");
    const double prod = product(mu.rest, "mu4..muN");
    const int d = 3 + static_cast<int>(mu.rest.size());
    const double two_m = 2.0 * m;
    const double q = mu.mu2 * mu.mu3 + two_m * two_m * 8.0 * eps * c4;
    const double den = sombrero_denominator(mu, m, c4, eps);
    const double pref = two_pi / two_m * std::sqrt(q * prod / (mu.mu1 * min.hessian_det)) / den;
    const double cap = two_m * std::sqrt(std::pow(two_pi, d - 2) * mu.mu1 / (q * prod)) * den * std::pow(eps, 0.5 * d);
    return finish(min, mu.value, pref, cap, d, eps, "sombrero",
                  "[eps|log eps|^3/max(|mu2|,(eps|log eps|)^(1/2))]^(1/2)", bifurcation_error_scale(eps, mu.mu2));
}

nlohmann::json RateResult::to_json() const {
    return {{"eps", eps},
            {"barrier", barrier},
            {"prefactor", prefactor},
            {"expected_time", expected_time},
            {"log_expected_time", log_expected_time},
            {"saddle_value", saddle_value},
            {"capacity", capacity},
            {"capacity_scaled", capacity_scaled},
            {"dimension", dimension},
            {"regime_tag", regime_tag},
            {"error_order", error_order},
            {"error_scale", error_scale}};
}

}  // namespace saddlerate
