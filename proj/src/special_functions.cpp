#include "saddlerate/special_functions.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_erf.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "saddlerate/quadrature.hpp"

namespace saddlerate {

namespace {

constexpr double pi = std::numbers::pi;

void check_alpha(double alpha, const char* who) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::domain_error(std::string(who) + ": alpha must be finite and nonnegative");
}

// GSL aborts on domain errors by default; we validate inputs ourselves.
struct GslHandlerOff {
    GslHandlerOff() { gsl_set_error_handler_off(); }
};
const GslHandlerOff gsl_handler_off;

double bessel_k_scaled(double nu, double x) {
    gsl_sf_result r;
    if (gsl_sf_bessel_Knu_scaled_e(nu, x, &r) != GSL_SUCCESS)
        throw std::runtime_error("bessel K evaluation failed");
    return r.val;
}

double bessel_i_scaled(double nu, double x) {
    gsl_sf_result r;
    if (gsl_sf_bessel_Inu_scaled_e(nu, x, &r) != GSL_SUCCESS)
        throw std::runtime_error("bessel I evaluation failed");
    return r.val;
}

bool use_quadrature(double alpha, Route route) {
    if (route == Route::Quadrature) return true;
    if (route == Route::ClosedForm) return false;
    return alpha < kRouteSwitch;
}

QuadOptions quad_opts() { return {1e-13, 1e-13, 60}; }

// Quadrature routes. Each integrand is rescaled so that its width stays of order
// one for all alpha.

double psi_plus_quad(double a) {
    const double s = 1.0 + a;
    auto f = [=](double z) { return std::exp(-0.5 * (std::pow(z / s, 4) * s * s + a * z * z / s)); };
    const double half = integrate_to_infinity(f, 0.0, 1.0, {}, 1e-18, quad_opts()).value;
    return 2.0 * half / std::sqrt(2.0 * pi);
}

double psi_minus_quad(double a) {
    const double s = 1.0 + a;
    auto f = [=](double z) {
        const double q = z * z / s - 0.25 * a;
        return std::exp(-0.5 * q * q);
    };
    const double peak = 0.5 * std::sqrt(a * s);
    const double half = integrate_to_infinity(f, 0.0, 1.0, {peak}, 1e-18, quad_opts()).value;
    return 2.0 * half / std::sqrt(2.0 * pi);
}

double theta_plus_quad(double a) {
    // (1+a) * int_0^inf y exp(-(y^4 + a y^2)/2) dy with y^2 = t/(1+a).
    const double s = 1.0 + a;
    auto f = [=](double t) { return std::exp(-0.5 * (t * t / (s * s) + a * t / s)); };
    return 0.5 * integrate_to_infinity(f, 0.0, 1.0, {}, 1e-18, quad_opts()).value;
}

double theta_minus_quad(double a) {
    // int_0^inf y exp(-(y^2 - a/2)^2 / 2) dy with s = y^2.
    auto f = [=](double s) {
        const double q = s - 0.5 * a;
        return std::exp(-0.5 * q * q);
    };
    return 0.5 * integrate_to_infinity(f, 0.0, 1.0, {0.5 * a}, 1e-18, quad_opts()).value;
}

double chi_quad(double a) {
    auto f = [=](double phi) { return std::exp(-a * (1.0 - std::cos(phi))); };
    std::vector<double> breaks;
    if (a > 1.0) {
        const double w = 1.0 / std::sqrt(a);
        for (double b = w; b < pi; b *= 2.0) breaks.push_back(b);
    }
    const double half = breaks.empty() ? integrate(f, 0.0, pi, quad_opts()).value
                                       : integrate_with_breaks(f, 0.0, pi, breaks, quad_opts()).value;
    return 2.0 * std::sqrt(1.0 + a) * half / pi;
}

// Closed-form routes.

double psi_plus_closed(double a) {
    if (a == 0.0) return psi_at_zero();
    const double x = a * a / 16.0;
    return std::sqrt(a * (1.0 + a) / (8.0 * pi)) * bessel_k_scaled(0.25, x);
}

double psi_minus_closed(double a) {
    if (a == 0.0) return psi_at_zero();
    const double x = a * a / 64.0;
    // I_{-nu} = I_nu + (2/pi) sin(nu pi) K_nu, written with exponentially scaled factors.
    const double i_pos = bessel_i_scaled(0.25, x);
    const double k_term = (2.0 / pi) * std::sin(0.25 * pi) * std::exp(-2.0 * x) * bessel_k_scaled(0.25, x);
    return std::sqrt(pi * a * (1.0 + a) / 32.0) * (2.0 * i_pos + k_term);
}

double theta_plus_closed(double a) {
    // e^{a^2/8} Phi(-a/2) = erfc(u) e^{u^2} / 2 with u = a / (2 sqrt 2).
    const double u = a / (2.0 * std::sqrt(2.0));
    const double scaled = 0.5 * std::exp(u * u + gsl_sf_log_erfc(u));
    return std::sqrt(pi / 2.0) * (1.0 + a) * scaled;
}

double theta_minus_closed(double a) { return std::sqrt(pi / 2.0) * normal_cdf(0.5 * a); }

double chi_closed(double a) { return 2.0 * std::sqrt(1.0 + a) * gsl_sf_bessel_I0_scaled(a); }

}  // namespace

double psi_at_zero() { return std::tgamma(0.25) / (std::pow(2.0, 1.25) * std::sqrt(pi)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("gamma_fn: x must be positive");
    return gsl_sf_gamma(x);
}

double bessel_i(double nu, double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_i: x must be nonnegative");
    if (nu == 0.0) return gsl_sf_bessel_I0(x);
    if (std::abs(nu) != 0.25) throw std::domain_error("bessel_i: order must be 0 or +-1/4");
    if (x == 0.0) return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    const double scale = std::exp(x);
    double v = bessel_i_scaled(0.25, x) * scale;
    if (nu < 0.0) v += (2.0 / pi) * std::sin(0.25 * pi) * bessel_k_scaled(0.25, x) / scale;
    return v;
}

double bessel_k_quarter(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_k_quarter: x must be positive");
    return bessel_k_scaled(0.25, x) * std::exp(-x);
}

double psi_plus(double alpha, Route route) {
    check_alpha(alpha, "psi_plus");
    return use_quadrature(alpha, route) ? psi_plus_quad(alpha) : psi_plus_closed(alpha);
}

double psi_minus(double alpha, Route route) {
    check_alpha(alpha, "psi_minus");
    return use_quadrature(alpha, route) ? psi_minus_quad(alpha) : psi_minus_closed(alpha);
}

double theta_plus(double alpha, Route route) {
    check_alpha(alpha, "theta_plus");
    return use_quadrature(alpha, route) ? theta_plus_quad(alpha) : theta_plus_closed(alpha);
}

double theta_minus(double alpha, Route route) {
    check_alpha(alpha, "theta_minus");
    return use_quadrature(alpha, route) ? theta_minus_quad(alpha) : theta_minus_closed(alpha);
}

double chi(double alpha, Route route) {
    check_alpha(alpha, "chi");
    return use_quadrature(alpha, route) ? chi_quad(alpha) : chi_closed(alpha);
}

Crossover crossover_from_name(const std::string& name) {
    if (name == "psi_plus") return Crossover::PsiPlus;
    if (name == "psi_minus") return Crossover::PsiMinus;
    if (name == "theta_plus") return Crossover::ThetaPlus;
    if (name == "theta_minus") return Crossover::ThetaMinus;
    if (name == "chi") return Crossover::Chi;
    throw std::invalid_argument("unknown crossover function: " + name);
}

std::string crossover_name(Crossover f) {
    switch (f) {
        case Crossover::PsiPlus: return "psi_plus";
        case Crossover::PsiMinus: return "psi_minus";
        case Crossover::ThetaPlus: return "theta_plus";
        case Crossover::ThetaMinus: return "theta_minus";
        case Crossover::Chi: return "chi";
    }
    return "?";
}

double evaluate(Crossover f, double alpha, Route route) {
    switch (f) {
        case Crossover::PsiPlus: return psi_plus(alpha, route);
        case Crossover::PsiMinus: return psi_minus(alpha, route);
        case Crossover::ThetaPlus: return theta_plus(alpha, route);
        case Crossover::ThetaMinus: return theta_minus(alpha, route);
        case Crossover::Chi: return chi(alpha, route);
    }
    throw std::invalid_argument("evaluate: bad crossover");
}

std::string auto_route_name(double alpha) { return alpha < kRouteSwitch ? "quadrature" : "closed_form"; }

}  // namespace saddlerate
