#pragma once

#include <string>

namespace saddlerate {

// Crossover functions that interpolate the prefactor across a bifurcation.
// Every function takes alpha >= 0 and throws std::domain_error otherwise.
//
//   psi_plus(a)    = sqrt(a(1+a)/8pi) e^{a^2/16} K_{1/4}(a^2/16)
//   psi_minus(a)   = sqrt(pi a(1+a)/32) e^{-a^2/64} [I_{-1/4} + I_{1/4}](a^2/64)
//   theta_plus(a)  = sqrt(pi/2) (1+a) e^{a^2/8} Phi(-a/2)
//   theta_minus(a) = sqrt(pi/2) Phi(a/2)
//   chi(a)         = 2 sqrt(1+a) e^{-a} I_0(a)
//
// Each has a closed-form route (Bessel / error functions) and an independent
// quadrature route; `Auto` uses quadrature below alpha = 0.5 and the closed
// form above it.
enum class Route { Auto, ClosedForm, Quadrature };

double psi_plus(double alpha, Route route = Route::Auto);
double psi_minus(double alpha, Route route = Route::Auto);
double theta_plus(double alpha, Route route = Route::Auto);
double theta_minus(double alpha, Route route = Route::Auto);
double chi(double alpha, Route route = Route::Auto);

// Value shared by psi_plus(0) and psi_minus(0): Gamma(1/4) / (2^{5/4} sqrt(pi)).
double psi_at_zero();

// Standard normal distribution function.
double normal_cdf(double x);

// Euler Gamma for x > 0.
double gamma_fn(double x);
// Modified Bessel I_nu(x) for nu in {0, 1/4, -1/4} and x >= 0.
double bessel_i(double nu, double x);
// K_{1/4}(x) for x > 0.
double bessel_k_quarter(double x);

enum class Crossover { PsiPlus, PsiMinus, ThetaPlus, ThetaMinus, Chi };
Crossover crossover_from_name(const std::string& name);
std::string crossover_name(Crossover f);
double evaluate(Crossover f, double alpha, Route route = Route::Auto);

// Name of the route that `Auto` picks for this alpha ("quadrature" or "closed_form").
std::string auto_route_name(double alpha);

inline constexpr double kRouteSwitch = 0.5;

}  // namespace saddlerate
