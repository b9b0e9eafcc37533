#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "saddlerate/special_functions.hpp"

using namespace saddlerate;

namespace {

constexpr double pi = std::numbers::pi;
const double inf = std::numeric_limits<double>::infinity();

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Oracles built from the defining integrals with Boost quadrature and Bessel functions.

double psi_plus_oracle(double a) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [=](double y) { return std::exp(-0.5 * (std::pow(y, 4) + a * y * y)); };
    return std::sqrt((1.0 + a) / (2.0 * pi)) * 2.0 * ts.integrate(f, 0.0, inf);
}

double psi_minus_oracle(double a) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [=](double y) {
        const double q = y * y - 0.25 * a;
        return std::exp(-0.5 * q * q);
    };
    const double peak = 0.5 * std::sqrt(a);
    const double v = ts.integrate(f, 0.0, peak) + ts.integrate(f, peak, inf);
    return std::sqrt((1.0 + a) / (2.0 * pi)) * 2.0 * v;
}

double psi_plus_bessel(double a) {
    const double x = a * a / 16.0;
    return std::sqrt(a * (1.0 + a) / (8.0 * pi)) * std::exp(x) * boost::math::cyl_bessel_k(0.25, x);
}

double psi_minus_bessel(double a) {
    const double x = a * a / 64.0;
    return std::sqrt(pi * a * (1.0 + a) / 32.0) * std::exp(-x) *
           (boost::math::cyl_bessel_i(-0.25, x) + boost::math::cyl_bessel_i(0.25, x));
}

double chi_oracle(double a) {
    auto f = [=](double phi) { return std::exp(-a * (1.0 - std::cos(phi))); };
    // Periodic integrand: the trapezoidal rule converges geometrically.
    return std::sqrt(1.0 + a) / pi * boost::math::quadrature::trapezoidal(f, 0.0, 2.0 * pi, 1e-14);
}

double theta_plus_oracle(double a) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [=](double y) { return y * std::exp(-0.5 * (std::pow(y, 4) + a * y * y)); };
    return (1.0 + a) * ts.integrate(f, 0.0, inf);
}

double theta_minus_oracle(double a) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [=](double y) {
        const double q = y * y - 0.5 * a;
        return y * std::exp(-0.5 * q * q);
    };
    const double peak = std::sqrt(0.5 * a);
    return ts.integrate(f, 0.0, peak) + ts.integrate(f, peak, inf);
}

const std::vector<double> alpha_grid{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0};

}  // namespace

TEST_CASE("values at zero") {
    const double psi0 = boost::math::tgamma(0.25) / (std::pow(2.0, 1.25) * std::sqrt(pi));
    CHECK(rel(psi_at_zero(), psi0) < 1e-14);
    CHECK(std::abs(psi_plus(0.0) - 0.8600) < 1e-4);
    CHECK(rel(psi_plus(0.0), psi0) < 1e-12);
    CHECK(rel(psi_minus(0.0), psi0) < 1e-12);
    CHECK(rel(theta_plus(0.0), std::sqrt(pi / 8.0)) < 1e-12);
    CHECK(rel(theta_minus(0.0), std::sqrt(pi / 8.0)) < 1e-12);
    CHECK(chi(0.0) == 2.0);
    CHECK(chi(0.0, Route::Quadrature) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("limits are reached at alpha = 50") {
    CHECK(std::abs(psi_plus(50.0) - 1.0) < 0.02);
    CHECK(std::abs(psi_minus(50.0) - 2.0) < 0.05);
    CHECK(std::abs(theta_plus(50.0) - 1.0) < 0.02);
    CHECK(rel(theta_minus(50.0), std::sqrt(pi / 2.0)) < 0.02);
    CHECK(rel(chi(50.0), std::sqrt(2.0 / pi)) < 0.02);
    // Far out the closed forms stay finite.
    CHECK(std::abs(psi_plus(1e4) - 1.0) < 1e-3);
    CHECK(std::abs(theta_plus(1e4) - 1.0) < 1e-3);
    CHECK(rel(chi(1e6), std::sqrt(2.0 / pi)) < 1e-3);
}

TEST_CASE("closed-form and quadrature routes agree") {
    for (double a : alpha_grid) {
        CAPTURE(a);
        for (auto f : {Crossover::PsiPlus, Crossover::PsiMinus, Crossover::ThetaPlus, Crossover::ThetaMinus,
                       Crossover::Chi}) {
            CAPTURE(crossover_name(f));
            CHECK(rel(evaluate(f, a, Route::ClosedForm), evaluate(f, a, Route::Quadrature)) < 1e-8);
        }
    }
}

TEST_CASE("routes match independent oracles") {
    for (double a : alpha_grid) {
        CAPTURE(a);
        CHECK(rel(psi_plus(a), psi_plus_oracle(a)) < 1e-9);
        CHECK(rel(psi_minus(a), psi_minus_oracle(a)) < 1e-9);
        CHECK(rel(theta_plus(a), theta_plus_oracle(a)) < 1e-9);
        CHECK(rel(theta_minus(a), theta_minus_oracle(a)) < 1e-9);
        CHECK(rel(chi(a), chi_oracle(a)) < 1e-9);
        if (a > 0.0) {
            CHECK(rel(psi_plus(a, Route::ClosedForm), psi_plus_bessel(a)) < 1e-10);
            CHECK(rel(psi_minus(a, Route::ClosedForm), psi_minus_bessel(a)) < 1e-10);
        }
    }
    CHECK(rel(psi_plus(2.0, Route::ClosedForm), psi_plus(2.0, Route::Quadrature)) < 1e-8);
    CHECK(rel(psi_minus(2.0, Route::ClosedForm), psi_minus(2.0, Route::Quadrature)) < 1e-8);
}

TEST_CASE("auto route switches at 0.5") {
    CHECK(auto_route_name(0.49) == "quadrature");
    CHECK(auto_route_name(0.5) == "closed_form");
    CHECK(psi_plus(0.3) == psi_plus(0.3, Route::Quadrature));
    CHECK(psi_plus(3.0) == psi_plus(3.0, Route::ClosedForm));
}

TEST_CASE("crossover functions other than psi_minus stay in [0.5, 2.2]") {
    for (int i = 0; i <= 2000; ++i) {
        const double a = 0.05 * i;
        for (auto f : {Crossover::PsiPlus, Crossover::ThetaPlus, Crossover::ThetaMinus, Crossover::Chi}) {
            const double v = evaluate(f, a);
            CHECK_MESSAGE((v >= 0.5 && v <= 2.2), crossover_name(f) << "(" << a << ") = " << v);
        }
    }
}

// psi_minus approaches 2 from above like 2 sqrt((1+a)/a) and peaks near 2.43 around
// a = 6.4 (confirmed by the integral oracle), so the [0.5, 2.2] bracket does not hold for it.
TEST_CASE("psi_minus stays in [0.5, 2.2]" * doctest::should_fail()) {
    double hi = 0.0, lo = 10.0;
    for (int i = 0; i <= 2000; ++i) {
        const double v = psi_minus(0.05 * i);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    CHECK(lo >= 0.5);
    CHECK(hi <= 2.2);
}

TEST_CASE("psi_minus peak value against the integral oracle") {
    double best_a = 0.0, hi = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double a = 0.01 * i;
        if (psi_minus(a) > hi) {
            hi = psi_minus(a);
            best_a = a;
        }
    }
    CHECK(rel(hi, psi_minus_oracle(best_a)) < 1e-9);
    CHECK(hi < 2.5);
}

TEST_CASE("psi functions are not monotone") {
    double max_plus = 0.0, max_minus = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double a = 0.01 * i;
        max_plus = std::max(max_plus, psi_plus(a));
        max_minus = std::max(max_minus, psi_minus(a));
    }
    CHECK(max_plus > psi_at_zero());
    CHECK(max_plus > 1.0);
    CHECK(max_minus > psi_at_zero());
    CHECK(max_minus > 2.0);
}

TEST_CASE("negative or non-finite alpha is rejected") {
    for (auto f :
         {Crossover::PsiPlus, Crossover::PsiMinus, Crossover::ThetaPlus, Crossover::ThetaMinus, Crossover::Chi}) {
        CHECK_THROWS_AS(evaluate(f, -0.1), std::domain_error);
        CHECK_THROWS_AS(evaluate(f, std::nan("")), std::domain_error);
    }
    CHECK_THROWS_AS(crossover_from_name("psi"), std::invalid_argument);
    CHECK(crossover_from_name("theta_minus") == Crossover::ThetaMinus);
}

TEST_CASE("gamma function") {
    CHECK(rel(gamma_fn(0.5), std::sqrt(pi)) < 1e-14);
    CHECK(rel(gamma_fn(5.0), 24.0) < 1e-14);
    boost::math::quadrature::tanh_sinh<double> ts;
    const double oracle = ts.integrate([](double t) { return std::pow(t, -0.75) * std::exp(-t); }, 0.0, inf);
    CHECK(rel(gamma_fn(0.25), oracle) < 1e-10);
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
}

TEST_CASE("normal distribution function") {
    CHECK(normal_cdf(0.0) == 0.5);
    for (double x : {0.1, 0.7, 1.5, 3.0, 6.0}) CHECK(std::abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) < 1e-14);
    double prev = 0.0;
    for (double x = -8.0; x <= 8.0; x += 0.25) {
        CHECK(normal_cdf(x) >= prev);
        prev = normal_cdf(x);
    }
    CHECK(normal_cdf(10.0) == doctest::Approx(1.0).epsilon(1e-15));
    boost::math::quadrature::tanh_sinh<double> ts;
    const double oracle =
        0.5 + ts.integrate([](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * pi); }, 0.0, 1.0);
    CHECK(std::abs(normal_cdf(1.0) - oracle) < 1e-12);
}

TEST_CASE("modified Bessel functions") {
    CHECK(bessel_i(0.0, 0.0) == 1.0);
    const double i0_oracle =
        boost::math::quadrature::trapezoidal([](double p) { return std::exp(2.0 * std::cos(p)); }, 0.0, 2.0 * pi,
                                             1e-15) /
        (2.0 * pi);
    CHECK(rel(bessel_i(0.0, 2.0), i0_oracle) < 1e-10);
    for (double x : {0.01, 0.3, 2.0, 15.0}) {
        CHECK(rel(bessel_i(0.25, x), boost::math::cyl_bessel_i(0.25, x)) < 1e-12);
        CHECK(rel(bessel_i(-0.25, x), boost::math::cyl_bessel_i(-0.25, x)) < 1e-12);
        CHECK(rel(bessel_k_quarter(x), boost::math::cyl_bessel_k(0.25, x)) < 1e-12);
    }
    // int exp(-(y^4 + 2 d y^2 + d^2/2)/2) dy = sqrt(d/2) K_{1/4}(d^2/4) at d = 1.
    boost::math::quadrature::tanh_sinh<double> ts;
    const double d = 1.0;
    const double lhs =
        2.0 * ts.integrate([=](double y) { return std::exp(-0.5 * (std::pow(y, 4) + 2 * d * y * y + 0.5 * d * d)); },
                           0.0, inf);
    CHECK(rel(lhs, std::sqrt(d / 2.0) * bessel_k_quarter(d * d / 4.0)) < 1e-10);
    CHECK_THROWS_AS(bessel_k_quarter(0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_i(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_i(0.0, -1.0), std::domain_error);
}

TEST_CASE("theta_plus(1) and chi(1) against their integral forms") {
    CHECK(rel(theta_plus(1.0), theta_plus_oracle(1.0)) < 1e-10);
    // int_0^inf y exp(-(y^2 + d)^2 / 2) dy = sqrt(pi/2) Phi(-d), here with d = 1.
    boost::math::quadrature::tanh_sinh<double> ts;
    const double lhs = ts.integrate([](double y) { return y * std::exp(-0.5 * std::pow(y * y + 1.0, 2)); }, 0.0, inf);
    CHECK(rel(lhs, 0.5 * std::sqrt(2.0 * pi) * normal_cdf(-1.0)) < 1e-10);
    CHECK(rel(chi(1.0), chi_oracle(1.0)) < 1e-10);
}
