#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "saddlerate/kramers.hpp"
#include "saddlerate/potentials.hpp"

using namespace saddlerate;

namespace {

constexpr double pi = std::numbers::pi;

MinimumSpec unit_min(double det = 1.0) { return {0.0, det, {}}; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Ratio of expected times through the logs; exp(barrier/eps) overflows at small eps.
double time_ratio(const RateResult& a, const RateResult& b) { return std::exp(a.log_expected_time - b.log_expected_time); }

SaddleSpec quadratic(double value, double unstable, std::vector<double> stable) {
    return {value, unstable, std::move(stable), QuadraticRegime{}};
}

}  // namespace

TEST_CASE("ek_classical: double well prefactor is pi sqrt 2") {
    const RateResult r = ek_classical({-0.25, 2.0, {2.0}}, quadratic(0.0, 1.0, {}), 0.2);
    CHECK(r.prefactor == doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r.barrier == doctest::Approx(0.25));
    CHECK(r.expected_time == doctest::Approx(pi * std::sqrt(2.0) * std::exp(1.25)).epsilon(1e-14));
    CHECK(r.log_expected_time == doctest::Approx(std::log(r.expected_time)).epsilon(1e-14));
    CHECK(r.regime_tag == "quadratic");
    CHECK(r.dimension == 1);
}

TEST_CASE("ek_classical: chain N=2 gamma=0.75 from the model spectra") {
    const double g = 0.75;
    const PotentialModel m = chain(2, g);
    Vec xmin(2), z = Vec::Zero(2);
    xmin << -1.0, -1.0;
    const MinimumSpec min = minimum_from_point(m, xmin);
    CHECK(min.hessian_det == doctest::Approx(2.0 * 3.5));
    const Classification c = classify(m, z);
    REQUIRE(c.tag == CriticalTag::NondegenerateSaddle);
    const SaddleSpec s = saddle_spec_from_classification(c);
    const RateResult r = ek_rate(min, s, 0.1);
    CHECK(r.prefactor == doctest::Approx(2.0 * pi * std::sqrt(0.5 / 7.0)).epsilon(1e-10));
    CHECK(r.prefactor == doctest::Approx(1.6793).epsilon(1e-4));
    CHECK(r.barrier == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ek_flat_unstable: p = 2 closed forms") {
    const double eps = 0.01;
    SaddleSpec s{0.0, 0.0, {1.0}, FlatUnstableRegime{2, 1.0}};
    const RateResult r = ek_flat_unstable(unit_min(), s, eps);
    const double expect = boost::math::tgamma(0.25) / 2.0 * std::sqrt(2.0 * pi) * std::pow(eps, -0.25);
    CHECK(rel(r.prefactor, expect) < 1e-13);
    CHECK(r.regime_tag == "flat_unstable");
    CHECK(r.dimension == 2);

    // General C4: Gamma(1/4)/(2 C4^{1/4}) factor.
    s.regime = FlatUnstableRegime{2, 0.3};
    const RateResult r2 = ek_flat_unstable(unit_min(), s, eps);
    CHECK(rel(r2.prefactor, expect / std::pow(0.3, 0.25)) < 1e-13);
}

TEST_CASE("ek_flat_unstable: the eps exponent tends to -1/2 for large p") {
    SaddleSpec s{0.0, 0.0, {1.0}, FlatUnstableRegime{2, 1.0}};
    double last = 0.0;
    for (int p : {2, 3, 5, 10, 50, 200}) {
        s.regime = FlatUnstableRegime{p, 1.0};
        const double a = ek_flat_unstable(unit_min(), s, 1e-4).prefactor;
        const double b = ek_flat_unstable(unit_min(), s, 1e-6).prefactor;
        const double slope = std::log(b / a) / std::log(1e-2);
        CHECK(slope == doctest::Approx(-(p - 1.0) / (2.0 * p)).epsilon(1e-10));
        CHECK(slope < last);
        last = slope;
    }
    CHECK(last == doctest::Approx(-0.5).epsilon(0.01));
}

TEST_CASE("ek_flat_stable: p = 2 closed form and exponent sign") {
    const double eps = 0.01;
    const double c4 = 0.125;
    SaddleSpec s{0.0, 1.0, {}, FlatStableRegime{2, c4}};
    const RateResult r = ek_flat_stable(unit_min(), s, eps);
    const double expect = std::pow(2.0, 2.5) * std::pow(pi, 1.5) * std::pow(c4 * eps, 0.25) / boost::math::tgamma(0.25);
    CHECK(rel(r.prefactor, expect) < 1e-13);
    CHECK(r.dimension == 2);

    for (int p : {2, 3, 4}) {
        s.regime = FlatStableRegime{p, 1.0};
        SaddleSpec u{0.0, 0.0, {1.0}, FlatUnstableRegime{p, 1.0}};
        const double ss = std::log(ek_flat_stable(unit_min(), s, 1e-6).prefactor /
                                   ek_flat_stable(unit_min(), s, 1e-4).prefactor) / std::log(1e-2);
        const double su = std::log(ek_flat_unstable(unit_min(), u, 1e-6).prefactor /
                                   ek_flat_unstable(unit_min(), u, 1e-4).prefactor) / std::log(1e-2);
        CHECK(ss == doctest::Approx(-su).epsilon(1e-10));
        CHECK(ss > 0.0);
    }
}

TEST_CASE("ek_codim2: constant k = 3/(8N) and eps exponent 1/2") {
    const int n = 3;
    const double k = 3.0 / (8.0 * n);
    const double eps = 0.01;
    SaddleSpec s{0.0, 2.0, {1.5}, Codim2Regime{AngularFunction::constant(k), 2}};
    const double integral = 2.0 * pi * std::sqrt(8.0 * n / 3.0);
    CHECK(AngularFunction::constant(k).inverse_power_integral(0.5) == doctest::Approx(integral).epsilon(1e-14));
    const double det = 5.0;
    const double expect = 4.0 / (boost::math::tgamma(0.5) * integral) *
                          std::sqrt(std::pow(2.0 * pi, 4) * 1.5 / (2.0 * det)) * std::sqrt(eps);
    const RateResult r = ek_codim2(unit_min(det), s, eps);
    CHECK(rel(r.prefactor, expect) < 1e-13);
    CHECK(r.dimension == 4);
    const double slope = std::log(ek_codim2(unit_min(det), s, 1e-6).prefactor / ek_codim2(unit_min(det), s, 1e-4).prefactor) /
                         std::log(1e-2);
    CHECK(slope == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("ek_codim2: angular integral of (3 + cos 4 phi)/32 against tanh-sinh") {
    // r^4 (3 + cos 4 phi)/32 = (u^4 + v^4)/8.
    const AngularFunction k(BinaryForm{{0.125, 0.0, 0.0, 0.0, 0.125}});
    CHECK(k(0.3) == doctest::Approx((3.0 + std::cos(1.2)) / 32.0).epsilon(1e-14));
    boost::math::quadrature::tanh_sinh<double> ts;
    const double oracle = 4.0 * ts.integrate([](double phi) { return 1.0 / std::sqrt((3.0 + std::cos(4.0 * phi)) / 32.0); },
                                             0.0, pi / 2.0);
    CHECK(rel(k.inverse_power_integral(0.5), oracle) < 1e-10);
    const SaddleSpec s{0.0, 1.0, {}, Codim2Regime{k, 2}};
    const double expect = 4.0 / (std::sqrt(pi) * oracle) * std::sqrt(std::pow(2.0 * pi, 4)) * 0.1;
    CHECK(rel(ek_codim2(unit_min(), s, 0.01).prefactor, expect) < 1e-10);
}

TEST_CASE("continuity at the bifurcation point") {
    const MinimumSpec min{-0.3, 2.5, {}};
    for (double eps : {0.1, 0.01, 1e-4}) {
        for (double c4 : {0.125, 0.7}) {
            const CriticalSpectrum center{0.2, 1.3, {0.8, 2.0}};
            const RateResult t =
                pitchfork_transverse_time(min, transverse_spectra_leading_order(center, 0.0, c4), 0.0, c4, eps);
            const RateResult f = ek_flat_stable(min, {0.2, 1.3, {0.8, 2.0}, FlatStableRegime{2, c4}}, eps);
            CHECK(rel(t.prefactor, f.prefactor) < 1e-10);
            CHECK(rel(t.capacity_scaled, f.capacity_scaled) < 1e-10);

            const RateResult l =
                pitchfork_longitudinal_time(min, longitudinal_spectra_leading_order(center, 0.0, c4), 0.0, c4, eps);
            const RateResult u = ek_flat_unstable(min, {0.2, 0.0, {0.8, 2.0}, FlatUnstableRegime{2, c4}}, eps);
            CHECK(rel(l.prefactor, u.prefactor) < 1e-10);
            CHECK(rel(l.capacity_scaled, u.capacity_scaled) < 1e-10);
        }
    }
}

TEST_CASE("transverse pitchfork matches classical at lambda2 = 50 sqrt(eps)") {
    const MinimumSpec min{0.0, 1.7, {}};
    const CriticalSpectrum center{0.4, 0.9, {1.1}};
    for (double eps : {1e-2, 1e-3}) {
        const double l2 = 50.0 * std::sqrt(eps);
        const double c4 = 0.125;
        const RateResult t = pitchfork_transverse_time(min, transverse_spectra_leading_order(center, l2, c4), l2, c4, eps);
        const RateResult c = ek_classical(min, quadratic(0.4, 0.9, {l2, 1.1}), eps);
        const double ratio = time_ratio(t, c);
        CHECK(ratio >= 0.95);
        CHECK(ratio <= 1.05);
    }
}

TEST_CASE("pitchfork far regimes: factor 1/2 across two saddles, 2 in series, 1 when unsplit") {
    const MinimumSpec min{0.0, 1.0, {}};
    const double eps = 1e-6;
    const double c4 = 0.125;
    const CriticalSpectrum center{0.5, 1.0, {2.0}};

    const double l2 = -0.5;
    const PitchforkSpectra tr = transverse_spectra_leading_order(center, l2, c4);
    const RateResult two = pitchfork_transverse_time(min, tr, l2, c4, eps);
    const RateResult one = ek_classical(min, quadratic(tr.split->value, 1.0, {tr.split_soft, 2.0}), eps);
    CHECK(time_ratio(two, one) == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(two.regime_tag == "pitchfork_transverse_minus");

    const double l1 = 0.5;
    const PitchforkSpectra lo = longitudinal_spectra_leading_order(center, l1, c4);
    const RateResult series = pitchfork_longitudinal_time(min, lo, l1, c4, eps);
    const RateResult single = ek_classical(min, quadratic(lo.split->value, lo.split_soft, {2.0}), eps);
    CHECK(time_ratio(series, single) == doctest::Approx(2.0).epsilon(2e-3));
    CHECK(series.barrier == doctest::Approx(0.5 + l1 * l1 / (16.0 * c4)).epsilon(1e-14));

    const RateResult plain = pitchfork_longitudinal_time(min, longitudinal_spectra_leading_order(center, -l1, c4), -l1, c4, eps);
    const RateResult ek = ek_classical(min, quadratic(0.5, l1, {2.0}), eps);
    CHECK(time_ratio(plain, ek) == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("transverse prefactor is smallest at a negative lambda2 of order sqrt(eps)") {
    const MinimumSpec min{0.0, 1.0, {}};
    const CriticalSpectrum center{0.0, 1.0, {}};
    const double c4 = 0.125;
    std::vector<double> scaled;
    for (double eps : {0.5, 0.1, 0.01}) {
        const double se = std::sqrt(eps);
        double best = 0.0, best_pref = INFINITY;
        for (int i = 0; i <= 4000; ++i) {
            const double l2 = se * (-5.0 + 10.0 * i / 4000.0);
            const double p = pitchfork_transverse_time(min, transverse_spectra_leading_order(center, l2, c4), l2, c4, eps).prefactor;
            if (p < best_pref) {
                best_pref = p;
                best = l2;
            }
        }
        CHECK(best < 0.0);
        scaled.push_back(-best / se);
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi / *lo <= 3.0);
}

TEST_CASE("pitchfork_saddles: chain N=2 gamma=0.4 against a Newton solve") {
    const double g = 0.4;
    const double l2 = -(1.0 - 2.0 * g) * 1.0;  // lambda2 in the rotated frame, C4 = 1/8
    const PitchforkSplit sp = pitchfork_saddles(-0.2, 0.125);
    CHECK(sp.offset == doctest::Approx(std::sqrt(0.4)).epsilon(1e-14));
    CHECK(sp.mu == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(sp.altitude == doctest::Approx(-0.02).epsilon(1e-14));
    CHECK(pitchfork_saddles(l2, 0.125).altitude == doctest::Approx(-(1.0 - 2.0 * g) * (1.0 - 2.0 * g) / 2.0).epsilon(1e-14));

    // Exact stationary point of the pure normal form -0.2 y^2/2 + y^4/8 by Newton.
    double y = 1.0;
    for (int i = 0; i < 60; ++i) y -= (-0.2 * y + 0.5 * y * y * y) / (-0.2 + 1.5 * y * y);
    CHECK(y == doctest::Approx(sp.offset).epsilon(1e-14));
    CHECK(-0.2 + 1.5 * y * y == doctest::Approx(sp.mu).epsilon(1e-13));
    CHECK(-0.1 * y * y + y * y * y * y / 8.0 == doctest::Approx(sp.altitude).epsilon(1e-13));

    for (double l : {-1e-2, -1e-4, -1e-8}) {
        CHECK(pitchfork_saddles(l, 0.125).offset <= std::sqrt(-l / 0.5) + 1e-15);
        CHECK(std::abs(pitchfork_saddles(l, 0.125).altitude) <= l * l);
    }
    CHECK_THROWS_AS(pitchfork_saddles(0.0, 0.125), std::domain_error);
    CHECK_THROWS_AS(pitchfork_saddles(-0.1, 0.0), std::domain_error);
}

TEST_CASE("doublezero: lambda2 = 0 with constant k equals codim2, large lambda2 recovers classical") {
    const MinimumSpec min{0.0, 3.0, {}};
    const CriticalSpectrum z{0.1, 1.5, {0.7}};
    for (double eps : {0.1, 0.01}) {
        const double k = 0.125;
        const RateResult d = doublezero_time(min, z, 0.0, AngularFunction::constant(k), eps);
        const RateResult c = ek_codim2(min, {0.1, 1.5, {0.7}, Codim2Regime{AngularFunction::constant(k), 2}}, eps);
        CHECK(rel(d.prefactor, c.prefactor) < 1e-10);
    }
    const double eps = 1e-6;
    const double l2 = 0.5;
    const AngularFunction k(BinaryForm{{0.125, 0.0, 0.0, 0.0, 0.125}});
    const RateResult d = doublezero_time(min, z, l2, k, eps);
    const RateResult c = ek_classical(min, quadratic(0.1, 1.5, {l2, l2, 0.7}), eps);
    CHECK(time_ratio(d, c) == doctest::Approx(1.0).epsilon(5e-3));
    CHECK_THROWS_AS(doublezero_time(min, z, -1.0, k, eps), std::domain_error);
    CHECK_NOTHROW(doublezero_time(min, z, -0.5 * std::sqrt(eps * std::abs(std::log(eps))), k, eps));
}

TEST_CASE("doublezero: continuous as lambda2 -> 0 from both sides") {
    const MinimumSpec min{0.0, 1.0, {}};
    const CriticalSpectrum z{0.0, 1.0, {}};
    const AngularFunction k(BinaryForm{{0.125, 0.0, 0.0, 0.0, 0.125}});
    const double eps = 1e-3;
    const double at0 = doublezero_time(min, z, 0.0, k, eps).prefactor;
    for (double l : {1e-7, -1e-7}) CHECK(rel(doublezero_time(min, z, l, k, eps).prefactor, at0) < 1e-4);
}

TEST_CASE("sombrero denominator regimes") {
    const double c4 = 0.125;
    const double eps = 1e-8;
    const int m = 3;
    const double base = 8.0 * eps * c4;
    auto spec = [&](double a, double b) {
        // a = mu3 / sqrt(8 eps C4), b = mu2 mu3 / ((2M)^2 8 eps C4)
        const double mu3 = a * std::sqrt(base);
        const double mu2 = b * 4.0 * m * m * base / mu3;
        return SombreroSpectrum{0.0, 1.0, mu2, mu3, {}};
    };
    CHECK(sombrero_denominator(spec(1e-6, 1e-12), m, c4, eps) == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-4));
    CHECK(sombrero_denominator(spec(1e3, 1e-6), m, c4, eps) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-3));
    CHECK(sombrero_denominator(spec(1e3, 1e6), m, c4, eps) == doctest::Approx(1.0).epsilon(1e-3));

    // Far regime: classical time for one of the 2M saddles divided by 2M.
    const SombreroSpectrum far{0.2, 0.8, 0.3, 0.6, {1.4}};
    const RateResult s = sombrero_time(unit_min(2.0), far, m, c4, eps);
    const RateResult c = ek_classical(unit_min(2.0), quadratic(0.2, 0.8, {0.3, 0.6, 1.4}), eps);
    CHECK(time_ratio(s, c) == doctest::Approx(1.0 / (2.0 * m)).epsilon(1e-3));
    CHECK_THROWS_AS(sombrero_time(unit_min(), {0.0, 1.0, -0.1, 0.5, {}}, m, c4, eps), std::domain_error);
    CHECK_THROWS_AS(sombrero_time(unit_min(), far, 1, c4, eps), std::domain_error);
}

TEST_CASE("capacity and time share the Laplace numerator") {
    const MinimumSpec min{-0.4, 2.2, {}};
    const AngularFunction k(BinaryForm{{0.125, 0.0, 0.0, 0.0, 0.125}});
    const CriticalSpectrum center{0.3, 1.2, {0.9}};
    for (double eps : {0.3, 0.05, 0.01}) {
        std::vector<RateResult> rs{
            ek_classical(min, quadratic(0.3, 1.2, {0.5, 0.9}), eps),
            ek_flat_unstable(min, {0.3, 0.0, {0.9}, FlatUnstableRegime{3, 0.4}}, eps),
            ek_flat_stable(min, {0.3, 1.2, {0.9}, FlatStableRegime{2, 0.4}}, eps),
            ek_codim2(min, {0.3, 1.2, {0.9}, Codim2Regime{k, 2}}, eps),
            pitchfork_transverse_time(min, transverse_spectra_leading_order(center, 0.2, 0.3), 0.2, 0.3, eps),
            pitchfork_transverse_time(min, transverse_spectra_leading_order(center, -0.2, 0.3), -0.2, 0.3, eps),
            pitchfork_longitudinal_time(min, longitudinal_spectra_leading_order(center, 0.2, 0.3), 0.2, 0.3, eps),
            pitchfork_longitudinal_time(min, longitudinal_spectra_leading_order(center, -0.2, 0.3), -0.2, 0.3, eps),
            doublezero_time(min, center, 0.05, k, eps),
            sombrero_time(min, {0.3, 1.2, 0.1, 0.2, {0.9}}, 3, 0.125, eps),
        };
        for (const RateResult& r : rs) {
            INFO(r.regime_tag);
            CHECK(r.prefactor > 0.0);
            CHECK(r.capacity > 0.0);
            CHECK(rel(r.expected_time * r.capacity, laplace_numerator(min, r.dimension, eps)) < 1e-12);
            CHECK(rel(r.expected_time, r.prefactor * std::exp(r.barrier / eps)) < 1e-14);
        }
    }
}

TEST_CASE("expected time decreases in eps") {
    const MinimumSpec min{0.0, 1.0, {}};
    const CriticalSpectrum center{0.25, 1.0, {2.0}};
    const AngularFunction k = AngularFunction::constant(0.2);
    double prev[6];
    bool first = true;
    for (double eps = 0.01; eps <= 0.5; eps *= 1.2) {
        const double t[6] = {
            ek_classical(min, quadratic(0.25, 1.0, {0.5}), eps).expected_time,
            ek_flat_unstable(min, {0.25, 0.0, {2.0}, FlatUnstableRegime{2, 0.5}}, eps).expected_time,
            ek_flat_stable(min, {0.25, 1.0, {}, FlatStableRegime{2, 0.5}}, eps).expected_time,
            ek_codim2(min, {0.25, 1.0, {}, Codim2Regime{k, 2}}, eps).expected_time,
            pitchfork_transverse_time(min, transverse_spectra_leading_order(center, -0.1, 0.5), -0.1, 0.5, eps).expected_time,
            doublezero_time(min, center, 0.1, k, eps).expected_time,
        };
        if (!first)
            for (int i = 0; i < 6; ++i) CHECK(t[i] < prev[i]);
        std::copy(t, t + 6, prev);
        first = false;
    }
}

TEST_CASE("saddle_spec_from_classification routes each normal form") {
    // Codim1 with lambda2 < 0 and C4 > 0: flat stable.
    const Polynomial stable(2, {{{0, 2}, -0.5}, {{4, 0}, 0.3}});
    SaddleSpec s = saddle_spec_from_classification(classify(stable.model(), Vec::Zero(2)));
    REQUIRE(std::holds_alternative<FlatStableRegime>(s.regime));
    CHECK(std::get<FlatStableRegime>(s.regime).coeff == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(s.unstable == doctest::Approx(1.0).epsilon(1e-12));

    // Codim1 with lambda2 > 0 and C4 < 0: flat unstable with coefficient -C4.
    const Polynomial unstable(2, {{{0, 2}, 0.5}, {{4, 0}, -0.3}});
    s = saddle_spec_from_classification(classify(unstable.model(), Vec::Zero(2)));
    REQUIRE(std::holds_alternative<FlatUnstableRegime>(s.regime));
    CHECK(std::get<FlatUnstableRegime>(s.regime).coeff == doctest::Approx(0.3).epsilon(1e-8));
    REQUIRE(s.stable.size() == 1);
    CHECK(s.stable[0] == doctest::Approx(1.0));

    // Codim2 quartic with definite form and an unstable direction.
    const Polynomial c2(3, {{{0, 0, 2}, -0.5}, {{4, 0, 0}, 0.125}, {{0, 4, 0}, 0.125}});
    s = saddle_spec_from_classification(classify(c2.model(), Vec::Zero(3)));
    REQUIRE(std::holds_alternative<Codim2Regime>(s.regime));
    CHECK(std::get<Codim2Regime>(s.regime).k(0.7) == doctest::Approx((3.0 + std::cos(2.8)) / 32.0).epsilon(1e-8));

    // A minimum has no rate formula.
    const Polynomial bowl(2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}});
    CHECK_THROWS_AS(saddle_spec_from_classification(classify(bowl.model(), Vec::Zero(2))), std::domain_error);
}

TEST_CASE("invalid inputs are rejected") {
    const SaddleSpec q = quadratic(0.0, 1.0, {1.0});
    CHECK_THROWS_AS(ek_classical(unit_min(), q, 0.0), std::domain_error);
    CHECK_THROWS_AS(ek_classical(unit_min(), q, -1.0), std::domain_error);
    CHECK_THROWS_AS(ek_classical(unit_min(0.0), q, 0.1), std::domain_error);
    CHECK_THROWS_AS(ek_classical(unit_min(), quadratic(0.0, 1.0, {0.0}), 0.1), std::domain_error);
    CHECK_THROWS_AS(ek_classical(unit_min(), quadratic(0.0, 0.0, {1.0}), 0.1), std::domain_error);
    CHECK_THROWS_AS(ek_flat_unstable(unit_min(), {0.0, 0.0, {1.0}, FlatUnstableRegime{1, 1.0}}, 0.1), std::domain_error);
    CHECK_THROWS_AS(ek_flat_unstable(unit_min(), {0.0, 0.0, {1.0}, FlatUnstableRegime{2, -1.0}}, 0.1), std::domain_error);
    CHECK_THROWS_AS(ek_flat_stable(unit_min(), {0.0, 1.0, {}, FlatStableRegime{1, 1.0}}, 0.1), std::domain_error);
    CHECK_THROWS_AS(ek_flat_stable(unit_min(), q, 0.1), std::domain_error);
    const AngularFunction sign_changing(BinaryForm{{1.0, 0.0, -3.0, 0.0, 1.0}});
    CHECK_THROWS_AS(ek_codim2(unit_min(), {0.0, 1.0, {}, Codim2Regime{sign_changing, 2}}, 0.1), std::domain_error);
    const CriticalSpectrum c{0.0, 1.0, {}};
    CHECK_THROWS_AS(pitchfork_transverse_time(unit_min(), transverse_spectra_leading_order(c, 0.1, 1.0), 0.1, 0.0, 0.1),
                    std::domain_error);
    CHECK_THROWS_AS(pitchfork_transverse_time(unit_min(), transverse_spectra_leading_order(c, 0.1, 1.0), -0.1, 1.0, 0.1),
                    std::domain_error);
}

TEST_CASE("bifurcation error scale") {
    const double eps = 1e-3;
    const double l = std::abs(std::log(eps));
    CHECK(bifurcation_error_scale(eps, 1.0) == doctest::Approx(std::sqrt(eps * l * l * l)));
    CHECK(bifurcation_error_scale(eps, 0.0) == doctest::Approx(std::sqrt(eps * l * l * l / std::sqrt(eps * l))));
}
