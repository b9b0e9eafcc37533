#include "saddlerate/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace saddlerate {

namespace {

constexpr double kTransverseC4 = 0.5;

MinimumSpec unit_minimum() { return {-1.0, 1.0, {}}; }

struct ChainData {
    MinimumSpec min;
    CriticalSpectrum origin;
    double eta1 = 0.0;
};

ChainData chain_data(int n, double gamma) {
    ChainData d;
    const auto nu = chain_minimum_spectrum(n, gamma);
    d.min.value = -0.25 * n;
    d.min.hessian_det = 1.0;
    for (double v : nu) d.min.hessian_det *= v;
    d.min.eigenvalues = nu;
    const auto eta = chain_origin_spectrum(n, gamma);
    d.origin.value = 0.0;
    d.origin.unstable = -eta[0];
    for (int k = 2; k <= n - 2; ++k) d.origin.stable.push_back(eta[k]);
    d.eta1 = eta[1];
    return d;
}

// Null-space quartic of the chain at the origin. The coupling is quadratic, so the
// form is the same for every gamma.
AngularFunction chain_angular(int n) {
    const PotentialModel m = chain(n, critical_coupling(n));
    const Classification c = classify(m, Vec::Zero(n));
    if (c.tag != CriticalTag::Codim2 || !c.codim2 || c.codim2->order != 4)
        throw std::runtime_error("chain origin is not a quartic codimension-two point");
    return AngularFunction(c.codim2->form);
}

int rim_order(int n) { return n % 2 == 1 ? n : n / 2; }

RateResult doublezero_or_sombrero(int n, const AngularFunction& k, double lambda2, double eps, bool prefer_sombrero) {
    const double gamma = chain_coupling_for(n, lambda2);
    const ChainData d = chain_data(n, gamma);
    const double window = std::sqrt(eps * std::abs(std::log(eps)));
    const bool use_sombrero = prefer_sombrero ? lambda2 < 0.0 : lambda2 < -window;
    if (!use_sombrero) return doublezero_time(d.min, d.origin, lambda2, k, eps);
    const ChainSombrero s = chain_sombrero(n, gamma);
    return sombrero_time(d.min, s.spectrum, s.m, s.c4, eps);
}

}  // namespace

Scenario scenario_from_name(const std::string& name) {
    if (name == "transverse") return Scenario::Transverse;
    if (name == "longitudinal") return Scenario::Longitudinal;
    if (name == "doublezero") return Scenario::DoubleZero;
    if (name == "sombrero") return Scenario::Sombrero;
    throw std::invalid_argument("unknown scenario: " + name);
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Transverse: return "transverse";
        case Scenario::Longitudinal: return "longitudinal";
        case Scenario::DoubleZero: return "doublezero";
        case Scenario::Sombrero: return "sombrero";
    }
    return "unknown";
}

double chain_coupling_for(int n, double lambda2) {
    if (n < 3) throw std::invalid_argument("chain scenarios need N >= 3");
    const double s = std::sin(std::numbers::pi / n);
    const double gamma = (1.0 + lambda2) / (2.0 * s * s);
    if (gamma < 0.0) throw std::domain_error("lambda2 below -1 needs a negative coupling");
    return gamma;
}

ChainSombrero chain_sombrero(int n, double gamma) {
    const auto eta = chain_origin_spectrum(n, gamma);
    if (!(eta[1] < 0.0)) throw std::domain_error("chain_sombrero: needs eta_1 < 0");
    const AngularFunction k = chain_angular(n);
    if (std::abs(k.k_plus() - k.k_minus()) > 1e-9 * k.k_plus())
        throw std::domain_error("chain_sombrero: the quartic is not rotationally symmetric for this N");
    ChainSombrero out;
    out.c4 = k.k_minus();
    out.m = rim_order(n);

    const PotentialModel model = chain(n, gamma);
    const Mat basis = chain_fourier_basis(n);
    const Vec ec = basis.col(1), es = basis.col(2);
    const double r = std::sqrt(-eta[1] / (4.0 * out.c4));
    const int seeds = 4 * out.m;

    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < seeds; ++j) {
        const double phi = j * std::numbers::pi / (2.0 * out.m);
        StationaryPoint p;
        try {
            p = refine_stationary_point(model, r * (std::cos(phi) * ec + std::sin(phi) * es), 1e-12);
        } catch (const std::runtime_error&) {
            continue;
        }
        const Vec plane = p.location.dot(ec) * ec + p.location.dot(es) * es;
        if (plane.norm() < 0.5 * r) continue;
        const EigenFrame f = eigen_frame(model.hessian(p.location));
        // mu2 is O(eta_1^2), far below the relative zero threshold near the bifurcation,
        // so the index is read from the signs alone.
        if (!(f.values[0] < 0.0) || !(f.values[1] > 0.0)) continue;
        if (p.value >= best) continue;
        best = p.value;

        const Vec radial = plane.normalized();
        const Vec angular = (radial.dot(ec) * es - radial.dot(es) * ec).normalized();
        int ir = 1, ia = 1;
        double br = -1.0, ba = -1.0;
        for (int c = 1; c < n; ++c) {
            const double pr = std::abs(f.vectors.col(c).dot(radial));
            if (pr > br) {
                br = pr;
                ir = c;
            }
        }
        for (int c = 1; c < n; ++c) {
            if (c == ir) continue;
            const double pa = std::abs(f.vectors.col(c).dot(angular));
            if (pa > ba) {
                ba = pa;
                ia = c;
            }
        }
        SombreroSpectrum s;
        s.value = p.value;
        s.mu1 = -f.values[0];
        s.mu3 = f.values[ir];
        s.mu2 = f.values[ia];
        for (int c = 1; c < n; ++c)
            if (c != ir && c != ia) s.rest.push_back(f.values[c]);
        out.spectrum = s;
        out.location = p.location;
    }
    if (!std::isfinite(best)) throw std::runtime_error("chain_sombrero: no index-one saddle found on the rim");
    return out;
}

double handover_discrepancy(int n, double eps) {
    const double lambda2 = -std::sqrt(eps * std::abs(std::log(eps)));
    const AngularFunction k = chain_angular(n);
    const double a = doublezero_or_sombrero(n, k, lambda2, eps, false).log_expected_time;
    const double b = doublezero_or_sombrero(n, k, lambda2, eps, true).log_expected_time;
    return std::expm1(std::abs(a - b));
}

std::vector<SweepRow> sweep(Scenario s, const std::vector<double>& controls, const std::vector<double>& eps_list,
                            int chain_size) {
    std::vector<SweepRow> rows;
    const bool chain_case = s == Scenario::DoubleZero || s == Scenario::Sombrero;
    const AngularFunction k = chain_case ? chain_angular(chain_size) : AngularFunction::constant(1.0);
    for (double lambda : controls) {
        for (double eps : eps_list) {
            SweepRow row;
            row.control = lambda;
            switch (s) {
                case Scenario::Transverse: {
                    const CriticalSpectrum center{0.0, 1.0, {}};
                    const auto spectra = transverse_spectra_leading_order(center, lambda, kTransverseC4);
                    row.rate = pitchfork_transverse_time(unit_minimum(), spectra, lambda, kTransverseC4, eps);
                    break;
                }
                case Scenario::Longitudinal: {
                    const CriticalSpectrum center{0.0, 0.0, {1.0}};
                    const auto spectra = longitudinal_spectra_leading_order(center, lambda, kTransverseC4);
                    row.rate = pitchfork_longitudinal_time(unit_minimum(), spectra, lambda, kTransverseC4, eps);
                    break;
                }
                case Scenario::DoubleZero:
                    row.rate = doublezero_or_sombrero(chain_size, k, lambda, eps, false);
                    break;
                case Scenario::Sombrero:
                    row.rate = doublezero_or_sombrero(chain_size, k, lambda, eps, true);
                    break;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace saddlerate
