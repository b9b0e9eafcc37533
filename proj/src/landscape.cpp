#include "saddlerate/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "saddlerate/quadrature.hpp"

namespace saddlerate {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Coefficients (ascending in the second variable) of a form restricted to span{ea, eb}:
// T[ea^{k-i} eb^i] * binom(k, i) / k!.
std::vector<double> restricted_form(const DerivativeTensor& t, const Vec& ea, const Vec& eb) {
    const int k = t.order;
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    std::vector<double> c(k + 1);
    for (int i = 0; i <= k; ++i) {
        std::vector<Vec> dirs;
        for (int r = 0; r < k - i; ++r) dirs.push_back(ea);
        for (int r = 0; r < i; ++r) dirs.push_back(eb);
        c[i] = binom(k, i) * t.contract(dirs) / fact;
    }
    return c;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - g * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + g * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Reduced function along the soft direction: V at the point where the gradient
// transverse to e1 vanishes, relative to V(x0). Returns NaN if the transverse
// solve fails.
class SoftReduction {
public:
    SoftReduction(const PotentialModel& m, const Vec& x0, const EigenFrame& frame, int soft)
        : model_(m), x0_(x0), e1_(frame.vectors.col(soft)) {
        const int d = m.dim();
        perp_ = Mat(d, d - 1);
        int c = 0;
        for (int j = 0; j < d; ++j)
            if (j != soft) perp_.col(c++) = frame.vectors.col(j);
        w_ = Vec::Zero(d - 1);
    }

    double operator()(double s) {
        if (perp_.cols() == 0) return model_.value(x0_ + s * e1_) - model_.value(x0_);
        Vec w = w_;
        for (int it = 0; it < 100; ++it) {
            const Vec x = x0_ + s * e1_ + perp_ * w;
            const Vec g = perp_.transpose() * model_.gradient(x);
            if (g.norm() < 1e-15) break;
            const Mat h = perp_.transpose() * model_.hessian(x) * perp_;
            const Vec step = h.colPivHouseholderQr().solve(g);
            w -= step;
            if (step.norm() < 1e-15 * (1.0 + w.norm())) break;
        }
        const Vec x = x0_ + s * e1_ + perp_ * w;
        if ((perp_.transpose() * model_.gradient(x)).norm() > 1e-9) return std::numeric_limits<double>::quiet_NaN();
        w_ = w;
        return model_.value(x) - model_.value(x0_);
    }

    void reset() { w_.setZero(); }

private:
    const PotentialModel& model_;
    Vec x0_, e1_;
    Mat perp_;
    Vec w_;
};

// Real roots of sum_i c[i] t^i via the companion matrix.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& asc) {
    int n = static_cast<int>(asc.size()) - 1;
    while (n > 0 && asc[n] == 0.0) --n;
    if (n <= 0) return {};
    Mat comp = Mat::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -asc[i] / asc[n];
    Eigen::EigenSolver<Mat> es(comp, false);
    std::vector<std::complex<double>> r;
    for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()(i));
    return r;
}

}  // namespace

std::string to_string(CriticalTag t) {
    switch (t) {
        case CriticalTag::LocalMinimum: return "local_minimum";
        case CriticalTag::NondegenerateSaddle: return "nondegenerate_saddle";
        case CriticalTag::MultipleNegative: return "multiple_negative";
        case CriticalTag::Codim1: return "codim1";
        case CriticalTag::Codim2: return "codim2";
        case CriticalTag::HigherCodim: return "higher_codim";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Saddle: return "saddle";
        case Verdict::NotSaddle: return "not_saddle";
        case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

StationaryPoint refine_stationary_point(const PotentialModel& model, const Vec& seed, double grad_tol, int max_iter) {
    if (seed.size() != model.dim()) throw std::invalid_argument("seed dimension mismatch");
    Vec x = seed;
    Vec g = model.gradient(x);
    // Near a degenerate point the gradient vanishes faster than the distance, so
    // iteration continues until the Newton step itself is negligible.
    double last_step = g.norm() > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        if (g.norm() <= grad_tol && last_step <= 1e-13 * std::max(1.0, x.norm())) break;
        const Mat h = model.hessian(x);
        Vec step = h.completeOrthogonalDecomposition().solve(g);
        if (!step.allFinite()) throw std::runtime_error("Newton step is not finite");
        const double cap = std::max(1.0, x.norm());
        if (step.norm() > cap) step *= cap / step.norm();
        x -= step;
        last_step = step.norm();
        g = model.gradient(x);
        if (!x.allFinite()) throw std::runtime_error("Newton iteration diverged");
    }
    if (!(g.norm() <= grad_tol))
        throw std::runtime_error("Newton did not converge: |grad| = " + std::to_string(g.norm()));
    return {x, model.value(x), g.norm(), it, 0};
}

StationarySearch find_stationary_points(const PotentialModel& model, const std::vector<Vec>& seeds, double grad_tol,
                                        int max_iter) {
    StationarySearch out;
    for (size_t i = 0; i < seeds.size(); ++i) {
        try {
            StationaryPoint p = refine_stationary_point(model, seeds[i], grad_tol, max_iter);
            p.seed_index = static_cast<int>(i);
            const bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const StationaryPoint& q) {
                return (q.location - p.location).norm() < 1e-6 * std::max(1.0, p.location.norm());
            });
            if (!dup) out.points.push_back(p);
        } catch (const std::exception& e) {
            out.failures.push_back({static_cast<int>(i), e.what()});
        }
    }
    return out;
}

EigenFrame eigen_frame(const Mat& hessian, double zero_tol_factor) {
    const Mat sym = 0.5 * (hessian + hessian.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    EigenFrame f;
    const Vec ev = es.eigenvalues();
    f.values.assign(ev.data(), ev.data() + ev.size());
    f.vectors = es.eigenvectors();
    for (int c = 0; c < f.vectors.cols(); ++c) {
        for (int r = 0; r < f.vectors.rows(); ++r) {
            if (std::abs(f.vectors(r, c)) > 1e-12) {
                if (f.vectors(r, c) < 0) f.vectors.col(c) *= -1.0;
                break;
            }
        }
    }
    double rho = 0.0;
    for (double v : f.values) rho = std::max(rho, std::abs(v));
    f.zero_tol = zero_tol_factor * std::max(1.0, rho);
    return f;
}

double BinaryForm::operator()(double u, double v) const {
    const int n = degree();
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += coeffs[i] * std::pow(u, n - i) * std::pow(v, i);
    return s;
}

AngularFunction::AngularFunction(BinaryForm form) : form_(std::move(form)) { locate_extrema(); }

AngularFunction AngularFunction::constant(double value) {
    AngularFunction a;
    a.constant_ = true;
    a.value_ = value;
    a.k_minus_ = a.k_plus_ = value;
    return a;
}

double AngularFunction::operator()(double phi) const {
    if (constant_) return value_;
    return form_(std::cos(phi), std::sin(phi));
}

void AngularFunction::locate_extrema() {
    const int n = 4096;
    const double h = two_pi / n;
    int imin = 0, imax = 0;
    double vmin = (*this)(0.0), vmax = vmin;
    for (int i = 1; i < n; ++i) {
        const double v = (*this)(i * h);
        if (v < vmin) { vmin = v; imin = i; }
        if (v > vmax) { vmax = v; imax = i; }
    }
    auto self = [this](double p) { return (*this)(p); };
    const double pmin = golden_min(self, (imin - 1) * h, (imin + 1) * h);
    const double pmax = golden_min([&](double p) { return -self(p); }, (imax - 1) * h, (imax + 1) * h);
    k_minus_ = std::min(vmin, self(pmin));
    k_plus_ = std::max(vmax, self(pmax));
}

double AngularFunction::inverse_power_integral(double s) const {
    if (!(k_minus_ > 0.0)) throw std::domain_error("inverse_power_integral: angular function must be positive");
    if (constant_) return two_pi * std::pow(value_, -s);
    std::vector<double> breaks;
    for (int i = 1; i < 16; ++i) breaks.push_back(i * two_pi / 16.0);
    auto f = [this, s](double phi) { return std::pow((*this)(phi), -s); };
    return integrate_with_breaks(f, 0.0, two_pi, breaks, {1e-13, 1e-13, 400}).value;
}

RootAnalysis analyze_roots(const BinaryForm& form) {
    const int n = form.degree();
    const auto& c = form.coeffs;
    const double scale = max_abs(c);
    RootAnalysis ra;
    if (scale == 0.0 || n < 1) {
        ra.all_simple = false;
        return ra;
    }
    auto nonzero = [&](double x) { return std::abs(x) > 1e-12 * scale; };
    // Dehomogenize by the first variable when its pure power is present,
    // otherwise by the second; a degree drop counts roots at infinity.
    std::vector<double> asc(n + 1);
    if (nonzero(c[0])) {
        for (int i = 0; i <= n; ++i) asc[n - i] = c[i];  // form(t, 1)
    } else {
        for (int i = 0; i <= n; ++i) asc[i] = c[i];  // form(1, t)
    }
    for (double& a : asc)
        if (!nonzero(a)) a = 0.0;
    int deg = n;
    while (deg > 0 && asc[deg] == 0.0) --deg;
    const int at_infinity = n - deg;
    asc.resize(deg + 1);

    std::vector<double> real;
    for (const auto& z : poly_roots(asc))
        if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z))) real.push_back(z.real());
    std::sort(real.begin(), real.end());
    ra.real_roots = static_cast<int>(real.size()) + at_infinity;
    ra.all_simple = at_infinity <= 1;
    for (size_t i = 0; i + 1 < real.size(); ++i)
        if (real[i + 1] - real[i] <= 1e-5 * std::max(1.0, std::abs(real[i]))) ra.all_simple = false;
    // A vanishing derivative at a root also signals multiplicity.
    for (double r : real) {
        double d = 0.0, rp = 1.0, mag = 0.0;
        for (int i = 1; i <= deg; ++i) {
            d += i * asc[i] * rp;
            mag += std::abs(i * asc[i] * rp);
            rp *= r;
        }
        if (std::abs(d) <= 1e-8 * std::max(mag, 1e-300)) ra.all_simple = false;
    }
    if (ra.real_roots == 0) ra.sign_if_rootless = c[0] > 0 ? 1 : -1;
    return ra;
}

Codim1Coefficients codim1_coefficients(const PotentialModel& model, const Vec& point, const EigenFrame& frame,
                                       int soft_index) {
    const int d = model.dim();
    const Vec e1 = frame.vectors.col(soft_index);
    const DerivativeTensor t3 = model.third(point);
    const DerivativeTensor t4 = model.fourth(point);
    Codim1Coefficients c;
    c.soft_index = soft_index;
    c.c3 = t3.contract({e1, e1, e1}) / 6.0;
    double corr = 0.0;
    for (int j = 0; j < d; ++j) {
        if (j == soft_index) continue;
        const double v11j = 0.5 * t3.contract({e1, e1, Vec(frame.vectors.col(j))});
        corr += v11j * v11j / frame.values[j];
    }
    c.c4 = t4.contract({e1, e1, e1, e1}) / 24.0 - 0.5 * corr;
    // The distinguished eigenvalue is the negative one if present, else the smallest positive.
    c.distinguished_index = -1;
    for (int j = 0; j < d && c.distinguished_index < 0; ++j)
        if (j != soft_index && frame.values[j] < 0) c.distinguished_index = j;
    for (int j = 0; j < d && c.distinguished_index < 0; ++j)
        if (j != soft_index) c.distinguished_index = j;
    if (c.distinguished_index >= 0) c.lambda2 = frame.values[c.distinguished_index];
    return c;
}

Codim2Form codim2_normal_form(const PotentialModel& model, const Vec& point, const EigenFrame& frame,
                              const std::vector<int>& null_indices, double coeff_tol) {
    if (null_indices.size() != 2) throw std::invalid_argument("codim2_normal_form: need two null directions");
    const int d = model.dim();
    const Vec ea = frame.vectors.col(null_indices[0]);
    const Vec eb = frame.vectors.col(null_indices[1]);
    const DerivativeTensor t3 = model.third(point);
    const DerivativeTensor t4 = model.fourth(point);

    Codim2Form f;
    f.null_indices = null_indices;
    const std::vector<double> cubic = restricted_form(t3, ea, eb);
    std::vector<double> quartic = restricted_form(t4, ea, eb);
    for (int j = 0; j < d; ++j) {
        if (j == null_indices[0] || j == null_indices[1]) continue;
        const Vec ej = frame.vectors.col(j);
        // Coefficient of y_j in the cubic part: (1/2) T3[u, u, e_j] as a quadratic form in (s, t).
        const double q[3] = {0.5 * t3.contract({ea, ea, ej}), t3.contract({ea, eb, ej}), 0.5 * t3.contract({eb, eb, ej})};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) quartic[a + b] -= 0.5 * q[a] * q[b] / frame.values[j];
    }
    double rho = 0.0;
    for (double v : frame.values) rho = std::max(rho, std::abs(v));
    const double scale = std::max({1.0, rho, max_abs(quartic)});
    if (max_abs(cubic) > coeff_tol * scale) {
        f.order = 3;
        f.form.coeffs = cubic;
    } else if (max_abs(quartic) > coeff_tol * std::max(1.0, rho)) {
        f.order = 4;
        f.form.coeffs = quartic;
    } else {
        f.order = 0;
        f.form.coeffs = quartic;
        f.discriminant_shape = "vanishing";
        return f;
    }
    // Distinguished third eigenvalue: the negative one if any, else the smallest positive.
    for (int j = 0; j < d; ++j) {
        if (j == null_indices[0] || j == null_indices[1]) continue;
        if (!f.lambda3 || frame.values[j] < 0) f.lambda3 = frame.values[j];
        if (frame.values[j] < 0) break;
    }
    const RootAnalysis ra = analyze_roots(f.form);
    f.real_roots = ra.real_roots;
    if (!ra.all_simple) f.discriminant_shape = "non_simple";
    else if (ra.real_roots > 0) f.discriminant_shape = "simple_real_roots";
    else f.discriminant_shape = ra.sign_if_rootless > 0 ? "positive_definite" : "negative_definite";
    if (f.order == 4) {
        const AngularFunction k(f.form);
        f.k_minus = k.k_minus();
        f.k_plus = k.k_plus();
    }
    return f;
}

namespace {

Verdict codim1_verdict(Codim1Coefficients& c, const PotentialModel& model, const Vec& point, const EigenFrame& frame,
                       const ClassifyOptions& opt, std::string& note) {
    double rho = 0.0;
    for (double v : frame.values) rho = std::max(rho, std::abs(v));
    const double scale = std::max(1.0, rho);
    const bool c3_zero = std::abs(c.c3) <= opt.coeff_tol * std::max(scale, std::abs(c.c4));
    const bool c4_zero = std::abs(c.c4) <= opt.coeff_tol * scale;
    const bool negative_partner = c.distinguished_index >= 0 && c.lambda2 < 0;
    if (!c3_zero) return Verdict::NotSaddle;
    if (!c4_zero) {
        if (negative_partner) return c.c4 > 0 ? Verdict::Saddle : Verdict::NotSaddle;
        return c.c4 < 0 ? Verdict::Saddle : Verdict::NotSaddle;
    }
    if (!opt.probe_higher_order) {
        note = "C3 and C4 vanish; higher-order probe not requested";
        return Verdict::Undetermined;
    }
    // Leading power of the reduced function from samples at h and 2h on both sides.
    SoftReduction g(model, point, frame, c.soft_index);
    const double h = 0.05;
    const double gp1 = g(h), gp2 = g(2 * h);
    g.reset();
    const double gm1 = g(-h);
    if (!std::isfinite(gp1) || !std::isfinite(gp2) || !std::isfinite(gm1) || std::abs(gp1) < 1e-14) {
        note = "higher-order probe inconclusive";
        return Verdict::Undetermined;
    }
    const int q = static_cast<int>(std::lround(std::log2(std::abs(gp2 / gp1))));
    c.probed_order = q;
    c.probed_coeff = gp1 / std::pow(h, q);
    const bool odd = (gp1 > 0) != (gm1 > 0);
    if (odd || q % 2 == 1) return Verdict::NotSaddle;
    if (negative_partner) return *c.probed_coeff > 0 ? Verdict::Saddle : Verdict::NotSaddle;
    return *c.probed_coeff < 0 ? Verdict::Saddle : Verdict::NotSaddle;
}

Verdict codim2_verdict(const Codim2Form& f) {
    if (f.order == 0 || f.discriminant_shape == "non_simple") return Verdict::Undetermined;
    const bool negative_third = f.lambda3 && *f.lambda3 < 0;
    if (f.discriminant_shape == "simple_real_roots") {
        if (negative_third) return Verdict::NotSaddle;
        // One projective root (odd degree only) leaves a single negative half-plane.
        return f.real_roots >= 2 ? Verdict::Saddle : Verdict::NotSaddle;
    }
    if (f.discriminant_shape == "positive_definite") return negative_third ? Verdict::Saddle : Verdict::NotSaddle;
    return Verdict::NotSaddle;
}

}  // namespace

Classification classify(const PotentialModel& model, const Vec& point, const ClassifyOptions& opt) {
    Classification c;
    c.location = point;
    c.value = model.value(point);
    const EigenFrame frame = eigen_frame(model.hessian(point), opt.zero_tol_factor);
    c.eigenvalues = frame.values;
    c.eigenvectors = frame.vectors;

    std::vector<int> zeros;
    int negatives = 0;
    for (int i = 0; i < static_cast<int>(frame.values.size()); ++i) {
        if (std::abs(frame.values[i]) <= frame.zero_tol) zeros.push_back(i);
        else if (frame.values[i] < 0) ++negatives;
    }

    if (negatives >= 2) {
        c.tag = CriticalTag::MultipleNegative;
        c.verdict = Verdict::NotSaddle;
        return c;
    }
    if (zeros.empty()) {
        c.tag = negatives == 0 ? CriticalTag::LocalMinimum : CriticalTag::NondegenerateSaddle;
        c.verdict = negatives == 0 ? Verdict::NotSaddle : Verdict::Saddle;
        return c;
    }
    if (zeros.size() == 1) {
        c.tag = CriticalTag::Codim1;
        Codim1Coefficients co = codim1_coefficients(model, point, frame, zeros[0]);
        c.verdict = codim1_verdict(co, model, point, frame, opt, c.note);
        c.codim1 = co;
        return c;
    }
    if (zeros.size() == 2) {
        c.tag = CriticalTag::Codim2;
        c.codim2 = codim2_normal_form(model, point, frame, zeros, opt.coeff_tol);
        c.verdict = codim2_verdict(*c.codim2);
        if (c.codim2->order == 0) c.note = "cubic and quartic forms vanish on the null space";
        return c;
    }
    // Three or more zero eigenvalues: report the lowest non-vanishing Taylor form on
    // the null space, sampled on unit vectors. No verdict is attempted.
    c.tag = CriticalTag::HigherCodim;
    c.verdict = Verdict::Undetermined;
    HigherCodimReport rep;
    rep.null_dimension = static_cast<int>(zeros.size());
    const DerivativeTensor t3 = model.third(point);
    const DerivativeTensor t4 = model.fourth(point);
    std::vector<Vec> dirs;
    const int nz = rep.null_dimension;
    for (int s = 0; s < 2000; ++s) {
        // Deterministic quasi-random directions on the null sphere.
        Vec w(nz);
        for (int i = 0; i < nz; ++i) w(i) = std::sin(12.9898 * (s + 1) * (i + 1) + 78.233 * i) * 43758.5453;
        w = w.array() - w.array().floor() - 0.5;
        if (w.norm() < 1e-6) continue;
        w.normalize();
        Vec u = Vec::Zero(model.dim());
        for (int i = 0; i < nz; ++i) u += w(i) * frame.vectors.col(zeros[i]);
        dirs.push_back(u);
    }
    double mn3 = 1e300, mx3 = -1e300, mn4 = 1e300, mx4 = -1e300;
    for (const Vec& u : dirs) {
        const double v3 = t3.contract({u, u, u}) / 6.0;
        const double v4 = t4.contract({u, u, u, u}) / 24.0;
        mn3 = std::min(mn3, v3); mx3 = std::max(mx3, v3);
        mn4 = std::min(mn4, v4); mx4 = std::max(mx4, v4);
    }
    if (std::max(std::abs(mn3), std::abs(mx3)) > opt.coeff_tol) {
        rep.order = 3; rep.form_min = mn3; rep.form_max = mx3;
    } else {
        rep.order = 4; rep.form_min = mn4; rep.form_max = mx4;
    }
    c.higher = rep;
    c.note = "codimension above two: heuristic report only";
    return c;
}

nlohmann::json Classification::to_json() const {
    nlohmann::json j;
    j["location"] = std::vector<double>(location.data(), location.data() + location.size());
    j["value"] = value;
    j["eigenvalues"] = eigenvalues;
    j["tag"] = to_string(tag);
    j["verdict"] = to_string(verdict);
    nlohmann::json co = nlohmann::json::object();
    if (codim1) {
        co["C3"] = codim1->c3;
        co["C4"] = codim1->c4;
        co["lambda2"] = codim1->lambda2;
        if (codim1->probed_order) {
            co["probed_order"] = *codim1->probed_order;
            co["probed_coeff"] = *codim1->probed_coeff;
        }
    }
    if (codim2) {
        co["order"] = codim2->order;
        co["form"] = codim2->form.coeffs;
        co["discriminant"] = codim2->discriminant_shape;
        co["real_roots"] = codim2->real_roots;
        if (codim2->lambda3) co["lambda3"] = *codim2->lambda3;
        if (codim2->k_minus) {
            co["K_minus"] = *codim2->k_minus;
            co["K_plus"] = *codim2->k_plus;
        }
    }
    if (higher) {
        co["null_dimension"] = higher->null_dimension;
        co["order"] = higher->order;
        co["form_min"] = higher->form_min;
        co["form_max"] = higher->form_max;
    }
    j["coefficients"] = co;
    if (!note.empty()) j["note"] = note;
    return j;
}

// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> parent, rank;
    explicit UnionFind(int n) : parent(n), rank(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
    }
};

}  // namespace

GateResult communication_height_2d(const PotentialModel& model, const Vec& a, const Vec& b, const GridBox& box) {
    if (model.dim() != 2) throw std::invalid_argument("communication_height_2d: potential must be two-dimensional");
    if (box.nx < 2 || box.ny < 2 || !(box.xmax > box.xmin) || !(box.ymax > box.ymin))
        throw std::invalid_argument("communication_height_2d: bad grid");
    const int nx = box.nx, ny = box.ny;
    const double dx = (box.xmax - box.xmin) / (nx - 1), dy = (box.ymax - box.ymin) / (ny - 1);
    auto coord = [&](int id) {
        Vec p(2);
        p << box.xmin + (id % nx) * dx, box.ymin + (id / nx) * dy;
        return p;
    };
    auto snap = [&](const Vec& p) {
        const int i = std::clamp(static_cast<int>(std::lround((p(0) - box.xmin) / dx)), 0, nx - 1);
        const int j = std::clamp(static_cast<int>(std::lround((p(1) - box.ymin) / dy)), 0, ny - 1);
        return j * nx + i;
    };
    const int n = nx * ny;
    std::vector<double> v(n);
    for (int id = 0; id < n; ++id) v[id] = model.value(coord(id));
    auto neighbours = [&](int id, auto&& fn) {
        const int i = id % nx, j = id / nx;
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                if (!di && !dj) continue;
                const int ii = i + di, jj = j + dj;
                if (ii >= 0 && ii < nx && jj >= 0 && jj < ny) fn(jj * nx + ii);
            }
    };

    const int ia = snap(a), ib = snap(b);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int p, int q) { return v[p] < v[q]; });

    UnionFind uf(n);
    std::vector<char> active(n, 0);
    int merge_cell = -1;
    for (int id : order) {
        active[id] = 1;
        neighbours(id, [&](int nb) {
            if (active[nb]) uf.unite(id, nb);
        });
        if (active[ia] && active[ib] && uf.find(ia) == uf.find(ib)) {
            merge_cell = id;
            break;
        }
    }
    GateResult out;
    const double h = v[merge_cell];
    out.height = std::max({h, model.value(a), model.value(b)});

    double boundary_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nx; ++i) boundary_min = std::min({boundary_min, v[i], v[(ny - 1) * nx + i]});
    for (int j = 0; j < ny; ++j) boundary_min = std::min({boundary_min, v[j * nx], v[j * nx + nx - 1]});
    out.limited_by_box = h >= boundary_min;

    // Gate cells: at the merge level (within the local grid variation) and adjacent
    // to both basins of the strict sublevel set.
    UnionFind below(n);
    for (int id = 0; id < n; ++id) {
        if (!(v[id] < h)) continue;
        neighbours(id, [&](int nb) {
            if (v[nb] < h) below.unite(id, nb);
        });
    }
    double tol = 0.0;
    neighbours(merge_cell, [&](int nb) { tol = std::max(tol, std::abs(v[nb] - h)); });
    const int ra = v[ia] < h ? below.find(ia) : -1;
    const int rb = v[ib] < h ? below.find(ib) : -1;
    for (int id = 0; id < n; ++id) {
        if (std::abs(v[id] - h) > tol || v[id] < h) continue;
        bool touch_a = id == ia, touch_b = id == ib;
        neighbours(id, [&](int nb) {
            if (v[nb] < h) {
                const int r = below.find(nb);
                touch_a = touch_a || r == ra;
                touch_b = touch_b || r == rb;
            }
        });
        if (touch_a && touch_b) out.gate_cells.push_back(coord(id));
    }

    // Witness path through cells not above the merge level.
    std::vector<int> prev(n, -2);
    std::deque<int> queue{ia};
    prev[ia] = -1;
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        if (cur == ib) break;
        neighbours(cur, [&](int nb) {
            if (prev[nb] == -2 && v[nb] <= h) {
                prev[nb] = cur;
                queue.push_back(nb);
            }
        });
    }
    for (int cur = ib; cur >= 0; cur = prev[cur]) out.path.push_back(coord(cur));
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

}  // namespace saddlerate
