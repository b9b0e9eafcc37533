#include "saddlerate/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace saddlerate {

namespace {

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Unflattens a tensor index into per-slot coordinates.
std::vector<int> unflatten(size_t flat, int d, int k) {
    std::vector<int> idx(k);
    for (int s = k - 1; s >= 0; --s) {
        idx[s] = static_cast<int>(flat % d);
        flat /= d;
    }
    return idx;
}

// Flat term list evaluated with repeated multiplication; used on hot paths.
struct FlatPoly {
    int dim = 0;
    std::vector<int> exps;
    std::vector<double> coeffs;

    FlatPoly(const std::vector<Monomial>& terms, int d, const std::vector<int>& orders) : dim(d) {
        for (const auto& t : terms) {
            double c = t.coeff;
            std::vector<int> e = t.exponents;
            for (int i = 0; i < d && c != 0.0; ++i) {
                for (int r = 0; r < orders[i]; ++r) {
                    c *= e[i];
                    --e[i];
                }
            }
            if (c == 0.0) continue;
            coeffs.push_back(c);
            exps.insert(exps.end(), e.begin(), e.end());
        }
    }

    double operator()(const Vec& x) const {
        double sum = 0.0;
        for (size_t t = 0; t < coeffs.size(); ++t) {
            double v = coeffs[t];
            const int* e = &exps[t * dim];
            for (int i = 0; i < dim; ++i)
                for (int r = 0; r < e[i]; ++r) v *= x(i);
            sum += v;
        }
        return sum;
    }
};

}  // namespace

DerivativeTensor::DerivativeTensor(int d, int k) : dim(d), order(k), data(static_cast<size_t>(ipow(d, k)), 0.0) {}

double& DerivativeTensor::at(std::initializer_list<int> idx) {
    size_t flat = 0;
    for (int i : idx) flat = flat * dim + i;
    return data[flat];
}

double DerivativeTensor::at(std::initializer_list<int> idx) const {
    size_t flat = 0;
    for (int i : idx) flat = flat * dim + i;
    return data[flat];
}

double DerivativeTensor::contract(const std::vector<Vec>& dirs) const {
    if (static_cast<int>(dirs.size()) != order) throw std::invalid_argument("contract: wrong number of directions");
    double sum = 0.0;
    for (size_t f = 0; f < data.size(); ++f) {
        if (data[f] == 0.0) continue;
        const auto idx = unflatten(f, dim, order);
        double w = data[f];
        for (int s = 0; s < order; ++s) w *= dirs[s](idx[s]);
        sum += w;
    }
    return sum;
}

Vec DerivativeTensor::contract_partial(const std::vector<Vec>& dirs) const {
    if (static_cast<int>(dirs.size()) != order - 1)
        throw std::invalid_argument("contract_partial: wrong number of directions");
    Vec out = Vec::Zero(dim);
    for (size_t f = 0; f < data.size(); ++f) {
        if (data[f] == 0.0) continue;
        const auto idx = unflatten(f, dim, order);
        double w = data[f];
        for (int s = 0; s + 1 < order; ++s) w *= dirs[s](idx[s]);
        out(idx[order - 1]) += w;
    }
    return out;
}

PotentialModel::PotentialModel(int dim, ValueFn value, std::string name)
    : dim_(dim), name_(std::move(name)), value_(std::move(value)) {
    if (dim < 1) throw std::invalid_argument("PotentialModel: dimension must be positive");
}

PotentialModel& PotentialModel::with_gradient(GradientFn g) { gradient_ = std::move(g); return *this; }
PotentialModel& PotentialModel::with_hessian(HessianFn h) { hessian_ = std::move(h); return *this; }
PotentialModel& PotentialModel::with_third(TensorFn t) { third_ = std::move(t); return *this; }
PotentialModel& PotentialModel::with_fourth(TensorFn t) { fourth_ = std::move(t); return *this; }
PotentialModel& PotentialModel::set_confining(bool c) { confining_ = c; return *this; }

int PotentialModel::exact_order() const {
    if (fourth_) return 4;
    if (third_) return 3;
    if (hessian_) return 2;
    if (gradient_) return 1;
    return 0;
}

double PotentialModel::fd_step(int k, const Vec& x) {
    const double scale = std::max(1.0, x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0);
    return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (2.0 + k)) * scale;
}

std::optional<DerivativeTensor> PotentialModel::exact_tensor(int k, const Vec& x) const {
    switch (k) {
        case 0:
            if (value_) {
                DerivativeTensor t(dim_, 0);
                t.data[0] = value_(x);
                return t;
            }
            break;
        case 1:
            if (gradient_) {
                DerivativeTensor t(dim_, 1);
                const Vec g = gradient_(x);
                for (int i = 0; i < dim_; ++i) t.data[i] = g(i);
                return t;
            }
            break;
        case 2:
            if (hessian_) {
                DerivativeTensor t(dim_, 2);
                const Mat h = hessian_(x);
                for (int i = 0; i < dim_; ++i)
                    for (int j = 0; j < dim_; ++j) t.data[i * dim_ + j] = h(i, j);
                return t;
            }
            break;
        case 3:
            if (third_) return third_(x);
            break;
        case 4:
            if (fourth_) return fourth_(x);
            break;
        default:
            break;
    }
    return std::nullopt;
}

// Order-k tensor from the nearest lower exact order by nested central differences,
// all levels sharing the step h.
DerivativeTensor PotentialModel::tensor(int k, const Vec& x, double h) const {
    if (auto t = exact_tensor(k, x)) return *t;
    if (k == 0) throw std::logic_error("PotentialModel: no value evaluator");
    DerivativeTensor out(dim_, k);
    const size_t inner = out.data.size() / dim_;
    Vec xp = x, xm = x;
    for (int m = 0; m < dim_; ++m) {
        xp(m) = x(m) + h;
        xm(m) = x(m) - h;
        const DerivativeTensor tp = tensor(k - 1, xp, h);
        const DerivativeTensor tm = tensor(k - 1, xm, h);
        for (size_t f = 0; f < inner; ++f) out.data[f * dim_ + m] = (tp.data[f] - tm.data[f]) / (2.0 * h);
        xp(m) = x(m);
        xm(m) = x(m);
    }
    return out;
}

double PotentialModel::value(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("PotentialModel::value: dimension mismatch");
    return value_(x);
}

Vec PotentialModel::gradient(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("PotentialModel::gradient: dimension mismatch");
    if (gradient_) return gradient_(x);
    const DerivativeTensor t = tensor(1, x, fd_step(1, x));
    return Eigen::Map<const Vec>(t.data.data(), dim_);
}

Mat PotentialModel::hessian(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("PotentialModel::hessian: dimension mismatch");
    if (hessian_) return hessian_(x);
    const DerivativeTensor t = tensor(2, x, fd_step(2, x));
    Mat h(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) h(i, j) = t.data[i * dim_ + j];
    return 0.5 * (h + h.transpose());
}

DerivativeTensor PotentialModel::third(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("PotentialModel::third: dimension mismatch");
    return tensor(3, x, fd_step(3, x));
}

DerivativeTensor PotentialModel::fourth(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("PotentialModel::fourth: dimension mismatch");
    return tensor(4, x, fd_step(4, x));
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(int dim, std::vector<Monomial> terms) : dim_(dim), terms_(std::move(terms)) {
    if (dim < 1) throw std::invalid_argument("Polynomial: dimension must be positive");
    for (const auto& t : terms_) {
        if (static_cast<int>(t.exponents.size()) != dim)
            throw std::invalid_argument("Polynomial: exponent vector length differs from dimension");
        for (int e : t.exponents)
            if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
    }
}

int Polynomial::degree() const {
    int deg = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (int e : t.exponents) s += e;
        if (t.coeff != 0.0) deg = std::max(deg, s);
    }
    return deg;
}

double Polynomial::value(const Vec& x) const {
    std::vector<int> zero(dim_, 0);
    return partial(x, zero);
}

double Polynomial::partial(const Vec& x, const std::vector<int>& orders) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        double v = t.coeff;
        for (int i = 0; i < dim_ && v != 0.0; ++i) {
            const int e = t.exponents[i];
            const int o = orders[i];
            if (o > e) { v = 0.0; break; }
            double fall = 1.0;
            for (int r = 0; r < o; ++r) fall *= (e - r);
            v *= fall * std::pow(x(i), e - o);
        }
        sum += v;
    }
    return sum;
}

DerivativeTensor Polynomial::tensor(const Vec& x, int k) const {
    DerivativeTensor out(dim_, k);
    std::map<std::vector<int>, double> cache;
    for (size_t f = 0; f < out.data.size(); ++f) {
        const auto idx = unflatten(f, dim_, k);
        std::vector<int> orders(dim_, 0);
        for (int i : idx) ++orders[i];
        auto it = cache.find(orders);
        if (it == cache.end()) it = cache.emplace(orders, partial(x, orders)).first;
        out.data[f] = it->second;
    }
    return out;
}

Polynomial Polynomial::rotated(const Mat& q) const {
    if (q.rows() != dim_ || q.cols() != dim_) throw std::invalid_argument("Polynomial::rotated: bad matrix size");
    using Poly = std::map<std::vector<int>, double>;
    auto multiply = [&](const Poly& a, const Poly& b) {
        Poly c;
        for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b) {
                std::vector<int> e(dim_);
                for (int i = 0; i < dim_; ++i) e[i] = ea[i] + eb[i];
                c[e] += ca * cb;
            }
        return c;
    };
    // x_i = sum_j q(i, j) y_j as linear polynomials in y.
    std::vector<Poly> lin(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            std::vector<int> e(dim_, 0);
            e[j] = 1;
            if (q(i, j) != 0.0) lin[i][e] += q(i, j);
        }
    Poly total;
    for (const auto& t : terms_) {
        Poly p{{std::vector<int>(dim_, 0), t.coeff}};
        for (int i = 0; i < dim_; ++i)
            for (int r = 0; r < t.exponents[i]; ++r) p = multiply(p, lin[i]);
        for (const auto& [e, c] : p) total[e] += c;
    }
    std::vector<Monomial> out;
    for (const auto& [e, c] : total)
        if (c != 0.0) out.push_back({e, c});
    return Polynomial(dim_, std::move(out));
}

PotentialModel Polynomial::model(std::string name) const {
    const Polynomial self = *this;
    const int d = dim_;
    std::vector<int> zero(d, 0);
    const FlatPoly value_poly(terms_, d, zero);
    std::vector<FlatPoly> grad_polys;
    for (int i = 0; i < d; ++i) {
        std::vector<int> o(d, 0);
        o[i] = 1;
        grad_polys.emplace_back(terms_, d, o);
    }
    std::vector<FlatPoly> hess_polys;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            std::vector<int> o(d, 0);
            ++o[i];
            ++o[j];
            hess_polys.emplace_back(terms_, d, o);
        }
    PotentialModel m(d, value_poly, std::move(name));
    m.with_gradient([grad_polys, d](const Vec& x) {
         Vec g(d);
         for (int i = 0; i < d; ++i) g(i) = grad_polys[i](x);
         return g;
     })
        .with_hessian([hess_polys, d](const Vec& x) {
            Mat h(d, d);
            int k = 0;
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) h(i, j) = h(j, i) = hess_polys[k++](x);
            return h;
        })
        .with_third([self](const Vec& x) { return self.tensor(x, 3); })
        .with_fourth([self](const Vec& x) { return self.tensor(x, 4); });
    // Confining when the top-degree part is even and positive along every axis and diagonal
    // we sample; a cheap heuristic that the sampler backs with a blow-up guard.
    const int deg = degree();
    bool conf = deg >= 2 && deg % 2 == 0;
    if (conf) {
        for (int trial = 0; trial < 2 * d + 4 && conf; ++trial) {
            Vec dir = Vec::Zero(d);
            if (trial < d) dir(trial) = 1.0;
            else if (trial < 2 * d) dir(trial - d) = -1.0;
            else dir = Vec::Constant(d, trial % 2 ? 1.0 : -1.0).cwiseProduct(Vec::LinSpaced(d, 1.0, 2.0));
            const double r = 1e3;
            conf = self.value(r * dir.normalized()) > 0.0;
        }
    }
    m.set_confining(conf);
    return m;
}

nlohmann::json Polynomial::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : terms_) terms.push_back({{"exponents", t.exponents}, {"coeff", t.coeff}});
    return {{"dimension", dim_}, {"terms", terms}};
}

Polynomial Polynomial::from_json(const nlohmann::json& j) {
    if (!j.contains("dimension") || !j.contains("terms"))
        throw std::invalid_argument("polynomial JSON needs \"dimension\" and \"terms\"");
    const int d = j.at("dimension").get<int>();
    std::vector<Monomial> terms;
    for (const auto& t : j.at("terms"))
        terms.push_back({t.at("exponents").get<std::vector<int>>(), t.at("coeff").get<double>()});
    return Polynomial(d, std::move(terms));
}

// ---------------------------------------------------------------------------

PotentialModel chain(int n, double gamma) {
    if (n < 2) throw std::invalid_argument("chain: need N >= 2");
    if (!(gamma >= 0.0)) throw std::invalid_argument("chain: need gamma >= 0");
    // Coupling matrix of (gamma/4) sum (x_i - x_{i+1})^2; for N = 2 both bonds join the same pair.
    Mat coupling = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        coupling(i, i) += 0.5 * gamma;
        coupling(j, j) += 0.5 * gamma;
        coupling(i, j) -= 0.5 * gamma;
        coupling(j, i) -= 0.5 * gamma;
    }
    auto value = [n, gamma](const Vec& x) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x2 = x(i) * x(i);
            const double diff = x(i) - x((i + 1) % n);
            v += 0.25 * x2 * x2 - 0.5 * x2 + 0.25 * gamma * diff * diff;
        }
        return v;
    };
    PotentialModel m(n, value, "chain");
    m.with_gradient([coupling](const Vec& x) {
         Vec g = coupling * x;
         g.array() += x.array().cube() - x.array();
         return g;
     })
        .with_hessian([coupling](const Vec& x) {
            Mat h = coupling;
            h.diagonal().array() += 3.0 * x.array().square() - 1.0;
            return h;
        })
        .with_third([n](const Vec& x) {
            DerivativeTensor t(n, 3);
            for (int i = 0; i < n; ++i) t.at({i, i, i}) = 6.0 * x(i);
            return t;
        })
        .with_fourth([n](const Vec&) {
            DerivativeTensor t(n, 4);
            for (int i = 0; i < n; ++i) t.at({i, i, i, i}) = 6.0;
            return t;
        })
        .set_confining(true);
    return m;
}

Polynomial rotated2(double gamma) {
    return Polynomial(2, {{{2, 0}, -0.5},
                          {{0, 2}, -0.5 * (1.0 - 2.0 * gamma)},
                          {{4, 0}, 0.125},
                          {{2, 2}, 0.75},
                          {{0, 4}, 0.125}});
}

Polynomial double_well() { return Polynomial(1, {{{4}, 0.25}, {{2}, -0.5}}); }

std::vector<double> chain_origin_spectrum(int n, double gamma) {
    std::vector<double> eta(n);
    for (int k = 0; k < n; ++k) {
        const double s = std::sin(k * std::numbers::pi / n);
        eta[k] = -1.0 + 2.0 * gamma * s * s;
    }
    return eta;
}

std::vector<double> chain_minimum_spectrum(int n, double gamma) {
    std::vector<double> nu(n);
    for (int k = 0; k < n; ++k) {
        const double s = std::sin(k * std::numbers::pi / n);
        nu[k] = 2.0 + 2.0 * gamma * s * s;
    }
    return nu;
}

std::vector<double> fourier_eigenvalues(int n, double gamma) {
    if (n < 2) throw std::invalid_argument("fourier_eigenvalues: need N >= 2");
    std::vector<double> eta;
    for (int k = -((n - 1) / 2); k <= n / 2; ++k) {
        const double s = std::sin(k * std::numbers::pi / n);
        eta.push_back(-1.0 + 2.0 * gamma * s * s);
    }
    return eta;
}

std::vector<double> uniform_minimum_spectrum(int n, double gamma) {
    if (n < 3) throw std::invalid_argument("uniform_minimum_spectrum: need N >= 3");
    std::vector<double> nu = chain_minimum_spectrum(n, gamma);
    std::sort(nu.begin(), nu.end());
    return nu;
}

double critical_coupling(int n) {
    if (n < 3) throw std::invalid_argument("critical_coupling: need N >= 3 (the two-particle threshold is 1/2)");
    const double s = std::sin(std::numbers::pi / n);
    return 1.0 / (2.0 * s * s);
}

Mat chain_fourier_basis(int n) {
    Mat b(n, n);
    int col = 0;
    b.col(col++) = Vec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int k = 1; 2 * k <= n; ++k) {
        Vec c(n), s(n);
        for (int j = 0; j < n; ++j) {
            c(j) = std::cos(2.0 * std::numbers::pi * k * j / n);
            s(j) = std::sin(2.0 * std::numbers::pi * k * j / n);
        }
        b.col(col++) = c.normalized();
        if (col < n && 2 * k != n) b.col(col++) = s.normalized();
    }
    return b;
}

PotentialModel model_from_json(const nlohmann::json& j) {
    if (j.contains("family")) {
        const std::string fam = j.at("family").get<std::string>();
        if (fam == "chain") return chain(j.at("N").get<int>(), j.at("gamma").get<double>());
        if (fam == "rotated2") return rotated2(j.at("gamma").get<double>()).model("rotated2");
        if (fam == "double_well") return double_well().model("double_well");
        throw std::invalid_argument("unknown potential family: " + fam);
    }
    PotentialModel m = Polynomial::from_json(j).model("polynomial");
    if (j.contains("confining")) m.set_confining(j.at("confining").get<bool>());
    return m;
}

PotentialModel model_from_name(const std::string& name, const std::vector<std::pair<std::string, double>>& params) {
    nlohmann::json j{{"family", name}};
    for (const auto& [k, v] : params) {
        if (k == "N") j[k] = static_cast<int>(std::lround(v));
        else j[k] = v;
    }
    return model_from_json(j);
}

}  // namespace saddlerate
