#include "saddlerate/sde.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "saddlerate/landscape.hpp"

namespace saddlerate {

namespace {

bool inside(const std::vector<Ball>& target, const Vec& x) {
    for (const auto& b : target)
        if ((x - b.center).squaredNorm() <= b.radius * b.radius) return true;
    return false;
}

void check_config(const PotentialModel& model, const SimulationConfig& c, double dt) {
    if (!(c.eps > 0.0) || !std::isfinite(c.eps)) throw std::invalid_argument("simulate: eps must be positive");
    if (c.replicas < 1) throw std::invalid_argument("simulate: replicas must be positive");
    if (!(c.max_time > 0.0)) throw std::invalid_argument("simulate: max_time must be positive");
    if (!(dt > 0.0) || dt > c.max_time) throw std::invalid_argument("simulate: need 0 < dt <= max_time");
    if (c.start.size() != model.dim()) throw std::invalid_argument("simulate: start has wrong dimension");
    if (c.target.empty()) throw std::invalid_argument("simulate: empty target");
    if (c.noise_substeps < 1) throw std::invalid_argument("simulate: noise_substeps must be positive");
    for (const auto& b : c.target) {
        if (b.center.size() != model.dim()) throw std::invalid_argument("simulate: target has wrong dimension");
        if (!(b.radius > 0.0)) throw std::invalid_argument("simulate: target radius must be positive");
    }
}

ReplicaOutcome run_replica(const PotentialModel& model, const SimulationConfig& c, double dt, std::uint64_t seed) {
    Vec x = c.start;
    if (inside(c.target, x)) return {0.0, ReplicaStatus::Hit};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double noise = std::sqrt(2.0 * c.eps * dt);
    const long long max_steps = static_cast<long long>(std::ceil(c.max_time / dt));
    const double r2max = c.confinement_radius * c.confinement_radius;
    const double sub_scale = 1.0 / std::sqrt(static_cast<double>(c.noise_substeps));
    Vec xi(x.size());
    for (long long n = 1; n <= max_steps; ++n) {
        xi.setZero();
        for (int k = 0; k < c.noise_substeps; ++k)
            for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) += normal(rng);
        if (c.noise_substeps > 1) xi *= sub_scale;
        x += -dt * model.gradient(x) + noise * xi;
        const double t = static_cast<double>(n) * dt;
        const double r2 = x.squaredNorm();
        if (!std::isfinite(r2) || r2 > r2max) return {t, ReplicaStatus::Aborted};
        if (inside(c.target, x)) return {t, ReplicaStatus::Hit};
    }
    return {static_cast<double>(max_steps) * dt, ReplicaStatus::Censored};
}

double pairwise_sum(const double* v, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    return pairwise_sum(v, n / 2) + pairwise_sum(v + n / 2, n - n / 2);
}

}  // namespace

std::string to_string(ReplicaStatus s) {
    switch (s) {
        case ReplicaStatus::Hit: return "hit";
        case ReplicaStatus::Censored: return "censored";
        case ReplicaStatus::Aborted: return "aborted";
    }
    return "unknown";
}

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
    std::uint64_t z = seed + (replica + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double default_time_step(const PotentialModel& model, const Vec& start, double eps) {
    const EigenFrame f = eigen_frame(model.hessian(start));
    double lmax = 0.0;
    for (double v : f.values) lmax = std::max(lmax, std::abs(v));
    if (lmax == 0.0) return 1e-3;
    return std::min(1e-3, eps / (20.0 * lmax));
}

double HittingTimeEstimate::censored_fraction() const {
    const int n = replicas();
    return n == 0 ? 0.0 : static_cast<double>(censored_count + aborted_count) / n;
}

HittingTimeEstimate summarize(const std::vector<ReplicaOutcome>& outcomes, double eps, double dt) {
    HittingTimeEstimate e;
    e.eps = eps;
    e.dt = dt;
    std::vector<double> taus;
    for (const auto& o : outcomes) {
        switch (o.status) {
            case ReplicaStatus::Hit: taus.push_back(o.tau); break;
            case ReplicaStatus::Censored: ++e.censored_count; break;
            case ReplicaStatus::Aborted: ++e.aborted_count; break;
        }
    }
    e.hit_count = static_cast<int>(taus.size());
    if (e.hit_count > 0) e.mean = pairwise_sum(taus.data(), taus.size()) / e.hit_count;
    if (e.hit_count > 1) {
        std::vector<double> dev(taus.size());
        for (size_t i = 0; i < taus.size(); ++i) dev[i] = (taus[i] - e.mean) * (taus[i] - e.mean);
        e.stderr_ = std::sqrt(pairwise_sum(dev.data(), dev.size()) / (e.hit_count - 1) / e.hit_count);
    }
    e.ci95_low = e.mean - 1.96 * e.stderr_;
    e.ci95_high = e.mean + 1.96 * e.stderr_;
    if (e.aborted_count > 0)
        e.diagnostic = std::to_string(e.aborted_count) +
                       " replicas left the confinement radius or became non-finite; reduce dt or check confinement";
    return e;
}

HittingTimeEstimate simulate_first_hitting(const PotentialModel& model, const SimulationConfig& config) {
    const double dt = config.dt > 0.0 ? config.dt : default_time_step(model, config.start, config.eps);
    check_config(model, config, dt);

    std::vector<ReplicaOutcome> outcomes(config.replicas);
    int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, config.replicas);
    auto work = [&](int first) {
        for (int r = first; r < config.replicas; r += threads)
            outcomes[r] = run_replica(model, config, dt, replica_seed(config.seed, static_cast<std::uint64_t>(r)));
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }

    HittingTimeEstimate e = summarize(outcomes, config.eps, dt);
    if (config.keep_times) e.outcomes = std::move(outcomes);
    return e;
}

nlohmann::json HittingTimeEstimate::to_json() const {
    return {{"eps", eps},
            {"dt", dt},
            {"mean", mean},
            {"stderr", stderr_},
            {"hit_count", hit_count},
            {"censored_count", censored_count},
            {"aborted_count", aborted_count},
            {"censored_fraction", censored_fraction()},
            {"ci95", {ci95_low, ci95_high}},
            {"diagnostic", diagnostic}};
}

ValidationReport validate(const HittingTimeEstimate& estimate, const RateResult& prediction, std::optional<double> tol) {
    if (std::abs(estimate.eps - prediction.eps) > 1e-12 * std::max(1.0, prediction.eps))
        throw std::invalid_argument("validate: estimate and prediction use different eps");
    if (estimate.censored_fraction() > 0.1)
        throw std::runtime_error("validate: more than 10% of replicas censored or aborted");
    if (estimate.hit_count == 0 || !(prediction.expected_time > 0.0))
        throw std::runtime_error("validate: nothing to compare");
    ValidationReport r;
    r.ratio = estimate.mean / prediction.expected_time;
    r.z_score = estimate.stderr_ > 0.0 ? (estimate.mean - prediction.expected_time) / estimate.stderr_ : 0.0;
    r.tolerance = tol ? *tol : prediction.error_scale + 2.0 * estimate.stderr_ / estimate.mean;
    r.pass = std::abs(r.ratio - 1.0) <= r.tolerance;
    return r;
}

nlohmann::json ValidationReport::to_json() const {
    return {{"ratio", ratio}, {"z_score", z_score}, {"tolerance", tolerance}, {"pass", pass}};
}

}  // namespace saddlerate
