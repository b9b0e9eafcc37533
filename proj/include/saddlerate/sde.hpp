#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "saddlerate/kramers.hpp"
#include "saddlerate/potentials.hpp"

namespace saddlerate {

struct Ball {
    Vec center;
    double radius = 0.0;
};

struct SimulationConfig {
    double eps = 0.0;
    double dt = 0.0;  // <= 0 selects min(1e-3, eps / (20 max|lambda(start)|))
    double max_time = 1e4;
    int replicas = 0;
    std::uint64_t seed = 0;
    Vec start;
    std::vector<Ball> target;  // union of balls
    double confinement_radius = 1e3;
    int threads = 0;  // 0: hardware concurrency
    bool keep_times = true;
    // Each step sums this many N(0,1) draws per coordinate (scaled by 1/sqrt(k)), so a run
    // with dt and k = 2 follows the same Brownian path as a run with dt/2 and k = 1.
    int noise_substeps = 1;
};

enum class ReplicaStatus { Hit, Censored, Aborted };
std::string to_string(ReplicaStatus s);

struct ReplicaOutcome {
    double tau = 0.0;  // hitting time, or elapsed time when censored or aborted
    ReplicaStatus status = ReplicaStatus::Hit;
};

struct HittingTimeEstimate {
    double eps = 0.0;
    double dt = 0.0;
    double mean = 0.0;
    double stderr_ = 0.0;
    int hit_count = 0;
    int censored_count = 0;
    int aborted_count = 0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::vector<ReplicaOutcome> outcomes;  // indexed by replica, empty unless keep_times
    std::string diagnostic;

    int replicas() const { return hit_count + censored_count + aborted_count; }
    double censored_fraction() const;
    nlohmann::json to_json() const;
};

// Counter-based seed for replica r: splitmix64 applied to seed + r * golden gamma.
std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica);

double default_time_step(const PotentialModel& model, const Vec& start, double eps);

// Euler-Maruyama x <- x - grad V dt + sqrt(2 eps dt) xi until the first entry into
// the target. Replica r uses its own generator, so results do not depend on the
// thread count and the first n replicas of a larger run coincide with an n-replica run.
HittingTimeEstimate simulate_first_hitting(const PotentialModel& model, const SimulationConfig& config);

// Summary statistics over the hits of a list of outcomes.
HittingTimeEstimate summarize(const std::vector<ReplicaOutcome>& outcomes, double eps, double dt);

struct ValidationReport {
    double ratio = 0.0;
    double z_score = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    nlohmann::json to_json() const;
};

// Ratio mean / expected_time against tol, which defaults to
// error_scale + 2 stderr / mean. Throws std::runtime_error when more than 10% of
// replicas were censored or aborted, and std::invalid_argument on an eps mismatch.
ValidationReport validate(const HittingTimeEstimate& estimate, const RateResult& prediction,
                          std::optional<double> tol = std::nullopt);

}  // namespace saddlerate
