#pragma once

#include "fusionkit/fusion.hpp"
#include "fusionkit/metrics.hpp"
#include "fusionkit/tracker.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fusionkit {

/// One ground-truth trajectory, present on steps [birth, death).
struct TruthTrack {
    std::string label;
    std::uint32_t birth = 0;
    std::uint32_t death = 0;
    Eigen::VectorXd initial;
};

/// Per-agent sensor plus the birth ordinals that agent assigns to the shared
/// birth sites. Different orderings give the agents inconsistent labels.
struct AgentSetup {
    SensorModel sensor;
    std::vector<std::uint32_t> birth_order;
};

struct Scenario {
    std::uint32_t duration = 100;
    double period = 1.0;
    double sigma_w = 10.0;
    double survival = 0.9;
    /// Scales the motion noise applied to the truth; 0 gives noiseless trajectories.
    double truth_noise_scale = 0.0;
    Region region;
    std::vector<TruthTrack> truth_tracks;
    std::vector<AgentSetup> agents;
    BirthModel birth;
    TrackerConfig tracker;
    FusionWeights weights;
    std::uint64_t seed = 1;

    [[nodiscard]] MotionModel motion() const { return MotionModel::constant_velocity(period, sigma_w, survival); }
    /// Birth model of one agent with its birth ordinals applied.
    [[nodiscard]] BirthModel agent_birth(std::size_t agent) const;
    /// Sets the detection probability of every agent.
    void set_detection(double pd);
    /// Throws ConfigError naming the offending field.
    void check() const;
};

/// Twelve tracks from four birth sites, two agents with sigma 10 and 12,
/// p_D 0.98, clutter rate 10, agent b numbering the birth sites in reverse.
Scenario default_scenario();

nlohmann::json scenario_to_json(const Scenario& s);
/// Throws ConfigError naming the offending field.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

/// Random stream for one (seed, trial, stream) triple.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

/// Truth track sets for every step. Noise, if any, is drawn from the
/// trial's dedicated truth stream.
std::vector<LabeledTrackSet> generate_truth(const Scenario& s, std::uint64_t trial = 0);

/// One scan: Bernoulli detections with Gaussian noise plus Poisson clutter
/// uniform over the sensor region.
std::vector<Eigen::VectorXd> generate_measurements(const LabeledTrackSet& truth_step, const SensorModel& sensor,
                                                   std::mt19937_64& rng);

struct TrialResult {
    std::vector<FusionMethod> methods;
    /// [method][step]
    std::vector<std::vector<LabeledTrackSet>> tracks;
    std::vector<std::vector<double>> tospa;
    std::vector<std::vector<double>> cardinality;
    std::vector<std::size_t> truth_cardinality;
};

/// Relabels estimated identities to truth identities by a global assignment
/// over the whole run. Each estimate identity pays min(c, d) per step its
/// truth partner is present and c otherwise; unmatched estimates are
/// prefixed with "est:".
std::vector<LabeledTrackSet> map_identities(const std::vector<LabeledTrackSet>& estimates,
                                            const std::vector<LabeledTrackSet>& truth, const TospaParams& params,
                                            const std::vector<Eigen::Index>& coordinates);

/// Both agents filter their own scans; every method fuses the two
/// posteriors at every step.
TrialResult run_trial(const Scenario& s, const std::vector<FusionMethod>& methods, std::uint64_t trial,
                      const TospaParams& tospa_params, const FusionConfig& cfg);

struct MethodSummary {
    FusionMethod method = FusionMethod::jl;
    std::vector<double> mean_tospa;
    std::vector<double> mean_cardinality;
    double average_tospa = 0.0;
    double average_cardinality = 0.0;
    /// Time mean of |mean cardinality - truth cardinality|.
    double cardinality_bias = 0.0;
};

struct MonteCarloReport {
    std::size_t trials = 0;
    std::vector<double> truth_cardinality;
    std::vector<MethodSummary> methods;

    [[nodiscard]] const MethodSummary& at(FusionMethod method) const;
    /// Columns step, method, mean_tospa, mean_cardinality, truth_cardinality.
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] nlohmann::json summary() const;
};

/// Runs the trials on `threads` workers (0 = hardware concurrency) and
/// reduces them in trial order.
MonteCarloReport run_monte_carlo(const Scenario& s, const std::vector<FusionMethod>& methods, std::size_t trials,
                                 const TospaParams& tospa_params, const FusionConfig& cfg, std::size_t threads = 0);

}  // namespace fusionkit
