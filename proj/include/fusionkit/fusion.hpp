#pragma once

#include "fusionkit/assignment.hpp"
#include "fusionkit/gaussian_algebra.hpp"
#include "fusionkit/lmb.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fusionkit {

/// Averaging weights of the two fused densities; non-negative, summing to one.
struct FusionWeights {
    double omega_a = 0.5;
    double omega_b = 0.5;

    static FusionWeights from_omega(double omega_a) { return {omega_a, 1.0 - omega_a}; }
    [[nodiscard]] FusionWeights swapped() const { return {omega_b, omega_a}; }
    /// Throws DomainError when the weights are negative or do not sum to one within 1e-12.
    void check() const;
};

struct FusionConfig {
    /// Number of ranked label-set hypotheses kept by JL-GCI.
    std::size_t k_best = 100;
    /// Pairs whose fusion mass falls below this are treated as non-overlapping.
    double eta_floor = 1e-12;
    /// Existence probabilities are clamped to [eps, 1 - eps] inside log costs.
    double existence_epsilon = 1e-6;

    void check() const;
};

enum class FusionMethod { labelwise, lm, jl, simplified_jl };

std::string to_string(FusionMethod method);
/// Accepts "labelwise", "lm", "jl" and "simplified-jl"; throws ConfigError otherwise.
FusionMethod parse_fusion_method(const std::string& id);

/// Label pairs (agent a, agent b) a joint-label fusion may use.
using LabelPairSet = std::set<std::pair<AgentLabel, AgentLabel>>;

/// Fusion masses and fused spatial densities for every pair of Bernoulli
/// components of two densities.
struct PairwiseFusion {
    Eigen::MatrixXd eta;                               // |fa| x |fb|
    std::vector<std::vector<GaussianMixture>> fused;   // empty mixture where eta == 0
};

PairwiseFusion pairwise_fusion(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w);

/// GCI of two LMB densities that share one label space. Labels present on one
/// side only are fused with r = 0 on the other side, which yields zero existence.
/// Output holds the union of labels, those of `fa` first.
LmbDensity labelwise_gci(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w);

struct LmGciResult {
    /// Fused density over the labels of `fa`.
    LmbDensity fused;
    /// Optimal matching from labels of `fa` to labels of `fb`.
    std::map<AgentLabel, AgentLabel> matching;
    /// Square cost matrix solved by the Hungarian algorithm, rows for the
    /// larger support. `swapped` tells whether the rows belong to `fb`.
    CostMatrix cost;
    bool swapped = false;
};

/// Label matching GCI: optimal bijection from a Hungarian solve on the
/// inconsistency cost matrix (padded with auxiliary labels), then label-wise GCI.
LmGciResult lm_gci(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w,
                   const FusionConfig& cfg = {});

struct JlGciResult {
    /// LMB approximation over joint labels (existence = summed hypothesis weight).
    JointLmbDensity fused;
    /// Retained hypotheses with normalized weights.
    JlGlmbDensity glmb;
    /// Fusion masses, |fa| x |fb|.
    Eigen::MatrixXd eta;
};

/// GCI over the joint label space: ranked hypotheses from Murty on
/// [C1 C2], weights exp(cost0 - cost_i), normalization over the retained set.
/// `allowed`, when given, restricts the joint labels to those pairs.
JlGciResult jl_gci(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w, const FusionConfig& cfg,
                   const std::optional<LabelPairSet>& allowed = std::nullopt);

/// Closed-form joint label fusion for well separated targets: every label pair
/// fused independently, pairs with eta below the floor omitted.
JointLmbDensity simplified_jl_gci(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w,
                                  const FusionConfig& cfg,
                                  const std::optional<LabelPairSet>& allowed = std::nullopt);

/// Collapses a joint-label LMB onto one agent's labels: existence summed,
/// spatial densities mixed in proportion to the joint existences.
LmbDensity marginalize_to_agent(const JointLmbDensity& f, std::size_t agent_index);

/// JL-GCI over more than two agents, applied pairwise in agent order and
/// marginalized back to the first agent's labels between steps.
LmbDensity jl_gci_sequential(const std::vector<LmbDensity>& agents, const std::vector<double>& weights,
                             const FusionConfig& cfg);

struct InconsistencyReport {
    std::vector<double> mu;  ///< one value per supplied state set
    double d_g = 0.0;        ///< -log of the mean of mu
};

/// Label inconsistency of two LMB densities evaluated on caller-supplied
/// unlabeled state sets, by exact summation over label tuples.
InconsistencyReport label_inconsistency(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w,
                                        const std::vector<std::vector<Eigen::VectorXd>>& state_sets);

}  // namespace fusionkit
