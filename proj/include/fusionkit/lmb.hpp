#pragma once

#include "fusionkit/gaussian.hpp"
#include "fusionkit/labels.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace fusionkit {

/// Single Bernoulli track: existence probability and spatial density.
template <typename Label>
struct BernoulliComponent {
    Label label{};
    double existence = 0.0;
    GaussianMixture density;
};

/// Labeled multi-Bernoulli density. Labels are pairwise distinct.
template <typename Label>
struct BasicLmbDensity {
    std::vector<BernoulliComponent<Label>> components;

    [[nodiscard]] std::size_t size() const { return components.size(); }
    [[nodiscard]] bool empty() const { return components.empty(); }

    [[nodiscard]] const BernoulliComponent<Label>* find(const Label& label) const {
        for (const auto& c : components) {
            if (c.label == label) return &c;
        }
        return nullptr;
    }

    /// Expected number of targets.
    [[nodiscard]] double expected_cardinality() const {
        double n = 0.0;
        for (const auto& c : components) n += c.existence;
        return n;
    }
};

using LmbDensity = BasicLmbDensity<AgentLabel>;
using JointLmbDensity = BasicLmbDensity<JointLabel>;

/// Throws DomainError/RangeError on repeated labels, existence outside [0,1]
/// or an invalid spatial density.
void check_lmb(const LmbDensity& f);
void check_lmb(const JointLmbDensity& f);

/// One retained label-set hypothesis of the fused GLMB.
struct FusedHypothesis {
    std::vector<JointLabel> label_set;
    double weight = 0.0;
    double cost = 0.0;  ///< assignment cost of the hypothesis, before normalization
};

/// Fused GLMB over the joint label space: ranked label-set hypotheses and the
/// per-joint-label fused spatial densities.
struct JlGlmbDensity {
    std::vector<FusedHypothesis> hypotheses;
    std::map<JointLabel, GaussianMixture> spatial;
    /// Sum of unnormalized hypothesis weights exp(cost0 - cost_i) over the
    /// retained hypotheses.
    double normalization = 0.0;
};

/// Weights sum to one and every hypothesis passes the per-agent distinct label check.
void check_glmb(const JlGlmbDensity& f);

/// Ground-truth or estimated labeled states at one time step.
struct TrackEntry {
    Eigen::VectorXd state;
    std::string identity;
};

struct LabeledTrackSet {
    std::vector<TrackEntry> entries;

    [[nodiscard]] std::size_t size() const { return entries.size(); }
    [[nodiscard]] bool empty() const { return entries.empty(); }
};

void check_track_set(const LabeledTrackSet& tracks);

}  // namespace fusionkit
