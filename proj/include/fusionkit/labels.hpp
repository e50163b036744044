#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fusionkit {

/// Track identity inside one agent's label space: birth time and ordinal
/// among the targets born at that time.
struct AgentLabel {
    std::uint32_t birth_time = 0;
    std::uint32_t birth_index = 0;

    auto operator<=>(const AgentLabel&) const = default;
};

/// One label per agent. Agent identity is the position in the sequence.
struct JointLabel {
    std::vector<AgentLabel> per_agent;

    JointLabel() = default;
    explicit JointLabel(std::vector<AgentLabel> labels);
    JointLabel(AgentLabel a, AgentLabel b) : per_agent{a, b} {}

    [[nodiscard]] std::size_t agents() const { return per_agent.size(); }
    /// 1-based agent index; throws RangeError when out of range.
    [[nodiscard]] const AgentLabel& at(std::size_t agent_index) const;

    auto operator<=>(const JointLabel&) const = default;
};

std::string to_string(const AgentLabel& label);
std::string to_string(const JointLabel& label);

/// A labeled state over the joint label space.
struct JointLabeledState {
    Eigen::VectorXd state;
    JointLabel label;
};

struct AgentLabeledState {
    Eigen::VectorXd state;
    AgentLabel label;
};

enum class DistinctMode { joint, per_agent };

/// Projection of a joint labeled set onto one agent's labeled state space.
/// Multiset semantics: repeated projected labels are kept so that a failing
/// distinctness check stays observable.
std::vector<AgentLabeledState> project_labels(const std::vector<JointLabeledState>& states,
                                              std::size_t agent_index);

/// True iff all labels of the projection are pairwise distinct.
bool has_distinct_labels(const std::vector<AgentLabeledState>& projected);

/// `joint`: joint labels pairwise distinct as tuples (differ in at least one
/// agent). `per_agent`: for every agent the projected labels are pairwise
/// distinct (differ in every agent).
bool distinct_label_indicator(const std::vector<JointLabel>& labels, DistinctMode mode);
bool distinct_label_indicator(const std::vector<JointLabeledState>& states, DistinctMode mode);

/// Sums joint existence mass onto the labels of one agent. Raw sums above
/// 1 + 1e-6 raise InconsistencyError; sums within tolerance are clamped to 1.
std::map<AgentLabel, double> marginalize_joint_label(const std::map<JointLabel, double>& existence,
                                                     std::size_t target_agent);

}  // namespace fusionkit
