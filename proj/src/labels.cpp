#include "fusionkit/labels.hpp"

#include "fusionkit/errors.hpp"

#include <algorithm>
#include <set>

namespace fusionkit {

JointLabel::JointLabel(std::vector<AgentLabel> labels) : per_agent(std::move(labels)) {}

const AgentLabel& JointLabel::at(std::size_t agent_index) const {
    if (agent_index < 1 || agent_index > per_agent.size()) {
        throw RangeError("agent index " + std::to_string(agent_index) + " outside 1.." +
                         std::to_string(per_agent.size()));
    }
    return per_agent[agent_index - 1];
}

std::string to_string(const AgentLabel& label) {
    return std::to_string(label.birth_time) + ":" + std::to_string(label.birth_index);
}

std::string to_string(const JointLabel& label) {
    std::string out;
    for (std::size_t i = 0; i < label.per_agent.size(); ++i) {
        if (i > 0) out += "|";
        out += to_string(label.per_agent[i]);
    }
    return out;
}

std::vector<AgentLabeledState> project_labels(const std::vector<JointLabeledState>& states,
                                              std::size_t agent_index) {
    std::vector<AgentLabeledState> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back({s.state, s.label.at(agent_index)});
    // An empty set has no agent count to check against; any index < 1 is still invalid.
    if (states.empty() && agent_index < 1) throw RangeError("agent index must be >= 1");
    return out;
}

bool has_distinct_labels(const std::vector<AgentLabeledState>& projected) {
    std::set<AgentLabel> seen;
    for (const auto& s : projected) {
        if (!seen.insert(s.label).second) return false;
    }
    return true;
}

bool distinct_label_indicator(const std::vector<JointLabel>& labels, DistinctMode mode) {
    if (mode == DistinctMode::joint) {
        std::set<JointLabel> unique(labels.begin(), labels.end());
        return unique.size() == labels.size();
    }
    if (labels.empty()) return true;
    const std::size_t agents = labels.front().agents();
    for (std::size_t a = 1; a <= agents; ++a) {
        std::set<AgentLabel> seen;
        for (const auto& l : labels) {
            if (!seen.insert(l.at(a)).second) return false;
        }
    }
    return true;
}

bool distinct_label_indicator(const std::vector<JointLabeledState>& states, DistinctMode mode) {
    std::vector<JointLabel> labels;
    labels.reserve(states.size());
    for (const auto& s : states) labels.push_back(s.label);
    return distinct_label_indicator(labels, mode);
}

std::map<AgentLabel, double> marginalize_joint_label(const std::map<JointLabel, double>& existence,
                                                     std::size_t target_agent) {
    std::map<AgentLabel, double> out;
    for (const auto& [label, r] : existence) {
        if (r < 0.0 || r > 1.0) {
            throw DomainError("joint existence " + std::to_string(r) + " for " + to_string(label) +
                              " outside [0,1]");
        }
        out[label.at(target_agent)] += r;
    }
    for (auto& [label, r] : out) {
        if (r > 1.0 + 1e-6) {
            throw InconsistencyError("marginal existence " + std::to_string(r) + " for label " +
                                     to_string(label) + " exceeds 1");
        }
        r = std::min(r, 1.0);
    }
    return out;
}

}  // namespace fusionkit
