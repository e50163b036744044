#include "fusionkit/lmb.hpp"

#include "fusionkit/errors.hpp"

#include <cmath>
#include <set>

namespace fusionkit {

namespace {

template <typename Label>
void check_lmb_impl(const BasicLmbDensity<Label>& f) {
    std::set<Label> seen;
    for (const auto& c : f.components) {
        if (!seen.insert(c.label).second) throw DomainError("repeated label " + to_string(c.label));
        if (!(c.existence >= 0.0 && c.existence <= 1.0)) {
            throw DomainError("existence of " + to_string(c.label) + " outside [0,1]");
        }
        check_mixture(c.density, true);
    }
}

}  // namespace

void check_lmb(const LmbDensity& f) { check_lmb_impl(f); }
void check_lmb(const JointLmbDensity& f) { check_lmb_impl(f); }

void check_glmb(const JlGlmbDensity& f) {
    double total = 0.0;
    for (const auto& h : f.hypotheses) {
        if (!(h.weight > 0.0)) throw DomainError("hypothesis weight must be positive");
        if (!distinct_label_indicator(h.label_set, DistinctMode::per_agent)) {
            throw DomainError("hypothesis repeats an agent label");
        }
        total += h.weight;
    }
    if (!f.hypotheses.empty() && std::abs(total - 1.0) > 1e-9) {
        throw DomainError("hypothesis weights sum to " + std::to_string(total));
    }
}

void check_track_set(const LabeledTrackSet& tracks) {
    std::set<std::string> seen;
    for (const auto& e : tracks.entries) {
        if (!seen.insert(e.identity).second) throw DomainError("repeated track identity " + e.identity);
    }
}

}  // namespace fusionkit
