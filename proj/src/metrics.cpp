#include "fusionkit/metrics.hpp"

#include "fusionkit/assignment.hpp"
#include "fusionkit/errors.hpp"

#include <cmath>

namespace fusionkit {

void TospaParams::check() const {
    if (!(p >= 1.0)) throw DomainError("TOSPA order must be >= 1");
    if (!(c > 0.0)) throw DomainError("TOSPA cutoff must be positive");
    if (!(alpha >= 0.0 && alpha <= c)) throw DomainError("TOSPA label penalty must lie in [0, c]");
}

double cutoff_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double p, double c) {
    const double d = std::pow((x - y).array().abs().pow(p).sum(), 1.0 / p);
    return std::min(c, d);
}

double tospa(const LabeledTrackSet& x, const LabeledTrackSet& y, const TospaParams& params) {
    params.check();
    const LabeledTrackSet& small = x.size() <= y.size() ? x : y;
    const LabeledTrackSet& large = x.size() <= y.size() ? y : x;
    const std::size_t m = small.size();
    const std::size_t n = large.size();
    if (n == 0) return 0.0;

    double total = std::pow(params.c, params.p) * static_cast<double>(n - m);
    if (m > 0) {
        CostMatrix cost(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(
                    cutoff_distance(small.entries[i].state, large.entries[j].state, params.p, params.c), params.p);
            }
        }
        const Assignment best = hungarian(cost);
        total += best.cost;
        const double label_penalty = std::pow(params.alpha, params.p);
        for (const auto& [i, j] : best.pairs) {
            if (small.entries[i].identity != large.entries[j].identity) total += label_penalty;
        }
    }
    return std::pow(total / static_cast<double>(n), 1.0 / params.p);
}

double ospa(const std::vector<Eigen::VectorXd>& x, const std::vector<Eigen::VectorXd>& y, double p, double c) {
    LabeledTrackSet a;
    LabeledTrackSet b;
    for (const auto& s : x) a.entries.push_back({s, ""});
    for (const auto& s : y) b.entries.push_back({s, ""});
    return tospa(a, b, {p, c, 0.0});
}

LabeledTrackSet select_coordinates(const LabeledTrackSet& tracks, const std::vector<Eigen::Index>& indices) {
    LabeledTrackSet out;
    out.entries.reserve(tracks.size());
    for (const auto& e : tracks.entries) {
        Eigen::VectorXd s(static_cast<Eigen::Index>(indices.size()));
        for (std::size_t k = 0; k < indices.size(); ++k) {
            if (indices[k] >= e.state.size()) throw RangeError("coordinate index beyond state dimension");
            s(static_cast<Eigen::Index>(k)) = e.state(indices[k]);
        }
        out.entries.push_back({std::move(s), e.identity});
    }
    return out;
}

}  // namespace fusionkit
