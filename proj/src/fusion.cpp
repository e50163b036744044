#include "fusionkit/fusion.hpp"

#include "fusionkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace fusionkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FusionResult fuse_pair(const GaussianMixture& pa, const GaussianMixture& pb, const FusionWeights& w) {
    // Degenerate weights: the zero-weight side contributes p^0 = 1.
    if (w.omega_b == 0.0) return {1.0, pa, false};
    if (w.omega_a == 0.0) return {1.0, pb, false};
    return gm_gci_fuse(pa, pb, w.omega_a);
}

double clamp_existence(double r, double eps) { return std::clamp(r, eps, 1.0 - eps); }

/// Fused existence of one Bernoulli pair:
///   eta ra^wa rb^wb / ((1-ra)^wa (1-rb)^wb + eta ra^wa rb^wb).
double fused_existence(double eta, double ra, double rb, const FusionWeights& w) {
    const double present = eta * std::pow(ra, w.omega_a) * std::pow(rb, w.omega_b);
    const double absent = std::pow(1.0 - ra, w.omega_a) * std::pow(1.0 - rb, w.omega_b);
    const double denom = absent + present;
    return denom > 0.0 ? present / denom : 0.0;
}

/// -log of the pair term of C1, with clamped existences.
double pair_cost(double eta, double ra, double rb, const FusionWeights& w, const FusionConfig& cfg) {
    if (!(eta >= cfg.eta_floor) || eta <= 0.0) return kInf;
    ra = clamp_existence(ra, cfg.existence_epsilon);
    rb = clamp_existence(rb, cfg.existence_epsilon);
    return -(std::log(eta) + w.omega_a * std::log(ra) + w.omega_b * std::log(rb) - w.omega_a * std::log1p(-ra) -
             w.omega_b * std::log1p(-rb));
}

bool pair_allowed(const std::optional<LabelPairSet>& allowed, const AgentLabel& a, const AgentLabel& b) {
    return !allowed || allowed->contains({a, b});
}

}  // namespace

void FusionWeights::check() const {
    if (!(omega_a >= 0.0) || !(omega_b >= 0.0)) throw DomainError("fusion weights must be non-negative");
    if (std::abs(omega_a + omega_b - 1.0) > 1e-12) throw DomainError("fusion weights must sum to one");
}

void FusionConfig::check() const {
    if (k_best == 0) throw DomainError("k_best must be positive");
    if (!(eta_floor >= 0.0)) throw DomainError("eta_floor must be non-negative");
    if (!(existence_epsilon > 0.0 && existence_epsilon < 0.5)) throw DomainError("existence_epsilon must lie in (0,0.5)");
}

std::string to_string(FusionMethod method) {
    switch (method) {
        case FusionMethod::labelwise: return "labelwise";
        case FusionMethod::lm: return "lm";
        case FusionMethod::jl: return "jl";
        case FusionMethod::simplified_jl: return "simplified-jl";
    }
    return "unknown";
}

FusionMethod parse_fusion_method(const std::string& id) {
    if (id == "labelwise") return FusionMethod::labelwise;
    if (id == "lm") return FusionMethod::lm;
    if (id == "jl") return FusionMethod::jl;
    if (id == "simplified-jl") return FusionMethod::simplified_jl;
    throw ConfigError("unknown fusion method '" + id + "' (expected labelwise|lm|jl|simplified-jl)");
}

PairwiseFusion pairwise_fusion(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w) {
    PairwiseFusion out;
    out.eta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(fa.size()), static_cast<Eigen::Index>(fb.size()));
    out.fused.assign(fa.size(), std::vector<GaussianMixture>(fb.size()));
    for (std::size_t i = 0; i < fa.size(); ++i) {
        for (std::size_t j = 0; j < fb.size(); ++j) {
            auto res = fuse_pair(fa.components[i].density, fb.components[j].density, w);
            out.eta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = res.eta;
            out.fused[i][j] = std::move(res.fused);
        }
    }
    return out;
}

LmbDensity labelwise_gci(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w) {
    w.check();
    LmbDensity out;
    out.components.reserve(fa.size() + fb.size());
    for (const auto& ca : fa.components) {
        const auto* cb = fb.find(ca.label);
        if (cb == nullptr) {
            out.components.push_back({ca.label, 0.0, ca.density});
            continue;
        }
        auto res = fuse_pair(ca.density, cb->density, w);
        const double r = fused_existence(res.eta, ca.existence, cb->existence, w);
        out.components.push_back({ca.label, r, res.no_overlap ? ca.density : std::move(res.fused)});
    }
    for (const auto& cb : fb.components) {
        if (fa.find(cb.label) == nullptr) out.components.push_back({cb.label, 0.0, cb.density});
    }
    return out;
}

LmGciResult lm_gci(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w, const FusionConfig& cfg) {
    w.check();
    cfg.check();
    LmGciResult result;
    result.swapped = fa.size() < fb.size();
    const LmbDensity& rows = result.swapped ? fb : fa;
    const LmbDensity& cols = result.swapped ? fa : fb;
    const FusionWeights wr = result.swapped ? w.swapped() : w;
    const auto n = rows.size();

    result.cost = CostMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double ri = clamp_existence(rows.components[i].existence, cfg.existence_epsilon);
        for (std::size_t j = 0; j < n; ++j) {
            double entry = 0.0;
            if (j < cols.size()) {
                const double rj = clamp_existence(cols.components[j].existence, cfg.existence_epsilon);
                const auto fused = fuse_pair(rows.components[i].density, cols.components[j].density, wr);
                entry = -std::log(std::pow(1.0 - ri, wr.omega_a) * std::pow(1.0 - rj, wr.omega_b) +
                                  std::pow(ri, wr.omega_a) * std::pow(rj, wr.omega_b) * fused.eta);
            } else {
                // Auxiliary label: nothing on the other side to match.
                entry = -wr.omega_a * std::log(1.0 - ri);
            }
            result.cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry;
        }
    }

    LmbDensity relabeled_b;
    if (n > 0) {
        const Assignment best = hungarian(result.cost);
        for (const auto& [i, j] : best.pairs) {
            if (j >= cols.size()) continue;
            const auto& a_comp = result.swapped ? cols.components[j] : rows.components[i];
            const auto& b_comp = result.swapped ? rows.components[i] : cols.components[j];
            result.matching.emplace(a_comp.label, b_comp.label);
            relabeled_b.components.push_back({a_comp.label, b_comp.existence, b_comp.density});
        }
    }
    result.fused = labelwise_gci(fa, relabeled_b, w);
    return result;
}

JlGciResult jl_gci(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w, const FusionConfig& cfg,
                   const std::optional<LabelPairSet>& allowed) {
    w.check();
    cfg.check();
    const auto na = fa.size();
    const auto nb = fb.size();
    const PairwiseFusion pairs = pairwise_fusion(fa, fb, w);

    JlGciResult result;
    result.eta = pairs.eta;

    // C = [C1 C2]: C1 scores each pairing, C2 lets a row stay unpaired.
    CostMatrix cost = CostMatrix::Constant(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nb + na), kInf);
    for (std::size_t i = 0; i < na; ++i) {
        const auto& ca = fa.components[i];
        for (std::size_t j = 0; j < nb; ++j) {
            const auto& cb = fb.components[j];
            if (!pair_allowed(allowed, ca.label, cb.label)) continue;
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                pair_cost(pairs.eta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), ca.existence,
                          cb.existence, w, cfg);
        }
        cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(nb + i)) = 0.0;
    }

    double cost0 = 0.0;
    for (const auto& c : fa.components) cost0 += w.omega_a * std::log1p(-clamp_existence(c.existence, cfg.existence_epsilon));
    for (const auto& c : fb.components) cost0 += w.omega_b * std::log1p(-clamp_existence(c.existence, cfg.existence_epsilon));

    std::vector<Assignment> ranked;
    if (na > 0) {
        ranked = murty_k_best(cost, cfg.k_best);
    } else {
        ranked.push_back(Assignment{});
    }

    // Normalize relative to the best hypothesis; C = exp(cost0 - min cost) * sum.
    const double best_cost = ranked.front().cost;
    double sum = 0.0;
    for (const auto& a : ranked) sum += std::exp(best_cost - a.cost);
    result.glmb.normalization = std::exp(cost0 - best_cost) * sum;

    std::map<JointLabel, double> existence;
    for (const auto& a : ranked) {
        FusedHypothesis h;
        h.weight = std::exp(best_cost - a.cost) / sum;
        h.cost = a.cost;
        for (const auto& [i, j] : a.pairs) {
            if (j >= nb) continue;
            JointLabel label(fa.components[i].label, fb.components[j].label);
            existence[label] += h.weight;
            h.label_set.push_back(std::move(label));
        }
        result.glmb.hypotheses.push_back(std::move(h));
    }

    // Components in (i, j) grid order.
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            JointLabel label(fa.components[i].label, fb.components[j].label);
            const auto it = existence.find(label);
            if (it == existence.end()) continue;
            result.glmb.spatial.emplace(label, pairs.fused[i][j]);
            result.fused.components.push_back({label, std::min(it->second, 1.0), pairs.fused[i][j]});
        }
    }
    return result;
}

JointLmbDensity simplified_jl_gci(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w,
                                  const FusionConfig& cfg, const std::optional<LabelPairSet>& allowed) {
    w.check();
    cfg.check();
    JointLmbDensity out;
    for (const auto& ca : fa.components) {
        for (const auto& cb : fb.components) {
            if (!pair_allowed(allowed, ca.label, cb.label)) continue;
            auto res = fuse_pair(ca.density, cb.density, w);
            if (res.no_overlap || res.eta < cfg.eta_floor) continue;
            out.components.push_back({JointLabel(ca.label, cb.label),
                                      fused_existence(res.eta, ca.existence, cb.existence, w), std::move(res.fused)});
        }
    }
    return out;
}

LmbDensity marginalize_to_agent(const JointLmbDensity& f, std::size_t agent_index) {
    std::map<JointLabel, double> joint;
    std::vector<AgentLabel> order;
    std::map<AgentLabel, std::vector<const BernoulliComponent<JointLabel>*>> groups;
    for (const auto& c : f.components) {
        joint[c.label] = c.existence;
        const auto& key = c.label.at(agent_index);
        if (!groups.contains(key)) order.push_back(key);
        groups[key].push_back(&c);
    }
    const auto marginal = marginalize_joint_label(joint, agent_index);

    LmbDensity out;
    for (const auto& label : order) {
        const double r = marginal.at(label);
        const auto& members = groups.at(label);
        GaussianMixture mix;
        for (const auto* m : members) {
            const double share = r > 0.0 ? m->existence / r : 1.0 / static_cast<double>(members.size());
            for (const auto& g : m->density.components) mix.components.push_back({share * g.weight, g.mean, g.covariance});
        }
        out.components.push_back({label, r, normalized(std::move(mix))});
    }
    return out;
}

LmbDensity jl_gci_sequential(const std::vector<LmbDensity>& agents, const std::vector<double>& weights,
                             const FusionConfig& cfg) {
    if (agents.size() != weights.size()) throw DomainError("one weight per agent required");
    if (agents.empty()) throw DomainError("no densities to fuse");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("fusion weights must sum to one");
    LmbDensity acc = agents.front();
    double acc_weight = weights.front();
    for (std::size_t i = 1; i < agents.size(); ++i) {
        const double sum = acc_weight + weights[i];
        const FusionWeights w{acc_weight / sum, weights[i] / sum};
        const auto res = jl_gci(acc, agents[i], w, cfg);
        acc = marginalize_to_agent(res.fused, 1);
        acc_weight = sum;
    }
    return acc;
}

InconsistencyReport label_inconsistency(const LmbDensity& fa, const LmbDensity& fb, const FusionWeights& w,
                                        const std::vector<std::vector<Eigen::VectorXd>>& state_sets) {
    w.check();
    if (state_sets.empty()) throw DomainError("label inconsistency needs at least one state set");

    std::vector<AgentLabel> space;
    for (const auto& c : fa.components) space.push_back(c.label);
    for (const auto& c : fb.components) {
        if (fa.find(c.label) == nullptr) space.push_back(c.label);
    }
    const std::size_t L = space.size();

    // Conditional labelling distribution of one agent over injective tuples,
    // in log domain, indexed by tuple enumeration order.
    auto labelling = [&](const LmbDensity& f, const std::vector<Eigen::VectorXd>& xs,
                         const std::vector<std::vector<std::size_t>>& tuples) {
        std::vector<const BernoulliComponent<AgentLabel>*> comp(L, nullptr);
        for (std::size_t l = 0; l < L; ++l) comp[l] = f.find(space[l]);
        // log r p(x_j, l) for every (j, l)
        std::vector<std::vector<double>> log_rp(xs.size(), std::vector<double>(L, -kInf));
        for (std::size_t j = 0; j < xs.size(); ++j) {
            for (std::size_t l = 0; l < L; ++l) {
                if (comp[l] == nullptr || comp[l]->existence <= 0.0) continue;
                double p = comp[l]->density.evaluate(xs[j]);
                if (p > 0.0) log_rp[j][l] = std::log(comp[l]->existence) + std::log(p);
            }
        }
        std::vector<double> logw(tuples.size(), -kInf);
        std::vector<char> in_tuple(L);
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            std::fill(in_tuple.begin(), in_tuple.end(), 0);
            double acc = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                in_tuple[tuples[t][j]] = 1;
                acc += log_rp[j][tuples[t][j]];
            }
            for (std::size_t l = 0; l < L && std::isfinite(acc); ++l) {
                if (in_tuple[l] || comp[l] == nullptr) continue;
                acc += std::log1p(-comp[l]->existence);
            }
            logw[t] = acc;
        }
        const double top = logw.empty() ? -kInf : *std::max_element(logw.begin(), logw.end());
        std::vector<double> prob(tuples.size(), 0.0);
        if (!std::isfinite(top)) return prob;
        double sum = 0.0;
        for (double v : logw) sum += std::exp(v - top);
        for (std::size_t t = 0; t < tuples.size(); ++t) prob[t] = std::exp(logw[t] - top) / sum;
        return prob;
    };

    InconsistencyReport report;
    for (const auto& xs : state_sets) {
        const std::size_t n = xs.size();
        if (std::pow(static_cast<double>(L), static_cast<double>(n)) > 1e6) {
            throw DomainError("label tuple enumeration exceeds 1e6 tuples");
        }
        std::vector<std::vector<std::size_t>> tuples;
        std::vector<std::size_t> current;
        std::vector<char> used(L, 0);
        std::function<void()> enumerate = [&]() {
            if (current.size() == n) {
                tuples.push_back(current);
                return;
            }
            for (std::size_t l = 0; l < L; ++l) {
                if (used[l]) continue;
                used[l] = 1;
                current.push_back(l);
                enumerate();
                current.pop_back();
                used[l] = 0;
            }
        };
        enumerate();

        const auto pa = labelling(fa, xs, tuples);
        const auto pb = labelling(fb, xs, tuples);
        double mu = 0.0;
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            if (pa[t] > 0.0 && pb[t] > 0.0) mu += std::pow(pa[t], w.omega_a) * std::pow(pb[t], w.omega_b);
        }
        report.mu.push_back(mu);
    }
    const double mean = std::accumulate(report.mu.begin(), report.mu.end(), 0.0) / static_cast<double>(report.mu.size());
    report.d_g = -std::log(mean);
    return report;
}

}  // namespace fusionkit
