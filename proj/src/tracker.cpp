#include "fusionkit/tracker.hpp"

#include "fusionkit/assignment.hpp"
#include "fusionkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace fusionkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Stand-in for a zero clutter intensity so that log costs stay finite.
constexpr double kMinClutterIntensity = 1e-300;

struct ComponentInnovation {
    Eigen::VectorXd predicted_z;
    Eigen::LLT<Eigen::MatrixXd> s_llt;
    Eigen::MatrixXd gain;
    Eigen::MatrixXd updated_cov;
};

struct TrackInnovation {
    std::vector<ComponentInnovation> comps;
    /// log g(z_j | track) for every measurement, -inf outside the gate.
    std::vector<double> log_likelihood;
};

TrackInnovation innovate(const BernoulliComponent<AgentLabel>& track, const std::vector<Eigen::VectorXd>& zs,
                         const SensorModel& sensor, double gate) {
    TrackInnovation out;
    const auto& H = sensor.H;
    for (const auto& c : track.density.components) {
        ComponentInnovation ci;
        ci.predicted_z = H * c.mean;
        Eigen::MatrixXd S = H * c.covariance * H.transpose() + sensor.R;
        S = 0.5 * (S + S.transpose()).eval();
        ci.s_llt = cholesky(S);
        const Eigen::MatrixXd PHt = c.covariance * H.transpose();
        ci.gain = ci.s_llt.solve(PHt.transpose()).transpose();
        Eigen::MatrixXd I = Eigen::MatrixXd::Identity(c.mean.size(), c.mean.size());
        ci.updated_cov = (I - ci.gain * H) * c.covariance;
        ci.updated_cov = 0.5 * (ci.updated_cov + ci.updated_cov.transpose()).eval();
        out.comps.push_back(std::move(ci));
    }
    out.log_likelihood.assign(zs.size(), -kInf);
    for (std::size_t j = 0; j < zs.size(); ++j) {
        bool gated = false;
        std::vector<double> terms;
        terms.reserve(out.comps.size());
        for (std::size_t c = 0; c < out.comps.size(); ++c) {
            const auto& ci = out.comps[c];
            const Eigen::VectorXd nu = zs[j] - ci.predicted_z;
            const double maha = ci.s_llt.matrixL().solve(nu).squaredNorm();
            gated = gated || maha < gate;
            const double w = track.density.components[c].weight;
            terms.push_back(w > 0.0 ? std::log(w) + log_gaussian_pdf(zs[j], ci.predicted_z, ci.s_llt) : -kInf);
        }
        if (!gated) continue;
        const double top = *std::max_element(terms.begin(), terms.end());
        if (!std::isfinite(top)) continue;
        double acc = 0.0;
        for (double t : terms) acc += std::exp(t - top);
        out.log_likelihood[j] = top + std::log(acc);
    }
    return out;
}

/// Posterior density of a track given it was detected by z.
GaussianMixture detected_density(const BernoulliComponent<AgentLabel>& track, const TrackInnovation& inn,
                                 const Eigen::VectorXd& z, double log_g) {
    GaussianMixture out;
    for (std::size_t c = 0; c < inn.comps.size(); ++c) {
        const auto& src = track.density.components[c];
        const auto& ci = inn.comps[c];
        if (src.weight <= 0.0) continue;
        const double w = std::exp(std::log(src.weight) + log_gaussian_pdf(z, ci.predicted_z, ci.s_llt) - log_g);
        out.components.push_back({w, src.mean + ci.gain * (z - ci.predicted_z), ci.updated_cov});
    }
    return out;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

MotionModel MotionModel::constant_velocity(double period, double sigma_w, double survival) {
    MotionModel m;
    const double T = period;
    m.F = Eigen::MatrixXd::Identity(4, 4);
    m.F(0, 1) = T;
    m.F(2, 3) = T;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(4, 2);
    G(0, 0) = T * T / 2.0;
    G(1, 0) = T;
    G(2, 1) = T * T / 2.0;
    G(3, 1) = T;
    m.Q = G * G.transpose() * sigma_w * sigma_w;
    m.survival = survival;
    return m;
}

void MotionModel::check() const {
    if (F.rows() != F.cols() || Q.rows() != F.rows() || Q.cols() != F.cols()) {
        throw DomainError("motion model matrices have inconsistent shapes");
    }
    if ((Q - Q.transpose()).norm() > 1e-9 * std::max(1.0, Q.norm())) throw DomainError("process noise not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q, Eigen::EigenvaluesOnly);
    if (Q.size() > 0 && eig.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, Q.norm())) {
        throw DomainError("process noise not positive semi-definite");
    }
    if (!(survival > 0.0 && survival <= 1.0)) throw DomainError("survival probability must lie in (0,1]");
}

SensorModel SensorModel::position(double sigma_x, double sigma_y, double detection, double clutter_rate,
                                  Region region) {
    SensorModel s;
    s.H = Eigen::MatrixXd::Zero(2, 4);
    s.H(0, 0) = 1.0;
    s.H(1, 2) = 1.0;
    s.R = Eigen::MatrixXd::Zero(2, 2);
    s.R(0, 0) = sigma_x * sigma_x;
    s.R(1, 1) = sigma_y * sigma_y;
    s.detection = detection;
    s.clutter_rate = clutter_rate;
    s.region = region;
    return s;
}

double SensorModel::clutter_intensity() const { return clutter_rate / region.area(); }

void SensorModel::check() const {
    if (H.rows() != R.rows()) throw DomainError("observation matrix and noise covariance disagree");
    check_spd(R);
    if (!(detection >= 0.0 && detection <= 1.0)) throw DomainError("detection probability must lie in [0,1]");
    if (!(clutter_rate >= 0.0)) throw DomainError("clutter rate must be non-negative");
    if (!(region.x_max > region.x_min && region.y_max > region.y_min)) throw DomainError("clutter region is degenerate");
}

void BirthModel::check() const {
    for (const auto& b : components) {
        if (!(b.existence > 0.0 && b.existence < 1.0)) throw DomainError("birth existence must lie in (0,1)");
        check_mixture(b.density, true);
    }
}

LmbDensity lmb_predict(const LmbDensity& f, const MotionModel& motion, const BirthModel& birth, std::uint32_t time) {
    LmbDensity out;
    out.components.reserve(f.size() + birth.components.size());
    for (const auto& track : f.components) {
        BernoulliComponent<AgentLabel> next{track.label, motion.survival * track.existence, {}};
        next.density.components.reserve(track.density.size());
        for (const auto& c : track.density.components) {
            Eigen::MatrixXd P = motion.F * c.covariance * motion.F.transpose() + motion.Q;
            P = 0.5 * (P + P.transpose()).eval();
            next.density.components.push_back({c.weight, motion.F * c.mean, std::move(P)});
        }
        out.components.push_back(std::move(next));
    }
    for (const auto& b : birth.components) {
        out.components.push_back({AgentLabel{time, b.birth_index}, b.existence, b.density});
    }
    return out;
}

LmbDensity lmb_update(const LmbDensity& f, const std::vector<Eigen::VectorXd>& measurements,
                      const SensorModel& sensor, const TrackerConfig& cfg) {
    const std::size_t n = f.size();
    const std::size_t m = measurements.size();
    const double pd = sensor.detection;
    const double log_kappa = std::log(std::max(sensor.clutter_intensity(), kMinClutterIntensity));

    std::vector<TrackInnovation> innovations;
    innovations.reserve(n);
    for (const auto& track : f.components) innovations.push_back(innovate(track, measurements, sensor, cfg.gate_threshold));

    // Tracks sharing a gated measurement land in the same group.
    UnionFind groups(n);
    std::vector<long> first_track(m, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!std::isfinite(innovations[i].log_likelihood[j])) continue;
            if (first_track[j] < 0) {
                first_track[j] = static_cast<long>(i);
            } else {
                groups.unite(i, static_cast<std::size_t>(first_track[j]));
            }
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) members[groups.find(i)].push_back(i);

    LmbDensity out;
    out.components.resize(n);
    for (const auto& [root, tracks] : members) {
        std::vector<std::size_t> zs;
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i : tracks) {
                if (std::isfinite(innovations[i].log_likelihood[j])) {
                    zs.push_back(j);
                    break;
                }
            }
        }
        if (zs.empty()) {
            for (std::size_t i : tracks) {
                const auto& track = f.components[i];
                const double r = track.existence;
                const double denom = 1.0 - r * pd;
                out.components[i] = {track.label, denom > 0.0 ? r * (1.0 - pd) / denom : 0.0, track.density};
            }
            continue;
        }

        // Columns: gated detections | missed (diagonal) | absent (diagonal).
        const std::size_t t = tracks.size();
        const std::size_t q = zs.size();
        CostMatrix cost = CostMatrix::Constant(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(q + 2 * t), kInf);
        for (std::size_t a = 0; a < t; ++a) {
            const auto& track = f.components[tracks[a]];
            const double r = track.existence;
            const auto row = static_cast<Eigen::Index>(a);
            for (std::size_t b = 0; b < q; ++b) {
                const double lg = innovations[tracks[a]].log_likelihood[zs[b]];
                if (std::isfinite(lg) && r > 0.0 && pd > 0.0) {
                    cost(row, static_cast<Eigen::Index>(b)) = -(std::log(r) + std::log(pd) + lg - log_kappa);
                }
            }
            if (r > 0.0 && pd < 1.0) cost(row, static_cast<Eigen::Index>(q + a)) = -(std::log(r) + std::log1p(-pd));
            if (r < 1.0) cost(row, static_cast<Eigen::Index>(q + t + a)) = -std::log1p(-r);
        }
        const auto ranked = murty_k_best(cost, cfg.k_best);
        if (ranked.empty()) throw InfeasibleError("no feasible association hypothesis in track group");

        // Weight of each (track, option) summed over hypotheses.
        std::vector<std::vector<double>> option_weight(t, std::vector<double>(q + 1, 0.0));
        std::vector<double> exists(t, 0.0);
        const double best = ranked.front().cost;
        double total = 0.0;
        for (const auto& h : ranked) total += std::exp(best - h.cost);
        for (const auto& h : ranked) {
            const double w = std::exp(best - h.cost) / total;
            for (const auto& [a, col] : h.pairs) {
                if (col < q) {
                    option_weight[a][col] += w;
                    exists[a] += w;
                } else if (col < q + t) {
                    option_weight[a][q] += w;
                    exists[a] += w;
                }
            }
        }
        for (std::size_t a = 0; a < t; ++a) {
            const auto& track = f.components[tracks[a]];
            const double r = std::clamp(exists[a], 0.0, 1.0);
            GaussianMixture density;
            if (r > 0.0) {
                for (std::size_t b = 0; b <= q; ++b) {
                    const double w = option_weight[a][b];
                    if (w <= 0.0) continue;
                    GaussianMixture part = b == q ? track.density
                                                  : detected_density(track, innovations[tracks[a]], measurements[zs[b]],
                                                                     innovations[tracks[a]].log_likelihood[zs[b]]);
                    for (auto& c : part.components) {
                        c.weight *= w / r;
                        density.components.push_back(std::move(c));
                    }
                }
            }
            if (density.empty()) density = track.density;
            out.components[tracks[a]] = {track.label, r, std::move(density)};
        }
    }

    LmbDensity kept;
    kept.components.reserve(n);
    for (auto& c : out.components) {
        if (c.existence < cfg.track_prune_threshold) continue;
        c.density = reduce_mixture(c.density, cfg.prune_threshold, cfg.merge_threshold, cfg.max_components);
        kept.components.push_back(std::move(c));
    }
    return kept;
}

GaussianMixture reduce_mixture(const GaussianMixture& p, double prune_threshold, double merge_threshold,
                               std::size_t max_components) {
    if (!(prune_threshold > 0.0) || !(merge_threshold > 0.0) || max_components == 0) {
        throw DomainError("reduction thresholds must be positive");
    }
    if (p.size() <= 1) return p;

    std::vector<const GaussianComponent*> alive;
    for (const auto& c : p.components) {
        if (c.weight >= prune_threshold) alive.push_back(&c);
    }
    bool removed = alive.size() != p.size();
    if (alive.empty()) {
        const auto heaviest = std::max_element(p.components.begin(), p.components.end(),
                                               [](const auto& a, const auto& b) { return a.weight < b.weight; });
        alive.push_back(&*heaviest);
    }

    GaussianMixture out;
    std::vector<char> used(alive.size(), 0);
    for (;;) {
        long top = -1;
        for (std::size_t i = 0; i < alive.size(); ++i) {
            if (!used[i] && (top < 0 || alive[i]->weight > alive[static_cast<std::size_t>(top)]->weight)) top = static_cast<long>(i);
        }
        if (top < 0) break;
        const auto& head = *alive[static_cast<std::size_t>(top)];
        std::vector<std::size_t> cluster;
        for (std::size_t i = 0; i < alive.size(); ++i) {
            if (used[i]) continue;
            const auto& c = *alive[i];
            const Eigen::VectorXd d = c.mean - head.mean;
            const double maha = d.dot(cholesky(c.covariance).solve(d));
            if (static_cast<long>(i) == top || maha <= merge_threshold) cluster.push_back(i);
        }
        if (cluster.size() == 1) {
            used[cluster.front()] = 1;
            out.components.push_back(head);
            continue;
        }
        double w = 0.0;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(head.mean.size());
        for (std::size_t i : cluster) {
            w += alive[i]->weight;
            mean += alive[i]->weight * alive[i]->mean;
        }
        mean /= w;
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(head.mean.size(), head.mean.size());
        for (std::size_t i : cluster) {
            const Eigen::VectorXd d = alive[i]->mean - mean;
            cov += alive[i]->weight * (alive[i]->covariance + d * d.transpose());
            used[i] = 1;
        }
        cov /= w;
        out.components.push_back({w, std::move(mean), 0.5 * (cov + cov.transpose())});
    }

    if (out.size() > max_components) {
        std::stable_sort(out.components.begin(), out.components.end(),
                         [](const auto& a, const auto& b) { return a.weight > b.weight; });
        out.components.resize(max_components);
        removed = true;
    }
    return removed ? normalized(std::move(out)) : out;
}

LabeledTrackSet extract_tracks(const LmbDensity& f, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("extraction threshold must lie in (0,1)");
    LabeledTrackSet out;
    for (const auto& c : f.components) {
        if (c.existence > threshold) out.entries.push_back({c.density.dominant_mean(), to_string(c.label)});
    }
    return out;
}

LabeledTrackSet extract_tracks(const JointLmbDensity& f, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("extraction threshold must lie in (0,1)");
    std::vector<const BernoulliComponent<JointLabel>*> passing;
    for (const auto& c : f.components) {
        if (c.existence > threshold) passing.push_back(&c);
    }
    std::stable_sort(passing.begin(), passing.end(), [](const auto* a, const auto* b) { return a->existence > b->existence; });
    std::map<AgentLabel, bool> claimed;
    LabeledTrackSet out;
    for (const auto* c : passing) {
        const auto& first = c->label.at(1);
        const bool taken = claimed[first];
        claimed[first] = true;
        out.entries.push_back({c->density.dominant_mean(), taken ? to_string(c->label) : to_string(first)});
    }
    return out;
}

LmbTracker::LmbTracker(MotionModel motion, SensorModel sensor, BirthModel birth, TrackerConfig cfg)
    : motion_(std::move(motion)), sensor_(std::move(sensor)), birth_(std::move(birth)), cfg_(cfg) {
    motion_.check();
    sensor_.check();
    birth_.check();
}

const LmbDensity& LmbTracker::step(std::uint32_t time, const std::vector<Eigen::VectorXd>& measurements) {
    posterior_ = lmb_update(lmb_predict(posterior_, motion_, birth_, time), measurements, sensor_, cfg_);
    return posterior_;
}

}  // namespace fusionkit
