#include "fusionkit/simulation.hpp"

#include "fusionkit/assignment.hpp"
#include "fusionkit/errors.hpp"
#include "fusionkit/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace fusionkit {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTruthStream = 0;

/// Symmetric square root of a PSD matrix; tiny negative eigenvalues are clamped.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (M + M.transpose()));
    const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::VectorXd standard_normal(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = normal(rng);
    return out;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
    throw ConfigError("scenario field '" + field + "': " + what);
}

template <typename Fn>
void rethrow_as_config(const std::string& field, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        bad_field(field, e.what());
    }
}

double sensor_sigma(const SensorModel& sensor, Eigen::Index axis) { return std::sqrt(sensor.R(axis, axis)); }

std::uint32_t uint_field(const json& j, const std::string& key, const std::string& path) {
    const json& v = io::field(j, key, path);
    if (!v.is_number_unsigned()) bad_field(path.empty() ? key : path + "." + key, "expected a non-negative integer");
    return v.get<std::uint32_t>();
}

LabeledTrackSet fuse_and_extract(FusionMethod method, const LmbDensity& fa, const LmbDensity& fb,
                                 const FusionWeights& w, const FusionConfig& cfg, double threshold) {
    switch (method) {
        case FusionMethod::labelwise:
            return extract_tracks(labelwise_gci(fa, fb, w), threshold);
        case FusionMethod::lm:
            return extract_tracks(lm_gci(fa, fb, w, cfg).fused, threshold);
        case FusionMethod::jl:
            return extract_tracks(jl_gci(fa, fb, w, cfg).fused, threshold);
        case FusionMethod::simplified_jl:
            return extract_tracks(simplified_jl_gci(fa, fb, w, cfg), threshold);
    }
    throw ConfigError("unknown fusion method");
}

std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

BirthModel Scenario::agent_birth(std::size_t agent) const {
    if (agent >= agents.size()) throw RangeError("agent index out of range");
    BirthModel out = birth;
    const auto& order = agents[agent].birth_order;
    for (std::size_t j = 0; j < out.components.size(); ++j) {
        out.components[j].birth_index = j < order.size() ? order[j] : static_cast<std::uint32_t>(j);
    }
    return out;
}

void Scenario::set_detection(double pd) {
    for (auto& a : agents) a.sensor.detection = pd;
}

void Scenario::check() const {
    if (duration == 0) bad_field("duration", "must be positive");
    if (!(period > 0.0)) bad_field("period", "must be positive");
    if (!(sigma_w >= 0.0)) bad_field("sigma_w", "must be non-negative");
    if (!(survival > 0.0 && survival <= 1.0)) bad_field("survival", "must lie in (0,1]");
    if (!(truth_noise_scale >= 0.0)) bad_field("truth_noise_scale", "must be non-negative");
    if (!(region.x_max > region.x_min && region.y_max > region.y_min)) bad_field("region", "must be non-degenerate");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < truth_tracks.size(); ++i) {
        const auto& t = truth_tracks[i];
        const std::string f = "truth[" + std::to_string(i) + "]";
        if (!(t.birth < t.death && t.death <= duration)) bad_field(f, "requires birth < death <= duration");
        if (t.initial.size() != 4) bad_field(f + ".state", "expected 4 entries [x, vx, y, vy]");
        if (!t.initial.allFinite()) bad_field(f + ".state", "must be finite");
        if (!labels.insert(t.label).second) bad_field(f + ".label", "duplicate label '" + t.label + "'");
    }
    if (agents.empty()) bad_field("agents", "at least one agent is required");
    for (std::size_t a = 0; a < agents.size(); ++a) {
        const std::string f = "agents[" + std::to_string(a) + "]";
        rethrow_as_config(f, [&] { agents[a].sensor.check(); });
        const auto& order = agents[a].birth_order;
        if (order.size() != birth.components.size()) bad_field(f + ".birth_order", "needs one ordinal per birth site");
        if (std::set<std::uint32_t>(order.begin(), order.end()).size() != order.size()) {
            bad_field(f + ".birth_order", "ordinals must be distinct");
        }
    }
    rethrow_as_config("birth", [&] { birth.check(); });
    rethrow_as_config("omega", [&] { weights.check(); });
    const auto& tc = tracker;
    if (!(tc.prune_threshold >= 0.0 && tc.prune_threshold < 1.0)) bad_field("tracker.prune_threshold", "must lie in [0,1)");
    if (!(tc.merge_threshold >= 0.0)) bad_field("tracker.merge_threshold", "must be non-negative");
    if (tc.max_components == 0) bad_field("tracker.max_components", "must be positive");
    if (tc.k_best == 0) bad_field("tracker.k_best", "must be positive");
    if (!(tc.gate_threshold > 0.0)) bad_field("tracker.gate_threshold", "must be positive");
    if (!(tc.track_prune_threshold >= 0.0 && tc.track_prune_threshold < 1.0)) {
        bad_field("tracker.track_prune_threshold", "must lie in [0,1)");
    }
    if (!(tc.extraction_threshold > 0.0 && tc.extraction_threshold < 1.0)) {
        bad_field("tracker.extraction_threshold", "must lie in (0,1)");
    }
}

Scenario default_scenario() {
    Scenario s;
    auto cv = [](double x, double vx, double y, double vy) {
        Eigen::VectorXd v(4);
        v << x, vx, y, vy;
        return v;
    };
    s.truth_tracks = {
        {"T1", 0, 70, cv(0, 0, 0, -10)},         {"T2", 0, 100, cv(400, -10, -600, 5)},
        {"T3", 0, 70, cv(-800, 20, -200, -5)},   {"T4", 19, 100, cv(400, -7, -600, -4)},
        {"T5", 19, 100, cv(400, -2.5, -600, 10)}, {"T6", 19, 100, cv(0, 7.5, 0, -5)},
        {"T7", 39, 100, cv(-800, 12, -200, 7)},  {"T8", 39, 100, cv(-200, 15, 800, -10)},
        {"T9", 59, 100, cv(-800, 3, -200, 15)},  {"T10", 59, 100, cv(-200, -3, 800, -15)},
        {"T11", 79, 100, cv(0, -20, 0, -15)},    {"T12", 79, 100, cv(-200, 15, 800, -5)},
    };
    const Eigen::MatrixXd P = Eigen::VectorXd::Constant(4, 50.0 * 50.0).asDiagonal();
    for (const auto& site : {cv(0, 0, 0, 0), cv(400, 0, -600, 0), cv(-800, 0, -200, 0), cv(-200, 0, 800, 0)}) {
        s.birth.components.push_back({0.07, GaussianMixture(site, P), 0});
    }
    s.agents = {
        {SensorModel::position(10.0, 10.0, 0.98, 10.0, s.region), {0, 1, 2, 3}},
        {SensorModel::position(12.0, 12.0, 0.98, 10.0, s.region), {3, 2, 1, 0}},
    };
    return s;
}

json scenario_to_json(const Scenario& s) {
    json truth = json::array();
    for (const auto& t : s.truth_tracks) {
        truth.push_back({{"label", t.label},
                         {"birth", t.birth},
                         {"death", t.death},
                         {"state", std::vector<double>(t.initial.data(), t.initial.data() + t.initial.size())}});
    }
    json agents = json::array();
    for (const auto& a : s.agents) {
        agents.push_back({{"sigma_x", sensor_sigma(a.sensor, 0)},
                          {"sigma_y", sensor_sigma(a.sensor, 1)},
                          {"detection", a.sensor.detection},
                          {"clutter_rate", a.sensor.clutter_rate},
                          {"birth_order", a.birth_order}});
    }
    json birth = json::array();
    for (const auto& b : s.birth.components) {
        birth.push_back({{"existence", b.existence}, {"density", io::to_json(b.density)}});
    }
    const auto& tc = s.tracker;
    return {
        {"duration", s.duration},
        {"period", s.period},
        {"sigma_w", s.sigma_w},
        {"survival", s.survival},
        {"truth_noise_scale", s.truth_noise_scale},
        {"seed", s.seed},
        {"omega", s.weights.omega_a},
        {"region", {{"x_min", s.region.x_min}, {"x_max", s.region.x_max}, {"y_min", s.region.y_min}, {"y_max", s.region.y_max}}},
        {"agents", std::move(agents)},
        {"birth", std::move(birth)},
        {"truth", std::move(truth)},
        {"tracker",
         {{"prune_threshold", tc.prune_threshold},
          {"merge_threshold", tc.merge_threshold},
          {"max_components", tc.max_components},
          {"k_best", tc.k_best},
          {"gate_threshold", tc.gate_threshold},
          {"track_prune_threshold", tc.track_prune_threshold},
          {"extraction_threshold", tc.extraction_threshold}}},
    };
}

namespace {

Scenario parse_scenario(const json& j) {
    Scenario s;
    s.duration = uint_field(j, "duration", "");
    s.period = io::number_field(j, "period", "");
    s.sigma_w = io::number_field(j, "sigma_w", "");
    s.survival = io::number_field(j, "survival", "");
    s.truth_noise_scale = io::number_field(j, "truth_noise_scale", "");
    const json& seed = io::field(j, "seed", "");
    if (!seed.is_number_unsigned()) bad_field("seed", "expected a non-negative integer");
    s.seed = seed.get<std::uint64_t>();
    s.weights = FusionWeights::from_omega(io::number_field(j, "omega", ""));

    const json& region = io::field(j, "region", "");
    s.region = {io::number_field(region, "x_min", "region"), io::number_field(region, "x_max", "region"),
                io::number_field(region, "y_min", "region"), io::number_field(region, "y_max", "region")};

    const json& agents = io::field(j, "agents", "");
    if (!agents.is_array()) bad_field("agents", "expected an array");
    for (std::size_t a = 0; a < agents.size(); ++a) {
        const std::string p = "agents[" + std::to_string(a) + "]";
        AgentSetup setup;
        const double sx = io::number_field(agents[a], "sigma_x", p);
        const double sy = io::number_field(agents[a], "sigma_y", p);
        if (!(sx > 0.0)) bad_field(p + ".sigma_x", "must be positive");
        if (!(sy > 0.0)) bad_field(p + ".sigma_y", "must be positive");
        setup.sensor = SensorModel::position(sx, sy, io::number_field(agents[a], "detection", p),
                                             io::number_field(agents[a], "clutter_rate", p), s.region);
        const json& order = io::field(agents[a], "birth_order", p);
        if (!order.is_array()) bad_field(p + ".birth_order", "expected an array");
        for (const auto& o : order) {
            if (!o.is_number_unsigned()) bad_field(p + ".birth_order", "expected non-negative integers");
            setup.birth_order.push_back(o.get<std::uint32_t>());
        }
        s.agents.push_back(std::move(setup));
    }

    const json& birth = io::field(j, "birth", "");
    if (!birth.is_array()) bad_field("birth", "expected an array");
    for (std::size_t b = 0; b < birth.size(); ++b) {
        const std::string p = "birth[" + std::to_string(b) + "]";
        BirthComponent comp;
        comp.existence = io::number_field(birth[b], "existence", p);
        comp.density = io::mixture_from_json(io::field(birth[b], "density", p), p + ".density");
        s.birth.components.push_back(std::move(comp));
    }

    const json& truth = io::field(j, "truth", "");
    if (!truth.is_array()) bad_field("truth", "expected an array");
    for (std::size_t t = 0; t < truth.size(); ++t) {
        const std::string p = "truth[" + std::to_string(t) + "]";
        TruthTrack track;
        const json& label = io::field(truth[t], "label", p);
        if (!label.is_string()) bad_field(p + ".label", "expected a string");
        track.label = label.get<std::string>();
        track.birth = uint_field(truth[t], "birth", p);
        track.death = uint_field(truth[t], "death", p);
        const auto state = io::number_array(io::field(truth[t], "state", p), p + ".state");
        track.initial = Eigen::Map<const Eigen::VectorXd>(state.data(), static_cast<Eigen::Index>(state.size()));
        s.truth_tracks.push_back(std::move(track));
    }

    const json& tc = io::field(j, "tracker", "");
    s.tracker.prune_threshold = io::number_field(tc, "prune_threshold", "tracker");
    s.tracker.merge_threshold = io::number_field(tc, "merge_threshold", "tracker");
    s.tracker.max_components = uint_field(tc, "max_components", "tracker");
    s.tracker.k_best = uint_field(tc, "k_best", "tracker");
    s.tracker.gate_threshold = io::number_field(tc, "gate_threshold", "tracker");
    s.tracker.track_prune_threshold = io::number_field(tc, "track_prune_threshold", "tracker");
    s.tracker.extraction_threshold = io::number_field(tc, "extraction_threshold", "tracker");

    s.check();
    return s;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    try {
        return parse_scenario(j);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(io::read_json_file(path)); }

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
    auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
    auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(trial), hi(trial), lo(stream), hi(stream)};
    return std::mt19937_64(seq);
}

std::vector<LabeledTrackSet> generate_truth(const Scenario& s, std::uint64_t trial) {
    s.check();
    const MotionModel motion = s.motion();
    const bool noisy = s.truth_noise_scale > 0.0;
    const Eigen::MatrixXd noise_root = noisy ? psd_sqrt(motion.Q * s.truth_noise_scale) : Eigen::MatrixXd();
    auto rng = make_stream(s.seed, trial, kTruthStream);

    std::vector<LabeledTrackSet> out(s.duration);
    for (const auto& t : s.truth_tracks) {
        Eigen::VectorXd x = t.initial;
        for (std::uint32_t k = t.birth; k < t.death; ++k) {
            out[k].entries.push_back({x, t.label});
            x = motion.F * x;
            if (noisy) x += noise_root * standard_normal(x.size(), rng);
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> generate_measurements(const LabeledTrackSet& truth_step, const SensorModel& sensor,
                                                   std::mt19937_64& rng) {
    std::vector<Eigen::VectorXd> out;
    const Eigen::MatrixXd noise_root = psd_sqrt(sensor.R);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& e : truth_step.entries) {
        if (unit(rng) >= sensor.detection) continue;
        out.push_back(sensor.H * e.state + noise_root * standard_normal(sensor.R.rows(), rng));
    }
    if (sensor.clutter_rate > 0.0) {
        std::poisson_distribution<int> count(sensor.clutter_rate);
        std::uniform_real_distribution<double> ux(sensor.region.x_min, sensor.region.x_max);
        std::uniform_real_distribution<double> uy(sensor.region.y_min, sensor.region.y_max);
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd z(2);
            z(0) = ux(rng);
            z(1) = uy(rng);
            out.push_back(std::move(z));
        }
    }
    return out;
}

std::vector<LabeledTrackSet> map_identities(const std::vector<LabeledTrackSet>& estimates,
                                            const std::vector<LabeledTrackSet>& truth, const TospaParams& params,
                                            const std::vector<Eigen::Index>& coordinates) {
    if (estimates.size() != truth.size()) throw DomainError("estimate and truth sequences differ in length");
    params.check();

    auto index_identities = [](const std::vector<LabeledTrackSet>& seq) {
        std::vector<std::string> order;
        std::map<std::string, std::size_t> index;
        for (const auto& step : seq) {
            for (const auto& e : step.entries) {
                if (index.emplace(e.identity, order.size()).second) order.push_back(e.identity);
            }
        }
        return std::pair{order, index};
    };
    const auto [est_ids, est_index] = index_identities(estimates);
    const auto [truth_ids, truth_index] = index_identities(truth);
    if (est_ids.empty()) return estimates;

    const auto ne = static_cast<Eigen::Index>(est_ids.size());
    const auto nt = static_cast<Eigen::Index>(truth_ids.size());
    const double miss = std::pow(params.c, params.p);
    CostMatrix cost = CostMatrix::Constant(ne, nt + ne, kForbidden);
    cost.leftCols(nt).setZero();
    Eigen::VectorXd present = Eigen::VectorXd::Zero(ne);

    auto project = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(static_cast<Eigen::Index>(coordinates.size()));
        for (std::size_t i = 0; i < coordinates.size(); ++i) out(static_cast<Eigen::Index>(i)) = x(coordinates[i]);
        return out;
    };

    for (std::size_t k = 0; k < estimates.size(); ++k) {
        std::vector<const TrackEntry*> truth_at(static_cast<std::size_t>(nt), nullptr);
        for (const auto& t : truth[k].entries) truth_at[truth_index.at(t.identity)] = &t;
        for (const auto& e : estimates[k].entries) {
            const auto r = static_cast<Eigen::Index>(est_index.at(e.identity));
            present(r) += 1.0;
            const Eigen::VectorXd pe = project(e.state);
            for (Eigen::Index t = 0; t < nt; ++t) {
                const auto* tr = truth_at[static_cast<std::size_t>(t)];
                cost(r, t) += tr ? std::pow(cutoff_distance(pe, project(tr->state), params.p, params.c), params.p) : miss;
            }
        }
    }
    for (Eigen::Index r = 0; r < ne; ++r) cost(r, nt + r) = miss * present(r);

    const Assignment best = hungarian(cost);
    std::map<std::string, std::string> rename;
    for (const auto& [r, c] : best.pairs) {
        rename[est_ids[r]] = static_cast<Eigen::Index>(c) < nt ? truth_ids[c] : "est:" + est_ids[r];
    }
    std::vector<LabeledTrackSet> out = estimates;
    for (auto& step : out) {
        for (auto& e : step.entries) e.identity = rename.at(e.identity);
    }
    return out;
}

TrialResult run_trial(const Scenario& s, const std::vector<FusionMethod>& methods, std::uint64_t trial,
                      const TospaParams& tospa_params, const FusionConfig& cfg) {
    s.check();
    cfg.check();
    tospa_params.check();
    if (s.agents.size() != 2) throw ConfigError("fusion experiments require exactly two agents");

    const auto truth = generate_truth(s, trial);
    const MotionModel motion = s.motion();
    std::vector<LmbTracker> trackers;
    std::vector<std::mt19937_64> streams;
    for (std::size_t a = 0; a < s.agents.size(); ++a) {
        trackers.emplace_back(motion, s.agents[a].sensor, s.agent_birth(a), s.tracker);
        streams.push_back(make_stream(s.seed, trial, a + 1));
    }

    TrialResult out;
    out.methods = methods;
    std::vector<std::vector<LabeledTrackSet>> raw(methods.size(), std::vector<LabeledTrackSet>(s.duration));
    for (std::uint32_t k = 0; k < s.duration; ++k) {
        for (std::size_t a = 0; a < trackers.size(); ++a) {
            trackers[a].step(k, generate_measurements(truth[k], s.agents[a].sensor, streams[a]));
        }
        for (std::size_t m = 0; m < methods.size(); ++m) {
            raw[m][k] = fuse_and_extract(methods[m], trackers[0].posterior(), trackers[1].posterior(), s.weights, cfg,
                                         s.tracker.extraction_threshold);
        }
    }

    const std::vector<Eigen::Index> positions{0, 2};
    for (const auto& t : truth) out.truth_cardinality.push_back(t.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        auto mapped = map_identities(raw[m], truth, tospa_params, positions);
        std::vector<double> tospa_series;
        std::vector<double> card_series;
        for (std::uint32_t k = 0; k < s.duration; ++k) {
            tospa_series.push_back(tospa(select_coordinates(mapped[k], positions),
                                         select_coordinates(truth[k], positions), tospa_params));
            card_series.push_back(static_cast<double>(mapped[k].size()));
        }
        out.tracks.push_back(std::move(mapped));
        out.tospa.push_back(std::move(tospa_series));
        out.cardinality.push_back(std::move(card_series));
    }
    return out;
}

const MethodSummary& MonteCarloReport::at(FusionMethod method) const {
    for (const auto& m : methods) {
        if (m.method == method) return m;
    }
    throw RangeError("method " + to_string(method) + " not in report");
}

std::string MonteCarloReport::to_csv() const {
    std::ostringstream os;
    os << "step,method,mean_tospa,mean_cardinality,truth_cardinality\n";
    for (std::size_t k = 0; k < truth_cardinality.size(); ++k) {
        for (const auto& m : methods) {
            os << k << ',' << to_string(m.method) << ',' << format_double(m.mean_tospa[k]) << ','
               << format_double(m.mean_cardinality[k]) << ',' << format_double(truth_cardinality[k]) << '\n';
        }
    }
    return os.str();
}

json MonteCarloReport::summary() const {
    json per_method = json::object();
    for (const auto& m : methods) {
        per_method[to_string(m.method)] = {{"average_tospa", m.average_tospa},
                                           {"average_cardinality", m.average_cardinality},
                                           {"cardinality_bias", m.cardinality_bias}};
    }
    double truth_mean = 0.0;
    for (double c : truth_cardinality) truth_mean += c;
    if (!truth_cardinality.empty()) truth_mean /= static_cast<double>(truth_cardinality.size());
    return {{"trials", trials},
            {"steps", truth_cardinality.size()},
            {"average_truth_cardinality", truth_mean},
            {"methods", std::move(per_method)}};
}

MonteCarloReport run_monte_carlo(const Scenario& s, const std::vector<FusionMethod>& methods, std::size_t trials,
                                 const TospaParams& tospa_params, const FusionConfig& cfg, std::size_t threads) {
    if (trials == 0) throw ConfigError("trials must be at least 1");
    if (methods.empty()) throw ConfigError("at least one fusion method is required");
    if (std::set<FusionMethod>(methods.begin(), methods.end()).size() != methods.size()) {
        throw ConfigError("fusion methods must not repeat");
    }
    s.check();
    cfg.check();
    tospa_params.check();
    if (s.agents.size() != 2) throw ConfigError("fusion experiments require exactly two agents");

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, trials);

    std::vector<TrialResult> results(trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t t = next++; t < trials; t = next++) {
            try {
                results[t] = run_trial(s, methods, t, tospa_params, cfg);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = trials;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    MonteCarloReport report;
    report.trials = trials;
    const std::size_t steps = s.duration;
    for (std::size_t k = 0; k < steps; ++k) report.truth_cardinality.push_back(static_cast<double>(results[0].truth_cardinality[k]));
    const double n = static_cast<double>(trials);
    for (std::size_t m = 0; m < methods.size(); ++m) {
        MethodSummary ms;
        ms.method = methods[m];
        ms.mean_tospa.assign(steps, 0.0);
        ms.mean_cardinality.assign(steps, 0.0);
        for (const auto& r : results) {
            for (std::size_t k = 0; k < steps; ++k) {
                ms.mean_tospa[k] += r.tospa[m][k];
                ms.mean_cardinality[k] += r.cardinality[m][k];
            }
        }
        for (std::size_t k = 0; k < steps; ++k) {
            ms.mean_tospa[k] /= n;
            ms.mean_cardinality[k] /= n;
            ms.average_tospa += ms.mean_tospa[k];
            ms.average_cardinality += ms.mean_cardinality[k];
            ms.cardinality_bias += std::abs(ms.mean_cardinality[k] - report.truth_cardinality[k]);
        }
        ms.average_tospa /= static_cast<double>(steps);
        ms.average_cardinality /= static_cast<double>(steps);
        ms.cardinality_bias /= static_cast<double>(steps);
        report.methods.push_back(std::move(ms));
    }
    return report;
}

}  // namespace fusionkit
