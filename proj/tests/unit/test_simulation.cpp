#include "fusionkit/errors.hpp"
#include "fusionkit/io.hpp"
#include "fusionkit/simulation.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace fusionkit;

namespace {

Scenario one_track(const Eigen::Vector4d& initial, std::uint32_t duration) {
    Scenario s = default_scenario();
    s.duration = duration;
    s.truth_tracks = {{"T", 0, duration, initial}};
    return s;
}

Scenario short_scenario(std::uint32_t duration) {
    Scenario s = default_scenario();
    s.duration = duration;
    std::vector<TruthTrack> kept;
    for (auto t : s.truth_tracks) {
        if (t.birth >= duration) continue;
        t.death = std::min(t.death, duration);
        kept.push_back(t);
    }
    s.truth_tracks = kept;
    return s;
}

SensorModel exact_sensor(double pd, double clutter) {
    auto s = SensorModel::position(1e-9, 1e-9, pd, clutter);
    s.R = Eigen::Matrix2d::Zero();
    return s;
}

}  // namespace

TEST_CASE("default scenario") {
    const Scenario s = default_scenario();
    CHECK_NOTHROW(s.check());
    CHECK(s.truth_tracks.size() == 12);
    CHECK(s.agents.size() == 2);
    CHECK(s.birth.components.size() == 4);
    const auto truth = generate_truth(s);
    std::size_t peak = 0;
    for (const auto& step : truth) peak = std::max(peak, step.size());
    CHECK(peak == 10);
    const auto b = s.agent_birth(1);
    CHECK(b.components[0].birth_index == 3);
    CHECK(b.components[3].birth_index == 0);
}

TEST_CASE("shipped config equals the built-in scenario") {
    const Scenario shipped = load_scenario(std::filesystem::path(FUSIONKIT_SOURCE_DIR) / "config" / "default_scenario.json");
    CHECK(io::dump(scenario_to_json(shipped)) == io::dump(scenario_to_json(default_scenario())));
}

TEST_CASE("scenario validation") {
    Scenario s = default_scenario();
    SUBCASE("track outlives the run") {
        s.truth_tracks[0].death = s.duration + 1;
        CHECK_THROWS_WITH_AS(s.check(), doctest::Contains("truth[0]"), ConfigError);
    }
    SUBCASE("birth order length") {
        s.agents[1].birth_order.pop_back();
        CHECK_THROWS_WITH_AS(s.check(), doctest::Contains("agents[1].birth_order"), ConfigError);
    }
    SUBCASE("weights") {
        s.weights = {0.7, 0.7};
        CHECK_THROWS_WITH_AS(s.check(), doctest::Contains("omega"), ConfigError);
    }
    SUBCASE("json field errors") {
        auto j = scenario_to_json(default_scenario());
        j["agents"][0]["detection"] = "high";
        CHECK_THROWS_WITH_AS(scenario_from_json(j), doctest::Contains("agents[0].detection"), ConfigError);
    }
    SUBCASE("json round trip") {
        const auto j = scenario_to_json(s);
        CHECK(io::dump(scenario_to_json(scenario_from_json(j))) == io::dump(j));
    }
}

TEST_CASE("generate_truth") {
    SUBCASE("noiseless constant velocity") {
        const auto truth = generate_truth(one_track(Eigen::Vector4d(0, 100, 0, 0), 3));
        REQUIRE(truth.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) {
            REQUIRE(truth[k].size() == 1);
            CHECK(truth[k].entries[0].state(0) == doctest::Approx(100.0 * static_cast<double>(k)).epsilon(1e-15));
            CHECK(truth[k].entries[0].state(2) == 0.0);
        }
    }
    SUBCASE("single-step track") {
        Scenario s = one_track(Eigen::Vector4d::Zero(), 10);
        s.truth_tracks[0].birth = 4;
        s.truth_tracks[0].death = 5;
        const auto truth = generate_truth(s);
        std::size_t seen = 0;
        for (std::size_t k = 0; k < truth.size(); ++k) {
            seen += truth[k].size();
            if (!truth[k].empty()) CHECK(k == 4);
        }
        CHECK(seen == 1);
    }
    SUBCASE("deterministic with noise") {
        Scenario s = default_scenario();
        s.truth_noise_scale = 1.0;
        const auto a = io::dump(io::to_json(generate_truth(s, 3)));
        const auto b = io::dump(io::to_json(generate_truth(s, 3)));
        CHECK(a == b);
        CHECK(a != io::dump(io::to_json(generate_truth(s, 4))));
    }
}

TEST_CASE("generate_measurements") {
    LabeledTrackSet truth;
    truth.entries.push_back({Eigen::Vector4d(10, 1, -20, 2), "a"});
    truth.entries.push_back({Eigen::Vector4d(300, 0, 400, 0), "b"});
    SUBCASE("perfect sensor") {
        auto rng = make_stream(1, 0, 1);
        const auto z = generate_measurements(truth, exact_sensor(1.0, 0.0), rng);
        REQUIRE(z.size() == 2);
        CHECK(z[0] == Eigen::Vector2d(10, -20));
        CHECK(z[1] == Eigen::Vector2d(300, 400));
    }
    SUBCASE("blind sensor") {
        auto rng = make_stream(1, 0, 1);
        CHECK(generate_measurements(truth, exact_sensor(0.0, 0.0), rng).empty());
    }
    SUBCASE("clutter count is Poisson") {
        auto rng = make_stream(5, 0, 1);
        const auto sensor = SensorModel::position(10.0, 10.0, 0.98, 10.0);
        const int draws = 10000;
        double sum = 0.0;
        double sum_sq = 0.0;
        bool inside = true;
        for (int i = 0; i < draws; ++i) {
            const auto z = generate_measurements(LabeledTrackSet{}, sensor, rng);
            sum += static_cast<double>(z.size());
            sum_sq += static_cast<double>(z.size() * z.size());
            for (const auto& p : z) {
                inside = inside && p(0) >= -1000 && p(0) <= 1000 && p(1) >= -1000 && p(1) <= 1000;
            }
        }
        const double mean = sum / draws;
        const double var = sum_sq / draws - mean * mean;
        CHECK(std::abs(mean - 10.0) < 3.0 * std::sqrt(10.0 / draws));
        CHECK(std::abs(var - 10.0) < 1.0);
        CHECK(inside);
    }
    SUBCASE("streams are independent of each other") {
        auto a = make_stream(1, 0, 1);
        auto b = make_stream(1, 0, 2);
        auto c = make_stream(1, 1, 1);
        const auto va = a();
        CHECK(va != b());
        CHECK(va != c());
        auto again = make_stream(1, 0, 1);
        CHECK(again() == va);
    }
}

TEST_CASE("map_identities") {
    std::vector<LabeledTrackSet> truth(3);
    std::vector<LabeledTrackSet> est(3);
    for (std::size_t k = 0; k < 3; ++k) {
        const double x = 10.0 * static_cast<double>(k);
        truth[k].entries.push_back({Eigen::Vector4d(x, 0, 0, 0), "A"});
        truth[k].entries.push_back({Eigen::Vector4d(x, 0, 500, 0), "B"});
        est[k].entries.push_back({Eigen::Vector4d(x + 1, 0, 499, 0), "7:1"});
        est[k].entries.push_back({Eigen::Vector4d(x - 1, 0, 2, 0), "7:2"});
    }
    est[2].entries.push_back({Eigen::Vector4d(900, 0, 900, 0), "9:9"});
    const auto mapped = map_identities(est, truth, {}, {0, 2});
    CHECK(mapped[0].entries[0].identity == "B");
    CHECK(mapped[0].entries[1].identity == "A");
    CHECK(mapped[2].entries[2].identity == "est:9:9");
    CHECK_THROWS_AS(map_identities(est, std::vector<LabeledTrackSet>(2), {}, {0, 2}), DomainError);
}

TEST_CASE("trials") {
    const Scenario s = short_scenario(20);
    const std::vector<FusionMethod> all{FusionMethod::labelwise, FusionMethod::lm, FusionMethod::jl,
                                        FusionMethod::simplified_jl};
    SUBCASE("series lengths") {
        const auto r = run_trial(s, all, 0, {}, {});
        for (std::size_t m = 0; m < all.size(); ++m) {
            CHECK(r.tospa[m].size() == s.duration);
            CHECK(r.cardinality[m].size() == s.duration);
            CHECK(r.tracks[m].size() == s.duration);
        }
        CHECK(r.truth_cardinality.size() == s.duration);
    }
    SUBCASE("adding methods leaves the others unchanged") {
        const auto alone = run_trial(s, {FusionMethod::lm}, 1, {}, {});
        const auto together = run_trial(s, all, 1, {}, {});
        CHECK(alone.tospa[0] == together.tospa[1]);
        CHECK(alone.cardinality[0] == together.cardinality[1]);
    }
    SUBCASE("aggregate independent of thread count") {
        const auto one = run_monte_carlo(s, all, 3, {}, {}, 1);
        const auto three = run_monte_carlo(s, all, 3, {}, {}, 3);
        CHECK(one.to_csv() == three.to_csv());
        CHECK(one.summary().dump() == three.summary().dump());
        const auto& lm = one.at(FusionMethod::lm);
        CHECK(lm.mean_tospa.size() == s.duration);
        CHECK_THROWS_AS((void)run_monte_carlo(s, {FusionMethod::lm}, 1, {}, {}).at(FusionMethod::jl), RangeError);
    }
    SUBCASE("configuration errors") {
        CHECK_THROWS_AS(run_monte_carlo(s, all, 0, {}, {}), ConfigError);
        CHECK_THROWS_AS(run_monte_carlo(s, {}, 1, {}, {}), ConfigError);
        CHECK_THROWS_AS(run_monte_carlo(s, {FusionMethod::jl, FusionMethod::jl}, 1, {}, {}), ConfigError);
        Scenario single = s;
        single.agents.pop_back();
        CHECK_THROWS_AS(run_monte_carlo(single, all, 1, {}, {}), ConfigError);
    }
}

TEST_CASE("label-wise fusion suffers from permuted labels") {
    Scenario s = default_scenario();
    s.duration = 30;
    s.truth_tracks = {{"A", 2, 30, Eigen::Vector4d(0, 5, 0, -5)}, {"B", 2, 30, Eigen::Vector4d(400, -5, -600, 5)}};
    const auto r = run_trial(s, {FusionMethod::labelwise, FusionMethod::jl}, 0, {}, {});
    auto average = [](const std::vector<double>& v) {
        double a = 0.0;
        for (double x : v) a += x;
        return a / static_cast<double>(v.size());
    };
    const double labelwise = average(r.tospa[0]);
    const double jl = average(r.tospa[1]);
    CHECK(labelwise > 2.0 * jl);
}
