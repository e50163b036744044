#include "fusionkit/cli.hpp"

#include "fusionkit/errors.hpp"
#include "fusionkit/io.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <set>
#include <sstream>

namespace fusionkit::cli {

using nlohmann::json;

namespace {

std::vector<FusionMethod> parse_methods(const std::vector<std::string>& ids) {
    if (ids.empty()) throw UsageError("at least one --method is required");
    std::vector<FusionMethod> out;
    for (const auto& id : ids) {
        try {
            out.push_back(parse_fusion_method(id));
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
    }
    if (std::set<FusionMethod>(out.begin(), out.end()).size() != out.size()) throw UsageError("duplicate --method");
    return out;
}

void prepare_out_dir(const std::filesystem::path& out) {
    if (out.empty()) throw UsageError("--out is required");
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec || !std::filesystem::is_directory(out)) throw IoError("cannot create output directory " + out.string());
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_manifest(const json& manifest, const std::filesystem::path& out) {
    io::write_text_file(out / "manifest.json", io::dump(manifest));
}

json measurements_to_json(const std::vector<std::vector<Eigen::VectorXd>>& scans) {
    json steps = json::array();
    for (const auto& scan : scans) {
        json zs = json::array();
        for (const auto& z : scan) zs.push_back(std::vector<double>(z.data(), z.data() + z.size()));
        steps.push_back(std::move(zs));
    }
    return steps;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return kUsage;
    if (dynamic_cast<const IoError*>(&e)) return kIo;
    return kValidation;
}

std::string short_number(double x) {
    std::ostringstream os;
    os << std::setprecision(4) << x;
    return os.str();
}

Scenario resolve_scenario(const std::optional<std::filesystem::path>& config, std::optional<std::uint64_t> seed,
                          std::optional<double> pd) {
    Scenario s = config ? load_scenario(*config) : default_scenario();
    if (seed) s.seed = *seed;
    if (pd) {
        if (!(*pd > 0.0 && *pd <= 1.0)) throw UsageError("--pd must lie in (0,1]");
        s.set_detection(*pd);
    }
    s.check();
    return s;
}

json run_manifest(const std::string& command, const std::optional<std::filesystem::path>& config,
                  std::optional<std::uint64_t> seed, const std::vector<std::string>& methods,
                  const std::filesystem::path& out) {
    return {{"command", command},
            {"config", config ? json(config->string()) : json(nullptr)},
            {"seed", seed ? json(*seed) : json(nullptr)},
            {"methods", methods},
            {"output_directory", out.string()},
            {"tool_version", FUSIONKIT_VERSION},
            {"timestamp", utc_timestamp()}};
}

void cmd_scenario(const ScenarioOptions& opt, std::ostream& console) {
    const Scenario s = resolve_scenario(opt.config, opt.seed, opt.pd);
    prepare_out_dir(opt.out);
    const auto truth = generate_truth(s, 0);
    json agents = json::array();
    for (std::size_t a = 0; a < s.agents.size(); ++a) {
        auto rng = make_stream(s.seed, 0, a + 1);
        std::vector<std::vector<Eigen::VectorXd>> scans;
        for (const auto& step : truth) scans.push_back(generate_measurements(step, s.agents[a].sensor, rng));
        agents.push_back(measurements_to_json(scans));
    }
    io::write_text_file(opt.out / "scenario.json", io::dump(scenario_to_json(s)));
    io::write_text_file(opt.out / "truth.json", io::dump(io::to_json(truth)));
    io::write_text_file(opt.out / "measurements.json", io::dump(json{{"agents", std::move(agents)}}));
    write_manifest(run_manifest("scenario", opt.config, s.seed, {}, opt.out), opt.out);
    console << "scenario: " << s.truth_tracks.size() << " tracks, " << s.duration << " steps, " << s.agents.size()
            << " agents -> " << opt.out.string() << "\n";
}

json cmd_fuse(const FuseOptions& opt, std::ostream& console) {
    const FusionMethod method = parse_methods({opt.method}).front();
    if (!(opt.omega > 0.0 && opt.omega < 1.0)) throw UsageError("--omega must lie in (0,1)");
    if (opt.k_best == 0) throw UsageError("--k-best must be positive");
    const LmbDensity fa = io::lmb_from_json(io::read_json_file(opt.input_a));
    const LmbDensity fb = io::lmb_from_json(io::read_json_file(opt.input_b));
    const FusionWeights w = FusionWeights::from_omega(opt.omega);
    FusionConfig cfg;
    cfg.k_best = opt.k_best;
    prepare_out_dir(opt.out);

    json diagnostics{{"method", to_string(method)}, {"omega", opt.omega}};
    json fused;
    std::size_t components = 0;
    switch (method) {
        case FusionMethod::labelwise: {
            const LmbDensity f = labelwise_gci(fa, fb, w);
            diagnostics["eta"] = matrix_to_json(pairwise_fusion(fa, fb, w).eta);
            fused = io::to_json(f);
            components = f.size();
            break;
        }
        case FusionMethod::lm: {
            const LmGciResult r = lm_gci(fa, fb, w, cfg);
            json matching = json::array();
            for (const auto& [a, b] : r.matching) matching.push_back({{"a", io::to_json(a)}, {"b", io::to_json(b)}});
            diagnostics["matching"] = std::move(matching);
            diagnostics["cost_matrix"] = matrix_to_json(r.cost);
            diagnostics["eta"] = matrix_to_json(pairwise_fusion(fa, fb, w).eta);
            fused = io::to_json(r.fused);
            components = r.fused.size();
            break;
        }
        case FusionMethod::jl: {
            const JlGciResult r = jl_gci(fa, fb, w, cfg);
            json hypotheses = json::array();
            for (const auto& h : r.glmb.hypotheses) {
                json labels = json::array();
                for (const auto& l : h.label_set) labels.push_back(io::to_json(l));
                hypotheses.push_back({{"labels", std::move(labels)}, {"weight", h.weight}, {"cost", h.cost}});
            }
            diagnostics["hypotheses"] = std::move(hypotheses);
            diagnostics["normalization"] = r.glmb.normalization;
            diagnostics["eta"] = matrix_to_json(r.eta);
            fused = io::to_json(r.fused);
            components = r.fused.size();
            break;
        }
        case FusionMethod::simplified_jl: {
            const JointLmbDensity f = simplified_jl_gci(fa, fb, w, cfg);
            diagnostics["eta"] = matrix_to_json(pairwise_fusion(fa, fb, w).eta);
            fused = io::to_json(f);
            components = f.size();
            break;
        }
    }
    io::write_text_file(opt.out / "fused.json", io::dump(fused));
    io::write_text_file(opt.out / "diagnostics.json", io::dump(diagnostics));
    write_manifest(run_manifest("fuse", std::nullopt, std::nullopt, {opt.method}, opt.out), opt.out);
    console << to_string(method) << ": " << components << " fused components -> " << opt.out.string() << "\n";
    return diagnostics;
}

MonteCarloReport cmd_experiment(const ExperimentOptions& opt, std::ostream& console) {
    if (opt.trials == 0) throw UsageError("--trials must be at least 1");
    if (opt.k_best == 0) throw UsageError("--k-best must be positive");
    const auto methods = parse_methods(opt.methods);
    try {
        opt.tospa.check();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    Scenario s = resolve_scenario(opt.config, opt.seed, opt.pd);
    if (opt.omega) {
        if (!(*opt.omega > 0.0 && *opt.omega < 1.0)) throw UsageError("--omega must lie in (0,1)");
        s.weights = FusionWeights::from_omega(*opt.omega);
    }
    FusionConfig cfg;
    cfg.k_best = opt.k_best;
    prepare_out_dir(opt.out);

    const MonteCarloReport report = run_monte_carlo(s, methods, opt.trials, opt.tospa, cfg, opt.threads);
    json summary = report.summary();
    summary["seed"] = s.seed;
    summary["detection"] = s.agents.front().sensor.detection;
    summary["tospa"] = {{"p", opt.tospa.p}, {"c", opt.tospa.c}, {"alpha", opt.tospa.alpha}};
    io::write_text_file(opt.out / "per_step.csv", report.to_csv());
    io::write_text_file(opt.out / "summary.json", io::dump(summary));
    write_manifest(run_manifest("experiment", opt.config, s.seed, opt.methods, opt.out), opt.out);

    console << "method           avg_tospa  avg_card  card_bias\n";
    for (const auto& m : report.methods) {
        console << std::left << std::setw(17) << to_string(m.method) << std::setw(11) << short_number(m.average_tospa)
                << std::setw(10) << short_number(m.average_cardinality) << short_number(m.cardinality_bias) << "\n";
    }
    return report;
}

std::vector<double> cmd_eval(const EvalOptions& opt, std::ostream& console) {
    try {
        opt.tospa.check();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const auto a = io::track_sequence_from_json(io::read_json_file(opt.tracks_a));
    const auto b = io::track_sequence_from_json(io::read_json_file(opt.tracks_b));
    if (a.size() != b.size()) {
        throw DomainError("track sequences differ in length: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
    }
    prepare_out_dir(opt.out);
    std::vector<double> values;
    std::ostringstream csv;
    csv << "step,tospa\n" << std::setprecision(17);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        values.push_back(tospa(a[k], b[k], opt.tospa));
        sum += values.back();
        csv << k << ',' << values.back() << '\n';
    }
    const double average = values.empty() ? 0.0 : sum / static_cast<double>(values.size());
    io::write_text_file(opt.out / "tospa.csv", csv.str());
    write_manifest(run_manifest("eval", std::nullopt, std::nullopt, {}, opt.out), opt.out);
    console << "steps: " << values.size() << "  average TOSPA: " << short_number(average) << "\n";
    return values;
}

}  // namespace fusionkit::cli
