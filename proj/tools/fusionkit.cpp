#include "fusionkit/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace fk = fusionkit::cli;

namespace {

void add_tospa_flags(CLI::App* cmd, fusionkit::TospaParams& t) {
    cmd->add_option("--tospa-p", t.p, "TOSPA order")->envname("FUSIONKIT_TOSPA_P")->capture_default_str();
    cmd->add_option("--tospa-c", t.c, "TOSPA cutoff [m]")->envname("FUSIONKIT_TOSPA_C")->capture_default_str();
    cmd->add_option("--tospa-alpha", t.alpha, "TOSPA label penalty [m]")->envname("FUSIONKIT_TOSPA_ALPHA")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed labeled multi-Bernoulli fusion toolkit"};
    app.set_version_flag("--version", FUSIONKIT_VERSION);
    app.require_subcommand(1);

    fk::ScenarioOptions scenario;
    auto* sc = app.add_subcommand("scenario", "Write a scenario config, its truth and one trial of measurements");
    sc->add_option("--config", scenario.config, "Scenario JSON (default: built-in scenario)")->envname("FUSIONKIT_CONFIG");
    sc->add_option("--seed", scenario.seed, "Random seed")->envname("FUSIONKIT_SEED");
    sc->add_option("--pd", scenario.pd, "Detection probability of every agent")->envname("FUSIONKIT_PD");
    sc->add_option("--out", scenario.out, "Output directory")->envname("FUSIONKIT_OUT")->required();

    fk::FuseOptions fuse;
    auto* fu = app.add_subcommand("fuse", "Fuse two serialized LMB densities");
    fu->add_option("input_a", fuse.input_a, "First density (JSON)")->required();
    fu->add_option("input_b", fuse.input_b, "Second density (JSON)")->required();
    fu->add_option("--method", fuse.method, "labelwise | lm | jl | simplified-jl")->envname("FUSIONKIT_METHOD")->capture_default_str();
    fu->add_option("--omega", fuse.omega, "Weight of the first density")->envname("FUSIONKIT_OMEGA")->capture_default_str();
    fu->add_option("--k-best", fuse.k_best, "Ranked hypotheses kept by jl")->envname("FUSIONKIT_K_BEST")->capture_default_str();
    fu->add_option("--out", fuse.out, "Output directory")->envname("FUSIONKIT_OUT")->required();

    fk::ExperimentOptions exp;
    auto* ex = app.add_subcommand("experiment", "Monte-Carlo comparison of the fusion methods");
    ex->add_option("--config", exp.config, "Scenario JSON (default: built-in scenario)")->envname("FUSIONKIT_CONFIG");
    ex->add_option("--method", exp.methods, "Methods to run (repeatable)")->envname("FUSIONKIT_METHOD")->delimiter(',');
    ex->add_option("--trials", exp.trials, "Monte-Carlo trials")->envname("FUSIONKIT_TRIALS")->capture_default_str();
    ex->add_option("--seed", exp.seed, "Random seed")->envname("FUSIONKIT_SEED");
    ex->add_option("--pd", exp.pd, "Detection probability of every agent")->envname("FUSIONKIT_PD");
    ex->add_option("--omega", exp.omega, "Weight of the first agent")->envname("FUSIONKIT_OMEGA");
    ex->add_option("--k-best", exp.k_best, "Ranked hypotheses kept by jl")->envname("FUSIONKIT_K_BEST")->capture_default_str();
    ex->add_option("--threads", exp.threads, "Worker threads (0 = all cores)")->envname("FUSIONKIT_THREADS")->capture_default_str();
    add_tospa_flags(ex, exp.tospa);
    ex->add_option("--out", exp.out, "Output directory")->envname("FUSIONKIT_OUT")->required();

    fk::EvalOptions eval;
    auto* ev = app.add_subcommand("eval", "Per-step TOSPA between two track sequences");
    ev->add_option("tracks_a", eval.tracks_a, "Track sequence (JSON)")->required();
    ev->add_option("tracks_b", eval.tracks_b, "Track sequence (JSON)")->required();
    add_tospa_flags(ev, eval.tospa);
    ev->add_option("--out", eval.out, "Output directory")->envname("FUSIONKIT_OUT")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? fk::kOk : fk::kUsage;
    }

    try {
        if (sc->parsed()) fk::cmd_scenario(scenario, std::cout);
        if (fu->parsed()) fk::cmd_fuse(fuse, std::cout);
        if (ex->parsed()) fk::cmd_experiment(exp, std::cout);
        if (ev->parsed()) fk::cmd_eval(eval, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fk::exit_code_for(e);
    }
    return fk::kOk;
}
