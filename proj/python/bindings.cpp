#include "fusionkit/fusion.hpp"
#include "fusionkit/gaussian_algebra.hpp"
#include "fusionkit/io.hpp"
#include "fusionkit/metrics.hpp"
#include "fusionkit/simulation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fusionkit;

namespace {

std::string fuse(const std::string& a, const std::string& b, const std::string& method, double omega, std::size_t k_best) {
    const auto fa = io::lmb_from_json(io::json::parse(a));
    const auto fb = io::lmb_from_json(io::json::parse(b));
    const auto w = FusionWeights::from_omega(omega);
    FusionConfig cfg;
    cfg.k_best = k_best;
    switch (parse_fusion_method(method)) {
        case FusionMethod::labelwise: return io::dump(io::to_json(labelwise_gci(fa, fb, w)));
        case FusionMethod::lm: return io::dump(io::to_json(lm_gci(fa, fb, w, cfg).fused));
        case FusionMethod::jl: return io::dump(io::to_json(jl_gci(fa, fb, w, cfg).fused));
        case FusionMethod::simplified_jl: return io::dump(io::to_json(simplified_jl_gci(fa, fb, w, cfg)));
    }
    return {};
}

double tospa_json(const std::string& x, const std::string& y, double p, double c, double alpha) {
    return tospa(io::track_set_from_json(io::json::parse(x)), io::track_set_from_json(io::json::parse(y)), {p, c, alpha});
}

std::string experiment(const std::string& scenario, const std::vector<std::string>& methods, std::size_t trials) {
    std::vector<FusionMethod> ms;
    for (const auto& m : methods) ms.push_back(parse_fusion_method(m));
    const auto report = run_monte_carlo(scenario_from_json(io::json::parse(scenario)), ms, trials, {}, {});
    return io::dump(report.summary());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = FUSIONKIT_VERSION;
    m.def("kappa", &kappa, py::arg("omega"), py::arg("covariance"));
    m.def("fuse_json", &fuse, py::arg("a"), py::arg("b"), py::arg("method"), py::arg("omega") = 0.5,
          py::arg("k_best") = 100);
    m.def("tospa_json", &tospa_json, py::arg("x"), py::arg("y"), py::arg("p") = 1.0, py::arg("c") = 100.0,
          py::arg("alpha") = 100.0);
    m.def("default_scenario_json", [] { return io::dump(scenario_to_json(default_scenario())); });
    m.def("experiment_json", &experiment, py::arg("scenario"), py::arg("methods"), py::arg("trials"));
}
