#include "fusionkit/io.hpp"

#include "fusionkit/errors.hpp"

#include <fstream>
#include <sstream>

namespace fusionkit::io {

namespace {

std::string where(const std::string& path) { return "field '" + path + "'"; }

template <typename Label>
json lmb_to_json(const BasicLmbDensity<Label>& density) {
    json comps = json::array();
    for (const auto& c : density.components) {
        comps.push_back({{"label", to_json(c.label)}, {"existence", c.existence}, {"density", to_json(c.density)}});
    }
    return {{"components", std::move(comps)}};
}

template <typename Label, typename LabelParser>
BasicLmbDensity<Label> lmb_from_json_impl(const json& j, LabelParser parse_label) {
    const json& comps = field(j, "components", "");
    if (!comps.is_array()) throw ParseError(where("components") + ": expected an array");
    BasicLmbDensity<Label> out;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string path = "components[" + std::to_string(i) + "]";
        const json& c = comps[i];
        if (!c.is_object()) throw ParseError(where(path) + ": expected an object");
        BernoulliComponent<Label> comp;
        comp.label = parse_label(field(c, "label", path), path + ".label");
        comp.existence = number_field(c, "existence", path);
        comp.density = mixture_from_json(field(c, "density", path), path + ".density");
        out.components.push_back(std::move(comp));
    }
    try {
        check_lmb(out);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid density: ") + e.what());
    }
    return out;
}

}  // namespace

json to_json(const AgentLabel& label) { return json::array({label.birth_time, label.birth_index}); }

json to_json(const JointLabel& label) {
    json out = json::array();
    for (const auto& l : label.per_agent) out.push_back(to_json(l));
    return out;
}

json to_json(const GaussianMixture& mixture) {
    json out = json::array();
    for (const auto& c : mixture.components) {
        std::vector<double> mean(c.mean.data(), c.mean.data() + c.mean.size());
        std::vector<double> cov;
        cov.reserve(static_cast<std::size_t>(c.covariance.size()));
        for (Eigen::Index r = 0; r < c.covariance.rows(); ++r) {
            for (Eigen::Index k = 0; k < c.covariance.cols(); ++k) cov.push_back(c.covariance(r, k));
        }
        out.push_back({{"weight", c.weight}, {"mean", mean}, {"covariance", cov}});
    }
    return out;
}

json to_json(const LmbDensity& density) { return lmb_to_json(density); }
json to_json(const JointLmbDensity& density) { return lmb_to_json(density); }

json to_json(const LabeledTrackSet& tracks) {
    json entries = json::array();
    for (const auto& e : tracks.entries) {
        std::vector<double> state(e.state.data(), e.state.data() + e.state.size());
        entries.push_back({{"state", state}, {"identity", e.identity}});
    }
    return {{"entries", std::move(entries)}};
}

json to_json(const std::vector<LabeledTrackSet>& steps) {
    json out = json::array();
    for (const auto& s : steps) out.push_back(to_json(s));
    return {{"steps", std::move(out)}};
}

const json& field(const json& j, const std::string& key, const std::string& path) {
    const std::string full = path.empty() ? key : path + "." + key;
    if (!j.is_object()) throw ParseError(where(path.empty() ? "<root>" : path) + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(where(full) + ": missing");
    return *it;
}

double number_field(const json& j, const std::string& key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_number()) throw ParseError(where(path.empty() ? key : path + "." + key) + ": expected a number");
    return v.get<double>();
}

std::vector<double> number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(where(path) + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError(where(path + "[" + std::to_string(i) + "]") + ": expected a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

AgentLabel agent_label_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned()) {
        throw ParseError(where(path) + ": expected [birth_time, birth_index] with non-negative integers");
    }
    return {j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
}

JointLabel joint_label_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() < 2) throw ParseError(where(path) + ": expected an array of at least two [k, i] labels");
    std::vector<AgentLabel> labels;
    for (std::size_t i = 0; i < j.size(); ++i) labels.push_back(agent_label_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return JointLabel(std::move(labels));
}

GaussianMixture mixture_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ParseError(where(path) + ": expected a non-empty array of components");
    GaussianMixture out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        GaussianComponent c;
        c.weight = number_field(j[i], "weight", p);
        const auto mean = number_array(field(j[i], "mean", p), p + ".mean");
        const auto cov = number_array(field(j[i], "covariance", p), p + ".covariance");
        const auto d = static_cast<Eigen::Index>(mean.size());
        if (d == 0 || static_cast<Eigen::Index>(cov.size()) != d * d) {
            throw ParseError(where(p + ".covariance") + ": expected " + std::to_string(d * d) + " entries");
        }
        c.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), d);
        c.covariance = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(cov.data(), d, d);
        out.components.push_back(std::move(c));
    }
    try {
        check_mixture(out, false);
    } catch (const std::exception& e) {
        throw ParseError(where(path) + ": " + e.what());
    }
    return out;
}

LmbDensity lmb_from_json(const json& j) {
    return lmb_from_json_impl<AgentLabel>(j, [](const json& v, const std::string& p) { return agent_label_from_json(v, p); });
}

JointLmbDensity joint_lmb_from_json(const json& j) {
    return lmb_from_json_impl<JointLabel>(j, [](const json& v, const std::string& p) { return joint_label_from_json(v, p); });
}

LabeledTrackSet track_set_from_json(const json& j, const std::string& path) {
    const json& entries = field(j, "entries", path);
    const std::string base = path.empty() ? "entries" : path + ".entries";
    if (!entries.is_array()) throw ParseError(where(base) + ": expected an array");
    LabeledTrackSet out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string p = base + "[" + std::to_string(i) + "]";
        const auto state = number_array(field(entries[i], "state", p), p + ".state");
        const json& id = field(entries[i], "identity", p);
        if (!id.is_string()) throw ParseError(where(p + ".identity") + ": expected a string");
        out.entries.push_back({Eigen::Map<const Eigen::VectorXd>(state.data(), static_cast<Eigen::Index>(state.size())),
                               id.get<std::string>()});
    }
    try {
        check_track_set(out);
    } catch (const std::exception& e) {
        throw ParseError(where(base) + ": " + e.what());
    }
    return out;
}

std::vector<LabeledTrackSet> track_sequence_from_json(const json& j) {
    const json& steps = field(j, "steps", "");
    if (!steps.is_array()) throw ParseError(where("steps") + ": expected an array");
    std::vector<LabeledTrackSet> out;
    for (std::size_t k = 0; k < steps.size(); ++k) out.push_back(track_set_from_json(steps[k], "steps[" + std::to_string(k) + "]"));
    return out;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace fusionkit::io
