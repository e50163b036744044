#pragma once

#include "fusionkit/lmb.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fusionkit::io {

using nlohmann::json;

// Labels are [k, i]; joint labels are arrays of [k, i]. Mixtures are arrays of
// {weight, mean, covariance} with the covariance flattened row-major.

json to_json(const AgentLabel& label);
json to_json(const JointLabel& label);
json to_json(const GaussianMixture& mixture);
json to_json(const LmbDensity& density);
json to_json(const JointLmbDensity& density);
json to_json(const LabeledTrackSet& tracks);
json to_json(const std::vector<LabeledTrackSet>& steps);

/// Parsers validate structure and invariants; failures raise ParseError with
/// the offending field path, e.g. "components[2].density[0].covariance".
AgentLabel agent_label_from_json(const json& j, const std::string& path = "label");
JointLabel joint_label_from_json(const json& j, const std::string& path = "label");
GaussianMixture mixture_from_json(const json& j, const std::string& path = "density");
LmbDensity lmb_from_json(const json& j);
JointLmbDensity joint_lmb_from_json(const json& j);
LabeledTrackSet track_set_from_json(const json& j, const std::string& path = "entries");
std::vector<LabeledTrackSet> track_sequence_from_json(const json& j);

/// Reads and parses a JSON file. Syntax errors raise ParseError naming the
/// line and column; unreadable files raise IoError.
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);
/// Pretty-printed, full double precision, trailing newline.
std::string dump(const json& j);

// Field accessors that report the path on failure.
const json& field(const json& j, const std::string& key, const std::string& path);
double number_field(const json& j, const std::string& key, const std::string& path);
std::vector<double> number_array(const json& j, const std::string& path);

}  // namespace fusionkit::io
