#pragma once

#include <string>

#include <json.hpp>

#include "nlb/channel.hpp"
#include "nlb/nlbreak.hpp"
#include "nlb/state.hpp"
#include "nlb/volume.hpp"

// JSON and CSV exchange formats used by the CLI. Channels are
// {"t": [3 reals], "lambda": [3 reals]} with optional "pre_unitary" /
// "post_unitary" 2x2 arrays of [re, im] pairs; states carry 16 row-major
// [re, im] entries.

namespace nlb {

using json = nlohmann::json;

json channel_to_json(const QubitChannel& ch);
QubitChannel channel_from_json(const json& j);

// Accepts inline JSON (starts with '{') or a path to a JSON file.
QubitChannel channel_from_spec(const std::string& spec);

json state_to_json(const TwoQubitState& s);
TwoQubitState state_from_json(const json& j);

json volume_report_to_json(const VolumeReport& r);

std::string correlation_tensors_csv(const CorrelationTensors& ct);

struct SweepRow {
    double parameter;
    double best_M;
    PureInputSpec spec;
};

std::string sweep_rows_csv(const std::vector<SweepRow>& rows, const std::string& param_name);
json sweep_rows_json(const std::vector<SweepRow>& rows, const std::string& param_name);

}  // namespace nlb
