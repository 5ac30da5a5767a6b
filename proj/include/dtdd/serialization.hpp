// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DTDD_SERIALIZATION_HPP_
#define DTDD_SERIALIZATION_HPP_

#include <string>

#include "json.hpp"

#include "dtdd/estimation.hpp"
#include "dtdd/geometry.hpp"
#include "dtdd/harness.hpp"
#include "dtdd/se_closed_form.hpp"

namespace dtdd {

using Json = nlohmann::json;

// Non-finite reals are written as the strings "inf" / "-inf" so that the
// documents stay valid JSON and round-trip exactly.
Json real_to_json(double v);
double real_from_json(const Json& j, const std::string& field);

Json config_to_json(const ExperimentConfig& config);
// Unknown keys are rejected with their dotted path.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

Json campaign_to_json(const CampaignResult& result);
CampaignResult campaign_from_json(const Json& j);

Json geometry_to_json(const NetworkGeometry& geometry);
// Positions and config are read back; the matrices are recomputed and must
// match the stored ones.
NetworkGeometry geometry_from_json(const Json& j);

// One pilot index per UE.
Json assignment_to_json(const PilotAssignment& assignment);
PilotAssignment assignment_from_json(const Json& j, std::size_t num_pilots);

// {"ap_modes": ["UL", "DL", ...], "ue_ul": [...], "ue_dl": [...]}
Json schedule_to_json(const Schedule& schedule, std::size_t num_aps);
Schedule schedule_from_json(const Json& j);

Json report_to_json(const SEReport& report);

}  // namespace dtdd

#endif  // DTDD_SERIALIZATION_HPP_
