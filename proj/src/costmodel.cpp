// Copyright 2026 The vqopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vqopt/costmodel.hpp"

#include <stdexcept>

namespace vqopt {

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::ZeroLatency: return "zero";
    case Scenario::LatencyWithBatching: return "batch";
    case Scenario::LatencyNoBatching: return "nobatch";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "zero") return Scenario::ZeroLatency;
  if (name == "batch") return Scenario::LatencyWithBatching;
  if (name == "nobatch") return Scenario::LatencyNoBatching;
  throw std::invalid_argument("unknown scenario '" + name + "' (expected zero, batch or nobatch)");
}

void CostModelParams::validate() const {
  if (!(sampling_rate > 0.0)) throw std::invalid_argument("sampling rate must be positive");
  if (!(switch_overhead >= 0.0)) throw std::invalid_argument("switch overhead must be >= 0");
  if (!(latency >= 0.0)) throw std::invalid_argument("latency must be >= 0");
}

double query_time(const QueryRecord& record, const CostModelParams& params) {
  const double sample = static_cast<double>(record.shots) / params.sampling_rate;
  const double switching = params.switch_overhead * static_cast<double>(record.circuits);
  double cloud = 0.0;
  switch (params.scenario) {
    case Scenario::ZeroLatency: break;
    case Scenario::LatencyWithBatching: cloud = params.latency * static_cast<double>(record.batches); break;
    case Scenario::LatencyNoBatching: cloud = params.latency * static_cast<double>(record.circuits); break;
  }
  return sample + switching + cloud;
}

double TimeLedger::accumulate(const QueryRecord& record, const CostModelParams& params) {
  const double seconds = query_time(record, params);
  entries_.push_back({record, seconds});
  totals_ += record;
  total_ += seconds;
  return seconds;
}

}  // namespace vqopt
