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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vqopt {

/// Resources consumed by one or more objective queries.
struct QueryRecord {
  std::uint64_t shots = 0;     // M, total measurements
  std::uint64_t circuits = 0;  // c, distinct circuits executed
  std::uint64_t batches = 0;   // round-trips to the device

  QueryRecord& operator+=(const QueryRecord& other) {
    shots += other.shots;
    circuits += other.circuits;
    batches += other.batches;
    return *this;
  }
  bool operator==(const QueryRecord&) const = default;
};

enum class Scenario { ZeroLatency, LatencyWithBatching, LatencyNoBatching };

/// "zero", "batch", "nobatch".
std::string to_string(Scenario scenario);
/// Throws std::invalid_argument on unknown names.
Scenario parse_scenario(const std::string& name);

struct CostModelParams {
  double sampling_rate = 1e5;   // s, shots per second
  double switch_overhead = 0.1; // r, seconds per circuit
  double latency = 4.0;         // l, seconds per round-trip
  Scenario scenario = Scenario::LatencyWithBatching;

  /// Throws std::invalid_argument unless s > 0 and r, l >= 0.
  void validate() const;
  bool operator==(const CostModelParams&) const = default;
};

/// T = M / s + r c + T_cloud, where T_cloud is 0, l * batches or
/// l * circuits for the three scenarios.
double query_time(const QueryRecord& record, const CostModelParams& params);

/// Simulated wall-clock account of a run. Classical computation is free.
class TimeLedger {
 public:
  struct Entry {
    QueryRecord record;
    double seconds = 0.0;
  };

  double total_seconds() const { return total_; }
  const QueryRecord& totals() const { return totals_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Appends the query and returns its cost in seconds.
  double accumulate(const QueryRecord& record, const CostModelParams& params);

 private:
  double total_ = 0.0;
  QueryRecord totals_;
  std::vector<Entry> entries_;
};

}  // namespace vqopt
