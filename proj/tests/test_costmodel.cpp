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

#include <gtest/gtest.h>

#include <random>

#include "vqopt/costmodel.hpp"

namespace {

using namespace vqopt;

CostModelParams with(Scenario s) {
  CostModelParams p;
  p.scenario = s;
  return p;
}

TEST(QueryTime, WorkedExamples) {
  const QueryRecord one{25000, 1, 1};
  EXPECT_DOUBLE_EQ(query_time(one, with(Scenario::LatencyWithBatching)), 4.35);
  EXPECT_DOUBLE_EQ(query_time(one, with(Scenario::ZeroLatency)), 0.35);
  const QueryRecord ten{0, 10, 1};
  const double nobatch = query_time(ten, with(Scenario::LatencyNoBatching));
  const double batch = query_time(ten, with(Scenario::LatencyWithBatching));
  const double zero = query_time(ten, with(Scenario::ZeroLatency));
  EXPECT_DOUBLE_EQ(nobatch - zero, 40.0);
  EXPECT_DOUBLE_EQ(batch - zero, 4.0);
}

TEST(QueryTime, ScenarioMonotonicity) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    QueryRecord r;
    r.batches = 1 + rng() % 5;
    r.circuits = r.batches + rng() % 100;
    r.shots = r.circuits * (rng() % 100000);
    const double z = query_time(r, with(Scenario::ZeroLatency));
    const double b = query_time(r, with(Scenario::LatencyWithBatching));
    const double n = query_time(r, with(Scenario::LatencyNoBatching));
    EXPECT_LE(z, b);
    EXPECT_LE(b, n);
  }
}

TEST(QueryTime, Validation) {
  CostModelParams p;
  p.sampling_rate = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = CostModelParams{};
  p.latency = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_EQ(parse_scenario("nobatch"), Scenario::LatencyNoBatching);
  EXPECT_EQ(to_string(Scenario::ZeroLatency), "zero");
  EXPECT_THROW(parse_scenario("fast"), std::invalid_argument);
}

TEST(Ledger, Accumulation) {
  const CostModelParams p;
  const QueryRecord r{1000, 3, 1};
  TimeLedger one;
  EXPECT_DOUBLE_EQ(one.accumulate(r, p), query_time(r, p));
  EXPECT_DOUBLE_EQ(one.total_seconds(), query_time(r, p));
  TimeLedger many;
  for (int i = 0; i < 100; ++i) many.accumulate(r, p);
  EXPECT_NEAR(many.total_seconds(), 100 * query_time(r, p), 1e-9);
  EXPECT_EQ(many.totals(), (QueryRecord{100000, 300, 100}));
  EXPECT_EQ(many.entries().size(), 100u);
}

}  // namespace
