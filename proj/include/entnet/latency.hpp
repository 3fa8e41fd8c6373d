// Copyright 2026 The entnet Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Latency and quantum-memory counts for a star network whose sensors sit a
// distance L from the hub.

#include <string>

namespace entnet {

struct TimingParams {
  double distance = 1000.0;     // L, meters
  double signal_speed = 2.0e8;  // c, meters per second
  double period = 1.0e-5;       // tau, seconds between attempts
  int k = 1;                    // block length
  int sensors = 2;              // S

  void validate() const;
};

enum class SourceLocation { AtSensors, AtHub };

struct LatencyReport {
  double latency = 0.0;  // seconds
  long long sensor_memories = 0;
  long long hub_memories = 0;
};

[[nodiscard]] LatencyReport latency_model(const TimingParams& params, SourceLocation source, bool distill);

[[nodiscard]] std::string to_string(SourceLocation source);

}  // namespace entnet
