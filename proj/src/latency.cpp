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

#include "entnet/latency.hpp"

#include <cmath>
#include <stdexcept>

namespace entnet {

void TimingParams::validate() const {
  if (!(distance > 0.0) || !(signal_speed > 0.0) || !(period > 0.0) || !std::isfinite(distance) ||
      !std::isfinite(signal_speed) || !std::isfinite(period)) {
    throw std::domain_error("TimingParams: L, c and tau must be positive and finite");
  }
  if (k < 1) throw std::domain_error("TimingParams: k must be at least 1");
  if (sensors < 1) throw std::domain_error("TimingParams: S must be at least 1");
}

LatencyReport latency_model(const TimingParams& params, SourceLocation source, bool distill) {
  params.validate();
  const double hop = params.distance / params.signal_speed;  // L / c
  const double wait = (params.k - 1) * params.period;
  // Attempts in flight while a heralding round trip is pending.
  const double round_trip_attempts = 2.0 * params.distance / (params.signal_speed * params.period);
  const long long pipe2 = static_cast<long long>(std::ceil(round_trip_attempts));
  const long long pipe4 = static_cast<long long>(std::ceil(2.0 * round_trip_attempts));
  const long long k = params.k, s = params.sensors;

  LatencyReport r;
  if (source == SourceLocation::AtSensors && !distill) {
    r.latency = 2.0 * hop + wait;
    r.sensor_memories = pipe2 + k;
    r.hub_memories = s * k;
  } else if (source == SourceLocation::AtSensors) {
    // Distillation outcomes need another round trip before the hub can measure.
    r.latency = 4.0 * hop + wait;
    r.sensor_memories = pipe4 + k;
    r.hub_memories = s * (pipe2 + k);
  } else {
    r.latency = 3.0 * hop + wait;
    r.sensor_memories = pipe2 + k;
    r.hub_memories = s * (pipe2 + k);
  }
  return r;
}

std::string to_string(SourceLocation source) {
  return source == SourceLocation::AtSensors ? "sensors" : "hub";
}

}  // namespace entnet
