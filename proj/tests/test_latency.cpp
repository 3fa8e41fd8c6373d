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

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "entnet/latency.hpp"

using namespace entnet;
using doctest::Approx;

namespace {

TimingParams params(double l, double c, double tau, int k, int s) {
  TimingParams p;
  p.distance = l;
  p.signal_speed = c;
  p.period = tau;
  p.k = k;
  p.sensors = s;
  return p;
}

}  // namespace

TEST_CASE("worked example") {
  const auto r = latency_model(params(1000, 2e8, 1e-5, 3, 4), SourceLocation::AtSensors, false);
  CHECK(r.latency == Approx(3e-5).epsilon(1e-14));
  CHECK(r.sensor_memories == 4);
  CHECK(r.hub_memories == 12);

  const auto hub = latency_model(params(1000, 2e8, 1e-5, 3, 4), SourceLocation::AtHub, false);
  CHECK(hub.latency == Approx(3.5e-5).epsilon(1e-14));
  CHECK(hub.sensor_memories == 4);
  CHECK(hub.hub_memories == 16);

  const auto sd = latency_model(params(1000, 2e8, 1e-5, 3, 4), SourceLocation::AtSensors, true);
  CHECK(sd.latency == Approx(4e-5).epsilon(1e-14));
  CHECK(sd.sensor_memories == 5);
  CHECK(sd.hub_memories == 16);
}

TEST_CASE("pipeline depth rounds up") {
  // 2L/(c tau) = 1.5 -> 2 slots in flight.
  const auto r = latency_model(params(1500, 2e8, 1e-5, 2, 3), SourceLocation::AtSensors, false);
  CHECK(r.sensor_memories == 4);
  const auto d = latency_model(params(1500, 2e8, 1e-5, 2, 3), SourceLocation::AtSensors, true);
  CHECK(d.sensor_memories == 5);  // 4L/(c tau) = 3
  CHECK(d.hub_memories == 12);
}

TEST_CASE("orderings hold for random parameters") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> log_u(-3.0, 3.0);
  std::uniform_int_distribution<int> small(1, 50);
  for (int i = 0; i < 1000; ++i) {
    const auto p = params(1000 * std::pow(10.0, log_u(rng)), 2e8 * std::pow(10.0, log_u(rng) / 3),
                          1e-5 * std::pow(10.0, log_u(rng)), small(rng), small(rng));
    CHECK(latency_model(p, SourceLocation::AtSensors, false).latency <
          latency_model(p, SourceLocation::AtHub, false).latency);
    CHECK(latency_model(p, SourceLocation::AtHub, true).latency <
          latency_model(p, SourceLocation::AtSensors, true).latency);
  }
}

TEST_CASE("latency is affine in k and memories are monotone") {
  for (auto src : {SourceLocation::AtSensors, SourceLocation::AtHub}) {
    for (bool distill : {false, true}) {
      LatencyReport prev = latency_model(params(800, 2e8, 2e-6, 1, 5), src, distill);
      for (int k = 2; k <= 20; ++k) {
        const auto r = latency_model(params(800, 2e8, 2e-6, k, 5), src, distill);
        CHECK(r.latency - prev.latency == Approx(2e-6).epsilon(1e-9));
        CHECK(r.sensor_memories >= prev.sensor_memories);
        CHECK(r.hub_memories >= prev.hub_memories);
        prev = r;
      }
      LatencyReport prev_l = latency_model(params(100, 2e8, 2e-6, 3, 5), src, distill);
      for (double l = 200; l <= 5000; l += 100) {
        const auto r = latency_model(params(l, 2e8, 2e-6, 3, 5), src, distill);
        CHECK(r.sensor_memories >= prev_l.sensor_memories);
        CHECK(r.hub_memories >= prev_l.hub_memories);
        prev_l = r;
      }
    }
  }
}

TEST_CASE("invalid timing parameters") {
  CHECK_THROWS_AS(latency_model(params(0, 2e8, 1e-5, 1, 2), SourceLocation::AtHub, false), std::domain_error);
  CHECK_THROWS_AS(latency_model(params(1, -1, 1e-5, 1, 2), SourceLocation::AtHub, false), std::domain_error);
  CHECK_THROWS_AS(latency_model(params(1, 2e8, 0, 1, 2), SourceLocation::AtHub, false), std::domain_error);
  CHECK_THROWS_AS(latency_model(params(1, 2e8, 1e-5, 0, 2), SourceLocation::AtHub, false), std::domain_error);
  CHECK_THROWS_AS(latency_model(params(1, 2e8, 1e-5, 1, 0), SourceLocation::AtHub, false), std::domain_error);
  CHECK_THROWS_AS(latency_model(params(NAN, 2e8, 1e-5, 1, 2), SourceLocation::AtHub, false), std::domain_error);
  CHECK(to_string(SourceLocation::AtHub) == "hub");
  CHECK(to_string(SourceLocation::AtSensors) == "sensors");
}
