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

#include <stdexcept>
#include <string>

namespace entnet {

/// A root finder or scan could not locate the requested solution.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An infinite series did not reach its tail tolerance within the iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested problem is larger than an exhaustive or dense method supports.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace entnet
