// Copyright (c) the hvpf authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HVPF_ERROR_HPP_
#define HVPF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hvpf {

// Caller-supplied data is invalid (bad image, bad gaze, size mismatch).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration is inconsistent (display model, profile set, fps).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A file could not be parsed (JSON, CSV, PNG, PGM, .flo).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hvpf

#endif  // HVPF_ERROR_HPP_
