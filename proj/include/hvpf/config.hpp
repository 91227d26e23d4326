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

#ifndef HVPF_CONFIG_HPP_
#define HVPF_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "hvpf/csf.hpp"
#include "hvpf/scheduler.hpp"
#include "hvpf/viewing.hpp"

namespace hvpf {

/// Scheduling run configuration, loaded from a JSON file with keys
/// viewing, csf, variants, patch_size ("auto" resolves from
/// receptive_field+scale or lowres_patch), levels. File references are
/// relative to the config file's directory.
struct RunConfig {
  ViewingConditions viewing;
  CsfModel csf;
  ProfileSet profiles;  // no default: a config without variants is invalid
  int patch_size = 0;
  int levels = 3;

  static RunConfig load(const std::filesystem::path& file);
  static RunConfig from_json_text(const std::string& json_text,
                                  const std::filesystem::path& base_dir);
};

}  // namespace hvpf

#endif  // HVPF_CONFIG_HPP_
