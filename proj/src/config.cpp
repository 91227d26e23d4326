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

#include "hvpf/config.hpp"

#include <fstream>
#include <sstream>

#include "hvpf/error.hpp"

#include "json.hpp"

namespace hvpf {

RunConfig RunConfig::from_json_text(const std::string& json_text,
                                    const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config JSON: ") + e.what());
  }

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  try {
    if (!j.contains("viewing")) throw FormatError("config JSON: missing viewing");
    ViewingConditions vc = viewing_from_json_text(j.at("viewing").dump());

    CsfModel csf = CsfModel::default_analytic();
    if (j.contains("csf")) {
      const auto& c = j.at("csf");
      std::string model = c.value("model", "default");
      if (model == "table") {
        if (!c.contains("table"))
          throw FormatError("config JSON: csf.model=table needs csf.table");
        csf = CsfModel::load_table(resolve(c.at("table").get<std::string>()));
      } else if (model != "default") {
        throw FormatError("config JSON: csf.model must be 'default' or 'table'");
      }
    }

    if (!j.contains("variants")) throw FormatError("config JSON: missing variants");
    const auto& v = j.at("variants");
    ProfileSet profiles =
        v.is_string() ? ProfileSet::load(resolve(v.get<std::string>()))
                      : ProfileSet::from_json_text(v.dump());

    int levels = j.value("levels", 3);

    int patch_size = 0;
    if (!j.contains("patch_size")) throw FormatError("config JSON: missing patch_size");
    const auto& ps = j.at("patch_size");
    if (ps.is_number_integer()) {
      patch_size = ps.get<int>();
    } else if (ps.is_string() && ps.get<std::string>() == "auto") {
      if (j.contains("lowres_patch")) {
        patch_size = default_patch_size_lowres(j.at("lowres_patch").get<int>());
      } else if (j.contains("receptive_field") && j.contains("scale")) {
        patch_size = default_patch_size_pre_upsampled(
            j.at("receptive_field").get<int>(), j.at("scale").get<int>());
      } else {
        throw FormatError(
            "config JSON: patch_size 'auto' needs lowres_patch or "
            "receptive_field + scale");
      }
    } else {
      throw FormatError("config JSON: patch_size must be an integer or 'auto'");
    }
    if (patch_size < (1 << levels))
      throw ConfigError("config: patch_size must be >= 2^levels");

    return RunConfig{vc, std::move(csf), std::move(profiles), patch_size, levels};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config JSON: ") + e.what());
  }
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), file.has_parent_path()
                                       ? file.parent_path()
                                       : std::filesystem::path("."));
}

}  // namespace hvpf
