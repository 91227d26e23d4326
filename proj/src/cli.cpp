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

#include "hvpf/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hvpf/config.hpp"
#include "hvpf/error.hpp"
#include "hvpf/image_io.hpp"
#include "hvpf/motion.hpp"
#include "hvpf/scheduler.hpp"
#include "hvpf/spectral.hpp"
#include "hvpf/viewing.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace hvpf {

namespace fs = std::filesystem;

namespace {

// Display model used when a command has no viewing configuration: the
// curve is a spectrum ratio, so this only fixes the luminance scale.
ViewingConditions default_viewing() {
  ViewingConditions vc;
  vc.diagonal_m = 27.0 * 0.0254;
  vc.width_px = 3840;
  vc.height_px = 2160;
  vc.distance_m = 0.6;
  return vc;
}

LuminanceImage load_luminance(const fs::path& file, const ViewingConditions& vc) {
  return decode_luminance(read_raster(file), vc);
}

bool glob_match(const std::string& pattern, const std::string& name) {
  // Iterative * / ? matcher on the filename component.
  size_t p = 0, n = 0, star = std::string::npos, mark = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = n;
    } else if (star != std::string::npos) {
      p = star + 1;
      n = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  fs::path pat(pattern);
  std::string leaf = pat.filename().string();
  if (leaf.find('*') == std::string::npos && leaf.find('?') == std::string::npos) {
    if (!fs::exists(pat)) throw InputError("no such file: " + pattern);
    return {pat};
  }
  fs::path dir = pat.has_parent_path() ? pat.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) throw InputError("no such directory: " + dir.string());
  std::vector<fs::path> matches;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && glob_match(leaf, entry.path().filename().string()))
      matches.push_back(entry.path());
  std::sort(matches.begin(), matches.end());
  return matches;
}

std::vector<fs::path> list_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw InputError("corpus is not a readable directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("corpus has no PNG/PGM images: " + dir.string());
  return files;
}

std::array<double, 2> parse_xy(const std::string& text, const char* what) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw InputError(std::string(what) + ": expected X,Y");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw InputError(std::string(what) + ": expected X,Y");
  }
}

void write_map_outputs(const std::string& prefix, const QualityMap& map,
                       const ProfileSet& profiles) {
  write_file_atomic(prefix + ".map.csv", map_to_csv(map));
  write_file_atomic(prefix + ".report.json", cost_report_json(map, profiles));
  std::vector<unsigned char> png = encode_gray_png(map_to_heatmap(map, profiles));
  write_file_atomic(prefix + ".heatmap.png", png.data(), png.size());
}

int run_estimate_attenuation(const std::string& corpus_dir, const std::string& op_text,
                             const std::string& pairs_file, int k,
                             const std::string& out_file) {
  ViewingConditions vc = default_viewing();
  AttenuationCurve curve;
  if (!pairs_file.empty()) {
    if (k == 0) k = 1;
    std::ifstream in(pairs_file);
    if (!in) throw InputError("cannot open pairs list: " + pairs_file);
    fs::path base = fs::path(pairs_file).parent_path();
    auto resolve = [&](std::string s) {
      fs::path p(s);
      return p.is_absolute() ? p : base / p;
    };
    std::vector<Image> refs, recons;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      std::string ref, recon;
      if (!(ls >> ref)) continue;  // blank line
      if (!(ls >> recon))
        throw FormatError("pairs list line " + std::to_string(line_no) +
                          ": expected two paths");
      refs.push_back(load_luminance(resolve(ref), vc));
      recons.push_back(load_luminance(resolve(recon), vc));
    }
    curve = estimate_attenuation_pairs(refs, recons, k);
  } else {
    SurrogateOperator op = SurrogateOperator::parse(op_text);
    if (k == 0) k = op.scale_factor();
    std::vector<Image> corpus;
    for (const fs::path& file : list_corpus(corpus_dir))
      corpus.push_back(load_luminance(file, vc));
    curve = estimate_attenuation(corpus, op, k);
  }
  if (curve.fit.coarse)
    std::cerr << "warning: falloff fit did not converge; coarse grid estimate kept\n";
  write_file_atomic(out_file, curve_to_json(curve));
  return 0;
}

int run_schedule(const std::string& image_file, const std::string& config_file,
                 const std::string& gaze_text, const std::string& flow_file,
                 const std::string& prev_file, const std::string& out_prefix) {
  RunConfig cfg = RunConfig::load(config_file);
  LuminanceImage image = load_luminance(image_file, cfg.viewing);

  ScheduleOptions options;
  options.patch_size = cfg.patch_size;
  options.levels = cfg.levels;
  if (!gaze_text.empty()) options.gaze_px = parse_xy(gaze_text, "--gaze");

  FlowField flow;
  if (!flow_file.empty()) {
    flow = load_flow(flow_file);
    if (flow.cell_size == 1 &&
        (flow.width != image.width || flow.height != image.height))
      throw InputError("flow field dimensions do not match the image");
    options.flow = &flow;
  } else if (!prev_file.empty()) {
    LuminanceImage prev = load_luminance(prev_file, cfg.viewing);
    flow = block_match(prev, image, 16, 12);
    options.flow = &flow;
  }

  QualityMap map = schedule_image(image, cfg.viewing, cfg.csf, cfg.profiles, options);
  write_map_outputs(out_prefix, map, cfg.profiles);
  return 0;
}

int run_schedule_video(const std::string& frames_glob, const std::string& config_file,
                       const std::string& flows_glob, const std::string& out_prefix) {
  RunConfig cfg = RunConfig::load(config_file);
  std::vector<fs::path> frame_files = expand_glob(frames_glob);
  if (frame_files.size() < 2)
    throw InputError("schedule-video: need at least 2 frames");

  std::vector<LuminanceImage> frames;
  frames.reserve(frame_files.size());
  for (const fs::path& f : frame_files) {
    frames.push_back(load_luminance(f, cfg.viewing));
    if (frames.back().width != frames.front().width ||
        frames.back().height != frames.front().height)
      throw InputError("schedule-video: frame sizes are inconsistent (" + f.string() +
                       ")");
  }
  const size_t n = frames.size();

  // Flow per frame: frame i >= 1 pairs with (i-1, i); frame 0 reuses
  // frame 1's field. External flows may come as n-1 fields (for frames
  // 1..n-1) or as n fields (one per frame).
  std::vector<FlowField> flows(n);
  if (!flows_glob.empty()) {
    std::vector<fs::path> flow_files = expand_glob(flows_glob);
    if (flow_files.size() != n && flow_files.size() != n - 1)
      throw InputError("schedule-video: expected " + std::to_string(n - 1) + " or " +
                       std::to_string(n) + " flow files, got " +
                       std::to_string(flow_files.size()));
    size_t offset = flow_files.size() == n ? 0 : 1;
    for (size_t i = 0; i < flow_files.size(); ++i) {
      FlowField f = load_flow(flow_files[i]);
      if (f.cell_size == 1 &&
          (f.width != frames[0].width || f.height != frames[0].height))
        throw InputError("schedule-video: flow dimensions do not match the frames");
      flows[i + offset] = std::move(f);
    }
    if (offset == 1) flows[0] = flows[1];
  } else {
    for (size_t i = 1; i < n; ++i) flows[i] = block_match(frames[i - 1], frames[i], 16, 12);
    flows[0] = flows[1];
  }

  nlohmann::json report;
  report["patch_size"] = cfg.patch_size;
  report["fps"] = cfg.viewing.fps;
  report["n_frames"] = n;
  nlohmann::json per_frame = nlohmann::json::array();
  double cost_total = 0.0, cost_baseline = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ScheduleOptions options;
    options.patch_size = cfg.patch_size;
    options.levels = cfg.levels;
    options.flow = &flows[i];
    QualityMap map = schedule_image(frames[i], cfg.viewing, cfg.csf, cfg.profiles,
                                    options);
    char tag[32];
    std::snprintf(tag, sizeof tag, ".frame%04zu", i);
    write_file_atomic(out_prefix + tag + ".map.csv", map_to_csv(map));
    std::vector<unsigned char> png = encode_gray_png(map_to_heatmap(map, cfg.profiles));
    write_file_atomic(out_prefix + tag + ".heatmap.png", png.data(), png.size());
    per_frame.push_back({{"index", i},
                         {"file", frame_files[i].string()},
                         {"cost_total_flops", map.cost_total},
                         {"cost_baseline_flops", map.cost_baseline},
                         {"ratio", map.ratio}});
    cost_total += map.cost_total;
    cost_baseline += map.cost_baseline;
  }
  report["frames"] = per_frame;
  report["cost_total_flops"] = cost_total;
  report["cost_baseline_flops"] = cost_baseline;
  report["ratio"] = cost_total / cost_baseline;
  write_file_atomic(out_prefix + ".report.json", report.dump(2) + "\n");
  return 0;
}

int run_make_profiles(const std::vector<std::string>& curve_files,
                      const std::string& costs_file, const std::string& bands_text,
                      const std::string& out_file) {
  std::ifstream in(costs_file);
  if (!in) throw InputError("cannot open costs file: " + costs_file);
  nlohmann::json costs;
  try {
    in >> costs;
    if (!costs.is_array()) throw FormatError("costs JSON: expected an array");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("costs JSON: ") + e.what());
  }
  if (costs.size() != curve_files.size())
    throw InputError("make-profiles: " + std::to_string(curve_files.size()) +
                     " curves but " + std::to_string(costs.size()) + " cost entries");

  std::array<double, 3> bands = kBandFreqsCpp;
  if (!bands_text.empty()) {
    std::istringstream bs(bands_text);
    char comma;
    if (!(bs >> bands[0] >> comma >> bands[1] >> comma >> bands[2]))
      throw InputError("--bands: expected f1,f2,f3");
  }

  nlohmann::json out = nlohmann::json::array();
  std::vector<int> seen_ids;
  for (size_t i = 0; i < curve_files.size(); ++i) {
    AttenuationCurve curve = load_curve(curve_files[i]);
    nlohmann::json entry;
    try {
      int id = costs[i].at("id").get<int>();
      if (std::count(seen_ids.begin(), seen_ids.end(), id))
        throw InputError("make-profiles: duplicate id " + std::to_string(id));
      seen_ids.push_back(id);
      entry["id"] = id;
      entry["name"] = costs[i].value("name", std::string("variant-") + std::to_string(id));
      entry["cost_flops"] = costs[i].at("cost_flops").get<double>();
      if (costs[i].value("baseline", false)) entry["baseline"] = true;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("costs JSON: ") + e.what());
    }
    entry["atten"] = {{"a", curve.fit.a}, {"b", curve.fit.b}, {"c", curve.fit.c}};
    entry["samples"] = {{"freqs", curve.freqs}, {"values", curve.samples}};

    // t_hat comes from the measured samples; the compact falloff fit is
    // kept alongside but cannot always track a steep curve (its amplitude
    // is tied to its width), and a collapsed t_hat would defeat the
    // cosine selection. Warn when the fit disagrees at a band.
    auto sample_at = [&](double f) {
      if (f <= curve.freqs.front()) return curve.samples.front();
      if (f >= curve.freqs.back()) return curve.samples.back();
      size_t hi = std::lower_bound(curve.freqs.begin(), curve.freqs.end(), f) -
                  curve.freqs.begin();
      double t = (f - curve.freqs[hi - 1]) / (curve.freqs[hi] - curve.freqs[hi - 1]);
      return curve.samples[hi - 1] + t * (curve.samples[hi] - curve.samples[hi - 1]);
    };
    nlohmann::json t_hat = nlohmann::json::array();
    for (double f : bands) {
      double measured = std::clamp(sample_at(f), 0.0, 1.5);
      t_hat.push_back(measured);
      double fitted = std::clamp(eval_falloff(curve.fit, f), 0.0, 1.5);
      if (std::fabs(fitted - measured) > 0.05)
        std::cerr << "warning: " << curve_files[i] << ": falloff fit deviates from the "
                  << "measured curve at f=" << f << " (" << fitted << " vs " << measured
                  << "); t_hat uses the measured value\n";
    }
    entry["t_hat"] = t_hat;
    out.push_back(entry);
  }
  // Validate before writing so broken sets fail loudly here.
  ProfileSet::from_json_text(out.dump());
  write_file_atomic(out_file, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"hvpf - perceptual scheduler for super-resolution variants"};
  app.require_subcommand(1);

  // estimate-attenuation
  auto* est = app.add_subcommand(
      "estimate-attenuation",
      "Measure a reconstruction operator's frequency attenuation curve");
  std::string corpus_dir, op_text, pairs_file, out_file;
  int k = 0;
  est->add_option("--corpus", corpus_dir, "Directory of PNG/PGM images");
  est->add_option("--op", op_text, "identity | blur:SIGMA | bicubic:K | box:K");
  est->add_option("--pairs", pairs_file,
                  "List file of 'reference reconstruction' image paths");
  est->add_option("--k", k, "Downscale factor label stored in the curve");
  est->add_option("--out", out_file, "Output curve JSON")->required();

  // schedule
  auto* sch = app.add_subcommand("schedule", "Schedule variants over one image");
  std::string image_file, config_file, gaze_text, flow_file, prev_file, out_prefix;
  sch->add_option("--image", image_file, "Input image (PNG/PGM)")->required();
  sch->add_option("--config", config_file, "Run configuration JSON")->required();
  sch->add_option("--gaze", gaze_text, "Gaze position X,Y in pixels");
  sch->add_option("--flow", flow_file, "Optical flow (.flo or CSV)");
  sch->add_option("--prev", prev_file, "Previous frame for built-in flow");
  sch->add_option("--out-prefix", out_prefix, "Prefix for map/report/heatmap")
      ->required();

  // schedule-video
  auto* vid = app.add_subcommand("schedule-video", "Schedule variants over a clip");
  std::string frames_glob, flows_glob, vid_config, vid_prefix;
  vid->add_option("--frames", frames_glob, "Frame glob, e.g. dir/frame*.png")
      ->required();
  vid->add_option("--config", vid_config, "Run configuration JSON")->required();
  vid->add_option("--flows", flows_glob, "Flow file glob (else block matching)");
  vid->add_option("--out-prefix", vid_prefix, "Prefix for per-frame outputs")
      ->required();

  // make-profiles
  auto* mkp = app.add_subcommand("make-profiles",
                                 "Bundle fitted curves and costs into variant profiles");
  std::vector<std::string> curve_files;
  std::string costs_file, bands_text, profiles_out;
  mkp->add_option("--curves", curve_files, "Curve JSON files")->required();
  mkp->add_option("--costs", costs_file, "Costs JSON (one entry per curve)")
      ->required();
  mkp->add_option("--bands", bands_text,
                  "Band frequencies f1,f2,f3 in cycles/pixel (default "
                  "0.25,0.125,0.0625)");
  mkp->add_option("--out", profiles_out, "Output profiles JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (est->parsed()) {
      if (pairs_file.empty() == corpus_dir.empty())
        throw InputError("estimate-attenuation: need exactly one of --corpus/--pairs");
      if (!corpus_dir.empty() && op_text.empty())
        throw InputError("estimate-attenuation: --corpus needs --op");
      return run_estimate_attenuation(corpus_dir, op_text, pairs_file, k, out_file);
    }
    if (sch->parsed())
      return run_schedule(image_file, config_file, gaze_text, flow_file, prev_file,
                          out_prefix);
    if (vid->parsed())
      return run_schedule_video(frames_glob, vid_config, flows_glob, vid_prefix);
    if (mkp->parsed())
      return run_make_profiles(curve_files, costs_file, bands_text, profiles_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace hvpf
