#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hvpf/image_io.hpp"
#include "hvpf/motion.hpp"
#include "hvpf/spectral.hpp"
#include "support/mini_schema.hpp"
#include "support/synth.hpp"

#include "json.hpp"

using namespace hvpf;
namespace fs = std::filesystem;

namespace {

fs::path sandbox() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hvpf_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli_cmd(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + std::string(HVPF_CLI_PATH) + " " + args +
                    " >> " + (sandbox() / "cli.log").string() + " 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  out << text;
}

nlohmann::json load_schema(const char* name) {
  return nlohmann::json::parse(slurp(fs::path(HVPF_SCHEMA_DIR) / name));
}

// Small texture corpus on disk.
fs::path make_corpus(const char* name, int n, int side, uint64_t seed) {
  fs::path dir = sandbox() / name;
  fs::create_directories(dir);
  for (int i = 0; i < n; ++i) {
    Raster8 raster = testing::to_raster(testing::synth_texture(side, side, seed + i));
    write_raster(dir / ("img_" + std::to_string(i) + ".png"), raster);
  }
  return dir;
}

std::string profiles_json_5() {
  return R"([
    {"id": 0, "name": "bicubic", "cost_flops": 1e6, "t_hat": [0.10, 0.45, 0.95]},
    {"id": 1, "name": "tiny",    "cost_flops": 3e6, "t_hat": [0.25, 0.60, 0.97]},
    {"id": 2, "name": "small",   "cost_flops": 8e6, "t_hat": [0.45, 0.75, 0.98]},
    {"id": 3, "name": "medium",  "cost_flops": 2e7, "t_hat": [0.62, 0.85, 0.985]},
    {"id": 4, "name": "full",    "cost_flops": 5e7, "t_hat": [0.80, 0.93, 0.99],
     "baseline": true}
  ])";
}

// Viewing block matching the committed 640x360 fixtures (ppd ~ 15).
std::string fixture_config_json(double fps = 24.0) {
  std::ostringstream out;
  out << R"({
    "viewing": {"diagonal_m": 0.3, "res_w": 640, "res_h": 360,
                "peak_nits": 400, "black_nits": 0.4, "gamma": 2.2,
                "distance_cm": 35, "fps": )"
      << fps << R"(},
    "csf": {"model": "default"},
    "variants": "profiles.json",
    "patch_size": 32,
    "levels": 3
  })";
  return out.str();
}

struct ConfigFiles {
  fs::path config;
  fs::path dir;
};

ConfigFiles write_fixture_config() {
  ConfigFiles files{sandbox() / "config.json", sandbox()};
  spit(sandbox() / "profiles.json", profiles_json_5());
  spit(files.config, fixture_config_json());
  return files;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("estimate-attenuation identity writes a near-unit curve") {
  fs::path corpus = make_corpus("corpus_identity", 3, 128, 11);
  fs::path out = sandbox() / "identity.curve.json";
  int rc = run_cli_cmd("estimate-attenuation --corpus " + corpus.string() +
                       " --op identity --out " + out.string());
  CHECK(rc == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  std::string why;
  CHECK_MESSAGE(testing::validate_schema(j, load_schema("curve.schema.json"), &why), why);
  for (double s : j["samples"].get<std::vector<double>>())
    CHECK(std::fabs(s - 1.0) <= 1e-6);
}

TEST_CASE("estimate-attenuation blur writes a valid curve whose fit is kept") {
  fs::path corpus = make_corpus("corpus_blur", 3, 128, 60);
  fs::path out = sandbox() / "blur.curve.json";
  int rc = run_cli_cmd("estimate-attenuation --corpus " + corpus.string() +
                       " --op blur:1.5 --out " + out.string());
  CHECK(rc == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  std::string why;
  CHECK_MESSAGE(testing::validate_schema(j, load_schema("curve.schema.json"), &why), why);
  CHECK(j["fit"]["a"].get<double>() > 0.0);
  CHECK(std::isfinite(j["fit"]["rms"].get<double>()));
}

TEST_CASE("estimate-attenuation is deterministic") {
  fs::path corpus = make_corpus("corpus_det", 2, 128, 400);
  fs::path out1 = sandbox() / "det1.curve.json";
  fs::path out2 = sandbox() / "det2.curve.json";
  CHECK(run_cli_cmd("estimate-attenuation --corpus " + corpus.string() +
                    " --op blur:1.2 --out " + out1.string(), "HVPF_THREADS=1") == 0);
  CHECK(run_cli_cmd("estimate-attenuation --corpus " + corpus.string() +
                    " --op blur:1.2 --out " + out2.string(), "HVPF_THREADS=4") == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("estimate-attenuation rejects unreadable corpora and bad pairs") {
  CHECK(run_cli_cmd("estimate-attenuation --corpus /no/such/dir --op identity --out " +
                    (sandbox() / "x.json").string()) == 2);

  // Mismatched pair sizes.
  Raster8 big = testing::to_raster(testing::synth_texture(64, 64, 1));
  Raster8 small = testing::to_raster(testing::synth_texture(32, 32, 2));
  write_raster(sandbox() / "pair_ref.png", big);
  write_raster(sandbox() / "pair_rec.png", small);
  spit(sandbox() / "pairs.txt", "pair_ref.png pair_rec.png\n");
  CHECK(run_cli_cmd("estimate-attenuation --pairs " + (sandbox() / "pairs.txt").string() +
                    " --out " + (sandbox() / "y.json").string()) == 2);

  // Needs exactly one of --corpus / --pairs.
  CHECK(run_cli_cmd("estimate-attenuation --out " + (sandbox() / "z.json").string()) == 2);
}

TEST_CASE("estimate-attenuation accepts well-formed pairs") {
  Raster8 ref = testing::to_raster(testing::synth_texture(128, 128, 5));
  write_raster(sandbox() / "p_ref.png", ref);
  write_raster(sandbox() / "p_rec.png", ref);  // identity reconstruction
  spit(sandbox() / "pairs_ok.txt", "p_ref.png p_rec.png\n");
  fs::path out = sandbox() / "pairs.curve.json";
  CHECK(run_cli_cmd("estimate-attenuation --pairs " +
                    (sandbox() / "pairs_ok.txt").string() + " --k 4 --out " +
                    out.string()) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["k"].get<int>() == 4);
  for (double s : j["samples"].get<std::vector<double>>())
    CHECK(std::fabs(s - 1.0) <= 1e-6);
}

TEST_CASE("schedule on a flat image picks the cheapest shade everywhere") {
  ConfigFiles cfg = write_fixture_config();
  Raster8 flat;
  flat.width = flat.height = 512;
  flat.channels = 1;
  flat.data.assign(512 * 512, 128);
  write_raster(sandbox() / "flat.png", flat);

  // 512x512 exceeds the configured 640x360 raster only vertically; viewing
  // geometry does not constrain the image size.
  fs::path prefix = sandbox() / "flat";
  int rc = run_cli_cmd("schedule --image " + (sandbox() / "flat.png").string() +
                       " --config " + cfg.config.string() + " --out-prefix " +
                       prefix.string());
  CHECK(rc == 0);

  Raster8 heat = read_raster(prefix.string() + ".heatmap.png");
  CHECK(heat.width == 16);
  CHECK(heat.height == 16);
  for (uint8_t v : heat.data) CHECK(v == 0);

  nlohmann::json report = nlohmann::json::parse(slurp(prefix.string() + ".report.json"));
  std::string why;
  CHECK_MESSAGE(testing::validate_schema(report, load_schema("report.schema.json"), &why),
                why);
  CHECK(report["ratio"].get<double>() == 1e6 / 5e7);

  // Determinism: byte-identical outputs on a second run.
  std::string map1 = slurp(prefix.string() + ".map.csv");
  std::string heat1 = slurp(prefix.string() + ".heatmap.png");
  std::string report1 = slurp(prefix.string() + ".report.json");
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "flat.png").string() +
                    " --config " + cfg.config.string() + " --out-prefix " +
                    prefix.string()) == 0);
  CHECK(slurp(prefix.string() + ".map.csv") == map1);
  CHECK(slurp(prefix.string() + ".heatmap.png") == heat1);
  CHECK(slurp(prefix.string() + ".report.json") == report1);
}

TEST_CASE("schedule output is identical across thread counts") {
  ConfigFiles cfg = write_fixture_config();
  Raster8 raster = testing::to_raster(testing::synth_texture(320, 192, 77));
  write_raster(sandbox() / "threads.png", raster);
  fs::path p1 = sandbox() / "threads1";
  fs::path p4 = sandbox() / "threads4";
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "threads.png").string() +
                    " --config " + cfg.config.string() + " --out-prefix " + p1.string(),
                    "HVPF_THREADS=1") == 0);
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "threads.png").string() +
                    " --config " + cfg.config.string() + " --out-prefix " + p4.string(),
                    "HVPF_THREADS=4") == 0);
  CHECK(slurp(p1.string() + ".map.csv") == slurp(p4.string() + ".map.csv"));
  CHECK(slurp(p1.string() + ".report.json") == slurp(p4.string() + ".report.json"));
  CHECK(slurp(p1.string() + ".heatmap.png") == slurp(p4.string() + ".heatmap.png"));
}

TEST_CASE("schedule smoke fixture: fovea gets costlier variants than the periphery") {
  ConfigFiles cfg = write_fixture_config();
  fs::path fixture = fs::path(HVPF_TEST_DATA_DIR) / "natural_0.png";
  REQUIRE(fs::exists(fixture));
  fs::path prefix = sandbox() / "smoke";
  int rc = run_cli_cmd("schedule --image " + fixture.string() + " --config " +
                       cfg.config.string() + " --gaze 320,180 --out-prefix " +
                       prefix.string());
  CHECK(rc == 0);

  // Pinned output map, committed after the first verified run.
  std::string expected = slurp(fs::path(HVPF_TEST_DATA_DIR) / "smoke_expected.map.csv");
  CHECK(slurp(prefix.string() + ".map.csv") == expected);

  // Direction: mean selected cost in the center 3 degrees vs beyond 15.
  nlohmann::json report = nlohmann::json::parse(slurp(prefix.string() + ".report.json"));
  CHECK(report["ratio"].get<double>() < 1.0);
}

TEST_CASE("schedule validation failures exit with 2") {
  ConfigFiles cfg = write_fixture_config();
  Raster8 raster = testing::to_raster(testing::synth_texture(64, 64, 3));
  write_raster(sandbox() / "tiny.png", raster);

  // Gaze outside the raster.
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "tiny.png").string() +
                    " --config " + cfg.config.string() +
                    " --gaze 100,10 --out-prefix " + (sandbox() / "g").string()) == 2);

  // Missing variant profiles file.
  spit(sandbox() / "bad_config.json",
       R"({"viewing": {"diagonal_m": 0.3, "res_w": 640, "res_h": 360,
            "distance_cm": 35},
           "variants": "no_such_profiles.json", "patch_size": 32})");
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "tiny.png").string() +
                    " --config " + (sandbox() / "bad_config.json").string() +
                    " --out-prefix " + (sandbox() / "m").string()) == 2);

  // Unknown flags and missing required options are parse errors.
  CHECK(run_cli_cmd("schedule --no-such-flag") == 2);
  CHECK(run_cli_cmd("no-such-command") == 2);
}

TEST_CASE("schedule-video: static 10-frame clip repeats the single-image map") {
  ConfigFiles cfg = write_fixture_config();
  fs::path frames = sandbox() / "clip_static";
  fs::create_directories(frames);
  Raster8 frame = testing::to_raster(testing::synth_texture(320, 192, 500));
  for (int i = 0; i < 10; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "f%02d.png", i);
    write_raster(frames / name, frame);
  }

  fs::path prefix = sandbox() / "static";
  int rc = run_cli_cmd("schedule-video --frames '" + (frames / "f*.png").string() +
                       "' --config " + cfg.config.string() + " --out-prefix " +
                       prefix.string());
  CHECK(rc == 0);

  // Reference: single-image schedule of frame 0.
  write_raster(sandbox() / "single.png", frame);
  fs::path single = sandbox() / "single";
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "single.png").string() +
                    " --config " + cfg.config.string() + " --out-prefix " +
                    single.string()) == 0);
  std::string reference = slurp(single.string() + ".map.csv");
  for (int i = 0; i < 10; ++i) {
    char tag[32];
    std::snprintf(tag, sizeof tag, ".frame%04d", i);
    CHECK(slurp(prefix.string() + tag + ".map.csv") == reference);
  }

  nlohmann::json report = nlohmann::json::parse(slurp(prefix.string() + ".report.json"));
  std::string why;
  CHECK_MESSAGE(
      testing::validate_schema(report, load_schema("video_report.schema.json"), &why),
      why);
}

TEST_CASE("schedule honors external and estimated flow fields") {
  ConfigFiles cfg = write_fixture_config();
  Image codes = testing::synth_texture(320, 192, 808);
  write_raster(sandbox() / "flow_img.png", testing::to_raster(codes));

  // Static baseline.
  fs::path stat = sandbox() / "flow_static";
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "flow_img.png").string() +
                    " --config " + cfg.config.string() + " --out-prefix " +
                    stat.string()) == 0);
  double cost_static =
      nlohmann::json::parse(slurp(stat.string() + ".report.json"))["cost_total_flops"];

  // External uniform 8 px/frame field.
  FlowField uniform;
  uniform.width = 320;
  uniform.height = 192;
  uniform.cell_size = 1;
  uniform.u.assign(uniform.sample_count(), 8.0);
  uniform.v.assign(uniform.sample_count(), 0.0);
  write_flo(sandbox() / "uniform.flo", uniform);
  fs::path ext = sandbox() / "flow_ext";
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "flow_img.png").string() +
                    " --config " + cfg.config.string() + " --flow " +
                    (sandbox() / "uniform.flo").string() + " --out-prefix " +
                    ext.string()) == 0);
  double cost_ext =
      nlohmann::json::parse(slurp(ext.string() + ".report.json"))["cost_total_flops"];
  CHECK(cost_ext <= cost_static);

  // Built-in block matching against a previous frame.
  write_raster(sandbox() / "flow_prev.png", testing::to_raster(testing::roll(codes, -8, 0)));
  fs::path est = sandbox() / "flow_est";
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "flow_img.png").string() +
                    " --config " + cfg.config.string() + " --prev " +
                    (sandbox() / "flow_prev.png").string() + " --out-prefix " +
                    est.string()) == 0);
  double cost_est =
      nlohmann::json::parse(slurp(est.string() + ".report.json"))["cost_total_flops"];
  CHECK(cost_est <= cost_static);

  // A flow field sized for a different raster is rejected.
  FlowField wrong = uniform;
  wrong.width = 100;
  wrong.u.assign(static_cast<size_t>(100) * 192, 1.0);
  wrong.v.assign(static_cast<size_t>(100) * 192, 0.0);
  write_flo(sandbox() / "wrong.flo", wrong);
  CHECK(run_cli_cmd("schedule --image " + (sandbox() / "flow_img.png").string() +
                    " --config " + cfg.config.string() + " --flow " +
                    (sandbox() / "wrong.flo").string() + " --out-prefix " +
                    (sandbox() / "flow_bad").string()) == 2);
}

TEST_CASE("schedule-video accepts per-pair flow files") {
  ConfigFiles cfg = write_fixture_config();
  fs::path frames = sandbox() / "clip_flows";
  fs::create_directories(frames);
  Raster8 frame = testing::to_raster(testing::synth_texture(320, 192, 909));
  for (int i = 0; i < 3; ++i)
    write_raster(frames / ("f" + std::to_string(i) + ".png"), frame);

  FlowField uniform;
  uniform.width = 320;
  uniform.height = 192;
  uniform.cell_size = 1;
  uniform.u.assign(uniform.sample_count(), 8.0);
  uniform.v.assign(uniform.sample_count(), 0.0);
  fs::path flows = sandbox() / "flows";
  fs::create_directories(flows);
  write_flo(flows / "w0.flo", uniform);
  write_flo(flows / "w1.flo", uniform);

  fs::path with_flows = sandbox() / "vflow";
  CHECK(run_cli_cmd("schedule-video --frames '" + (frames / "f*.png").string() +
                    "' --config " + cfg.config.string() + " --flows '" +
                    (flows / "w*.flo").string() + "' --out-prefix " +
                    with_flows.string()) == 0);

  fs::path without = sandbox() / "vstill";
  CHECK(run_cli_cmd("schedule-video --frames '" + (frames / "f*.png").string() +
                    "' --config " + cfg.config.string() + " --out-prefix " +
                    without.string()) == 0);
  double cost_flows =
      nlohmann::json::parse(slurp(with_flows.string() + ".report.json"))["cost_total_flops"];
  double cost_still =
      nlohmann::json::parse(slurp(without.string() + ".report.json"))["cost_total_flops"];
  CHECK(cost_flows <= cost_still);

  // Flow count must be n or n-1.
  fs::path one_flow = sandbox() / "one_flow";
  fs::create_directories(one_flow);
  write_flo(one_flow / "w0.flo", uniform);
  CHECK(run_cli_cmd("schedule-video --frames '" + (frames / "f*.png").string() +
                    "' --config " + cfg.config.string() + " --flows '" +
                    (one_flow / "w*.flo").string() + "' --out-prefix " +
                    (sandbox() / "vbad").string()) == 2);
}

TEST_CASE("schedule-video: a panning clip never costs more than the static one") {
  ConfigFiles cfg = write_fixture_config();
  Image base = testing::synth_texture(320, 192, 640);

  fs::path static_dir = sandbox() / "clip_s";
  fs::path pan_dir = sandbox() / "clip_p";
  fs::create_directories(static_dir);
  fs::create_directories(pan_dir);
  for (int i = 0; i < 3; ++i) {
    write_raster(static_dir / ("f" + std::to_string(i) + ".png"),
                 testing::to_raster(base));
    write_raster(pan_dir / ("f" + std::to_string(i) + ".png"),
                 testing::to_raster(testing::roll(base, 8 * i, 0)));
  }
  fs::path sp = sandbox() / "sclip";
  fs::path pp = sandbox() / "pclip";
  CHECK(run_cli_cmd("schedule-video --frames '" + (static_dir / "f*.png").string() +
                    "' --config " + cfg.config.string() + " --out-prefix " +
                    sp.string()) == 0);
  CHECK(run_cli_cmd("schedule-video --frames '" + (pan_dir / "f*.png").string() +
                    "' --config " + cfg.config.string() + " --out-prefix " +
                    pp.string()) == 0);
  double cost_static =
      nlohmann::json::parse(slurp(sp.string() + ".report.json"))["cost_total_flops"];
  double cost_pan =
      nlohmann::json::parse(slurp(pp.string() + ".report.json"))["cost_total_flops"];
  CHECK(cost_pan <= cost_static);
}

TEST_CASE("schedule-video input validation") {
  ConfigFiles cfg = write_fixture_config();

  fs::path one = sandbox() / "clip_one";
  fs::create_directories(one);
  write_raster(one / "f0.png", testing::to_raster(testing::synth_texture(64, 64, 1)));
  CHECK(run_cli_cmd("schedule-video --frames '" + (one / "f*.png").string() +
                    "' --config " + cfg.config.string() + " --out-prefix " +
                    (sandbox() / "v1").string()) == 2);

  fs::path uneven = sandbox() / "clip_uneven";
  fs::create_directories(uneven);
  write_raster(uneven / "f0.png", testing::to_raster(testing::synth_texture(64, 64, 1)));
  write_raster(uneven / "f1.png", testing::to_raster(testing::synth_texture(32, 64, 2)));
  CHECK(run_cli_cmd("schedule-video --frames '" + (uneven / "f*.png").string() +
                    "' --config " + cfg.config.string() + " --out-prefix " +
                    (sandbox() / "v2").string()) == 2);
}

TEST_CASE("make-profiles bundles curves, costs, and band evaluations") {
  // Curve 1: identity-like (flat near 1). Curve 2: narrow peak at zero with
  // floor c = 0.1; far bands land on the floor.
  fs::path corpus = make_corpus("corpus_mkp", 2, 128, 800);
  fs::path curve1 = sandbox() / "c_identity.json";
  CHECK(run_cli_cmd("estimate-attenuation --corpus " + corpus.string() +
                    " --op identity --out " + curve1.string()) == 0);

  AttenuationCurve narrow;
  narrow.scale_k = 8;
  for (int j = 0; j < 16; ++j) {
    narrow.freqs.push_back((j + 0.5) / 32.0);
    narrow.samples.push_back(0.1);
  }
  narrow.fit = {0.005, 0.0, 0.1, 0.0, false};
  fs::path curve2 = sandbox() / "c_narrow.json";
  spit(curve2, curve_to_json(narrow));

  spit(sandbox() / "costs.json",
       R"([{"id": 1, "name": "full", "cost_flops": 4e9, "baseline": true},
           {"id": 0, "name": "fast", "cost_flops": 1e9}])");

  fs::path out = sandbox() / "made_profiles.json";
  CHECK(run_cli_cmd("make-profiles --curves " + curve1.string() + " " +
                    curve2.string() + " --costs " + (sandbox() / "costs.json").string() +
                    " --out " + out.string()) == 0);

  nlohmann::json j = nlohmann::json::parse(slurp(out));
  std::string why;
  CHECK_MESSAGE(testing::validate_schema(j, load_schema("profiles.schema.json"), &why),
                why);
  // Identity curve: near-unit attenuation at every band.
  for (double t : j[0]["t_hat"].get<std::vector<double>>()) CHECK(t >= 0.99);
  // Narrow falloff: every band sits on the floor c.
  for (double t : j[1]["t_hat"].get<std::vector<double>>())
    CHECK(t == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("make-profiles keeps a steep curve's band ordering") {
  // A down/up-by-4 operator must come out strong at the coarse band and
  // weak at the fine band; the bundled t_hat has to reflect the measured
  // curve, not a collapsed summary.
  fs::path corpus = make_corpus("corpus_steep", 2, 256, 7100);
  fs::path curve = sandbox() / "steep.curve.json";
  CHECK(run_cli_cmd("estimate-attenuation --corpus " + corpus.string() +
                    " --op bicubic:4 --out " + curve.string()) == 0);
  fs::path id_curve = sandbox() / "steep_id.curve.json";
  CHECK(run_cli_cmd("estimate-attenuation --corpus " + corpus.string() +
                    " --op identity --out " + id_curve.string()) == 0);

  spit(sandbox() / "steep_costs.json",
       R"([{"id": 0, "name": "bicubic", "cost_flops": 1e6},
           {"id": 1, "name": "full", "cost_flops": 4e9, "baseline": true}])");
  fs::path out = sandbox() / "steep_profiles.json";
  CHECK(run_cli_cmd("make-profiles --curves " + curve.string() + " " +
                    id_curve.string() + " --costs " +
                    (sandbox() / "steep_costs.json").string() + " --out " +
                    out.string()) == 0);

  auto t_hat = nlohmann::json::parse(slurp(out))[0]["t_hat"].get<std::vector<double>>();
  REQUIRE(t_hat.size() == 3);
  CHECK(t_hat[0] < 0.35);  // finest band mostly destroyed
  CHECK(t_hat[2] > 0.75);  // coarsest band mostly preserved
  CHECK(t_hat[0] < t_hat[1]);
  CHECK(t_hat[1] < t_hat[2]);
}

TEST_CASE("make-profiles validation failures exit with 2") {
  AttenuationCurve c;
  c.scale_k = 1;
  for (int j = 0; j < 16; ++j) {
    c.freqs.push_back((j + 0.5) / 32.0);
    c.samples.push_back(1.0);
  }
  c.fit = {4.0, 0.0, 0.9, 0.001, false};
  spit(sandbox() / "c1.json", curve_to_json(c));
  spit(sandbox() / "c2.json", curve_to_json(c));

  // One cost entry for two curves.
  spit(sandbox() / "costs_short.json", R"([{"id": 0, "cost_flops": 1e9}])");
  CHECK(run_cli_cmd("make-profiles --curves " + (sandbox() / "c1.json").string() + " " +
                    (sandbox() / "c2.json").string() + " --costs " +
                    (sandbox() / "costs_short.json").string() + " --out " +
                    (sandbox() / "p1.json").string()) == 2);

  // Duplicate ids.
  spit(sandbox() / "costs_dup.json",
       R"([{"id": 0, "cost_flops": 1e9}, {"id": 0, "cost_flops": 2e9}])");
  CHECK(run_cli_cmd("make-profiles --curves " + (sandbox() / "c1.json").string() + " " +
                    (sandbox() / "c2.json").string() + " --costs " +
                    (sandbox() / "costs_dup.json").string() + " --out " +
                    (sandbox() / "p2.json").string()) == 2);
}

}  // TEST_SUITE
