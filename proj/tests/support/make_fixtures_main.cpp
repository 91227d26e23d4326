// Writes the committed natural-texture fixtures under tests/data.
// Run manually after changing the generator; outputs are deterministic.
#include <cstdio>
#include <filesystem>
#include <string>

#include "hvpf/image_io.hpp"
#include "synth.hpp"

int main(int argc, char** argv) {
  std::filesystem::path out_dir = argc > 1 ? argv[1] : HVPF_TEST_DATA_DIR;
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < 5; ++i) {
    hvpf::Raster8 raster =
        hvpf::testing::to_raster(hvpf::testing::synth_texture(640, 360, 1000 + i));
    std::filesystem::path file = out_dir / ("natural_" + std::to_string(i) + ".png");
    hvpf::write_raster(file, raster);
    std::printf("wrote %s\n", file.string().c_str());
  }
  return 0;
}
