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

#ifndef HVPF_IMAGE_IO_HPP_
#define HVPF_IMAGE_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "hvpf/image.hpp"

namespace hvpf {

// Reads an 8-bit PNG (gray/RGB/palette, alpha stripped) or PGM (P5/P2).
// Dispatches on file magic, not extension.
Raster8 read_raster(const std::filesystem::path& file);

// Writes an 8-bit grayscale or RGB image. Format picked by extension
// (.png or .pgm); gray only for PGM.
void write_raster(const std::filesystem::path& file, const Raster8& raster);

// In-memory PNG encode of an 8-bit grayscale plane (used for atomic writes).
std::vector<unsigned char> encode_gray_png(const Raster8& gray);

// Writes bytes through a temp file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& file,
                       const void* bytes, size_t size);
void write_file_atomic(const std::filesystem::path& file, const std::string& text);

}  // namespace hvpf

#endif  // HVPF_IMAGE_IO_HPP_
