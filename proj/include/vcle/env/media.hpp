#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vcle/dsp/mfcc.hpp"

namespace vcle::env {

// Binary portable pixmap: "P6\n<w> <h>\n255\n" then RGB24 rows. Throws IoError.
void write_ppm(const std::filesystem::path& path, std::span<const std::uint8_t> rgb, int width, int height);

struct Pixmap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
};
// Reads the files write_ppm produces. Throws IoError or BadFrame.
Pixmap read_ppm(const std::filesystem::path& path);

// RIFF/WAVE, PCM 16-bit mono. Throws IoError.
void write_wav(const std::filesystem::path& path, std::span<const std::int16_t> samples, std::uint32_t sample_rate);

// One row per frame, comma-separated coefficients printed with %.17g.
// An empty matrix yields an empty file.
void write_mfcc_csv(const std::filesystem::path& path, const dsp::MfccMatrix& m);

}  // namespace vcle::env
