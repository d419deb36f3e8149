#include "vcle/env/media.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "vcle/common/bytes.hpp"
#include "vcle/common/error.hpp"

namespace vcle::env {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

void put_le16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>(v >> 8));
}

void put_le32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

void write_ppm(const std::filesystem::path& path, std::span<const std::uint8_t> rgb, int width, int height) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) throw Error(Errc::BadFrame, "pixmap size mismatch");
  auto out = open_out(path);
  out << "P6\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
  finish(out, path);
}

Pixmap read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::string magic;
  int maxval = 0;
  Pixmap p;
  in >> magic >> p.width >> p.height >> maxval;
  if (!in || magic != "P6" || maxval != 255 || p.width <= 0 || p.height <= 0 || in.get() != '\n')
    throw Error(Errc::BadFrame, "not a P6 pixmap: " + path.string());
  p.rgb.resize(static_cast<std::size_t>(p.width) * p.height * 3);
  in.read(reinterpret_cast<char*>(p.rgb.data()), static_cast<std::streamsize>(p.rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(p.rgb.size())) throw Error(Errc::BadFrame, "truncated pixmap");
  return p;
}

void write_wav(const std::filesystem::path& path, std::span<const std::int16_t> samples, std::uint32_t sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string h;
  h += "RIFF";
  put_le32(h, 36 + data_bytes);
  h += "WAVEfmt ";
  put_le32(h, 16);
  put_le16(h, 1);  // PCM
  put_le16(h, 1);  // mono
  put_le32(h, sample_rate);
  put_le32(h, sample_rate * 2);
  put_le16(h, 2);
  put_le16(h, 16);
  h += "data";
  put_le32(h, data_bytes);
  for (auto s : samples) put_le16(h, static_cast<std::uint16_t>(s));
  auto out = open_out(path);
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  finish(out, path);
}

void write_mfcc_csv(const std::filesystem::path& path, const dsp::MfccMatrix& m) {
  auto out = open_out(path);
  char buf[32];
  for (std::size_t f = 0; f < m.n_frames; ++f) {
    for (std::size_t c = 0; c < m.n_coeffs; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m.at(f, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
  finish(out, path);
}

}  // namespace vcle::env
