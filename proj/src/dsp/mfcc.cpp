#include "vcle/dsp/mfcc.hpp"

#include <algorithm>
#include <cmath>

#include "vcle/common/error.hpp"

namespace vcle::dsp {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }
}  // namespace

void MfccConfig::validate() const {
  if (!power_of_two(frame_len)) throw Error(Errc::BadConfig, "frame_len must be a power of two");
  if (hop == 0 || hop > frame_len) throw Error(Errc::BadConfig, "hop must be in 1..frame_len");
  if (n_mels == 0 || n_coeffs == 0 || n_coeffs > n_mels) throw Error(Errc::BadConfig, "need 0 < n_coeffs <= n_mels");
  if (!(sample_rate > 0)) throw Error(Errc::BadConfig, "sample_rate must be positive");
  if (!(log_floor > 0)) throw Error(Errc::BadConfig, "log_floor must be positive");
}

std::size_t frame_count(std::size_t len, const MfccConfig& cfg) {
  return len < cfg.frame_len ? 0 : 1 + (len - cfg.frame_len) / cfg.hop;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (!power_of_two(n)) throw Error(Errc::BadAudio, "fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      // Twiddles computed directly rather than by recurrence to keep rounding flat.
      const double angle = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(len);
      const std::complex<double> w(std::cos(angle), std::sin(angle));
      for (std::size_t i = 0; i < n; i += len) {
        auto u = a[i + k];
        auto v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

std::vector<double> magnitude_spectrum(std::span<const double> frame) {
  std::vector<std::complex<double>> buf(frame.begin(), frame.end());
  fft(buf);
  std::vector<double> out(buf.size() / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::abs(buf[k]);
  return out;
}

std::vector<double> hamming(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = n == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
  return w;
}

std::vector<std::vector<double>> mel_filterbank(const MfccConfig& cfg) {
  const std::size_t bins = cfg.frame_len / 2 + 1;
  const double lo = hz_to_mel(0.0), hi = hz_to_mel(cfg.sample_rate / 2.0);
  std::vector<double> edges(cfg.n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cfg.n_mels + 1));
  std::vector<std::vector<double>> bank(cfg.n_mels, std::vector<double>(bins, 0.0));
  for (std::size_t m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / static_cast<double>(cfg.frame_len);
      if (f > left && f <= centre)
        bank[m][k] = (f - left) / (centre - left);
      else if (f > centre && f < right)
        bank[m][k] = (right - f) / (right - centre);
    }
  }
  return bank;
}

std::vector<double> dct2(std::span<const double> x, std::size_t n_out) {
  const std::size_t n = x.size();
  std::vector<double> out(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sum += x[i] * std::cos(kPi * static_cast<double>(k) * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n)));
    out[k] = sum * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return out;
}

MfccMatrix mfcc(std::span<const double> wave, const MfccConfig& cfg) {
  cfg.validate();
  for (double v : wave)
    if (!std::isfinite(v)) throw Error(Errc::BadAudio, "non-finite sample");
  MfccMatrix out;
  out.n_coeffs = cfg.n_coeffs;
  out.n_frames = frame_count(wave.size(), cfg);
  if (out.n_frames == 0) return out;

  std::vector<double> emphasized(wave.size());
  emphasized[0] = wave[0];
  for (std::size_t i = 1; i < wave.size(); ++i) emphasized[i] = wave[i] - cfg.preemphasis * wave[i - 1];

  const auto window = hamming(cfg.frame_len);
  const auto bank = mel_filterbank(cfg);
  out.values.reserve(out.n_frames * out.n_coeffs);
  std::vector<double> frame(cfg.frame_len), energies(cfg.n_mels);
  for (std::size_t f = 0; f < out.n_frames; ++f) {
    const std::size_t start = f * cfg.hop;
    for (std::size_t i = 0; i < cfg.frame_len; ++i) frame[i] = emphasized[start + i] * window[i];
    const auto spectrum = magnitude_spectrum(frame);
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < spectrum.size(); ++k) e += bank[m][k] * spectrum[k];
      energies[m] = std::log(std::max(e, cfg.log_floor));
    }
    auto coeffs = dct2(energies, cfg.n_coeffs);
    out.values.insert(out.values.end(), coeffs.begin(), coeffs.end());
  }
  return out;
}

MfccMatrix mfcc(std::span<const std::int16_t> pcm, const MfccConfig& cfg) {
  std::vector<double> wave(pcm.size());
  for (std::size_t i = 0; i < pcm.size(); ++i) wave[i] = pcm[i] / 32768.0;
  return mfcc(wave, cfg);
}

}  // namespace vcle::dsp
