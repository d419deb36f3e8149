#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vcle::dsp {

struct MfccConfig {
  double sample_rate = 22050.0;
  std::size_t frame_len = 512;
  std::size_t hop = 256;
  std::size_t n_mels = 26;
  std::size_t n_coeffs = 13;
  double preemphasis = 0.97;
  double log_floor = 1e-10;

  // Throws BadConfig.
  void validate() const;
};

// Row-major n_frames x n_coeffs.
struct MfccMatrix {
  std::size_t n_frames = 0;
  std::size_t n_coeffs = 0;
  std::vector<double> values;

  double at(std::size_t frame, std::size_t coeff) const { return values[frame * n_coeffs + coeff]; }
  bool empty() const { return n_frames == 0; }
};

// 1 + floor((len - frame_len) / hop) when len >= frame_len, else 0.
std::size_t frame_count(std::size_t len, const MfccConfig& cfg);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& data);
// |DFT| for bins 0..n/2.
std::vector<double> magnitude_spectrum(std::span<const double> frame);
// Symmetric Hamming window.
std::vector<double> hamming(std::size_t n);
// n_mels rows of frame_len/2+1 triangular weights on the HTK mel scale.
std::vector<std::vector<double>> mel_filterbank(const MfccConfig& cfg);
// Orthonormal DCT-II, first n_out coefficients.
std::vector<double> dct2(std::span<const double> x, std::size_t n_out);

// Samples in [-1, 1]. Throws BadAudio on non-finite input.
MfccMatrix mfcc(std::span<const double> wave, const MfccConfig& cfg = {});
// 16-bit PCM, normalised by 32768.
MfccMatrix mfcc(std::span<const std::int16_t> pcm, const MfccConfig& cfg = {});

}  // namespace vcle::dsp
