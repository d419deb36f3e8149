#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vcle::oracle {

namespace {
const double kPi = std::acos(-1.0);
constexpr int kRate = 22050;
constexpr int kFrame = 512;
constexpr int kHop = 256;
constexpr int kMels = 26;
constexpr int kCoeffs = 13;
}  // namespace

std::vector<double> naive_dft_magnitude(const std::vector<double>& frame) {
  const std::size_t n = frame.size();
  // cos/sin of 2*pi*j/n for every residue j = (k*t) mod n, reduced exactly.
  static thread_local std::size_t table_n = 0;
  static thread_local std::vector<long double> cos_t, sin_t;
  if (table_n != n) {
    cos_t.resize(n);
    sin_t.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const long double angle = 2.0L * kPi * static_cast<long double>(j) / static_cast<long double>(n);
      cos_t[j] = std::cos(angle);
      sin_t[j] = std::sin(angle);
    }
    table_n = n;
  }
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    long double re = 0, im = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t j = (k * t) % n;
      re += frame[t] * cos_t[j];
      im -= frame[t] * sin_t[j];
    }
    mag[k] = static_cast<double>(std::sqrt(re * re + im * im));
  }
  return mag;
}

std::vector<std::vector<double>> reference_mfcc(const std::vector<double>& wave) {
  std::vector<std::vector<double>> rows;
  if (wave.size() < static_cast<std::size_t>(kFrame)) return rows;
  const std::size_t frames = (wave.size() - kFrame) / kHop + 1;

  auto mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto inv = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  std::vector<double> band(kMels + 2);
  const double top = mel(kRate / 2.0);
  for (int i = 0; i < kMels + 2; ++i) band[i] = inv(top * i / (kMels + 1));

  // Weight of bin frequency f in filter m, triangles linear in Hz.
  auto weight = [&](int m, double f) {
    const double a = band[m], b = band[m + 1], c = band[m + 2];
    if (f <= a || f >= c) return 0.0;
    return f <= b ? (f - a) / (b - a) : (c - f) / (c - b);
  };

  for (std::size_t fr = 0; fr < frames; ++fr) {
    std::vector<double> x(kFrame);
    for (int i = 0; i < kFrame; ++i) {
      const std::size_t at = fr * kHop + i;
      const double prev = at == 0 ? 0.0 : wave[at - 1];
      const double emph = at == 0 ? wave[0] : wave[at] - 0.97 * prev;
      x[i] = emph * (0.54 - 0.46 * std::cos(2.0 * kPi * i / (kFrame - 1)));
    }
    const auto mag = naive_dft_magnitude(x);
    std::vector<double> logmel(kMels);
    for (int m = 0; m < kMels; ++m) {
      double e = 0;
      for (int k = 0; k <= kFrame / 2; ++k) e += weight(m, static_cast<double>(k) * kRate / kFrame) * mag[k];
      logmel[m] = std::log(std::max(e, 1e-10));
    }
    std::vector<double> row(kCoeffs);
    for (int k = 0; k < kCoeffs; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / kMels) : std::sqrt(2.0 / kMels);
      double s = 0;
      for (int n = 0; n < kMels; ++n) s += logmel[n] * std::cos(kPi / kMels * (n + 0.5) * k);
      row[k] = scale * s;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::uint8_t> reference_downsample(const std::vector<std::uint8_t>& rgb, int w, int h, int out_w, int out_h) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(out_w) * out_h * 3);
  for (int oy = 0; oy < out_h; ++oy) {
    for (int ox = 0; ox < out_w; ++ox) {
      for (int ch = 0; ch < 3; ++ch) {
        // Output pixel spans [ox*w, (ox+1)*w) in units of 1/out_w source pixels.
        std::int64_t num = 0;
        for (int sy = 0; sy < h; ++sy) {
          const std::int64_t oy0 = std::max<std::int64_t>(static_cast<std::int64_t>(sy) * out_h, static_cast<std::int64_t>(oy) * h);
          const std::int64_t oy1 = std::min<std::int64_t>(static_cast<std::int64_t>(sy + 1) * out_h, static_cast<std::int64_t>(oy + 1) * h);
          if (oy1 <= oy0) continue;
          for (int sx = 0; sx < w; ++sx) {
            const std::int64_t ox0 = std::max<std::int64_t>(static_cast<std::int64_t>(sx) * out_w, static_cast<std::int64_t>(ox) * w);
            const std::int64_t ox1 = std::min<std::int64_t>(static_cast<std::int64_t>(sx + 1) * out_w, static_cast<std::int64_t>(ox + 1) * w);
            if (ox1 <= ox0) continue;
            num += (oy1 - oy0) * (ox1 - ox0) * rgb[(static_cast<std::size_t>(sy) * w + sx) * 3 + ch];
          }
        }
        const std::int64_t den = static_cast<std::int64_t>(w) * h;
        // Half-up rounding of num / den.
        out[(static_cast<std::size_t>(oy) * out_w + ox) * 3 + ch] = static_cast<std::uint8_t>((2 * num + den) / (2 * den));
      }
    }
  }
  return out;
}

double relative_error(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) return INFINITY;
  double diff = 0, scale = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return INFINITY;
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      diff = std::max(diff, std::abs(a[i][j] - b[i][j]));
      scale = std::max(scale, std::abs(b[i][j]));
    }
  }
  return scale == 0 ? diff : diff / scale;
}

}  // namespace vcle::oracle
