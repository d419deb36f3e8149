#include "vcle/kula/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "vcle/console/types.hpp"

namespace vcle::kula {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRate = console::kSampleRate;

// Linear attack and release ramps so sounds start and end without clicks.
double envelope(std::size_t i, std::size_t n, double attack_s = 0.003, double release_s = 0.012) {
  double t = static_cast<double>(i) / kRate;
  double left = static_cast<double>(n - i) / kRate;
  return std::min({1.0, t / attack_s, left / release_s});
}

std::int16_t to_pcm(double v) {
  v = std::clamp(v, -kMaxAmplitude, kMaxAmplitude);
  return static_cast<std::int16_t>(std::lround(v * 32767.0));
}

// Phase-accumulating oscillator over a per-sample frequency curve.
std::vector<std::int16_t> tone(std::size_t n, const std::function<double(double)>& freq,
                               const std::function<double(double, std::size_t)>& amp) {
  std::vector<std::int16_t> out(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / kRate;
    out[i] = to_pcm(amp(t, i) * std::sin(phase));
    phase += 2.0 * kPi * freq(t) / kRate;
    if (phase > 2.0 * kPi) phase -= 2.0 * kPi;
  }
  return out;
}

std::vector<std::int16_t> roll(std::size_t n) {
  std::vector<std::int16_t> out(n);
  std::uint32_t state = 0x2545F491u;
  double y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    state ^= state << 13;
    state ^= state >> 17;
    state ^= state << 5;
    double x = static_cast<double>(state) / 2147483648.0 - 1.0;
    y = 0.75 * y + 0.25 * x;
    double decay = 1.0 - static_cast<double>(i) / static_cast<double>(n);
    out[i] = to_pcm(0.7 * y * decay * envelope(i, n));
  }
  return out;
}

std::vector<std::int16_t> chord(std::size_t n, std::initializer_list<double> freqs, double gain) {
  std::vector<std::int16_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / kRate;
    double v = 0.0;
    for (double f : freqs) v += std::sin(2.0 * kPi * f * t);
    v /= static_cast<double>(freqs.size());
    out[i] = to_pcm(gain * v * envelope(i, n) * std::exp(-t / 0.4));
  }
  return out;
}

std::vector<std::int16_t> arpeggio(std::size_t n, std::initializer_list<double> freqs, double gain) {
  std::vector<std::int16_t> out(n);
  const std::size_t notes = freqs.size();
  const std::size_t step = (n + notes - 1) / notes;
  std::size_t i = 0;
  for (double f : freqs) {
    std::size_t end = std::min(n, i + step);
    std::size_t len = end - i;
    for (std::size_t k = 0; k < len; ++k) {
      double t = static_cast<double>(k) / kRate;
      out[i + k] = to_pcm(gain * std::sin(2.0 * kPi * f * t) * envelope(k, len));
    }
    i = end;
  }
  return out;
}

}  // namespace

std::string_view to_string(SoundEvent e) {
  switch (e) {
    case SoundEvent::Roll: return "roll";
    case SoundEvent::Jump: return "jump";
    case SoundEvent::Coin: return "coin";
    case SoundEvent::Key: return "key";
    case SoundEvent::Fruit: return "fruit";
    case SoundEvent::Win: return "win";
    case SoundEvent::Lose: return "lose";
  }
  return "?";
}

std::optional<SoundEvent> sound_from_string(std::string_view name) {
  for (auto e : kAllSounds)
    if (to_string(e) == name) return e;
  return std::nullopt;
}

double sound_duration_ms(SoundEvent e) {
  switch (e) {
    case SoundEvent::Roll: return 80;
    case SoundEvent::Jump: return 300;
    case SoundEvent::Coin: return 150;
    case SoundEvent::Key: return 250;
    case SoundEvent::Fruit: return 300;
    case SoundEvent::Win: return 600;
    case SoundEvent::Lose: return 500;
  }
  return 0;
}

std::size_t sound_length(SoundEvent e) {
  return static_cast<std::size_t>(std::llround(sound_duration_ms(e) * kRate / 1000.0));
}

std::vector<std::int16_t> synth_sound(SoundEvent e) {
  const std::size_t n = sound_length(e);
  const double dur = static_cast<double>(n) / kRate;
  switch (e) {
    case SoundEvent::Roll: return roll(n);
    case SoundEvent::Jump:
      return tone(
          n, [dur](double t) { return 200.0 + 400.0 * t / dur; },
          [n](double, std::size_t i) { return 0.5 * envelope(i, n); });
    case SoundEvent::Coin:
      return tone(
          n, [](double) { return 880.0; },
          [n](double t, std::size_t i) { return kMaxAmplitude * std::exp(-t / 0.04) * envelope(i, n, 0.0005); });
    case SoundEvent::Key:
      return tone(
          n, [dur](double t) { return t < dur / 2 ? 660.0 : 990.0; },
          [n](double, std::size_t i) { return 0.55 * envelope(i, n); });
    case SoundEvent::Fruit: return chord(n, {523.25, 659.25, 783.99}, 0.7);
    case SoundEvent::Win: return arpeggio(n, {523.25, 659.25, 783.99}, 0.6);
    case SoundEvent::Lose:
      return tone(
          n, [dur](double t) { return 400.0 - 300.0 * t / dur; },
          [n](double, std::size_t i) { return 0.6 * envelope(i, n); });
  }
  return {};
}

const std::vector<std::int16_t>& sound_samples(SoundEvent e) {
  static const auto table = [] {
    std::array<std::vector<std::int16_t>, kAllSounds.size()> t;
    for (auto ev : kAllSounds) t[static_cast<std::size_t>(ev)] = synth_sound(ev);
    return t;
  }();
  return table[static_cast<std::size_t>(e)];
}

}  // namespace vcle::kula
