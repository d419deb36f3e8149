#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace vcle::kula {

enum class SoundEvent : std::uint8_t { Roll, Jump, Coin, Key, Fruit, Win, Lose };

inline constexpr std::array<SoundEvent, 7> kAllSounds = {SoundEvent::Roll, SoundEvent::Jump, SoundEvent::Coin,
                                                         SoundEvent::Key,  SoundEvent::Fruit, SoundEvent::Win,
                                                         SoundEvent::Lose};

std::string_view to_string(SoundEvent e);
std::optional<SoundEvent> sound_from_string(std::string_view name);
double sound_duration_ms(SoundEvent e);
// round(duration * 22050), half away from zero.
std::size_t sound_length(SoundEvent e);

// Peak amplitude of any synthesized sound, as a fraction of full scale.
inline constexpr double kMaxAmplitude = 0.8;

// Deterministic 22050 Hz mono waveform for the event.
std::vector<std::int16_t> synth_sound(SoundEvent e);
// Cached copy of synth_sound(e).
const std::vector<std::int16_t>& sound_samples(SoundEvent e);

}  // namespace vcle::kula
