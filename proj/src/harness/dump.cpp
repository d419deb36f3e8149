#include "vcle/harness/dump.hpp"

#include "vcle/common/error.hpp"
#include "vcle/env/media.hpp"

namespace vcle::harness {

DumpKind dump_kind_from_string(const std::string& s) {
  if (s == "frame") return DumpKind::Frame;
  if (s == "audio") return DumpKind::Audio;
  if (s == "mfcc") return DumpKind::Mfcc;
  throw Error(Errc::BadConfig, "unknown dump kind '" + s + "' (frame, audio, mfcc)");
}

void dump(env::Env& env, DumpKind kind, const std::filesystem::path& out, const std::vector<game::Action>& script,
          std::optional<std::uint64_t> seed) {
  const auto& audio = env.game().config().audio;
  if (kind != DumpKind::Frame && (!audio.record || audio.use_mfcc))
    throw Error(Errc::Unsupported, "audio dumps need raw audio recording");
  env.reset(seed);
  game::Sound last;
  for (auto a : script) {
    if (!env.game().playing()) break;
    last = env.game().move(a).sound;
  }
  auto* wave = std::get_if<std::vector<std::int16_t>>(&last);
  static const std::vector<std::int16_t> silence;
  const auto& samples = wave ? *wave : silence;
  switch (kind) {
    case DumpKind::Frame: {
      auto screen = env.console().get_screen();
      env::write_ppm(out, screen.rgb, screen.width, screen.height);
      break;
    }
    case DumpKind::Audio:
      env::write_wav(out, samples, console::kSampleRate);
      break;
    case DumpKind::Mfcc:
      env::write_mfcc_csv(out, dsp::mfcc(std::span<const std::int16_t>(samples)));
      break;
  }
}

}  // namespace vcle::harness
