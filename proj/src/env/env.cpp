#include "vcle/env/env.hpp"

#include <bit>
#include <cstdio>

#include "vcle/common/error.hpp"
#include "vcle/common/hash.hpp"
#include "vcle/env/media.hpp"

namespace vcle::env {

EnvVariant make_variant(const std::string& name, const std::string& level, int start) {
  EnvVariant v;
  v.name = name;
  kula::GameName fixed;
  fixed.level = level;
  fixed.start = start;
  if (name == "fixed-v1") {
    v.training = {fixed};
  } else if (name == "audio-v1") {
    v.training = {fixed};
    v.encoding = Encoding::Composite;
  } else if (name == "random-v1") {
    v.start_policy = StartPolicy::UniformTraining;
    for (int id = 1; id <= 3; ++id) {
      const auto& spec = kula::builtin_level(id);
      for (std::size_t s = 0; s < spec.starts.size(); ++s)
        v.training.push_back({"level" + std::to_string(id), static_cast<int>(s), kRandomTimeLimitS});
    }
    v.reserved = kula::GameName{"level2", kula::kReservedStart, kRandomTimeLimitS};
  } else {
    throw Error(Errc::BadConfig, "unknown environment variant '" + name + "'");
  }
  return v;
}

std::uint64_t state_hash(const EncodedState& s) {
  Fnv1a h;
  h.update_u64(static_cast<std::uint64_t>(s.visual.width)).update_u64(static_cast<std::uint64_t>(s.visual.height));
  h.update(s.visual.data);
  if (s.sound) {
    h.update_u64(s.sound->index());
    if (auto* w = std::get_if<std::vector<std::int16_t>>(&*s.sound)) {
      h.update_u64(w->size());
      for (auto v : *w) h.update_u64(static_cast<std::uint16_t>(v));
    } else if (auto* m = std::get_if<dsp::MfccMatrix>(&*s.sound)) {
      h.update_u64(m->n_frames).update_u64(m->n_coeffs);
      for (double v : m->values) h.update_u64(std::bit_cast<std::uint64_t>(v));
    }
  }
  if (s.clock) h.update_u64(1).update_u64(std::bit_cast<std::uint64_t>(*s.clock));
  if (s.score) h.update_u64(2).update_u64(*s.score);
  return h.digest();
}

Env::Env(EnvOptions options)
    : options_(std::move(options)),
      variant_(make_variant(options_.variant, options_.level, options_.start)),
      console_([&] {
        auto c = options_.console;
        if (!c.loader) c.loader = kula::cartridge_loader();
        return c;
      }()) {
  if (variant_.encoding == Encoding::Composite) {
    options_.config.audio.record = true;
    options_.config.audio.use_mfcc = true;
  }
  game_ = std::make_unique<game::KulaGame>(console_, options_.config);
}

Env::~Env() { game_.reset(); }

void Env::ensure_running() {
  if (!console_.running()) {
    visits_.clear();
    console_.run();
  }
}

game::Sound Env::empty_sound() const {
  if (options_.config.audio.use_mfcc) {
    dsp::MfccMatrix m;
    m.n_coeffs = dsp::MfccConfig{}.n_coeffs;
    return m;
  }
  return std::vector<std::int16_t>{};
}

EncodedState Env::encode(game::VisualTensor visual, game::Sound sound, const game::RamState& ram) const {
  EncodedState s;
  s.visual = std::move(visual);
  const double clock = ram.clock_frames / static_cast<double>(console::kFrameRate);
  if (variant_.encoding == Encoding::Composite) {
    s.sound = std::move(sound);
    s.clock = clock;
    s.score = ram.score;
  } else if (options_.config.reward.time_in_state) {
    s.clock = clock;
  }
  return s;
}

EncodedState Env::reset(std::optional<std::uint64_t> seed) {
  if (seed) rng_.seed(*seed);
  if (options_.eval) {
    if (!variant_.reserved) throw Error(Errc::Unsupported, variant_.name + " has no reserved evaluation start");
    current_ = *variant_.reserved;
  } else if (variant_.start_policy == StartPolicy::UniformTraining) {
    current_ = variant_.training[uniform_index(rng_, variant_.training.size())];
  } else {
    current_ = variant_.training.front();
  }
  ensure_running();
  game_->load(current_);
  active_ = true;
  episode_reward_ = 0.0;
  moves_ = 0;
  return encode(game_->observe(), empty_sound(), game_->state());
}

StepResult Env::step(int action) {
  if (!active_) throw Error(Errc::EpisodeOver, "no active episode; call reset()");
  auto a = game::action_from_index(action);
  if (!a) throw Error(Errc::BadAction, "action index " + std::to_string(action) + " is not in 0..3");
  auto out = game_->move(*a);
  StepResult r;
  r.reward = out.reward;
  r.done = !out.playing;
  r.info.duration_real = out.duration_real;
  r.info.duration_game = out.duration_game;
  r.info.score = out.score;
  r.info.clock = out.clock;
  r.info.cause = std::string(kula::to_string(out.status));
  r.info.level = current_.level;
  r.info.start = current_.start;
  r.state = encode(std::move(out.visual), std::move(out.sound), game_->state());
  episode_reward_ += r.reward;
  ++moves_;
  if (r.done) active_ = false;
  return r;
}

std::string Env::render_text() {
  if (!console_.running()) throw Error(Errc::NotRunning, "no console session");
  auto head = console_.read_bytes(kula::ram::kTileMap, 2);
  const int w = head[0], h = head[1];
  auto glyphs = console_.read_bytes(kula::ram::kTileMap + 2, static_cast<std::uint32_t>(w * h));
  auto ram = game_->read_state();
  std::string grid(glyphs.begin(), glyphs.end());
  const bool on_grid = ram.x >= 0 && ram.x < w && ram.y >= 0 && ram.y < h && ram.status != kula::GameStatus::LostFall;
  if (on_grid) grid[static_cast<std::size_t>(ram.y * w + ram.x)] = "^>v<"[static_cast<int>(ram.orientation)];
  std::string out;
  for (int y = 0; y < h; ++y) {
    out.append(grid, static_cast<std::size_t>(y * w), static_cast<std::size_t>(w));
    out += '\n';
  }
  char hud[128];
  std::snprintf(hud, sizeof hud, "score %u  clock %.2f  keys %d  %s\n", ram.score,
                ram.clock_frames / static_cast<double>(console::kFrameRate), ram.keys_remaining,
                std::string(kula::to_string(ram.status)).c_str());
  return out + hud;
}

std::filesystem::path Env::render_image(const std::filesystem::path& path) {
  auto screen = console_.get_screen();
  write_ppm(path, screen.rgb, screen.width, screen.height);
  return path;
}

StateKey Env::save_visited() {
  if (!active_) throw Error(Errc::EpisodeOver, "no active episode to save");
  StateKey key{"visit-" + std::to_string(next_visit_++)};
  console_.save_state(key.id);
  visits_[key.id] = {current_, episode_reward_, moves_};
  return key;
}

EncodedState Env::resume_from(const StateKey& key) {
  auto it = visits_.find(key.id);
  if (it == visits_.end() || !console_.running()) throw Error(Errc::UnknownState, "unknown state key '" + key.id + "'");
  console_.load_state(key.id);
  game_->resync();
  current_ = it->second.name;
  episode_reward_ = it->second.episode_reward;
  moves_ = it->second.moves;
  active_ = game_->playing();
  return encode(game_->observe(), empty_sound(), game_->state());
}

void Env::kill() {
  visits_.clear();
  active_ = false;
  if (console_.running()) console_.kill();
}

}  // namespace vcle::env
