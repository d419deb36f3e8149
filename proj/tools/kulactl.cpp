#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vcle/common/error.hpp"
#include "vcle/harness/dump.hpp"
#include "vcle/harness/episodes.hpp"
#include "vcle/harness/protocol.hpp"
#include "vcle/harness/qlearn.hpp"
#include "vcle/harness/serve.hpp"

using namespace vcle;

namespace {

struct Globals {
  std::string variant = "fixed-v1";
  std::string level = "level1";
  int start = 0;
  int episodes = 10;
  std::uint64_t seed = 0;
  bool eval = false;
  std::string config;
  std::string out;
  bool fast = false;
  bool record_audio = false;
};

env::EnvOptions env_options(const Globals& g) {
  env::EnvOptions o;
  o.variant = g.variant;
  o.level = g.level;
  o.start = g.start;
  o.eval = g.eval;
  if (!g.config.empty()) o.config = game::load_config(g.config);
  if (g.record_audio) o.config.audio.record = true;
  o.console.fast = g.fast;
  o.console.start_frozen = true;
  return o;
}

// Writes to <out>/<name>, or stdout when no output directory was given.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(g.out);
  auto path = std::filesystem::path(g.out) / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text)) throw Error(Errc::IoError, "cannot write " + path.string());
  std::cerr << "wrote " << path.string() << "\n";
}

std::string csv(const std::vector<harness::EpisodeLog>& rows) {
  std::ostringstream s;
  harness::write_episode_csv(s, rows);
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kulactl: drive the Kula environments on the virtual console"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--variant", g.variant, "fixed-v1, random-v1 or audio-v1")->capture_default_str();
  app.add_option("--level", g.level, "level1..level3 or a level file (fixed variants)")->capture_default_str();
  app.add_option("--start", g.start, "start index (fixed variants)")->capture_default_str();
  app.add_option("--episodes", g.episodes, "episode count")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_flag("--eval", g.eval, "use the reserved evaluation start");
  app.add_option("--config", g.config, "key = value config file");
  app.add_option("--out", g.out, "output directory (dump: output file)");
  app.add_flag("--fast", g.fast, "run frames unthrottled");
  app.add_flag("--record-audio", g.record_audio, "record the audio of each move");

  auto* play = app.add_subcommand("play", "run a random or scripted policy and log episodes as CSV");
  std::string script_path;
  play->add_option("--script", script_path, "file of actions replayed each episode");

  auto* train = app.add_subcommand("train-q", "tabular Q-learning; writes episodes.csv and qtable.txt");

  auto* dump = app.add_subcommand("dump", "write a frame (P6), move audio (WAVE) or MFCC matrix (CSV)");
  std::string what = "frame";
  std::string actions;
  dump->add_option("what", what, "frame, audio or mfcc")->required();
  dump->add_option("--actions", actions, "comma-separated actions played before dumping");

  auto* protocol = app.add_subcommand("protocol", "record or verify per-channel wire transcripts");
  protocol->require_subcommand(1);
  auto* record = protocol->add_subcommand("record", "record the scripted sessions into --out");
  auto* verify = protocol->add_subcommand("verify", "replay and byte-compare transcripts");
  std::string transcripts = "tests/golden";
  verify->add_option("path", transcripts, "transcript file or directory")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "host a console on a FIFO session directory");
  std::string session;
  std::string snapshots;
  serve->add_option("--session", session, "session directory")->required();
  serve->add_option("--snapshots", snapshots, "directory for named snapshots");

  auto* env_serve = app.add_subcommand("env-serve", "JSON-lines environment service on stdin/stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*play) {
      auto env_opts = env_options(g);
      env::Env env(env_opts);
      harness::PlayOptions p;
      p.episodes = g.episodes;
      p.seed = g.seed;
      p.window = g.eval ? harness::kEvalWindow : harness::kTrainWindow;
      if (!script_path.empty()) p.script = harness::load_script(script_path);
      emit(g, "episodes.csv", csv(harness::play(env, p)));
    } else if (*train) {
      auto env_opts = env_options(g);
      env::Env env(env_opts);
      auto cfg = harness::QConfig::from_agent(env_opts.config.agent);
      auto result = harness::train_q(env, cfg, g.episodes, g.seed, g.eval ? harness::kEvalWindow : harness::kTrainWindow);
      if (g.out.empty()) {
        std::cout << csv(result.log);
      } else {
        emit(g, "episodes.csv", csv(result.log));
        emit(g, "qtable.txt", result.table.serialize());
      }
      std::fprintf(stderr, "win rate over the last %zu episodes: %.3f\n", std::min<std::size_t>(100, result.log.size()),
                   harness::win_rate(result.log, result.log.size() - std::min<std::size_t>(100, result.log.size())));
    } else if (*dump) {
      if (g.out.empty()) throw Error(Errc::IoError, "dump needs --out <file>");
      auto kind = harness::dump_kind_from_string(what);
      auto env_opts = env_options(g);
      if (kind != harness::DumpKind::Frame) {
        env_opts.config.audio.record = true;
        env_opts.config.audio.use_mfcc = false;
        if (env_opts.variant == "audio-v1") env_opts.variant = "fixed-v1";
      }
      env::Env env(env_opts);
      std::vector<game::Action> script;
      if (!actions.empty()) script = harness::parse_script(actions);
      harness::dump(env, kind, g.out, script, g.seed);
      std::cerr << "wrote " << g.out << "\n";
    } else if (*record) {
      auto dir = g.out.empty() ? std::string("tests/golden") : g.out;
      for (const auto& p : harness::record_sessions(dir)) std::cerr << "wrote " << p.string() << "\n";
    } else if (*verify) {
      bool ok = true;
      for (const auto& r : harness::verify_transcripts(transcripts)) {
        if (r.ok()) {
          std::cout << "PASS " << r.session << " (" << r.path.string() << ")\n";
          continue;
        }
        ok = false;
        std::cout << "FAIL " << r.session << " (" << r.path.string() << ")\n";
        for (const auto& d : r.diffs)
          std::cout << "  channel " << d.channel << ": first difference at byte " << d.offset << " (expected "
                    << d.expected_size << " bytes, got " << d.actual_size << ")\n";
      }
      return ok ? 0 : 1;
    } else if (*serve) {
      std::optional<std::filesystem::path> snap;
      if (!snapshots.empty()) snap = snapshots;
      harness::serve_fifo_session(session, g.fast, true, snap);
    } else if (*env_serve) {
      harness::serve_env_lines(std::cin, std::cout, env_options(g));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
