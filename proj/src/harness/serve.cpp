#include "vcle/harness/serve.hpp"

#include <memory>
#include <string>

#include "json.hpp"
#include "vcle/common/error.hpp"
#include "vcle/common/hash.hpp"
#include "vcle/ipc/link.hpp"
#include "vcle/ipc/server.hpp"
#include "vcle/kula/cartridge.hpp"

namespace vcle::harness {

using nlohmann::ordered_json;

void serve_fifo_session(const std::filesystem::path& dir, bool fast, bool start_frozen,
                        std::optional<std::filesystem::path> snapshot_dir) {
  ipc::create_fifo_session(dir);
  console::Console console(kula::cartridge_loader());
  console.set_snapshot_dir(std::move(snapshot_dir));
  auto link = ipc::open_fifo_server(dir);
  ipc::ConsoleServer server(console, *link, {.fast = fast, .start_frozen = start_frozen});
  server.serve();
}

namespace {

ordered_json encode_state(const env::EncodedState& s) {
  ordered_json j;
  j["hash"] = hash_hex(env::state_hash(s));
  j["visual"] = {{"width", s.visual.width}, {"height", s.visual.height}, {"data", to_hex(s.visual.data)}};
  if (!s.sound) {
    j["sound"] = nullptr;
  } else if (auto* m = std::get_if<dsp::MfccMatrix>(&*s.sound)) {
    j["sound"] = {{"kind", "mfcc"}, {"n_frames", m->n_frames}, {"n_coeffs", m->n_coeffs}, {"values", m->values}};
  } else if (auto* w = std::get_if<std::vector<std::int16_t>>(&*s.sound)) {
    j["sound"] = {{"kind", "wave"}, {"samples", *w}};
  } else {
    j["sound"] = nullptr;
  }
  j["clock"] = s.clock ? ordered_json(*s.clock) : ordered_json(nullptr);
  j["score"] = s.score ? ordered_json(*s.score) : ordered_json(nullptr);
  return j;
}

ordered_json encode_info(const env::StepInfo& i) {
  return {{"duration_real", i.duration_real}, {"duration_game", i.duration_game}, {"score", i.score},
          {"clock", i.clock},                 {"cause", i.cause},                 {"level", i.level},
          {"start", i.start}};
}

ordered_json error_reply(const std::string& code, const std::string& message) {
  return {{"ok", false}, {"error", code}, {"message", message}};
}

}  // namespace

void serve_env_lines(std::istream& in, std::ostream& out, const env::EnvOptions& defaults) {
  std::unique_ptr<env::Env> env;
  auto ensure = [&]() -> env::Env& {
    if (!env) env = std::make_unique<env::Env>(defaults);
    return *env;
  };
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json reply;
    bool close = false;
    try {
      auto req = nlohmann::json::parse(line);
      const auto cmd = req.at("cmd").get<std::string>();
      if (cmd == "make") {
        auto o = defaults;
        o.variant = req.value("variant", o.variant);
        o.level = req.value("level", o.level);
        o.start = req.value("start", o.start);
        o.eval = req.value("eval", o.eval);
        if (req.contains("config")) o.config = game::load_config(req.at("config").get<std::string>(), o.config);
        env.reset();
        env = std::make_unique<env::Env>(o);
        const bool composite = env->variant().encoding == env::Encoding::Composite;
        reply = {{"ok", true},
                 {"variant", env->variant().name},
                 {"actions", game::kAllActions.size()},
                 {"visual", {o.config.visual_size, o.config.visual_size, 3}},
                 {"composite", composite}};
      } else if (cmd == "reset") {
        std::optional<std::uint64_t> seed;
        if (req.contains("seed") && !req.at("seed").is_null()) seed = req.at("seed").get<std::uint64_t>();
        reply = {{"ok", true}, {"state", encode_state(ensure().reset(seed))}};
      } else if (cmd == "step") {
        const auto& a = req.at("action");
        if (!a.is_number_integer()) throw Error(Errc::BadAction, "action must be an integer");
        auto r = ensure().step(a.get<int>());
        reply = {{"ok", true},
                 {"state", encode_state(r.state)},
                 {"reward", r.reward},
                 {"done", r.done},
                 {"info", encode_info(r.info)}};
      } else if (cmd == "render") {
        if (req.contains("path"))
          reply = {{"ok", true}, {"path", ensure().render_image(req.at("path").get<std::string>()).string()}};
        else
          reply = {{"ok", true}, {"text", ensure().render_text()}};
      } else if (cmd == "save") {
        reply = {{"ok", true}, {"key", ensure().save_visited().id}};
      } else if (cmd == "resume") {
        reply = {{"ok", true}, {"state", encode_state(ensure().resume_from({req.at("key").get<std::string>()}))}};
      } else if (cmd == "close") {
        reply = {{"ok", true}};
        close = true;
      } else {
        reply = error_reply("BadRequest", "unknown command '" + cmd + "'");
      }
    } catch (const Error& e) {
      reply = error_reply(to_string(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
      reply = error_reply("BadRequest", e.what());
    }
    out << reply.dump() << "\n";
    out.flush();
    if (close) break;
  }
  env.reset();
}

}  // namespace vcle::harness
