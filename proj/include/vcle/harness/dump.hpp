#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vcle/env/env.hpp"

namespace vcle::harness {

enum class DumpKind { Frame, Audio, Mfcc };
DumpKind dump_kind_from_string(const std::string& s);  // throws BadConfig

// Resets the environment, plays `script`, then writes the final frame (P6),
// the last move's trimmed sound (WAVE) or its MFCC matrix (CSV). Audio and
// MFCC dumps need an environment that records raw audio.
void dump(env::Env& env, DumpKind kind, const std::filesystem::path& out, const std::vector<game::Action>& script,
          std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace vcle::harness
