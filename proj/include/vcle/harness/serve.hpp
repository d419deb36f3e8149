#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "vcle/env/env.hpp"

namespace vcle::harness {

// Hosts a console behind the FIFO session in `dir` (created if missing)
// until a client sends KILL or hangs up.
void serve_fifo_session(const std::filesystem::path& dir, bool fast, bool start_frozen = true,
                        std::optional<std::filesystem::path> snapshot_dir = std::nullopt);

// JSON-lines environment service. One request object per input line, one
// response object per output line. Commands: make, reset, step, render,
// save, resume, close. Returns once "close" is handled or input ends.
void serve_env_lines(std::istream& in, std::ostream& out, const env::EnvOptions& defaults);

}  // namespace vcle::harness
