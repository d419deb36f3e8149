#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vcle/common/bytes.hpp"

namespace vcle::harness {

// Bytes seen by the client on each channel, indexed A, B, C, D.
struct Transcript {
  std::string session;
  std::array<Bytes, 4> channels;
};

// Names of the scripted sessions, in recording order.
const std::vector<std::string>& session_names();

// Plays a scripted session against a fresh in-process console. The script
// steps frames through break watches only, so the bytes do not depend on
// timing. Throws ScriptError for an unknown name.
Transcript run_session(const std::string& name);

// {"session": name, "channels": {"A": hex, "B": hex, "C": hex, "D": hex}}
std::string transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const std::string& text);  // throws BadFrame
Transcript load_transcript(const std::filesystem::path& path);
void save_transcript(const std::filesystem::path& path, const Transcript& t);

struct ChannelDiff {
  char channel = 'A';
  std::size_t offset = 0;  // first differing byte, or the shorter length
  std::size_t expected_size = 0;
  std::size_t actual_size = 0;
};

// Empty when both transcripts match byte for byte.
std::vector<ChannelDiff> compare_transcripts(const Transcript& expected, const Transcript& actual);

// Records every session into `dir`/<session>.json and returns the paths.
std::vector<std::filesystem::path> record_sessions(const std::filesystem::path& dir);

struct VerifyResult {
  std::filesystem::path path;
  std::string session;
  std::vector<ChannelDiff> diffs;
  bool ok() const { return diffs.empty(); }
};

// Replays the session named in each transcript (a file, or every *.json in a
// directory) and compares.
std::vector<VerifyResult> verify_transcripts(const std::filesystem::path& path);

}  // namespace vcle::harness
