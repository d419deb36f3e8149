#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vcle {

// Numeric values double as the status byte of EVENT_DONE frames; 0 is success.
enum class Errc : std::uint8_t {
  Ok = 0,
  NotRunning = 1,
  AlreadyRunning = 2,
  InvalidSpeed = 3,
  OutOfBounds = 4,
  UnknownState = 5,
  IoError = 6,
  NotRecording = 7,
  AlreadyRecording = 8,
  UnknownWatch = 9,
  UnknownGame = 10,
  UnknownStart = 11,
  MalformedFrame = 12,
  UnknownOpcode = 13,
  FrameTooLarge = 14,
  BadFrame = 15,
  BadAudio = 16,
  StuckMove = 17,
  EpisodeOver = 18,
  BadAction = 19,
  ScriptError = 20,
  Unsupported = 21,
  BadLevel = 22,
  BadConfig = 23,
  BadSnapshot = 24,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  explicit Error(Errc code);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vcle
