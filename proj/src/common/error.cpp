#include "vcle/common/error.hpp"

namespace vcle {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::Ok: return "Ok";
    case Errc::NotRunning: return "NotRunning";
    case Errc::AlreadyRunning: return "AlreadyRunning";
    case Errc::InvalidSpeed: return "InvalidSpeed";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::UnknownState: return "UnknownState";
    case Errc::IoError: return "IoError";
    case Errc::NotRecording: return "NotRecording";
    case Errc::AlreadyRecording: return "AlreadyRecording";
    case Errc::UnknownWatch: return "UnknownWatch";
    case Errc::UnknownGame: return "UnknownGame";
    case Errc::UnknownStart: return "UnknownStart";
    case Errc::MalformedFrame: return "MalformedFrame";
    case Errc::UnknownOpcode: return "UnknownOpcode";
    case Errc::FrameTooLarge: return "FrameTooLarge";
    case Errc::BadFrame: return "BadFrame";
    case Errc::BadAudio: return "BadAudio";
    case Errc::StuckMove: return "StuckMove";
    case Errc::EpisodeOver: return "EpisodeOver";
    case Errc::BadAction: return "BadAction";
    case Errc::ScriptError: return "ScriptError";
    case Errc::Unsupported: return "Unsupported";
    case Errc::BadLevel: return "BadLevel";
    case Errc::BadConfig: return "BadConfig";
    case Errc::BadSnapshot: return "BadSnapshot";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Error::Error(Errc code) : std::runtime_error(to_string(code)), code_(code) {}

}  // namespace vcle
