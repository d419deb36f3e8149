#include "vcle/console/snapshot.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "vcle/common/error.hpp"

namespace vcle::console {

namespace {

constexpr char kMagic[4] = {'V', 'C', 'L', 'E'};

Bytes deflate_bytes(std::span<const std::uint8_t> in) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  Bytes out(bound);
  if (compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()), Z_BEST_SPEED) != Z_OK)
    throw Error(Errc::IoError, "deflate failed");
  out.resize(bound);
  return out;
}

Bytes inflate_bytes(std::span<const std::uint8_t> in, std::size_t expected) {
  Bytes out(expected);
  uLongf len = static_cast<uLongf>(expected);
  if (uncompress(out.data(), &len, in.data(), static_cast<uLong>(in.size())) != Z_OK || len != expected)
    throw Error(Errc::BadSnapshot, "RAM section does not inflate to 2 MiB");
  return out;
}

}  // namespace

Bytes encode_snapshot(const ConsoleSnapshot& snap) {
  ByteWriter counters;
  counters.u64(snap.frame_counter).u32(snap.speed_percent).u64(snap.delay_until).str(snap.game);

  ByteWriter fb;
  fb.u16(FrameBuffer::width()).u16(FrameBuffer::height()).bytes(snap.framebuffer.bytes());

  ByteWriter controls;
  controls.u16(snap.held.bits()).u32(static_cast<std::uint32_t>(snap.pending_controls.size()));
  for (const auto& ev : snap.pending_controls)
    controls.u8(static_cast<std::uint8_t>(ev.kind)).u8(static_cast<std::uint8_t>(ev.button)).u32(ev.delay_ms);

  ByteWriter audio;
  audio.u8(snap.recording ? 1 : 0).u32(static_cast<std::uint32_t>(snap.recorded.size()));
  for (auto s : snap.recorded) audio.i16(s);

  ByteWriter out;
  out.bytes(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 4)).u16(kSnapshotVersion);
  out.blob(counters.data());
  out.blob(deflate_bytes(snap.ram));
  out.blob(fb.data());
  out.blob(snap.cartridge_state);
  out.blob(controls.data());
  out.blob(audio.data());
  return std::move(out).take();
}

ConsoleSnapshot decode_snapshot(std::span<const std::uint8_t> data) {
  try {
    ByteReader r(data);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw Error(Errc::BadSnapshot, "bad magic");
    if (auto v = r.u16(); v != kSnapshotVersion)
      throw Error(Errc::BadSnapshot, "unsupported version " + std::to_string(v));

    ConsoleSnapshot snap;
    {
      ByteReader c(r.blob());
      snap.frame_counter = c.u64();
      snap.speed_percent = c.u32();
      snap.delay_until = c.u64();
      snap.game = c.str();
    }
    snap.ram = inflate_bytes(r.blob(), kRamSize);
    {
      ByteReader f(r.blob());
      if (f.u16() != FrameBuffer::width() || f.u16() != FrameBuffer::height())
        throw Error(Errc::BadSnapshot, "framebuffer dimensions");
      auto px = f.bytes(snap.framebuffer.bytes().size());
      std::copy(px.begin(), px.end(), snap.framebuffer.bytes().begin());
    }
    {
      auto blob = r.blob();
      snap.cartridge_state.assign(blob.begin(), blob.end());
    }
    {
      ByteReader c(r.blob());
      snap.held = ButtonSet::from_bits(c.u16());
      auto n = c.u32();
      for (std::uint32_t i = 0; i < n; ++i) {
        ControlEvent ev;
        ev.kind = static_cast<ControlEvent::Kind>(c.u8());
        ev.button = static_cast<Button>(c.u8());
        ev.delay_ms = c.u32();
        snap.pending_controls.push_back(ev);
      }
    }
    {
      ByteReader a(r.blob());
      snap.recording = a.u8() != 0;
      auto n = a.u32();
      snap.recorded.resize(n);
      for (auto& s : snap.recorded) s = a.i16();
    }
    return snap;
  } catch (const Error& e) {
    if (e.code() == Errc::BadSnapshot) throw;
    throw Error(Errc::BadSnapshot, e.what());
  }
}

void write_snapshot_file(const std::filesystem::path& path, const ConsoleSnapshot& snap) {
  auto bytes = encode_snapshot(snap);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "cannot write snapshot " + path.string());
}

ConsoleSnapshot read_snapshot_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::UnknownState, "no snapshot file " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace vcle::console
