#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "bytes.hpp"
#include "sstack/error.hpp"
#include "sstack/io.hpp"

namespace sstack::io {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

AudioBuffer parse_wav(const std::vector<std::uint8_t>& bytes) {
  detail::Reader r(bytes, "wav");
  if (r.remaining() < 12) throw Error(Errc::Parse, "wav: file shorter than the 12-byte RIFF header");
  if (r.str(4) != "RIFF") throw Error(Errc::Parse, "wav: missing RIFF tag at offset 0");
  r.u32();  // RIFF size; trust the chunk walk instead
  if (r.str(4) != "WAVE") throw Error(Errc::Parse, "wav: missing WAVE tag at offset 8");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  while (r.remaining() >= 8) {
    const std::size_t chunk_at = r.offset();
    const std::string id = r.str(4);
    const std::uint32_t size = r.u32();
    if (id == "fmt ") {
      if (size < 16) {
        throw Error(Errc::Parse, "wav: fmt chunk at offset " + std::to_string(chunk_at) + " is only " +
                                     std::to_string(size) + " bytes");
      }
      r.need(size);
      const std::size_t body = r.offset();
      format = r.u16();
      channels = r.u16();
      rate = r.u32();
      r.u32();  // byte rate
      block_align = r.u16();
      bits = r.u16();
      if (format == kFormatExtensible && size >= 40) {
        r.skip(8);  // cbSize, valid bits, channel mask
        format = r.u16();
      }
      r.skip(size - (r.offset() - body));
      if (size & 1u) r.skip(std::min<std::size_t>(1, r.remaining()));
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) {
        throw Error(Errc::Parse, "wav: data chunk at offset " + std::to_string(chunk_at) + " precedes fmt");
      }
      if (r.remaining() < size) {
        throw Error(Errc::Parse, "wav: data chunk at offset " + std::to_string(chunk_at) + " declares " +
                                     std::to_string(size) + " bytes but only " +
                                     std::to_string(r.remaining()) + " are present (short by " +
                                     std::to_string(size - r.remaining()) + ")");
      }
      const bool pcm16 = format == kFormatPcm && bits == 16;
      const bool f32 = format == kFormatFloat && bits == 32;
      if (!pcm16 && !f32) {
        throw Error(Errc::UnsupportedFormat, "wav: format tag " + std::to_string(format) + " with " +
                                                 std::to_string(bits) +
                                                 " bits per sample (supported: PCM16, float32)");
      }
      if (channels == 0 || rate == 0) {
        throw Error(Errc::Parse, "wav: fmt declares zero channels or zero sample rate");
      }
      const std::size_t width = bits / 8;
      if (block_align != channels * width) {
        throw Error(Errc::Parse, "wav: block align " + std::to_string(block_align) +
                                     " inconsistent with " + std::to_string(channels) + " channels");
      }
      if (size % block_align != 0) {
        throw Error(Errc::Parse, "wav: data chunk size " + std::to_string(size) +
                                     " is not a whole number of frames");
      }
      if (channels > 1) {
        std::cerr << "warning: wav has " << channels << " channels; using channel 0\n";
      }
      const std::size_t frames = size / block_align;
      AudioBuffer out;
      out.sample_rate_hz = static_cast<double>(rate);
      out.samples.resize(frames);
      for (std::size_t i = 0; i < frames; ++i) {
        if (pcm16) {
          const auto v = static_cast<std::int16_t>(r.u16());
          out.samples[i] = static_cast<double>(v) / 32768.0;
        } else {
          out.samples[i] = static_cast<double>(r.f32());
        }
        r.skip(block_align - width);
      }
      return out;
    } else {
      const std::size_t padded = size + (size & 1u);
      if (r.remaining() < padded && r.remaining() < size) {
        throw Error(Errc::Parse, "wav: chunk '" + id + "' at offset " + std::to_string(chunk_at) +
                                     " runs past end of file");
      }
      r.skip(std::min(padded, r.remaining()));
    }
  }
  throw Error(Errc::Parse, "wav: no data chunk found before offset " + std::to_string(r.offset()));
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  try {
    return parse_wav(read_bytes(path));
  } catch (const Error& e) {
    if (e.code() == Errc::Io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio, WavEncoding encoding) {
  audio.validate();
  const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
  const std::uint16_t format = encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat;
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate_hz));
  const std::uint32_t data_size = static_cast<std::uint32_t>(audio.size() * (bits / 8));
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  detail::put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  detail::put_u32(out, 16);
  detail::put_u16(out, format);
  detail::put_u16(out, 1);
  detail::put_u32(out, rate);
  detail::put_u32(out, rate * (bits / 8));
  detail::put_u16(out, static_cast<std::uint16_t>(bits / 8));
  detail::put_u16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  detail::put_u32(out, data_size);
  for (double v : audio.samples) {
    if (encoding == WavEncoding::Pcm16) {
      const double scaled = std::round(std::clamp(v, -1.0, 1.0) * 32768.0);
      const auto s = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      detail::put_u16(out, static_cast<std::uint16_t>(s));
    } else {
      detail::put_f32(out, static_cast<float>(v));
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio, WavEncoding encoding) {
  write_bytes(path, encode_wav(audio, encoding));
}

}  // namespace sstack::io
