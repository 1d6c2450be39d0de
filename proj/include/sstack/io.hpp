#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sstack/audio.hpp"
#include "sstack/dataset.hpp"
#include "sstack/stacker.hpp"

namespace sstack::io {

// ---- WAV ----

enum class WavEncoding { Pcm16, Float32 };

// Mono PCM16 or IEEE float32 WAV. Multi-channel files yield channel 0 and a
// warning on stderr. Malformed files throw Parse with a byte offset.
AudioBuffer read_wav(const std::filesystem::path& path);
AudioBuffer parse_wav(const std::vector<std::uint8_t>& bytes);
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               WavEncoding encoding = WavEncoding::Float32);
std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio, WavEncoding encoding);

// ---- annotation CSV: recording_id,t_start,t_end,f_lo,f_hi,label ----

std::vector<Annotation> read_annotations(const std::filesystem::path& path);
std::vector<Annotation> parse_annotations(const std::string& text);
void write_annotations(const std::filesystem::path& path, const std::vector<Annotation>& annos);

// ---- recording index CSV: recording_id,file,duration_s,kind ----

struct RecordingEntry {
  std::string recording_id;
  std::string file;  // relative to the index directory
  double duration_s = 0.0;
  bool ambient = false;

  friend bool operator==(const RecordingEntry&, const RecordingEntry&) = default;
};

std::vector<RecordingEntry> read_recordings(const std::filesystem::path& path);
void write_recordings(const std::filesystem::path& path, const std::vector<RecordingEntry>& recs);

// ---- SST1 tensor container ----
//
//   offset  size  field
//   0       4     magic "SST1"
//   4       4     k (u32 LE)
//   8       4     H (u32 LE)
//   12      4     W (u32 LE)
//   16      1     dtype (0 = float32 LE)
//   17      4     label byte length L (u32 LE)
//   21      L     label, UTF-8
//   21+L    32    f_lo, f_hi, t_lo, t_hi (f64 LE)
//   53+L    4kHW  values, channel-major, then frequency row, then time column
//
// Axes are stored as ranges; the reader rebuilds them with linspace.

inline constexpr std::size_t kTensorFixedHeader = 53;

std::vector<std::uint8_t> encode_tensor(const StackedTensor& tensor, const std::string& label);
StackedTensor decode_tensor(const std::vector<std::uint8_t>& bytes, std::string* label = nullptr);
void write_tensor(const std::filesystem::path& path, const StackedTensor& tensor,
                  const std::string& label);
StackedTensor read_tensor(const std::filesystem::path& path, std::string* label = nullptr);

// ---- manifest CSV ----

enum class Partition { Unassigned, Train, Val, Test };
std::string_view to_string(Partition p);
Partition parse_partition(std::string_view s);

struct ManifestRecord {
  LabeledSample sample;
  Partition partition = Partition::Unassigned;
  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

struct Manifest {
  std::vector<ManifestRecord> records;
  SplitRatios ratios;
  bool stratified = true;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

Manifest manifest_from_split(const DatasetSplit& split);
Manifest manifest_unassigned(const std::vector<LabeledSample>& samples);
DatasetSplit split_from_manifest(const Manifest& manifest);

std::string format_manifest(const Manifest& manifest);
// Validates the schema and rejects duplicate (recording_id, sample_start, partition).
Manifest parse_manifest(const std::string& text);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const DatasetSplit& split);

// ---- misc ----

std::string read_text(const std::filesystem::path& path);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

// Binary P6 pixmap from 8-bit gray levels (replicated to RGB), rows top to bottom.
void write_ppm(const std::filesystem::path& path, std::size_t width, std::size_t height,
               const std::vector<std::uint8_t>& pixels);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace sstack::io
