#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sstack/dataset.hpp"
#include "sstack/io.hpp"
#include "sstack/mel.hpp"
#include "sstack/metrics.hpp"
#include "sstack/stacker.hpp"
#include "sstack/synth.hpp"

namespace sstack {

// Which classifier input a sample becomes: the k-channel stack, a single
// linear-frequency spectrogram on its native truncated grid, or a mel
// spectrogram.
struct Representation {
  enum class Kind { Stacked, SingleLinear, Mel };
  Kind kind = Kind::Stacked;
  std::size_t window_len = 0;  // SingleLinear only

  // "stacked" | "linear:<nfft>" | "mel"
  static Representation parse(const std::string& text);
  std::string to_string() const;
};

struct PipelineConfig {
  Representation representation;
  StackParams stack = StackParams::defaults();
  double hop_fraction = 0.25;  // hop = window * hop_fraction
  MelParams mel;
  std::size_t mel_window = 2048;
  double sample_len = 10.0;
  double excerpt_len = 30.0;
  std::size_t ambient_per_file = 1;
  SplitRatios ratios;
  bool stratified = true;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
  bool normalize = false;  // optional min-max scaling of each channel before export

  void validate() const;

  StftParams single_params() const;
  StftParams mel_stft_params() const;
};

// Flat "key = value" text; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> load_key_values(const std::filesystem::path& path);

// Applies pipeline keys to `pipeline` and corpus keys to `corpus`. Unknown
// keys and malformed values throw InvalidParameter.
//   pipeline: representation seed workers windows hop_fraction hop_divisor
//             band_lo band_hi grid n_mels mel_window sample_len excerpt_len ambient_per_file
//             ratios stratified normalize
//   corpus:   corpus_seed recording_len sample_rate snr_db noise_rms
//             noise_color count.<LABEL>
void apply_config(const std::map<std::string, std::string>& kv, PipelineConfig& pipeline,
                  SynthCorpusConfig& corpus);

// Applies the configured representation to one sample's audio.
StackedTensor compute_representation(const AudioBuffer& sample, const PipelineConfig& config);

// Min-max scale each channel into [0, 1]; constant channels become 0.
void normalize_channels(StackedTensor& tensor);

struct ProcessFailure {
  std::string item;
  std::string message;
};

struct ProcessSummary {
  std::size_t processed = 0;
  std::vector<ProcessFailure> failures;
  std::map<ClassLabel, std::size_t> per_class;
};

// corpus_dir holds recordings.csv + annotations.csv. Writes
// <out>/tensors/*.sst, <out>/manifest.csv and <out>/failures.csv.
ProcessSummary run_process(const std::filesystem::path& corpus_dir,
                           const std::filesystem::path& out_dir, const PipelineConfig& config);

// Reads a manifest, assigns partitions and writes it to `out_manifest`.
DatasetSplit run_split(const std::filesystem::path& manifest_path,
                       const std::filesystem::path& out_manifest, const PipelineConfig& config);

struct EvalResult {
  ConfusionMatrix confusion;
  MetricsReport report;
  MetricsReport train_report;  // fit quality on the training partition
};

// Fits nearest-centroid on train, scores `eval_partition`. Missing tensors
// are collected and reported together.
EvalResult run_eval(const std::filesystem::path& manifest_path, io::Partition eval_partition,
                    std::size_t workers);

void write_eval_outputs(const EvalResult& result, const std::filesystem::path& out_dir);

// Grayscale rendering of one tensor channel, min-max scaled, high
// frequencies on top. Constant channels render as all zeros.
std::vector<std::uint8_t> render_channel(const StackedTensor& tensor, std::size_t channel);

struct ChannelStats {
  double min = 0.0, max = 0.0, mean = 0.0;
};
ChannelStats channel_stats(const StackedTensor& tensor, std::size_t channel);

}  // namespace sstack
