#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sstack/audio.hpp"
#include "sstack/dataset.hpp"
#include "sstack/rng.hpp"

namespace sstack {

enum class EventKind { Downsweep, Moan, TonalNoise, Ambient };
enum class NoiseColor { White, Pink };

struct SynthEventSpec {
  EventKind kind = EventKind::Moan;
  double f_start = 20.0;  // Hz
  double f_end = 20.0;    // Hz
  double duration = 5.0;  // s
  double snr_db = 20.0;
  std::size_t harmonics = 0;

  void validate(double sample_rate_hz) const;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Jittered event template; draws produce concrete SynthEventSpecs.
struct EventTemplate {
  EventKind kind = EventKind::Moan;
  Range f_start;
  Range f_end;
  Range duration;
  std::size_t harmonics = 0;
  double band_margin_hz = 3.0;
};

struct SynthCorpusConfig {
  std::map<ClassLabel, std::vector<EventTemplate>> classes;
  std::map<ClassLabel, std::size_t> counts;
  double recording_len = 60.0;
  double sample_rate_hz = 8000.0;
  NoiseColor ambient_noise_color = NoiseColor::Pink;
  double noise_rms = 0.01;
  double snr_db = 20.0;
  std::uint64_t master_seed = 1;

  // BW moan, FW short downsweep, SW downsweep, NN ship tones, AB pink noise;
  // 10 recordings per class.
  static SynthCorpusConfig defaults();
  void validate() const;
};

// Gaussian noise with unit RMS; pink via summed octave rows.
std::vector<double> colored_noise(std::size_t n, NoiseColor color, Rng& rng);

// Clean event, peak-normalized to 1 (Ambient: unit-RMS pink noise). SNR
// scaling happens when the event is mixed into a recording.
AudioBuffer synth_event(const SynthEventSpec& spec, double sample_rate_hz, Rng& rng);

// Annotation box for an event: time span and [min f - margin, max f + margin]
// of the fundamental.
Annotation event_annotation(const SynthEventSpec& spec, const std::string& recording_id,
                            const ClassLabel& label, double t_start, double band_margin_hz);

// Mean power of `noise` inside [f_lo, f_hi] Hz.
double band_power(std::span<const double> noise, double sample_rate_hz, double f_lo, double f_hi);

struct SynthRecording {
  std::string recording_id;
  ClassLabel label;
  AudioBuffer audio;
  std::optional<Annotation> annotation;  // empty for ambient recordings
  SynthEventSpec event;
};

// Recording `index` of class `label`, fully determined by the config seed.
SynthRecording synth_recording(const SynthCorpusConfig& config, const ClassLabel& label,
                               std::size_t index);

std::string recording_id_for(const ClassLabel& label, std::size_t index);

struct CorpusSummary {
  std::map<ClassLabel, std::size_t> per_class;
  std::size_t annotations = 0;
  std::size_t ambient_recordings = 0;
};

// Writes <out>/recordings/<id>.wav, <out>/annotations.csv and <out>/recordings.csv.
CorpusSummary build_synthetic_corpus(const SynthCorpusConfig& config,
                                     const std::filesystem::path& out_dir, std::size_t workers = 1);

}  // namespace sstack
