#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sstack/rng.hpp"

namespace sstack {

using ClassLabel = std::string;

// BW, SW, FW, NN, AB. The label set is open; these are the defaults.
const std::vector<ClassLabel>& default_labels();
inline const ClassLabel kAmbientLabel = "AB";

struct Annotation {
  std::string recording_id;
  double t_start = 0.0;  // s
  double t_end = 0.0;    // s
  double f_lo = 0.0;     // Hz
  double f_hi = 0.0;     // Hz
  ClassLabel label;

  // Throws Validation when 0 <= t_start < t_end or f_lo < f_hi is broken.
  void validate() const;
  double duration() const { return t_end - t_start; }

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Interval {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct LabeledSample {
  std::string recording_id;
  double sample_start = 0.0;  // s
  double sample_len = 10.0;   // s
  ClassLabel label;
  std::optional<Annotation> source_annotation;
  std::uint64_t rng_seed_used = 0;
  // Output artifact for this sample, relative to the manifest directory.
  std::string tensor_path;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct SplitRatios {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;

  void validate() const;
  friend bool operator==(const SplitRatios&, const SplitRatios&) = default;
};

struct DatasetSplit {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> val;
  std::vector<LabeledSample> test;
  SplitRatios ratios;
  bool stratified = true;

  std::size_t size() const { return train.size() + val.size() + test.size(); }
  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

// excerpt_len-long interval centred on the annotation midpoint, shifted to
// stay inside [0, recording_len].
Interval extract_excerpt(double recording_len, const Annotation& anno, double excerpt_len = 30.0);

// Feasible sample starts for an annotation inside an excerpt: every window
// that contains the annotation, or, when the annotation is longer than the
// window, every window lying inside the annotation.
Interval feasible_starts(const Interval& excerpt, const Annotation& anno, double sample_len);

LabeledSample sample_containing(const Interval& excerpt, const Annotation& anno, double sample_len,
                                Rng& rng);

LabeledSample sample_ambient(const std::string& recording_id, double recording_len,
                             double sample_len, Rng& rng);

// Largest-remainder counts for n items; ties go to the later partition.
std::array<std::size_t, 3> partition_counts(std::size_t n, const SplitRatios& ratios);

// Stratified (per label, labels in first-seen order) or plain shuffle-and-cut.
DatasetSplit split_dataset(std::vector<LabeledSample> samples, const SplitRatios& ratios, Rng& rng,
                           bool stratified = true);

// Where a sample comes from: an annotation on a recording, or an ambient file.
struct SampleSource {
  std::string recording_id;
  double recording_len = 0.0;
  std::optional<Annotation> annotation;
  std::uint64_t index = 0;  // annotation ordinal within its recording, or ambient draw number
};

// Draws the sample for one source. The per-item seed is
// derive_seed(master_seed, recording_id, salt(index, epoch)), so any subset of
// sources can be processed in any order with identical results.
LabeledSample draw_sample(const SampleSource& source, std::uint64_t master_seed, double sample_len,
                          double excerpt_len, std::uint64_t epoch = 0);

// Resample-each-epoch mode: a fresh, reproducible sample per source per epoch.
class EpochSampler {
 public:
  EpochSampler(std::vector<SampleSource> sources, std::uint64_t master_seed, double sample_len = 10.0,
               double excerpt_len = 30.0);

  std::size_t size() const { return sources_.size(); }
  std::vector<LabeledSample> epoch(std::uint64_t e) const;

 private:
  std::vector<SampleSource> sources_;
  std::uint64_t master_seed_;
  double sample_len_;
  double excerpt_len_;
};

}  // namespace sstack
