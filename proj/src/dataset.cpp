#include "sstack/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "sstack/error.hpp"

namespace sstack {

const std::vector<ClassLabel>& default_labels() {
  static const std::vector<ClassLabel> labels{"BW", "SW", "FW", "NN", "AB"};
  return labels;
}

void Annotation::validate() const {
  if (!(t_start >= 0.0) || !(t_start < t_end)) {
    throw Error(Errc::Validation, "annotation on '" + recording_id + "' needs 0 <= t_start < t_end (got " +
                                      std::to_string(t_start) + ", " + std::to_string(t_end) + ")");
  }
  if (!(f_lo < f_hi)) {
    throw Error(Errc::Validation, "annotation on '" + recording_id + "' needs f_lo < f_hi (got " +
                                      std::to_string(f_lo) + ", " + std::to_string(f_hi) + ")");
  }
}

void SplitRatios::validate() const {
  if (train < 0.0 || val < 0.0 || test < 0.0) {
    throw Error(Errc::InvalidParameter, "split ratios must be non-negative");
  }
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    throw Error(Errc::InvalidParameter, "split ratios must sum to 1");
  }
}

Interval extract_excerpt(double recording_len, const Annotation& anno, double excerpt_len) {
  if (!(excerpt_len > 0.0)) throw Error(Errc::InvalidParameter, "excerpt length must be positive");
  if (recording_len < excerpt_len) {
    throw Error(Errc::RecordingTooShort, "recording '" + anno.recording_id + "' is " +
                                             std::to_string(recording_len) + " s, excerpt needs " +
                                             std::to_string(excerpt_len) + " s");
  }
  const double mid = 0.5 * (anno.t_start + anno.t_end);
  double start = mid - 0.5 * excerpt_len;
  start = std::clamp(start, 0.0, recording_len - excerpt_len);
  return {start, start + excerpt_len};
}

Interval feasible_starts(const Interval& excerpt, const Annotation& anno, double sample_len) {
  const double ex_lo = excerpt.start;
  const double ex_hi = excerpt.end - sample_len;
  double lo;
  double hi;
  if (anno.duration() <= sample_len) {
    lo = anno.t_end - sample_len;
    hi = anno.t_start;
  } else {
    lo = anno.t_start;
    hi = anno.t_end - sample_len;
  }
  lo = std::max(lo, ex_lo);
  hi = std::min(hi, ex_hi);
  if (lo > hi) {
    // Annotation sticks out of the excerpt: take the closest feasible start.
    const double s = std::clamp(lo, ex_lo, ex_hi);
    return {s, s};
  }
  return {lo, hi};
}

LabeledSample sample_containing(const Interval& excerpt, const Annotation& anno, double sample_len,
                                Rng& rng) {
  if (!(sample_len > 0.0)) throw Error(Errc::InvalidParameter, "sample length must be positive");
  if (excerpt.length() < sample_len) {
    throw Error(Errc::InvalidParameter, "excerpt shorter than the sample length");
  }
  const Interval starts = feasible_starts(excerpt, anno, sample_len);
  LabeledSample s;
  s.recording_id = anno.recording_id;
  s.sample_start = rng.uniform(starts.start, starts.end);
  s.sample_len = sample_len;
  s.label = anno.label;
  s.source_annotation = anno;
  s.rng_seed_used = rng.seed();
  return s;
}

LabeledSample sample_ambient(const std::string& recording_id, double recording_len,
                             double sample_len, Rng& rng) {
  if (recording_len < sample_len) {
    throw Error(Errc::RecordingTooShort, "recording '" + recording_id + "' is " +
                                             std::to_string(recording_len) + " s, sample needs " +
                                             std::to_string(sample_len) + " s");
  }
  LabeledSample s;
  s.recording_id = recording_id;
  s.sample_start = rng.uniform(0.0, recording_len - sample_len);
  s.sample_len = sample_len;
  s.label = kAmbientLabel;
  s.rng_seed_used = rng.seed();
  return s;
}

std::array<std::size_t, 3> partition_counts(std::size_t n, const SplitRatios& ratios) {
  ratios.validate();
  const std::array<double, 3> r{ratios.train, ratios.val, ratios.test};
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double quota = static_cast<double>(n) * r[i];
    // Snap quotas within rounding noise of an integer so 0.7 * 100 is 70, not 69.
    const double snapped = std::abs(quota - std::round(quota)) < 1e-9 ? std::round(quota) : quota;
    counts[i] = static_cast<std::size_t>(std::floor(snapped));
    rem[i] = snapped - std::floor(snapped);
    assigned += counts[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  // Largest remainder first; equal remainders favour the later partition.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(rem[a] - rem[b]) > 1e-9) return rem[a] > rem[b];
    return a > b;
  });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[order[k % 3]];
  return counts;
}

namespace {

void shuffle(std::vector<LabeledSample>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

void cut_into(std::vector<LabeledSample>& group, const SplitRatios& ratios, DatasetSplit& out) {
  const auto counts = partition_counts(group.size(), ratios);
  auto it = std::make_move_iterator(group.begin());
  out.train.insert(out.train.end(), it, it + counts[0]);
  it += counts[0];
  out.val.insert(out.val.end(), it, it + counts[1]);
  it += counts[1];
  out.test.insert(out.test.end(), it, it + counts[2]);
}

}  // namespace

DatasetSplit split_dataset(std::vector<LabeledSample> samples, const SplitRatios& ratios, Rng& rng,
                           bool stratified) {
  ratios.validate();
  DatasetSplit out;
  out.ratios = ratios;
  out.stratified = stratified;
  if (samples.empty()) return out;
  if (!stratified) {
    shuffle(samples, rng);
    cut_into(samples, ratios, out);
    return out;
  }
  std::vector<ClassLabel> order;
  std::map<ClassLabel, std::vector<LabeledSample>> groups;
  for (auto& s : samples) {
    auto [pos, inserted] = groups.try_emplace(s.label);
    if (inserted) order.push_back(s.label);
    pos->second.push_back(std::move(s));
  }
  for (const auto& label : order) {
    auto& group = groups[label];
    shuffle(group, rng);
    cut_into(group, ratios, out);
  }
  return out;
}

LabeledSample draw_sample(const SampleSource& source, std::uint64_t master_seed, double sample_len,
                          double excerpt_len, std::uint64_t epoch) {
  std::uint64_t seed = derive_seed(master_seed, source.recording_id, source.index);
  if (epoch != 0) seed = derive_seed(seed, "epoch", epoch);
  Rng rng(seed);
  if (!source.annotation) return sample_ambient(source.recording_id, source.recording_len, sample_len, rng);
  const Interval excerpt = extract_excerpt(source.recording_len, *source.annotation, excerpt_len);
  return sample_containing(excerpt, *source.annotation, sample_len, rng);
}

EpochSampler::EpochSampler(std::vector<SampleSource> sources, std::uint64_t master_seed,
                           double sample_len, double excerpt_len)
    : sources_(std::move(sources)),
      master_seed_(master_seed),
      sample_len_(sample_len),
      excerpt_len_(excerpt_len) {}

std::vector<LabeledSample> EpochSampler::epoch(std::uint64_t e) const {
  std::vector<LabeledSample> out;
  out.reserve(sources_.size());
  for (const auto& s : sources_) out.push_back(draw_sample(s, master_seed_, sample_len_, excerpt_len_, e));
  return out;
}

}  // namespace sstack
