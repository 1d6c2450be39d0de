#include "sstack/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "sstack/dsp.hpp"
#include "sstack/error.hpp"
#include "sstack/io.hpp"
#include "sstack/parallel.hpp"

namespace sstack {

void SynthEventSpec::validate(double sample_rate_hz) const {
  if (!(duration > 0.0)) throw Error(Errc::InvalidParameter, "event duration must be positive");
  if (kind == EventKind::Ambient) return;
  const double nyquist = sample_rate_hz / 2.0;
  for (double f : {f_start, f_end}) {
    if (!(f > 0.0) || !(f < nyquist)) {
      throw Error(Errc::InvalidParameter, "event frequency " + std::to_string(f) +
                                              " Hz outside (0, " + std::to_string(nyquist) + ")");
    }
  }
}

SynthCorpusConfig SynthCorpusConfig::defaults() {
  SynthCorpusConfig c;
  c.classes["BW"] = {{EventKind::Moan, {19.0, 21.0}, {18.0, 19.5}, {5.0, 10.0}, 1, 3.0}};
  c.classes["FW"] = {{EventKind::Downsweep, {24.0, 28.0}, {16.0, 19.0}, {0.8, 1.2}, 0, 3.0}};
  c.classes["SW"] = {{EventKind::Downsweep, {76.0, 84.0}, {30.0, 36.0}, {1.2, 1.6}, 1, 5.0}};
  c.classes["NN"] = {{EventKind::TonalNoise, {55.0, 75.0}, {140.0, 200.0}, {6.0, 12.0}, 2, 5.0}};
  c.classes["AB"] = {};
  for (const auto& label : default_labels()) c.counts[label] = 10;
  return c;
}

void SynthCorpusConfig::validate() const {
  if (recording_len < 30.0) throw Error(Errc::InvalidParameter, "recording_len must be at least 30 s");
  if (!(sample_rate_hz > 0.0)) throw Error(Errc::InvalidParameter, "sample rate must be positive");
  if (!(noise_rms > 0.0)) throw Error(Errc::InvalidParameter, "noise_rms must be positive");
  for (const auto& [label, n] : counts) {
    if (n == 0) continue;
    auto it = classes.find(label);
    if (it == classes.end()) {
      throw Error(Errc::InvalidParameter, "no event templates configured for class '" + label + "'");
    }
    for (const auto& t : it->second) {
      if (t.duration.hi > recording_len) {
        throw Error(Errc::InvalidParameter, "event template for '" + label + "' outlasts the recording");
      }
    }
  }
}

std::vector<double> colored_noise(std::size_t n, NoiseColor color, Rng& rng) {
  std::vector<double> out(n);
  if (n == 0) return out;
  if (color == NoiseColor::White) {
    for (auto& v : out) v = rng.normal();
  } else {
    // Voss-McCartney: row r is redrawn every 2^r samples; rows plus a white
    // term sum to an approximately 1/f spectrum.
    constexpr std::size_t kRows = 16;
    std::array<double, kRows> rows{};
    double running = 0.0;
    for (auto& r : rows) {
      r = rng.normal();
      running += r;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t counter = i + 1;
      const auto r = static_cast<std::size_t>(std::countr_zero(counter));
      if (r < kRows) {
        running -= rows[r];
        rows[r] = rng.normal();
        running += rows[r];
      }
      out[i] = running + rng.normal();
    }
  }
  double energy = 0.0;
  for (double v : out) energy += v * v;
  const double rms = std::sqrt(energy / static_cast<double>(n));
  if (rms > 0.0) {
    for (auto& v : out) v /= rms;
  }
  return out;
}

namespace {

// Linear chirp with an optional harmonic series at halving amplitudes.
void add_sweep(std::vector<double>& out, double f0, double f1, double sr, std::size_t harmonics,
               double phase0) {
  const double duration = static_cast<double>(out.size()) / sr;
  const double nyquist = sr / 2.0;
  const double rate = (f1 - f0) / duration;
  for (std::size_t h = 1; h <= harmonics + 1; ++h) {
    if (std::max(f0, f1) * static_cast<double>(h) >= nyquist) break;
    const double amp = std::pow(0.5, static_cast<double>(h - 1));
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double t = static_cast<double>(i) / sr;
      const double phase = 2.0 * std::numbers::pi * (f0 * t + 0.5 * rate * t * t);
      out[i] += amp * std::sin(static_cast<double>(h) * (phase + phase0));
    }
  }
}

double mean_power(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return x.empty() ? 0.0 : e / static_cast<double>(x.size());
}

}  // namespace

AudioBuffer synth_event(const SynthEventSpec& spec, double sample_rate_hz, Rng& rng) {
  if (!(sample_rate_hz > 0.0)) throw Error(Errc::InvalidParameter, "sample rate must be positive");
  spec.validate(sample_rate_hz);
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * sample_rate_hz));
  if (n == 0) throw Error(Errc::InvalidParameter, "event shorter than one sample");
  AudioBuffer out;
  out.sample_rate_hz = sample_rate_hz;
  if (spec.kind == EventKind::Ambient) {
    out.samples = colored_noise(n, NoiseColor::Pink, rng);
    return out;
  }
  out.samples.assign(n, 0.0);
  const double phase0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  switch (spec.kind) {
    case EventKind::Downsweep:
    case EventKind::Moan: {
      add_sweep(out.samples, spec.f_start, spec.f_end, sample_rate_hz, spec.harmonics, phase0);
      const auto env = make_window(WindowKind::Hann, n);
      for (std::size_t i = 0; i < n; ++i) out.samples[i] *= env[i];
      break;
    }
    case EventKind::TonalNoise: {
      add_sweep(out.samples, spec.f_start, spec.f_start, sample_rate_hz, spec.harmonics, phase0);
      if (spec.f_end != spec.f_start) {
        const double phase1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
        add_sweep(out.samples, spec.f_end, spec.f_end, sample_rate_hz, spec.harmonics, phase1);
      }
      // Stationary body with 100 ms raised-cosine fades.
      const std::size_t fade = std::min(n / 2, static_cast<std::size_t>(0.1 * sample_rate_hz));
      for (std::size_t i = 0; i < fade; ++i) {
        const double g = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) /
                                               static_cast<double>(fade)));
        out.samples[i] *= g;
        out.samples[n - 1 - i] *= g;
      }
      break;
    }
    case EventKind::Ambient:
      break;
  }
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (auto& v : out.samples) v /= peak;
  }
  return out;
}

Annotation event_annotation(const SynthEventSpec& spec, const std::string& recording_id,
                            const ClassLabel& label, double t_start, double band_margin_hz) {
  Annotation a;
  a.recording_id = recording_id;
  a.label = label;
  a.t_start = t_start;
  a.t_end = t_start + spec.duration;
  double lo = std::min(spec.f_start, spec.f_end);
  double hi = std::max(spec.f_start, spec.f_end);
  if (spec.kind == EventKind::TonalNoise) hi *= static_cast<double>(spec.harmonics + 1);
  a.f_lo = std::max(0.0, lo - band_margin_hz);
  a.f_hi = hi + band_margin_hz;
  return a;
}

double band_power(std::span<const double> noise, double sample_rate_hz, double f_lo, double f_hi) {
  if (noise.empty()) return 0.0;
  std::size_t m = 1;
  while (m < noise.size()) m <<= 1;
  std::vector<Complex> buf(m);
  for (std::size_t i = 0; i < noise.size(); ++i) buf[i] = Complex(noise[i], 0.0);
  FftPlan(m).forward(buf);
  double sum = 0.0;
  for (std::size_t k = 0; k <= m / 2; ++k) {
    const double f = static_cast<double>(k) * sample_rate_hz / static_cast<double>(m);
    if (f < f_lo || f > f_hi) continue;
    const double scale = (k == 0 || k == m / 2) ? 1.0 : 2.0;
    sum += scale * std::norm(buf[k]);
  }
  return sum / (static_cast<double>(m) * static_cast<double>(noise.size()));
}

std::string recording_id_for(const ClassLabel& label, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%05zu", index);
  return label + buf;
}

SynthRecording synth_recording(const SynthCorpusConfig& config, const ClassLabel& label,
                               std::size_t index) {
  SynthRecording rec;
  rec.recording_id = recording_id_for(label, index);
  rec.label = label;
  Rng rng(derive_seed(config.master_seed, rec.recording_id, 0));

  const auto n = static_cast<std::size_t>(std::llround(config.recording_len * config.sample_rate_hz));
  rec.audio.sample_rate_hz = config.sample_rate_hz;
  rec.audio.samples = colored_noise(n, config.ambient_noise_color, rng);
  for (auto& v : rec.audio.samples) v *= config.noise_rms;

  const auto it = config.classes.find(label);
  if (it == config.classes.end() || it->second.empty()) {
    rec.event.kind = EventKind::Ambient;
    rec.event.duration = config.recording_len;
    rec.event.snr_db = 0.0;
    return rec;
  }

  const EventTemplate& tpl = it->second[rng.below(it->second.size())];
  SynthEventSpec& spec = rec.event;
  spec.kind = tpl.kind;
  spec.f_start = rng.uniform(tpl.f_start.lo, tpl.f_start.hi);
  spec.f_end = rng.uniform(tpl.f_end.lo, tpl.f_end.hi);
  spec.duration = rng.uniform(tpl.duration.lo, tpl.duration.hi);
  spec.harmonics = tpl.harmonics;
  spec.snr_db = config.snr_db;

  const AudioBuffer event = synth_event(spec, config.sample_rate_hz, rng);
  const double t0 = rng.uniform(0.0, config.recording_len - spec.duration);
  const auto first = static_cast<std::size_t>(std::llround(t0 * config.sample_rate_hz));
  const std::size_t len = std::min(event.size(), n - first);
  const double start_s = static_cast<double>(first) / config.sample_rate_hz;
  spec.duration = static_cast<double>(len) / config.sample_rate_hz;
  rec.annotation = event_annotation(spec, rec.recording_id, label, start_s, tpl.band_margin_hz);

  // SNR is event power over the event's span against noise power inside the
  // annotated band over the same span.
  const std::span<const double> under(rec.audio.samples.data() + first, len);
  const double noise_band = band_power(under, config.sample_rate_hz, rec.annotation->f_lo,
                                       rec.annotation->f_hi);
  const double event_power = mean_power(std::span<const double>(event.samples.data(), len));
  const double gain =
      event_power > 0.0 ? std::sqrt(noise_band * std::pow(10.0, spec.snr_db / 10.0) / event_power) : 0.0;
  for (std::size_t i = 0; i < len; ++i) rec.audio.samples[first + i] += gain * event.samples[i];

  double peak = 0.0;
  for (double v : rec.audio.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.99) {
    const double s = 0.99 / peak;
    for (auto& v : rec.audio.samples) v *= s;
  }
  return rec;
}

CorpusSummary build_synthetic_corpus(const SynthCorpusConfig& config,
                                     const std::filesystem::path& out_dir, std::size_t workers) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "recordings", ec);
  if (ec) {
    throw Error(Errc::Io, "cannot create " + (out_dir / "recordings").string() + ": " + ec.message());
  }

  struct Job {
    ClassLabel label;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (const auto& [label, count] : config.counts) {
    for (std::size_t i = 0; i < count; ++i) jobs.push_back({label, i});
  }

  std::vector<io::RecordingEntry> entries(jobs.size());
  std::vector<std::optional<Annotation>> annos(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t j) {
    const SynthRecording rec = synth_recording(config, jobs[j].label, jobs[j].index);
    const std::string file = "recordings/" + rec.recording_id + ".wav";
    io::write_wav(out_dir / file, rec.audio, io::WavEncoding::Float32);
    entries[j] = {rec.recording_id, file, rec.audio.duration_s(), !rec.annotation.has_value()};
    annos[j] = rec.annotation;
  });

  CorpusSummary summary;
  std::vector<Annotation> all;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    ++summary.per_class[jobs[j].label];
    if (annos[j]) {
      all.push_back(*annos[j]);
      ++summary.annotations;
    } else {
      ++summary.ambient_recordings;
    }
  }
  io::write_annotations(out_dir / "annotations.csv", all);
  io::write_recordings(out_dir / "recordings.csv", entries);
  return summary;
}

}  // namespace sstack
