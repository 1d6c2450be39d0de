// sstack: batch driver for stacked multi-resolution spectrogram datasets.
//
//   sstack synth   --out corpus/ [--seed N] [--count BW=200 ...]
//   sstack process --corpus corpus/ --out data/ [--representation stacked|linear:<nfft>|mel] [--workers N]
//   sstack split   --manifest data/manifest.csv [--out data/split.csv] [--ratios 0.7,0.15,0.15]
//   sstack eval    --manifest data/split.csv --out report/ [--partition test]
//   sstack inspect --tensor data/tensors/x.sst --channel 0 --out x.ppm
//   sstack bench   [--seconds 3600] [--workers 4]
//
// Exit codes: 0 success, 1 partial or runtime failure, 2 invalid configuration.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sstack/error.hpp"
#include "sstack/io.hpp"
#include "sstack/parallel.hpp"
#include "sstack/pipeline.hpp"
#include "sstack/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace sstack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  PipelineConfig pipeline;
  SynthCorpusConfig corpus = SynthCorpusConfig::defaults();
};

// Config file first, then command-line overrides: flags win.
void resolve(Options& o) {
  std::map<std::string, std::string> kv;
  if (!o.config_path.empty()) kv = load_key_values(o.config_path);
  for (const auto& [k, v] : o.overrides) kv[k] = v;
  apply_config(kv, o.pipeline, o.corpus);
  o.pipeline.validate();
}

void print_counts(const std::map<ClassLabel, std::size_t>& counts) {
  for (const auto& [label, n] : counts) std::printf("  %-4s %zu\n", label.c_str(), n);
}

int cmd_synth(Options& o, const fs::path& out) {
  resolve(o);
  const CorpusSummary s = build_synthetic_corpus(o.corpus, out, o.pipeline.workers);
  std::printf("wrote %zu recordings (%zu annotated events, %zu ambient) to %s\n",
              s.annotations + s.ambient_recordings, s.annotations, s.ambient_recordings, out.c_str());
  print_counts(s.per_class);
  return kExitOk;
}

int cmd_process(Options& o, const fs::path& corpus, const fs::path& out) {
  resolve(o);
  const ProcessSummary s = run_process(corpus, out, o.pipeline);
  std::printf("processed %zu samples as '%s' into %s\n", s.processed,
              o.pipeline.representation.to_string().c_str(), out.c_str());
  print_counts(s.per_class);
  if (!s.failures.empty()) {
    std::fprintf(stderr, "%zu item(s) failed; see %s\n", s.failures.size(), (out / "failures.csv").c_str());
    for (const auto& f : s.failures) std::fprintf(stderr, "  %s: %s\n", f.item.c_str(), f.message.c_str());
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_split(Options& o, const fs::path& manifest, fs::path out) {
  resolve(o);
  if (out.empty()) out = manifest;
  const DatasetSplit split = run_split(manifest, out, o.pipeline);
  std::printf("split %zu samples: train %zu, val %zu, test %zu (%s) -> %s\n", split.size(), split.train.size(),
              split.val.size(), split.test.size(), split.stratified ? "stratified" : "unstratified", out.c_str());
  return kExitOk;
}

int cmd_eval(Options& o, const fs::path& manifest, const fs::path& out, const std::string& partition) {
  resolve(o);
  const EvalResult r = run_eval(manifest, io::parse_partition(partition), o.pipeline.workers);
  write_eval_outputs(r, out);
  std::fputs(format_report_text(r.report, r.confusion).c_str(), stdout);
  std::printf("train-partition accuracy %.4f (fit check)\n", r.train_report.accuracy);
  return kExitOk;
}

int cmd_inspect(const fs::path& tensor_path, std::size_t channel, fs::path out) {
  std::string label;
  const StackedTensor t = io::read_tensor(tensor_path, &label);
  const ChannelStats s = channel_stats(t, channel);
  if (out.empty()) {
    out = tensor_path;
    out.replace_extension(".c" + std::to_string(channel) + ".ppm");
  }
  io::write_ppm(out, t.width, t.height, render_channel(t, channel));
  std::printf("%s: label %s, %zu x %zu x %zu\n", tensor_path.c_str(), label.c_str(), t.channels, t.height,
              t.width);
  std::printf("channel %zu: min %.3f dB, max %.3f dB, mean %.3f dB -> %s (%zux%zu)\n", channel, s.min, s.max,
              s.mean, out.c_str(), t.width, t.height);
  return kExitOk;
}

int cmd_bench(Options& o, double seconds) {
  resolve(o);
  const double sr = 8000.0;
  const std::size_t chunks = static_cast<std::size_t>(seconds / o.pipeline.sample_len);
  Rng rng(o.pipeline.master_seed);
  AudioBuffer clip;
  clip.sample_rate_hz = sr;
  clip.samples = colored_noise(static_cast<std::size_t>(o.pipeline.sample_len * sr), NoiseColor::Pink, rng);
  for (auto& v : clip.samples) v *= 0.01;

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> checksum(chunks);
  parallel_for(chunks, o.pipeline.workers, [&](std::size_t i) {
    checksum[i] = compute_representation(clip, o.pipeline).values.front();
  });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double audio_s = static_cast<double>(chunks) * o.pipeline.sample_len;
  std::printf("backend %s, %zu worker(s), representation %s\n",
              std::string(simd::to_string(simd::active_backend())).c_str(), o.pipeline.workers,
              o.pipeline.representation.to_string().c_str());
  std::printf("%.0f s of audio in %.2f s wall: %.1f audio-hours per wall-minute\n", audio_s, wall,
              wall > 0 ? (audio_s / 3600.0) / (wall / 60.0) : 0.0);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stacked multi-resolution spectrogram dataset tool"};
  app.require_subcommand(1);
  Options o;

  std::string seed, workers, representation, ratios;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--workers", workers, "Worker threads");
  };

  fs::path out, corpus, manifest, tensor;
  std::vector<std::string> counts;
  std::string recording_len, snr_db, partition = "test";
  std::size_t channel = 0;
  double bench_seconds = 3600.0;
  bool unstratified = false;

  auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic corpus");
  common(synth);
  synth->add_option("--out", out, "Corpus directory")->required();
  synth->add_option("--count", counts, "Per-class recording count, LABEL=N (repeatable)");
  synth->add_option("--recording-len", recording_len, "Recording length in seconds");
  synth->add_option("--snr-db", snr_db, "Event SNR in dB");

  auto* process = app.add_subcommand("process", "Turn annotated recordings into tensors and a manifest");
  common(process);
  process->add_option("--corpus", corpus, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  process->add_option("--out", out, "Output directory")->required();
  process->add_option("--representation", representation, "stacked | linear:<nfft> | mel");

  auto* split = app.add_subcommand("split", "Assign train/val/test partitions");
  common(split);
  split->add_option("--manifest", manifest, "Input manifest")->required()->check(CLI::ExistingFile);
  split->add_option("--out", out, "Output manifest (default: overwrite input)");
  split->add_option("--ratios", ratios, "train,val,test");
  split->add_flag("--unstratified", unstratified, "Shuffle across classes instead of per class");

  auto* eval = app.add_subcommand("eval", "Nearest-centroid evaluation of a split manifest");
  common(eval);
  eval->add_option("--manifest", manifest, "Split manifest")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", out, "Report directory")->required();
  eval->add_option("--partition", partition, "Partition to score: test | val | train");

  auto* inspect = app.add_subcommand("inspect", "Render one tensor channel as an image");
  inspect->add_option("--tensor", tensor, "SST1 file")->required()->check(CLI::ExistingFile);
  inspect->add_option("--channel", channel, "Channel index");
  inspect->add_option("--out", out, "Output .ppm");

  auto* bench = app.add_subcommand("bench", "Measure representation throughput");
  common(bench);
  bench->add_option("--seconds", bench_seconds, "Seconds of audio to process");
  bench->add_option("--representation", representation, "stacked | linear:<nfft> | mel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (!workers.empty()) o.overrides["workers"] = workers;
  if (!representation.empty()) o.overrides["representation"] = representation;
  if (!ratios.empty()) o.overrides["ratios"] = ratios;
  if (unstratified) o.overrides["stratified"] = "0";
  if (!recording_len.empty()) o.overrides["recording_len"] = recording_len;
  if (!snr_db.empty()) o.overrides["snr_db"] = snr_db;
  for (const auto& c : counts) {
    const auto eq = c.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --count expects LABEL=N, got '" << c << "'\n";
      return kExitConfig;
    }
    o.overrides["count." + c.substr(0, eq)] = c.substr(eq + 1);
  }
  if (!seed.empty()) o.overrides[synth->parsed() ? "corpus_seed" : "seed"] = seed;

  try {
    if (synth->parsed()) return cmd_synth(o, out);
    if (process->parsed()) return cmd_process(o, corpus, out);
    if (split->parsed()) return cmd_split(o, manifest, out);
    if (eval->parsed()) return cmd_eval(o, manifest, out, partition);
    if (inspect->parsed()) return cmd_inspect(tensor, channel, out);
    if (bench->parsed()) return cmd_bench(o, bench_seconds);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::InvalidParameter ? kExitConfig : kExitPartial;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPartial;
  }
  return kExitOk;
}
