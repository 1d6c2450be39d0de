#include "sstack/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include "sstack/error.hpp"
#include "sstack/parallel.hpp"

namespace sstack {

namespace fs = std::filesystem;

// ---- representation / config ----

Representation Representation::parse(const std::string& text) {
  Representation r;
  if (text == "stacked") {
    r.kind = Kind::Stacked;
  } else if (text == "mel") {
    r.kind = Kind::Mel;
  } else if (text.rfind("linear:", 0) == 0) {
    r.kind = Kind::SingleLinear;
    const std::string n = text.substr(7);
    const auto res = std::from_chars(n.data(), n.data() + n.size(), r.window_len);
    if (res.ec != std::errc() || res.ptr != n.data() + n.size() || !is_power_of_two(r.window_len)) {
      throw Error(Errc::InvalidParameter, "linear representation needs a power-of-two window, got '" + n + "'");
    }
  } else {
    throw Error(Errc::InvalidParameter, "representation must be stacked, linear:<nfft> or mel, got '" + text + "'");
  }
  return r;
}

std::string Representation::to_string() const {
  switch (kind) {
    case Kind::Stacked: return "stacked";
    case Kind::SingleLinear: return "linear:" + std::to_string(window_len);
    case Kind::Mel: return "mel";
  }
  return "stacked";
}

void PipelineConfig::validate() const {
  stack.validate();
  mel.validate();
  ratios.validate();
  if (!(sample_len > 0.0) || excerpt_len < sample_len) {
    throw Error(Errc::InvalidParameter, "need 0 < sample_len <= excerpt_len");
  }
  if (representation.kind == Representation::Kind::SingleLinear) single_params().validate();
  mel_stft_params().validate();
}

StftParams PipelineConfig::single_params() const {
  return StftParams::with_hop_fraction(representation.window_len, hop_fraction);
}

StftParams PipelineConfig::mel_stft_params() const { return StftParams::with_hop_fraction(mel_window, hop_fraction); }

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error(Errc::InvalidParameter, key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  try {
    return io::parse_double(v);
  } catch (const Error&) {
    throw Error(Errc::InvalidParameter, key + ": expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw Error(Errc::InvalidParameter, key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = v.find(',', start);
    out.push_back(trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidParameter, "config line " + std::to_string(number) + ": expected key = value");
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> load_key_values(const fs::path& path) {
  return parse_key_values(io::read_text(path));
}

void apply_config(const std::map<std::string, std::string>& kv, PipelineConfig& p, SynthCorpusConfig& c) {
  std::vector<std::size_t> windows;
  for (const auto& [key, v] : kv) {
    if (key == "representation") {
      p.representation = Representation::parse(v);
    } else if (key == "seed") {
      p.master_seed = to_size(key, v);
    } else if (key == "workers") {
      p.workers = std::max<std::size_t>(1, to_size(key, v));
    } else if (key == "windows") {
      windows.clear();
      for (const auto& w : split_list(v)) windows.push_back(to_size(key, w));
    } else if (key == "hop_fraction") {
      p.hop_fraction = to_real(key, v);
    } else if (key == "hop_divisor") {
      const std::size_t d = to_size(key, v);
      if (d == 0) throw Error(Errc::InvalidParameter, "hop_divisor must be positive");
      p.hop_fraction = 1.0 / static_cast<double>(d);
    } else if (key == "band_lo") {
      p.stack.f_lo = p.mel.f_lo = to_real(key, v);
    } else if (key == "band_hi") {
      p.stack.f_hi = p.mel.f_hi = to_real(key, v);
    } else if (key == "grid") {
      if (v == "min") {
        p.stack.grid = GridSpec::from_min_resolution();
      } else {
        const auto x = v.find('x');
        if (x == std::string::npos) throw Error(Errc::InvalidParameter, "grid: expected HxW or 'min'");
        p.stack.grid = GridSpec::explicit_grid(to_size(key, v.substr(0, x)), to_size(key, v.substr(x + 1)));
      }
    } else if (key == "n_mels") {
      p.mel.n_mels = to_size(key, v);
    } else if (key == "mel_window") {
      p.mel_window = to_size(key, v);
    } else if (key == "sample_len") {
      p.sample_len = to_real(key, v);
    } else if (key == "excerpt_len") {
      p.excerpt_len = to_real(key, v);
    } else if (key == "ambient_per_file") {
      p.ambient_per_file = to_size(key, v);
    } else if (key == "ratios") {
      const auto parts = split_list(v);
      if (parts.size() != 3) throw Error(Errc::InvalidParameter, "ratios: expected train,val,test");
      p.ratios = {to_real(key, parts[0]), to_real(key, parts[1]), to_real(key, parts[2])};
    } else if (key == "stratified") {
      p.stratified = to_bool(key, v);
    } else if (key == "normalize") {
      p.normalize = to_bool(key, v);
    } else if (key == "corpus_seed") {
      c.master_seed = to_size(key, v);
    } else if (key == "recording_len") {
      c.recording_len = to_real(key, v);
    } else if (key == "sample_rate") {
      c.sample_rate_hz = to_real(key, v);
    } else if (key == "snr_db") {
      c.snr_db = to_real(key, v);
    } else if (key == "noise_rms") {
      c.noise_rms = to_real(key, v);
    } else if (key == "noise_color") {
      if (v == "pink") {
        c.ambient_noise_color = NoiseColor::Pink;
      } else if (v == "white") {
        c.ambient_noise_color = NoiseColor::White;
      } else {
        throw Error(Errc::InvalidParameter, "noise_color: expected pink or white");
      }
    } else if (key.rfind("count.", 0) == 0) {
      c.counts[key.substr(6)] = to_size(key, v);
    } else {
      throw Error(Errc::InvalidParameter, "unknown config key '" + key + "'");
    }
  }
  if (kv.count("windows") || kv.count("hop_divisor") || kv.count("hop_fraction")) {
    if (windows.empty()) {
      for (const auto& ch : p.stack.channels) windows.push_back(ch.window_len);
    }
    p.stack.channels.clear();
    for (std::size_t w : windows) p.stack.channels.push_back(StftParams::with_hop_fraction(w, p.hop_fraction));
  }
}

void normalize_channels(StackedTensor& tensor) {
  const std::size_t plane = tensor.height * tensor.width;
  for (std::size_t c = 0; c < tensor.channels; ++c) {
    auto first = tensor.values.begin() + static_cast<std::ptrdiff_t>(c * plane);
    auto last = first + static_cast<std::ptrdiff_t>(plane);
    const auto [mn, mx] = std::minmax_element(first, last);
    const double lo = *mn;
    const double range = *mx - lo;
    for (auto it = first; it != last; ++it) *it = range > 0.0 ? (*it - lo) / range : 0.0;
  }
}

StackedTensor compute_representation(const AudioBuffer& sample, const PipelineConfig& config) {
  StackedTensor t;
  switch (config.representation.kind) {
    case Representation::Kind::Stacked:
      t = stack_representation(sample, config.stack);
      break;
    case Representation::Kind::SingleLinear:
      t = single_channel_tensor(linear_spectrogram(sample, config.single_params(), config.stack.f_lo,
                                                   config.stack.f_hi));
      break;
    case Representation::Kind::Mel:
      t = single_channel_tensor(mel_spectrogram(sample, config.mel_stft_params(), config.mel));
      break;
  }
  if (config.normalize) normalize_channels(t);
  return t;
}

// ---- process ----

namespace {

struct WorkItem {
  SampleSource source;
  fs::path wav;
  std::string name;
};

std::string tensor_name(const std::string& recording_id, bool ambient, std::uint64_t index) {
  return recording_id + (ambient ? "__b" : "__a") + std::to_string(index) + ".sst";
}

}  // namespace

ProcessSummary run_process(const fs::path& corpus_dir, const fs::path& out_dir, const PipelineConfig& config) {
  config.validate();
  const auto recordings = io::read_recordings(corpus_dir / "recordings.csv");
  const auto annotations = io::read_annotations(corpus_dir / "annotations.csv");

  std::map<std::string, const io::RecordingEntry*> by_id;
  for (const auto& r : recordings) {
    if (!by_id.emplace(r.recording_id, &r).second) {
      throw Error(Errc::Validation, "recording '" + r.recording_id + "' listed twice");
    }
  }

  ProcessSummary summary;
  std::vector<WorkItem> items;
  std::map<std::string, std::uint64_t> ordinal;
  for (const auto& a : annotations) {
    const std::uint64_t k = ordinal[a.recording_id]++;
    auto it = by_id.find(a.recording_id);
    if (it == by_id.end()) {
      summary.failures.push_back({a.recording_id + "#" + std::to_string(k), "annotation refers to an unknown recording"});
      continue;
    }
    items.push_back({{a.recording_id, it->second->duration_s, a, k}, corpus_dir / it->second->file,
                     tensor_name(a.recording_id, false, k)});
  }
  for (const auto& r : recordings) {
    if (!r.ambient) continue;
    for (std::uint64_t j = 0; j < config.ambient_per_file; ++j) {
      items.push_back({{r.recording_id, r.duration_s, std::nullopt, j}, corpus_dir / r.file,
                       tensor_name(r.recording_id, true, j)});
    }
  }

  fs::create_directories(out_dir / "tensors");
  std::vector<std::optional<LabeledSample>> done(items.size());
  std::vector<std::string> errors(items.size());
  parallel_for(items.size(), config.workers, [&](std::size_t i) {
    const WorkItem& item = items[i];
    try {
      const AudioBuffer audio = io::read_wav(item.wav);
      SampleSource src = item.source;
      src.recording_len = audio.duration_s();
      LabeledSample s = draw_sample(src, config.master_seed, config.sample_len, config.excerpt_len);
      const AudioBuffer clip = audio.slice_seconds(s.sample_start, s.sample_len);
      const StackedTensor t = compute_representation(clip, config);
      s.tensor_path = "tensors/" + item.name;
      io::write_tensor(out_dir / s.tensor_path, t, s.label);
      done[i] = std::move(s);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<LabeledSample> samples;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (done[i]) {
      ++summary.per_class[done[i]->label];
      samples.push_back(std::move(*done[i]));
    } else {
      summary.failures.push_back({items[i].name, errors[i]});
    }
  }
  summary.processed = samples.size();

  io::Manifest manifest = io::manifest_unassigned(samples);
  manifest.ratios = config.ratios;
  manifest.stratified = config.stratified;
  io::write_manifest(out_dir / "manifest.csv", manifest);

  std::ostringstream ledger;
  ledger << "item,message\n";
  for (const auto& f : summary.failures) {
    std::string msg = f.message;
    std::replace_if(msg.begin(), msg.end(), [](char ch) { return ch == ',' || ch == '\n'; }, ';');
    ledger << f.item << ',' << msg << '\n';
  }
  io::write_text(out_dir / "failures.csv", ledger.str());
  return summary;
}

// ---- split ----

DatasetSplit run_split(const fs::path& manifest_path, const fs::path& out_manifest, const PipelineConfig& config) {
  const io::Manifest in = io::read_manifest(manifest_path);
  const fs::path in_dir = fs::absolute(manifest_path).parent_path();
  const fs::path out_dir = fs::absolute(out_manifest).parent_path();
  std::vector<LabeledSample> samples;
  samples.reserve(in.records.size());
  for (const auto& r : in.records) {
    LabeledSample s = r.sample;
    if (!s.tensor_path.empty()) {
      s.tensor_path = (in_dir / s.tensor_path).lexically_normal().lexically_relative(out_dir).generic_string();
    }
    samples.push_back(std::move(s));
  }
  Rng rng(derive_seed(config.master_seed, "split", 0));
  DatasetSplit split = split_dataset(std::move(samples), config.ratios, rng, config.stratified);
  io::write_manifest(out_manifest, split);
  return split;
}

// ---- eval ----

namespace {

std::vector<ClassLabel> class_order(const std::vector<const io::ManifestRecord*>& records) {
  std::set<ClassLabel> seen;
  for (const auto* r : records) seen.insert(r->sample.label);
  std::vector<ClassLabel> order;
  for (const auto& l : default_labels()) {
    if (seen.erase(l)) order.push_back(l);
  }
  order.insert(order.end(), seen.begin(), seen.end());
  return order;
}

std::vector<StackedTensor> load_tensors(const std::vector<const io::ManifestRecord*>& records, const fs::path& dir,
                                        std::size_t workers, std::vector<std::string>& missing) {
  std::vector<StackedTensor> out(records.size());
  std::vector<std::string> errors(records.size());
  parallel_for(records.size(), workers, [&](std::size_t i) {
    const auto& path = records[i]->sample.tensor_path;
    if (path.empty() || !fs::exists(dir / path)) {
      errors[i] = path.empty() ? "<no tensor for " + records[i]->sample.recording_id + ">" : path;
      return;
    }
    out[i] = io::read_tensor(dir / path);
  });
  for (auto& e : errors) {
    if (!e.empty()) missing.push_back(std::move(e));
  }
  return out;
}

}  // namespace

EvalResult run_eval(const fs::path& manifest_path, io::Partition eval_partition, std::size_t workers) {
  const io::Manifest manifest = io::read_manifest(manifest_path);
  const fs::path dir = fs::absolute(manifest_path).parent_path();
  std::vector<const io::ManifestRecord*> train, scored, all;
  for (const auto& r : manifest.records) {
    if (r.partition == io::Partition::Train) train.push_back(&r);
    if (r.partition == eval_partition) scored.push_back(&r);
    if (r.partition == io::Partition::Train || r.partition == eval_partition) all.push_back(&r);
  }
  if (train.empty()) throw Error(Errc::Validation, "manifest has no training records; run split first");
  if (scored.empty()) {
    throw Error(Errc::Validation, "manifest has no '" + std::string(io::to_string(eval_partition)) + "' records");
  }

  std::vector<std::string> missing;
  const auto train_tensors = load_tensors(train, dir, workers, missing);
  const auto scored_tensors = load_tensors(scored, dir, workers, missing);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += "\n  " + m;
    throw Error(Errc::Io, std::to_string(missing.size()) + " tensor file(s) named in the manifest are missing:" + list);
  }

  const auto classes = class_order(all);
  std::vector<CentroidModel::Example> examples;
  std::vector<ClassLabel> train_classes;
  for (std::size_t i = 0; i < train.size(); ++i) {
    examples.push_back({&train_tensors[i], train[i]->sample.label});
    if (std::find(train_classes.begin(), train_classes.end(), train[i]->sample.label) == train_classes.end()) {
      train_classes.push_back(train[i]->sample.label);
    }
  }
  std::vector<ClassLabel> fit_order;
  for (const auto& c : classes) {
    if (std::find(train_classes.begin(), train_classes.end(), c) != train_classes.end()) fit_order.push_back(c);
  }
  const CentroidModel model = CentroidModel::fit(examples, fit_order);

  auto score = [&](const std::vector<const io::ManifestRecord*>& recs, const std::vector<StackedTensor>& tensors) {
    std::vector<ClassLabel> truth(recs.size()), pred(recs.size());
    parallel_for(recs.size(), workers, [&](std::size_t i) {
      truth[i] = recs[i]->sample.label;
      pred[i] = model.predict(tensors[i]);
    });
    return confusion(truth, pred, classes);
  };

  EvalResult result;
  result.confusion = score(scored, scored_tensors);
  result.report = metrics(result.confusion);
  result.train_report = metrics(score(train, train_tensors));
  return result;
}

void write_eval_outputs(const EvalResult& result, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  io::write_text(out_dir / "report.csv", format_report_csv(result.report));
  io::write_text(out_dir / "report.txt", format_report_text(result.report, result.confusion) +
                                             "\n(averaging: macro over present classes)\n");
  std::ostringstream counts;
  counts << "true\\pred";
  for (const auto& c : result.confusion.classes) counts << ',' << c;
  counts << '\n';
  for (std::size_t i = 0; i < result.confusion.size(); ++i) {
    counts << result.confusion.classes[i];
    for (std::size_t j = 0; j < result.confusion.size(); ++j) counts << ',' << result.confusion.at(i, j);
    counts << '\n';
  }
  io::write_text(out_dir / "confusion.csv", counts.str());

  constexpr std::size_t kCell = 32;
  const std::size_t k = result.confusion.size();
  const Matrix norm = result.confusion.normalized();
  std::vector<std::uint8_t> px(k * kCell * k * kCell);
  for (std::size_t y = 0; y < k * kCell; ++y) {
    for (std::size_t x = 0; x < k * kCell; ++x) {
      px[y * k * kCell + x] = static_cast<std::uint8_t>(std::lround(255.0 * norm(y / kCell, x / kCell)));
    }
  }
  io::write_ppm(out_dir / "confusion.ppm", k * kCell, k * kCell, px);
}

// ---- inspect ----

ChannelStats channel_stats(const StackedTensor& tensor, std::size_t channel) {
  if (channel >= tensor.channels) {
    throw Error(Errc::OutOfRange, "channel " + std::to_string(channel) + " out of range for a " +
                                      std::to_string(tensor.channels) + "-channel tensor");
  }
  const auto v = tensor.channel(channel);
  ChannelStats s;
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  s.min = *mn;
  s.max = *mx;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = v.empty() ? 0.0 : sum / static_cast<double>(v.size());
  return s;
}

std::vector<std::uint8_t> render_channel(const StackedTensor& tensor, std::size_t channel) {
  const ChannelStats s = channel_stats(tensor, channel);
  const double range = s.max - s.min;
  std::vector<std::uint8_t> px(tensor.height * tensor.width, 0);
  if (!(range > 0.0)) return px;
  for (std::size_t h = 0; h < tensor.height; ++h) {
    const std::size_t y = tensor.height - 1 - h;
    for (std::size_t w = 0; w < tensor.width; ++w) {
      const double u = (tensor.at(channel, h, w) - s.min) / range;
      px[y * tensor.width + w] = static_cast<std::uint8_t>(std::lround(255.0 * u));
    }
  }
  return px;
}

}  // namespace sstack
