#include <charconv>
#include <set>
#include <sstream>
#include <tuple>

#include "csv.hpp"
#include "sstack/io.hpp"

namespace sstack::io {

namespace {

const std::vector<std::string> kHeader{"recording_id", "sample_start", "sample_len", "label",
                                       "partition",    "rng_seed",     "anno_t_start", "anno_t_end",
                                       "anno_f_lo",    "anno_f_hi",    "tensor"};
constexpr std::string_view kMagic = " sstack-manifest v1";

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(Errc::Parse, "not an unsigned integer: '" + s + "'");
  }
  return v;
}

// Parses " sstack-manifest v1 ratios=a,b,c stratified=0|1 split_unit=sample".
void parse_preamble(const std::string& line, Manifest& m) {
  std::istringstream in(line.substr(kMagic.size()));
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw Error(Errc::Parse, "manifest preamble token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "ratios") {
      const auto a = value.find(',');
      const auto b = value.find(',', a + 1);
      if (a == std::string::npos || b == std::string::npos) {
        throw Error(Errc::Parse, "manifest ratios need three values");
      }
      m.ratios.train = parse_double(value.substr(0, a));
      m.ratios.val = parse_double(value.substr(a + 1, b - a - 1));
      m.ratios.test = parse_double(value.substr(b + 1));
      m.ratios.validate();
    } else if (key == "stratified") {
      m.stratified = value == "1";
    } else if (key != "split_unit") {
      throw Error(Errc::Parse, "unknown manifest preamble key '" + key + "'");
    }
  }
}

}  // namespace

std::string_view to_string(Partition p) {
  switch (p) {
    case Partition::Unassigned: return "none";
    case Partition::Train: return "train";
    case Partition::Val: return "val";
    case Partition::Test: return "test";
  }
  return "none";
}

Partition parse_partition(std::string_view s) {
  if (s == "none") return Partition::Unassigned;
  if (s == "train") return Partition::Train;
  if (s == "val") return Partition::Val;
  if (s == "test") return Partition::Test;
  throw Error(Errc::Parse, "unknown partition '" + std::string(s) + "'");
}

Manifest manifest_from_split(const DatasetSplit& split) {
  Manifest m;
  m.ratios = split.ratios;
  m.stratified = split.stratified;
  for (const auto& s : split.train) m.records.push_back({s, Partition::Train});
  for (const auto& s : split.val) m.records.push_back({s, Partition::Val});
  for (const auto& s : split.test) m.records.push_back({s, Partition::Test});
  return m;
}

Manifest manifest_unassigned(const std::vector<LabeledSample>& samples) {
  Manifest m;
  for (const auto& s : samples) m.records.push_back({s, Partition::Unassigned});
  return m;
}

DatasetSplit split_from_manifest(const Manifest& manifest) {
  DatasetSplit split;
  split.ratios = manifest.ratios;
  split.stratified = manifest.stratified;
  for (const auto& r : manifest.records) {
    switch (r.partition) {
      case Partition::Train: split.train.push_back(r.sample); break;
      case Partition::Val: split.val.push_back(r.sample); break;
      case Partition::Test: split.test.push_back(r.sample); break;
      case Partition::Unassigned:
        throw Error(Errc::Validation, "manifest record for '" + r.sample.recording_id +
                                          "' has no partition; run split first");
    }
  }
  return split;
}

std::string format_manifest(const Manifest& manifest) {
  std::ostringstream out;
  out << '#' << kMagic << " ratios=" << format_double(manifest.ratios.train) << ','
      << format_double(manifest.ratios.val) << ',' << format_double(manifest.ratios.test)
      << " stratified=" << (manifest.stratified ? 1 : 0) << " split_unit=sample\n";
  for (std::size_t i = 0; i < kHeader.size(); ++i) out << (i ? "," : "") << kHeader[i];
  out << '\n';
  for (const auto& r : manifest.records) {
    const auto& s = r.sample;
    detail::check_field(s.recording_id, "recording_id");
    detail::check_field(s.label, "label");
    detail::check_field(s.tensor_path, "tensor");
    out << s.recording_id << ',' << format_double(s.sample_start) << ',' << format_double(s.sample_len)
        << ',' << s.label << ',' << to_string(r.partition) << ',' << s.rng_seed_used;
    if (s.source_annotation) {
      const auto& a = *s.source_annotation;
      out << ',' << format_double(a.t_start) << ',' << format_double(a.t_end) << ','
          << format_double(a.f_lo) << ',' << format_double(a.f_hi);
    } else {
      out << ",,,,";
    }
    out << ',' << s.tensor_path << '\n';
  }
  return out.str();
}

Manifest parse_manifest(const std::string& text) {
  std::vector<std::string> comments;
  const auto lines = detail::split_csv(text, &comments);
  Manifest m;
  for (const auto& c : comments) {
    if (c.rfind(kMagic, 0) == 0) parse_preamble(c, m);
  }
  detail::expect_header(lines, kHeader, "manifest");
  std::set<std::tuple<std::string, double, Partition>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.fields.size() != kHeader.size()) {
      detail::fail_line("manifest", l.number, "expected " + std::to_string(kHeader.size()) + " fields, got " +
                                                  std::to_string(l.fields.size()));
    }
    ManifestRecord r;
    auto& s = r.sample;
    try {
      const auto& f = l.fields;
      s.recording_id = f[0];
      if (s.recording_id.empty()) throw Error(Errc::Validation, "empty recording_id");
      s.sample_start = parse_double(f[1]);
      s.sample_len = parse_double(f[2]);
      if (s.sample_start < 0.0 || !(s.sample_len > 0.0)) {
        throw Error(Errc::Validation, "sample window must start at >= 0 with positive length");
      }
      s.label = f[3];
      if (s.label.empty()) throw Error(Errc::Validation, "empty label");
      r.partition = parse_partition(f[4]);
      s.rng_seed_used = parse_u64(f[5]);
      const bool any = !f[6].empty() || !f[7].empty() || !f[8].empty() || !f[9].empty();
      const bool all = !f[6].empty() && !f[7].empty() && !f[8].empty() && !f[9].empty();
      if (any && !all) throw Error(Errc::Validation, "annotation columns must be all set or all empty");
      if (all) {
        Annotation a{s.recording_id, parse_double(f[6]), parse_double(f[7]), parse_double(f[8]),
                     parse_double(f[9]), s.label};
        a.validate();
        s.source_annotation = a;
      }
      s.tensor_path = f[10];
    } catch (const Error& e) {
      detail::fail_line("manifest", l.number, e.what());
    }
    if (!seen.emplace(s.recording_id, s.sample_start, r.partition).second) {
      throw Error(Errc::Validation, "manifest line " + std::to_string(l.number) + ": duplicate record (" +
                                        s.recording_id + ", " + format_double(s.sample_start) + ", " +
                                        std::string(to_string(r.partition)) + ")");
    }
    m.records.push_back(std::move(r));
  }
  return m;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  write_text(path, format_manifest(manifest));
}

void write_manifest(const std::filesystem::path& path, const DatasetSplit& split) {
  write_manifest(path, manifest_from_split(split));
}

Manifest read_manifest(const std::filesystem::path& path) { return parse_manifest(read_text(path)); }

}  // namespace sstack::io
