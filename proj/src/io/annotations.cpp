#include <sstream>

#include "csv.hpp"
#include "sstack/io.hpp"

namespace sstack::io {

namespace {

const std::vector<std::string> kAnnotationHeader{"recording_id", "t_start", "t_end", "f_lo", "f_hi", "label"};
const std::vector<std::string> kRecordingHeader{"recording_id", "file", "duration_s", "kind"};

}  // namespace

std::vector<Annotation> parse_annotations(const std::string& text) {
  const auto lines = detail::split_csv(text);
  detail::expect_header(lines, kAnnotationHeader, "annotations");
  std::vector<Annotation> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.fields.size() != kAnnotationHeader.size()) {
      detail::fail_line("annotations", l.number, "expected 6 fields, got " + std::to_string(l.fields.size()));
    }
    Annotation a;
    try {
      a.recording_id = l.fields[0];
      a.t_start = parse_double(l.fields[1]);
      a.t_end = parse_double(l.fields[2]);
      a.f_lo = parse_double(l.fields[3]);
      a.f_hi = parse_double(l.fields[4]);
      a.label = l.fields[5];
      if (a.recording_id.empty()) throw Error(Errc::Validation, "empty recording_id");
      if (a.label.empty()) throw Error(Errc::Validation, "empty label");
      a.validate();
    } catch (const Error& e) {
      detail::fail_line("annotations", l.number, e.what());
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Annotation> read_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_text(path));
}

void write_annotations(const std::filesystem::path& path, const std::vector<Annotation>& annos) {
  std::ostringstream out;
  out << "recording_id,t_start,t_end,f_lo,f_hi,label\n";
  for (const auto& a : annos) {
    a.validate();
    detail::check_field(a.recording_id, "recording_id");
    detail::check_field(a.label, "label");
    out << a.recording_id << ',' << format_double(a.t_start) << ',' << format_double(a.t_end) << ','
        << format_double(a.f_lo) << ',' << format_double(a.f_hi) << ',' << a.label << '\n';
  }
  write_text(path, out.str());
}

std::vector<RecordingEntry> read_recordings(const std::filesystem::path& path) {
  const auto lines = detail::split_csv(read_text(path));
  detail::expect_header(lines, kRecordingHeader, "recordings");
  std::vector<RecordingEntry> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.fields.size() != kRecordingHeader.size()) {
      detail::fail_line("recordings", l.number, "expected 4 fields");
    }
    RecordingEntry e;
    e.recording_id = l.fields[0];
    e.file = l.fields[1];
    try {
      e.duration_s = parse_double(l.fields[2]);
    } catch (const Error& err) {
      detail::fail_line("recordings", l.number, err.what());
    }
    if (l.fields[3] == "ambient") {
      e.ambient = true;
    } else if (l.fields[3] != "event") {
      detail::fail_line("recordings", l.number, "kind must be 'event' or 'ambient'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_recordings(const std::filesystem::path& path, const std::vector<RecordingEntry>& recs) {
  std::ostringstream out;
  out << "recording_id,file,duration_s,kind\n";
  for (const auto& r : recs) {
    detail::check_field(r.recording_id, "recording_id");
    detail::check_field(r.file, "file");
    out << r.recording_id << ',' << r.file << ',' << format_double(r.duration_s) << ','
        << (r.ambient ? "ambient" : "event") << '\n';
  }
  write_text(path, out.str());
}

}  // namespace sstack::io
