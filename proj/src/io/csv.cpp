#include "csv.hpp"

namespace sstack::io::detail {

std::vector<CsvLine> split_csv(std::string_view text, std::vector<std::string>* comments) {
  std::vector<CsvLine> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (comments) comments->emplace_back(line.substr(1));
      continue;
    }
    CsvLine out{number, {}};
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      out.fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                                 : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    lines.push_back(std::move(out));
  }
  return lines;
}

void fail_line(const char* what, std::size_t line, const std::string& message) {
  throw Error(Errc::Parse, std::string(what) + " line " + std::to_string(line) + ": " + message);
}

void expect_header(const std::vector<CsvLine>& lines, const std::vector<std::string>& header,
                   const char* what) {
  if (lines.empty()) throw Error(Errc::Parse, std::string(what) + ": missing header line");
  if (lines.front().fields != header) {
    std::string expected;
    for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
    fail_line(what, lines.front().number, "expected header '" + expected + "'");
  }
}

void check_field(const std::string& value, const char* name) {
  if (value.find_first_of(",\n\r") != std::string::npos || (!value.empty() && value.front() == '#')) {
    throw Error(Errc::Validation, std::string(name) + " '" + value + "' contains a CSV delimiter");
  }
}

}  // namespace sstack::io::detail
