#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sstack/error.hpp"

namespace sstack::io::detail {

struct CsvLine {
  std::size_t number;  // 1-based
  std::vector<std::string> fields;
};

// Splits on '\n' (tolerating '\r\n') and ','. Blank lines and lines starting
// with '#' are skipped; comment lines are returned through `comments`.
std::vector<CsvLine> split_csv(std::string_view text, std::vector<std::string>* comments = nullptr);

// Throws Parse naming the line when the header does not match.
void expect_header(const std::vector<CsvLine>& lines, const std::vector<std::string>& header,
                   const char* what);

[[noreturn]] void fail_line(const char* what, std::size_t line, const std::string& message);

// Rejects characters that would break the line/field structure.
void check_field(const std::string& value, const char* name);

}  // namespace sstack::io::detail
