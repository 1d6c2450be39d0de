#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sstack {

enum class Errc {
  InvalidParameter,
  SignalTooShort,
  EmptyBand,
  DegenerateSource,
  RecordingTooShort,
  Parse,
  UnsupportedFormat,
  MagicMismatch,
  DtypeMismatch,
  LengthMismatch,
  Validation,
  Io,
  OutOfRange,
  UnknownLabel,
  ShapeMismatch,
};

std::string_view to_string(Errc code);

// Every library failure is reported as an Error carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sstack
