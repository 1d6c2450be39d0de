#include "sstack/error.hpp"

namespace sstack {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidParameter: return "invalid-parameter";
    case Errc::SignalTooShort: return "signal-too-short";
    case Errc::EmptyBand: return "empty-band";
    case Errc::DegenerateSource: return "degenerate-source";
    case Errc::RecordingTooShort: return "recording-too-short";
    case Errc::Parse: return "parse-error";
    case Errc::UnsupportedFormat: return "unsupported-format";
    case Errc::MagicMismatch: return "magic-mismatch";
    case Errc::DtypeMismatch: return "dtype-mismatch";
    case Errc::LengthMismatch: return "length-mismatch";
    case Errc::Validation: return "validation-error";
    case Errc::Io: return "io-error";
    case Errc::OutOfRange: return "out-of-range";
    case Errc::UnknownLabel: return "unknown-label";
    case Errc::ShapeMismatch: return "shape-mismatch";
  }
  return "error";
}

}  // namespace sstack
