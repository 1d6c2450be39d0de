#include <cmath>
#include <limits>
#include <string>

#include "bytes.hpp"
#include "sstack/error.hpp"
#include "sstack/io.hpp"

namespace sstack::io {

namespace {
constexpr std::uint8_t kDtypeF32 = 0;
}

std::vector<std::uint8_t> encode_tensor(const StackedTensor& tensor, const std::string& label) {
  const std::size_t n = tensor.channels * tensor.height * tensor.width;
  if (tensor.values.size() != n || tensor.freq_axis.size() != tensor.height ||
      tensor.time_axis.size() != tensor.width) {
    throw Error(Errc::ShapeMismatch, "tensor fields disagree with its declared k x H x W shape");
  }
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (tensor.channels > kMax || tensor.height > kMax || tensor.width > kMax || label.size() > kMax) {
    throw Error(Errc::InvalidParameter, "tensor dimension does not fit the 32-bit header");
  }
  if (tensor.height == 0 || tensor.width == 0) {
    throw Error(Errc::InvalidParameter, "tensor has an empty axis");
  }
  std::vector<std::uint8_t> out{'S', 'S', 'T', '1'};
  out.reserve(kTensorFixedHeader + label.size() + 4 * n);
  detail::put_u32(out, static_cast<std::uint32_t>(tensor.channels));
  detail::put_u32(out, static_cast<std::uint32_t>(tensor.height));
  detail::put_u32(out, static_cast<std::uint32_t>(tensor.width));
  out.push_back(kDtypeF32);
  detail::put_u32(out, static_cast<std::uint32_t>(label.size()));
  out.insert(out.end(), label.begin(), label.end());
  detail::put_f64(out, tensor.freq_axis.front());
  detail::put_f64(out, tensor.freq_axis.back());
  detail::put_f64(out, tensor.time_axis.front());
  detail::put_f64(out, tensor.time_axis.back());
  for (double v : tensor.values) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidParameter, "tensor contains a non-finite value");
    detail::put_f32(out, static_cast<float>(v));
  }
  return out;
}

StackedTensor decode_tensor(const std::vector<std::uint8_t>& bytes, std::string* label) {
  detail::Reader r(bytes, "sst1");
  r.need(4);
  if (r.str(4) != "SST1") throw Error(Errc::MagicMismatch, "sst1: bad magic at offset 0");
  StackedTensor t;
  t.channels = r.u32();
  t.height = r.u32();
  t.width = r.u32();
  const std::uint8_t dtype = r.u8();
  if (dtype != kDtypeF32) {
    throw Error(Errc::DtypeMismatch, "sst1: dtype code " + std::to_string(dtype) + " at offset 16 (expected 0)");
  }
  const std::uint32_t label_len = r.u32();
  std::string text = r.str(label_len);
  const double f_lo = r.f64();
  const double f_hi = r.f64();
  const double t_lo = r.f64();
  const double t_hi = r.f64();
  const std::size_t n = t.channels * t.height * t.width;
  if (r.remaining() != 4 * n) {
    throw Error(Errc::LengthMismatch, "sst1: payload at offset " + std::to_string(r.offset()) + " is " +
                                          std::to_string(r.remaining()) + " bytes, header implies " +
                                          std::to_string(4 * n));
  }
  t.values.resize(n);
  for (auto& v : t.values) v = static_cast<double>(r.f32());
  t.freq_axis = linspace(f_lo, f_hi, t.height);
  t.time_axis = linspace(t_lo, t_hi, t.width);
  if (label) *label = std::move(text);
  return t;
}

void write_tensor(const std::filesystem::path& path, const StackedTensor& tensor, const std::string& label) {
  write_bytes(path, encode_tensor(tensor, label));
}

StackedTensor read_tensor(const std::filesystem::path& path, std::string* label) {
  try {
    return decode_tensor(read_bytes(path), label);
  } catch (const Error& e) {
    if (e.code() == Errc::Io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace sstack::io
