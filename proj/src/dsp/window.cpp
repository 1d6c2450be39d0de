#include <cmath>
#include <numbers>

#include "sstack/dsp.hpp"
#include "sstack/error.hpp"

namespace sstack {

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  if (n == 0) throw Error(Errc::InvalidParameter, "window length must be at least 1");
  std::vector<double> w(n);
  switch (kind) {
    case WindowKind::Hann:
      for (std::size_t m = 0; m < n; ++m) {
        w[m] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(m) /
                                     static_cast<double>(n)));
      }
      break;
  }
  return w;
}

}  // namespace sstack
