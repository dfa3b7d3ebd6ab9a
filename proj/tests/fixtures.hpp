#pragma once

#include <string>
#include <vector>

#include "spherepoly/kernelfact.hpp"
#include "spherepoly/measure.hpp"
#include "spherepoly/moments.hpp"
#include "spherepoly/orthopoly.hpp"

namespace fixtures {

using namespace spherepoly;

/// Specs every identity is exercised on.
inline std::vector<std::string> test_presets() {
  return {"lebesgue", "counterexample", "stable-demo", "stable-mean", "circle-calibration", "half-atom"};
}

inline MomentKernel kernel(const std::string& name, std::size_t N) { return kernel_window(normalize(preset(name)), N); }

inline std::vector<double> diagonal(const MomentKernel& K) {
  std::vector<double> d(K.N + 1);
  for (std::size_t k = 0; k <= K.N; ++k) d[k] = K(k, k).real();
  return d;
}

/// Toeplitz moment of the circle calibration weight (4/5)|1 - z/2|^2:
/// integral of conj(z)^k.
inline std::complex<double> circle_moment(int k) {
  if (k == 0) return 1.0;
  if (k == 1 || k == -1) return -0.4;
  return 0.0;
}

}  // namespace fixtures
