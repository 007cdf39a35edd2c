#ifndef DTAM_WAVELET_HPP
#define DTAM_WAVELET_HPP

#include <string>

#include "dtam/types.hpp"

namespace dtam {

enum class WaveletFamily { haar, db2 };

WaveletFamily wavelet_from_string(const std::string& name);

struct WaveletSpec {
  WaveletFamily family = WaveletFamily::haar;
  int levels = 1;
};

// Orthonormal multi-level analysis with periodic boundary handling. The
// coefficient layout is [approx_L | detail_L | ... | detail_1]; the signal
// length must be divisible by 2^levels. Energy is preserved exactly up to
// rounding.
Vec dwt(const Vec& signal, const WaveletSpec& spec);

// Exact inverse of dwt (transpose of the orthonormal analysis operator).
Vec idwt(const Vec& coeffs, const WaveletSpec& spec);

}  // namespace dtam

#endif  // DTAM_WAVELET_HPP
