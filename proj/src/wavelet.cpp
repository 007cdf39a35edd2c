#include "dtam/wavelet.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dtam {

namespace {

struct FilterPair {
  std::vector<double> low;
  std::vector<double> high;
};

FilterPair filters_for(WaveletFamily family) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (family == WaveletFamily::haar) {
    return {{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}};
  }
  // Daubechies 4-tap lowpass; highpass is the alternating-sign reversal.
  const double s3 = std::sqrt(3.0);
  const double norm = 4.0 * std::sqrt(2.0);
  std::vector<double> h = {(1.0 + s3) / norm, (3.0 + s3) / norm,
                           (3.0 - s3) / norm, (1.0 - s3) / norm};
  std::vector<double> g = {h[3], -h[2], h[1], -h[0]};
  return {std::move(h), std::move(g)};
}

void check_spec(Eigen::Index n, const WaveletSpec& spec) {
  if (spec.levels < 1) {
    throw std::invalid_argument("wavelet: levels must be positive");
  }
  if (spec.levels >= 63 || n % (Eigen::Index{1} << spec.levels) != 0) {
    throw std::invalid_argument(
        "wavelet: signal length must be divisible by 2^levels");
  }
}

}  // namespace

WaveletFamily wavelet_from_string(const std::string& name) {
  if (name == "haar") return WaveletFamily::haar;
  if (name == "db2") return WaveletFamily::db2;
  throw std::invalid_argument("unknown wavelet family: " + name);
}

Vec dwt(const Vec& signal, const WaveletSpec& spec) {
  check_spec(signal.size(), spec);
  const FilterPair f = filters_for(spec.family);
  const int taps = static_cast<int>(f.low.size());

  Vec out = signal;
  Eigen::Index len = signal.size();
  for (int level = 0; level < spec.levels; ++level) {
    const Eigen::Index half = len / 2;
    Vec stage(len);
    for (Eigen::Index i = 0; i < half; ++i) {
      double a = 0.0, d = 0.0;
      for (int t = 0; t < taps; ++t) {
        const double s = out[(2 * i + t) % len];
        a += f.low[static_cast<std::size_t>(t)] * s;
        d += f.high[static_cast<std::size_t>(t)] * s;
      }
      stage[i] = a;
      stage[half + i] = d;
    }
    out.head(len) = stage;
    len = half;
  }
  return out;
}

Vec idwt(const Vec& coeffs, const WaveletSpec& spec) {
  check_spec(coeffs.size(), spec);
  const FilterPair f = filters_for(spec.family);
  const int taps = static_cast<int>(f.low.size());

  Vec out = coeffs;
  Eigen::Index len = coeffs.size() >> spec.levels;
  for (int level = 0; level < spec.levels; ++level) {
    const Eigen::Index full = 2 * len;
    Vec stage = Vec::Zero(full);
    for (Eigen::Index i = 0; i < len; ++i) {
      const double a = out[i];
      const double d = out[len + i];
      for (int t = 0; t < taps; ++t) {
        stage[(2 * i + t) % full] += f.low[static_cast<std::size_t>(t)] * a +
                                     f.high[static_cast<std::size_t>(t)] * d;
      }
    }
    out.head(full) = stage;
    len = full;
  }
  return out;
}

}  // namespace dtam
