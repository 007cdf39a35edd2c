#include "dtam/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dtam {

double snr(const Vec& d, const Vec& dhat) {
  if (d.size() != dhat.size()) {
    throw std::invalid_argument("snr: length mismatch");
  }
  const double signal = d.norm();
  if (d.size() == 0 || signal == 0.0) {
    throw std::invalid_argument("snr: reference signal is zero");
  }
  const double err = (d - dhat).norm();
  if (err <= 1e-12 * signal) {
    return std::numeric_limits<double>::infinity();
  }
  return 20.0 * std::log10(signal / err);
}

double psnr(const Vec& img, const Vec& imghat) {
  if (img.size() != imghat.size()) {
    throw std::invalid_argument("psnr: length mismatch");
  }
  if (img.size() == 0) {
    throw std::invalid_argument("psnr: empty input");
  }
  const double mse = (img - imghat).squaredNorm() / static_cast<double>(img.size());
  if (mse == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 20.0 * std::log10(255.0 / std::sqrt(mse));
}

}  // namespace dtam
