#ifndef DTAM_METRICS_HPP
#define DTAM_METRICS_HPP

#include "dtam/types.hpp"

namespace dtam {

// 20 log10(||d|| / ||d - dhat||) in dB. Errors below 1e-12 relative count as
// exact and return +inf (the "inf" sentinel in reports). Errors on d = 0.
double snr(const Vec& d, const Vec& dhat);

// 20 log10(255 / sqrt(MSE)) in dB on the 0-255 scale; identical inputs give
// +inf. Errors on empty input.
double psnr(const Vec& img, const Vec& imghat);

}  // namespace dtam

#endif  // DTAM_METRICS_HPP
