#ifndef DTAM_IO_HPP
#define DTAM_IO_HPP

#include <string>

#include "dtam/types.hpp"

namespace dtam {

// CSV matrix format: a sidecar header line "# rows=<m> cols=<n>" followed by
// m rows of n comma-separated decimals. Vectors are stored as m-by-1.
void save_matrix_csv(const Mat& a, const std::string& path);
Mat load_matrix_csv(const std::string& path);

// Raw binary format: two little-endian 64-bit unsigned integers (rows, cols)
// followed by rows*cols little-endian 64-bit floats in column-major order.
void save_matrix_bin(const Mat& a, const std::string& path);
Mat load_matrix_bin(const std::string& path);

// Dispatch on extension: ".bin" binary, anything else CSV.
Mat load_matrix_auto(const std::string& path);

}  // namespace dtam

#endif  // DTAM_IO_HPP
