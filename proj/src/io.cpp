#include "dtam/io.hpp"

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dtam {

namespace {

[[noreturn]] void io_fail(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path);
}

static_assert(sizeof(double) == 8, "64-bit IEEE doubles required");

}  // namespace

void save_matrix_csv(const Mat& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) io_fail("cannot open for writing", path);
  out << "# rows=" << a.rows() << " cols=" << a.cols() << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
      out << buf << (j + 1 < a.cols() ? "," : "");
    }
    out << "\n";
  }
  if (!out) io_fail("write failed", path);
}

Mat load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail("cannot open for reading", path);
  std::string header;
  if (!std::getline(in, header)) io_fail("empty file", path);
  std::uint64_t rows = 0, cols = 0;
  if (std::sscanf(header.c_str(), "# rows=%" SCNu64 " cols=%" SCNu64, &rows,
                  &cols) != 2) {
    io_fail("missing '# rows=<m> cols=<n>' header", path);
  }
  Mat a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::string line;
  for (std::uint64_t i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) io_fail("truncated matrix body", path);
    std::stringstream ss(line);
    std::string cell;
    for (std::uint64_t j = 0; j < cols; ++j) {
      if (!std::getline(ss, cell, ',')) io_fail("short row in", path);
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::stod(cell);
    }
  }
  return a;
}

void save_matrix_bin(const Mat& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail("cannot open for writing", path);
  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(a.rows()),
                                 static_cast<std::uint64_t>(a.cols())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(sizeof(double) * a.size()));
  if (!out) io_fail("write failed", path);
}

Mat load_matrix_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open for reading", path);
  std::uint64_t dims[2] = {0, 0};
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in) io_fail("truncated header", path);
  Mat a(static_cast<Eigen::Index>(dims[0]), static_cast<Eigen::Index>(dims[1]));
  in.read(reinterpret_cast<char*>(a.data()),
          static_cast<std::streamsize>(sizeof(double) * a.size()));
  if (!in) io_fail("truncated matrix body", path);
  return a;
}

Mat load_matrix_auto(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".bin") {
    return load_matrix_bin(path);
  }
  return load_matrix_csv(path);
}

}  // namespace dtam
