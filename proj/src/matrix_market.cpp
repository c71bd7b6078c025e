// SPDX-License-Identifier: Apache-2.0
#include "fracdiff/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "fracdiff/errors.hpp"

namespace fracdiff::mm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Eigen::SparseMatrix<double> read_symmetric(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");

  long line_no = 0;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty file '" + path + "'", 1);
  ++line_no;

  std::istringstream banner(line);
  std::string tag, object, fmt, field, symmetry;
  banner >> tag >> object >> fmt >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket" || lower(object) != "matrix")
    throw FormatError("missing MatrixMarket banner", line_no);
  if (lower(fmt) != "coordinate")
    throw FormatError("only coordinate format is supported", line_no);
  if (lower(field) != "real" && lower(field) != "integer")
    throw FormatError("only real matrices are supported, got '" + field + "'", line_no);
  const std::string sym = lower(symmetry);
  if (sym != "symmetric" && sym != "general")
    throw FormatError("matrix must be symmetric or general, got '" + symmetry + "'",
                      line_no);

  // Skip comments and blank lines up to the size line.
  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> nnz)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FormatError("malformed size line", line_no);
    }
    break;
  }
  if (rows < 0) throw FormatError("missing size line", line_no);
  if (rows != cols) throw ValidationError("matrix must be square, got " +
                                          std::to_string(rows) + "x" + std::to_string(cols));

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(2 * nnz));
  long seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    long i = 0, j = 0;
    double v = 0.0;
    std::istringstream entry(line);
    if (!(entry >> i >> j >> v))
      throw FormatError("malformed entry", line_no);
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw FormatError("index out of range", line_no);
    ++seen;
    trip.emplace_back(i - 1, j - 1, v);
    if (sym == "symmetric" && i != j) trip.emplace_back(j - 1, i - 1, v);
  }
  if (seen != nnz)
    throw FormatError("header promises " + std::to_string(nnz) + " entries, found " +
                          std::to_string(seen),
                      line_no);

  Eigen::SparseMatrix<double> a(rows, cols);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();

  if (sym == "general") {
    Eigen::SparseMatrix<double> diff = a - Eigen::SparseMatrix<double>(a.transpose());
    double scale = 0.0, asym = 0.0;
    for (int c = 0; c < a.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
        scale = std::max(scale, std::abs(it.value()));
    for (int c = 0; c < diff.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(diff, c); it; ++it)
        asym = std::max(asym, std::abs(it.value()));
    if (scale > 0.0 && asym > 1e-12 * scale)
      throw ValidationError("matrix in '" + path + "' is asymmetric beyond 1e-12 relative");
    a = 0.5 * (a + Eigen::SparseMatrix<double>(a.transpose()));
    a.makeCompressed();
  }
  return a;
}

void write_symmetric(const Eigen::SparseMatrix<double>& a, const std::string& path) {
  if (a.rows() != a.cols())
    throw InvalidArgumentError("write_symmetric requires a square matrix");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw FormatError("cannot open '" + path + "' for writing");

  long nnz = 0;
  for (int c = 0; c < a.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
      if (it.row() >= it.col()) ++nnz;

  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real symmetric\n");
  std::fprintf(f, "%ld %ld %ld\n", static_cast<long>(a.rows()),
               static_cast<long>(a.cols()), nnz);
  for (int c = 0; c < a.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
      if (it.row() >= it.col())
        std::fprintf(f, "%ld %ld %.17g\n", static_cast<long>(it.row()) + 1,
                     static_cast<long>(it.col()) + 1, it.value());
  std::fclose(f);
}

}  // namespace fracdiff::mm
