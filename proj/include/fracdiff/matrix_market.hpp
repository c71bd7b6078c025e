// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Sparse>
#include <string>

namespace fracdiff::mm {

/// Reads a real square sparse matrix in Matrix Market coordinate format.
/// Banners "symmetric" and "general" are accepted; general input is checked
/// for symmetry to 1e-12 relative and rejected beyond that. The returned
/// matrix is stored exactly symmetric.
Eigen::SparseMatrix<double> read_symmetric(const std::string& path);

/// Writes the lower triangle in coordinate format with 17 significant digits,
/// so read_symmetric(write_symmetric(a)) reproduces every value bit-exactly.
void write_symmetric(const Eigen::SparseMatrix<double>& a, const std::string& path);

}  // namespace fracdiff::mm
