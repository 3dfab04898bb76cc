#pragma once

#include <string>
#include <variant>

#include "chebfd/sparse_matrix.hpp"

namespace chebfd {

using MatrixVariant = std::variant<SparseMatrix<double>, SparseMatrix<Complex>>;

/// Read a Matrix Market coordinate file.  Accepts real/integer/complex fields
/// with general, symmetric, or hermitian storage; symmetric/hermitian files
/// are expanded to full storage.  The matrix must be square.
MatrixVariant read_matrix_market(const std::string& path);

/// Write coordinate format.  Matrices flagged Hermitian are stored as the
/// lower triangle under a `symmetric` (real) or `hermitian` (complex) header;
/// otherwise all entries are written as `general`.
void write_matrix_market(const std::string& path, const SparseMatrix<double>& a);
void write_matrix_market(const std::string& path, const SparseMatrix<Complex>& a);

}  // namespace chebfd
