#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chebfd/scalar.hpp"

namespace chebfd {

/// Square sparse symmetric/Hermitian matrix in row-compressed storage.
/// Immutable after construction; safely shareable across threads.
template <class S>
class SparseMatrix {
    static_assert(is_supported_scalar<S>);

  public:
    SparseMatrix() = default;

    SparseMatrix(Index dim, std::vector<Index> row_offsets, std::vector<Index> col_indices,
                 std::vector<S> values, bool hermitian = true)
        : dim_(dim),
          row_offsets_(std::move(row_offsets)),
          col_indices_(std::move(col_indices)),
          values_(std::move(values)),
          hermitian_(hermitian) {
        validate();
    }

    Index dim() const { return dim_; }
    Index nnz() const { return static_cast<Index>(values_.size()); }
    bool hermitian_flag() const { return hermitian_; }
    double avg_nonzeros_per_row() const {
        return dim_ > 0 ? static_cast<double>(nnz()) / static_cast<double>(dim_) : 0.0;
    }

    const std::vector<Index>& row_offsets() const { return row_offsets_; }
    const std::vector<Index>& col_indices() const { return col_indices_; }
    const std::vector<S>& values() const { return values_; }

    /// Full-scan Hermitian symmetry check; desk-scale matrices only.
    bool is_hermitian(double tol = 0.0) const {
        std::map<std::pair<Index, Index>, S> entries;
        for (Index i = 0; i < dim_; ++i)
            for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
                entries[{i, col_indices_[p]}] = values_[p];
        for (const auto& [ij, v] : entries) {
            auto it = entries.find({ij.second, ij.first});
            if (it == entries.end()) return false;
            if (std::abs(it->second - ScalarTraits<S>::conj(v)) > tol) return false;
        }
        return true;
    }

    /// Builder for assembly by (row, col, value) triplets; duplicates are summed.
    class Builder {
      public:
        explicit Builder(Index dim) : dim_(dim), rows_(dim) {}
        void add(Index i, Index j, S v) {
            if (i < 0 || i >= dim_ || j < 0 || j >= dim_)
                throw std::out_of_range("SparseMatrix::Builder: index out of range");
            rows_[i][j] += v;
        }
        SparseMatrix build(bool hermitian = true, bool drop_zeros = false) && {
            std::vector<Index> offs(dim_ + 1, 0);
            std::vector<Index> cols;
            std::vector<S> vals;
            for (Index i = 0; i < dim_; ++i) {
                for (const auto& [j, v] : rows_[i]) {
                    if (drop_zeros && std::abs(v) == 0.0) continue;
                    cols.push_back(j);
                    vals.push_back(v);
                }
                offs[i + 1] = static_cast<Index>(cols.size());
            }
            return SparseMatrix(dim_, std::move(offs), std::move(cols), std::move(vals), hermitian);
        }

      private:
        Index dim_;
        std::vector<std::map<Index, S>> rows_;
    };

  private:
    void validate() const {
        if (dim_ < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
        if (static_cast<Index>(row_offsets_.size()) != dim_ + 1)
            throw std::invalid_argument("SparseMatrix: row_offsets length must be dim+1");
        if (row_offsets_.front() != 0 || row_offsets_.back() != nnz())
            throw std::invalid_argument("SparseMatrix: invalid row_offsets range");
        for (Index i = 0; i < dim_; ++i)
            if (row_offsets_[i] > row_offsets_[i + 1])
                throw std::invalid_argument("SparseMatrix: row_offsets not monotone");
        if (col_indices_.size() != values_.size())
            throw std::invalid_argument("SparseMatrix: col/value length mismatch");
        for (Index j : col_indices_)
            if (j < 0 || j >= dim_) throw std::invalid_argument("SparseMatrix: column index out of range");
    }

    Index dim_ = 0;
    std::vector<Index> row_offsets_{0};
    std::vector<Index> col_indices_;
    std::vector<S> values_;
    bool hermitian_ = true;
};

/// Diagonal matrix helper used by generators and tests.
template <class S>
SparseMatrix<S> diagonal_matrix(const std::vector<S>& diag) {
    Index d = static_cast<Index>(diag.size());
    std::vector<Index> offs(d + 1), cols(d);
    for (Index i = 0; i <= d; ++i) offs[i] = i;
    for (Index i = 0; i < d; ++i) cols[i] = i;
    return SparseMatrix<S>(d, std::move(offs), std::move(cols), diag, true);
}

}  // namespace chebfd
