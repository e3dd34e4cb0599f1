#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mcout {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense n x p record of functional evaluations h(X_t), one row per retained
/// draw. Rows only ever grow through append(); existing rows are never touched.
///
/// A chain may be created empty (0 rows) so that it can be filled
/// incrementally, but every estimator requires at least one row.
class ChainMatrix {
public:
    explicit ChainMatrix(std::size_t cols, std::vector<std::string> labels = {});
    ChainMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                std::vector<std::string> labels = {});

    static ChainMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                 std::vector<std::string> labels = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const;
    std::vector<double> column(std::size_t c) const;
    std::span<const double> values() const noexcept { return values_; }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    /// Label for column c, falling back to "V<c+1>" when none was given.
    std::string label(std::size_t c) const;

    /// Read-only Eigen view over the stored rows.
    Eigen::Map<const RowMatrix> matrix() const;

    /// Appends one row. Throws DimensionError on width mismatch and DataError
    /// on a non-finite value; on error the chain is unchanged.
    void append_row(std::span<const double> row);
    /// Appends a row-major block whose size is a multiple of cols().
    void append_block(std::span<const double> block);
    void reserve(std::size_t rows) { values_.reserve(rows * cols_); }

    friend bool operator==(const ChainMatrix&, const ChainMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
    std::vector<std::string> labels_;
};

/// Returns chain with the rows of block appended after the existing rows.
ChainMatrix append(ChainMatrix chain, const std::vector<std::vector<double>>& block);

/// Keeps rows 1, 1+m, 1+2m, ... (1-based); the result has ceil(n/m) rows.
ChainMatrix thin(const ChainMatrix& chain, std::size_t m);

/// Drops the first k rows. k = 0 is the identity; k >= rows is an error.
ChainMatrix discard_first(const ChainMatrix& chain, std::size_t k);

/// Column-wise sample mean.
Eigen::VectorXd column_means(const ChainMatrix& chain);

}  // namespace mcout
