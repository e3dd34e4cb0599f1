#include "mcout/chain.hpp"

#include <cmath>

#include "mcout/errors.hpp"

namespace mcout {

namespace {

void check_labels(std::size_t cols, const std::vector<std::string>& labels) {
    if (!labels.empty() && labels.size() != cols) {
        throw DimensionError("expected " + std::to_string(cols) + " column labels, got " +
                             std::to_string(labels.size()));
    }
}

void check_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw DataError("chain values must be finite");
    }
}

}  // namespace

ChainMatrix::ChainMatrix(std::size_t cols, std::vector<std::string> labels)
    : cols_(cols), labels_(std::move(labels)) {
    if (cols_ == 0) throw DimensionError("chain must have at least one column");
    check_labels(cols_, labels_);
}

ChainMatrix::ChainMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                         std::vector<std::string> labels)
    : rows_(rows), cols_(cols), values_(std::move(values)), labels_(std::move(labels)) {
    if (cols_ == 0) throw DimensionError("chain must have at least one column");
    if (values_.size() != rows_ * cols_) {
        throw DimensionError("value count does not match rows x cols");
    }
    check_labels(cols_, labels_);
    check_finite(values_);
}

ChainMatrix ChainMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                   std::vector<std::string> labels) {
    if (rows.empty()) throw DimensionError("from_rows needs at least one row");
    ChainMatrix out(rows.front().size(), std::move(labels));
    out.reserve(rows.size());
    for (const auto& r : rows) out.append_row(r);
    return out;
}

std::span<const double> ChainMatrix::row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
}

std::vector<double> ChainMatrix::column(std::size_t c) const {
    if (c >= cols_) throw DimensionError("column index out of range");
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = values_[r * cols_ + c];
    return out;
}

std::string ChainMatrix::label(std::size_t c) const {
    if (c < labels_.size()) return labels_[c];
    return "V" + std::to_string(c + 1);
}

Eigen::Map<const RowMatrix> ChainMatrix::matrix() const {
    return {values_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
}

void ChainMatrix::append_row(std::span<const double> row) {
    if (row.size() != cols_) {
        throw DimensionError("row width " + std::to_string(row.size()) + " does not match " +
                             std::to_string(cols_) + " columns");
    }
    check_finite(row);
    values_.insert(values_.end(), row.begin(), row.end());
    ++rows_;
}

void ChainMatrix::append_block(std::span<const double> block) {
    if (block.size() % cols_ != 0) {
        throw DimensionError("block size is not a multiple of the column count");
    }
    check_finite(block);
    values_.insert(values_.end(), block.begin(), block.end());
    rows_ += block.size() / cols_;
}

ChainMatrix append(ChainMatrix chain, const std::vector<std::vector<double>>& block) {
    // Validate everything first so a bad row leaves no partial append behind.
    for (const auto& r : block) {
        if (r.size() != chain.cols()) throw DimensionError("block width does not match chain");
        check_finite(r);
    }
    chain.reserve(chain.rows() + block.size());
    for (const auto& r : block) chain.append_row(r);
    return chain;
}

ChainMatrix thin(const ChainMatrix& chain, std::size_t m) {
    if (m == 0) throw ParameterError("thinning interval m must be >= 1");
    ChainMatrix out(chain.cols(), chain.labels());
    out.reserve((chain.rows() + m - 1) / m);
    for (std::size_t r = 0; r < chain.rows(); r += m) out.append_row(chain.row(r));
    return out;
}

ChainMatrix discard_first(const ChainMatrix& chain, std::size_t k) {
    if (k == 0) return chain;
    if (k >= chain.rows()) throw InsufficientDataError("discard would remove every row");
    auto kept = chain.values().subspan(k * chain.cols());
    return {chain.rows() - k, chain.cols(), std::vector<double>(kept.begin(), kept.end()),
            chain.labels()};
}

Eigen::VectorXd column_means(const ChainMatrix& chain) {
    if (chain.empty()) throw InsufficientDataError("mean of an empty chain");
    return chain.matrix().colwise().mean().transpose();
}

}  // namespace mcout
