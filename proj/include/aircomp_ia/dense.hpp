#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/scalar.hpp"

namespace aircomp_ia {

/// Column-major dense matrix. Columns are the unit of work everywhere in the
/// construction, so contiguous columns are the right layout.
template <ScalarField S>
class ColMatrix {
public:
    ColMatrix() = default;
    ColMatrix(std::int64_t rows, std::int64_t cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), ScalarTraits<S>::zero()) {}

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }

    S& operator()(std::int64_t i, std::int64_t j) {
        return data_[static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_) + static_cast<std::size_t>(i)];
    }
    const S& operator()(std::int64_t i, std::int64_t j) const {
        return data_[static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_) + static_cast<std::size_t>(i)];
    }

    std::span<S> column(std::int64_t j) {
        return {data_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_),
                static_cast<std::size_t>(rows_)};
    }
    std::span<const S> column(std::int64_t j) const {
        return {data_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_),
                static_cast<std::size_t>(rows_)};
    }

    void set_column(std::int64_t j, const std::vector<S>& values) {
        if (static_cast<std::int64_t>(values.size()) != rows_) {
            throw DimensionError("column length does not match matrix rows");
        }
        auto dst = column(j);
        for (std::size_t i = 0; i < values.size(); ++i) dst[i] = values[i];
    }

    static ColMatrix from_columns(std::int64_t rows, const std::vector<std::vector<S>>& columns) {
        ColMatrix m(rows, static_cast<std::int64_t>(columns.size()));
        for (std::size_t j = 0; j < columns.size(); ++j) {
            m.set_column(static_cast<std::int64_t>(j), columns[j]);
        }
        return m;
    }

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<S> data_;
};

/// Horizontal concatenation [a | b | ...].
template <ScalarField S>
ColMatrix<S> hcat(const std::vector<const ColMatrix<S>*>& blocks) {
    if (blocks.empty()) return {};
    const std::int64_t rows = blocks.front()->rows();
    std::int64_t cols = 0;
    for (const auto* b : blocks) {
        if (b->rows() != rows) throw DimensionError("blocks must share the row count");
        cols += b->cols();
    }
    ColMatrix<S> out(rows, cols);
    std::int64_t at = 0;
    for (const auto* b : blocks) {
        for (std::int64_t j = 0; j < b->cols(); ++j, ++at) {
            auto src = b->column(j);
            auto dst = out.column(at);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
        }
    }
    return out;
}

inline ColMatrix<Complex> to_float_matrix(const ColMatrix<Rational>& m) {
    ColMatrix<Complex> out(m.rows(), m.cols());
    for (std::int64_t j = 0; j < m.cols(); ++j) {
        for (std::int64_t i = 0; i < m.rows(); ++i) {
            out(i, j) = Complex(m(i, j).get_d(), 0.0);
        }
    }
    return out;
}

inline const ColMatrix<Complex>& to_float_matrix(const ColMatrix<Complex>& m) { return m; }

}  // namespace aircomp_ia
