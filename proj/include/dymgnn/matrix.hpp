#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dymgnn {

struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Row-major dense matrix of 64-bit floats.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        if (data_.size() != rows_ * cols_)
            throw ShapeError("DenseMatrix: value count " + std::to_string(data_.size()) +
                             " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const DenseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    bool all_finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Sorted, deduplicated COO matrix with optional per-entry weights.
// A compressed row index is built on demand and cached.
class SparseBinaryMatrix {
public:
    struct Entry {
        std::size_t row, col;
        double weight;
    };

    SparseBinaryMatrix() = default;
    SparseBinaryMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    void add_entry(std::size_t r, std::size_t c, double w = 1.0);
    // Sorts by (row, col) and drops duplicates (first weight wins).
    void finalize();
    bool finalized() const { return finalized_; }

    bool has_entry(std::size_t r, std::size_t c) const;
    double at(std::size_t r, std::size_t c) const;

    // Row pointer array of length rows+1 into the sorted entry list.
    const std::vector<std::size_t>& row_index() const;

    DenseMatrix densify() const;
    SparseBinaryMatrix transposed() const;
    bool is_symmetric() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Entry> entries_;
    bool finalized_ = false;
    mutable std::vector<std::size_t> row_ptr_;
};

// d = s * x with fixed summation order (ascending column within each row).
DenseMatrix spmm(const SparseBinaryMatrix& s, const DenseMatrix& x);
// d = s^T * x, same deterministic order as spmm on the transposed matrix.
DenseMatrix spmm_transposed(const SparseBinaryMatrix& s, const DenseMatrix& x);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);

}  // namespace dymgnn
