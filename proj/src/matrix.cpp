#include "dymgnn/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace dymgnn {

bool DenseMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void SparseBinaryMatrix::add_entry(std::size_t r, std::size_t c, double w) {
    if (r >= rows_ || c >= cols_)
        throw ShapeError("sparse entry (" + std::to_string(r) + "," + std::to_string(c) +
                         ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    entries_.push_back({r, c, w});
    finalized_ = false;
    row_ptr_.clear();
}

void SparseBinaryMatrix::finalize() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    entries_.erase(std::unique(entries_.begin(), entries_.end(),
                               [](const Entry& a, const Entry& b) {
                                   return a.row == b.row && a.col == b.col;
                               }),
                   entries_.end());
    finalized_ = true;
    row_ptr_.clear();
}

bool SparseBinaryMatrix::has_entry(std::size_t r, std::size_t c) const {
    return at(r, c) != 0.0;
}

double SparseBinaryMatrix::at(std::size_t r, std::size_t c) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{r, c, 0.0},
                               [](const Entry& a, const Entry& b) {
                                   return a.row != b.row ? a.row < b.row : a.col < b.col;
                               });
    if (it != entries_.end() && it->row == r && it->col == c) return it->weight;
    return 0.0;
}

const std::vector<std::size_t>& SparseBinaryMatrix::row_index() const {
    if (row_ptr_.empty()) {
        row_ptr_.assign(rows_ + 1, 0);
        for (const Entry& e : entries_) ++row_ptr_[e.row + 1];
        for (std::size_t i = 0; i < rows_; ++i) row_ptr_[i + 1] += row_ptr_[i];
    }
    return row_ptr_;
}

DenseMatrix SparseBinaryMatrix::densify() const {
    DenseMatrix d(rows_, cols_);
    for (const Entry& e : entries_) d(e.row, e.col) = e.weight;
    return d;
}

SparseBinaryMatrix SparseBinaryMatrix::transposed() const {
    SparseBinaryMatrix t(cols_, rows_);
    for (const Entry& e : entries_) t.add_entry(e.col, e.row, e.weight);
    t.finalize();
    return t;
}

bool SparseBinaryMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (const Entry& e : entries_)
        if (at(e.col, e.row) != e.weight) return false;
    return true;
}

DenseMatrix spmm(const SparseBinaryMatrix& s, const DenseMatrix& x) {
    if (s.cols() != x.rows())
        throw ShapeError("spmm: " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                         " * " + x.shape_str());
    DenseMatrix out(s.rows(), x.cols());
    // Entries are sorted (row, col): within a row, accumulation runs in
    // ascending column order, so the reduction order is fixed.
    for (const auto& e : s.entries())
        for (std::size_t c = 0; c < x.cols(); ++c)
            out(e.row, c) += e.weight * x(e.col, c);
    return out;
}

DenseMatrix spmm_transposed(const SparseBinaryMatrix& s, const DenseMatrix& x) {
    if (s.rows() != x.rows())
        throw ShapeError("spmm_transposed: " + std::to_string(s.cols()) + "x" +
                         std::to_string(s.rows()) + " * " + x.shape_str());
    DenseMatrix out(s.cols(), x.cols());
    for (const auto& e : s.entries())
        for (std::size_t c = 0; c < x.cols(); ++c)
            out(e.col, c) += e.weight * x(e.row, c);
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw ShapeError("matmul: " + a.shape_str() + " * " + b.shape_str());
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

}  // namespace dymgnn
