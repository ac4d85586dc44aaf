#include "graces/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graces/errors.hpp"

namespace graces {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw InvalidArgument("DenseMatrix: entry count does not match rows x cols");
    }
}

std::vector<double> DenseMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void DenseMatrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("matmul: inner dimensions differ");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto src = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aik * src[j];
        }
    }
    return out;
}

DenseMatrix matmul_transposed(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw InvalidArgument("matmul_transposed: inner dimensions differ");
    DenseMatrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
    return out;
}

DenseMatrix transposed_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw InvalidArgument("transposed_matmul: inner dimensions differ");
    DenseMatrix out(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        auto arow = a.row(k);
        auto brow = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            auto dst = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aki * brow[j];
        }
    }
    return out;
}

DenseMatrix identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

std::vector<double> relu(std::span<const double> v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return x > 0.0 ? x : 0.0; });
    return out;
}

std::vector<double> softmax(std::span<const double> v) {
    if (v.empty()) return {};
    const double peak = *std::max_element(v.begin(), v.end());
    std::vector<double> out(v.size());
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - peak);
        total += out[i];
    }
    for (double& x : out) {
        x /= total;
        // keep components strictly positive for extreme logit gaps
        x = std::max(x, std::numeric_limits<double>::min());
    }
    return out;
}

std::vector<double> col_norms(const DenseMatrix& m) {
    std::vector<double> sq(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) sq[c] += row[c] * row[c];
    }
    for (double& x : sq) x = std::sqrt(x);
    return sq;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace graces
