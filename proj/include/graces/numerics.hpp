#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graces {

// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const;

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool all_finite() const noexcept;
    void fill(double value);

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix transpose(const DenseMatrix& m);

// a * b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// a * bᵀ
DenseMatrix matmul_transposed(const DenseMatrix& a, const DenseMatrix& b);

// aᵀ * b
DenseMatrix transposed_matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix identity(std::size_t n);

std::vector<double> relu(std::span<const double> v);

// Max-subtracted softmax; output strictly positive and sums to 1.
std::vector<double> softmax(std::span<const double> v);

// Euclidean norm of every column.
std::vector<double> col_norms(const DenseMatrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

}  // namespace graces
