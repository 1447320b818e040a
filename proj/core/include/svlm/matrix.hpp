#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svlm/bitmask.hpp"

namespace svlm {

class Rng;

// Dense row-major matrix of doubles. All reductions run in a fixed order
// (ascending inner index) so results are reproducible to the bit.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    // Entries ~ uniform(lo, hi) drawn row-major from `rng`.
    static Matrix random_uniform(std::size_t rows, std::size_t cols, Rng& rng, double lo, double hi);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Matrix& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }
    bool operator==(const Matrix& other) const = default;

    // Throws DomainError if any entry is NaN or infinite.
    void ensure_finite(const char* context) const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Standard product; C[i,j] accumulates a[i,k]*b[k,j] with k ascending.
Matrix matmul(const Matrix& a, const Matrix& b);

// out[i,j] = w[i,j] where m is set, else exactly 0.0.
Matrix hadamard_mask(const Matrix& w, const BitMask& m);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double factor);
Matrix transpose(const Matrix& a);
Matrix outer(std::span<const double> u, std::span<const double> v);

// y = W x, ascending-k accumulation per output element.
std::vector<double> matvec(const Matrix& w, std::span<const double> x);
// y = W^T x without materializing the transpose; same accumulation order as
// matvec(transpose(w), x).
std::vector<double> matvec_transposed(const Matrix& w, std::span<const double> x);

} // namespace svlm
