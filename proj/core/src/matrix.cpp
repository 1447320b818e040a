#include "svlm/matrix.hpp"

#include <cmath>
#include <string>

#include "svlm/errors.hpp"
#include "svlm/rng.hpp"

namespace svlm {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("Matrix: data length " + std::to_string(data_.size()) + " != " +
                             std::to_string(rows_) + "x" + std::to_string(cols_));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::random_uniform(std::size_t rows, std::size_t cols, Rng& rng, double lo, double hi) {
    Matrix m(rows, cols);
    for (double& v : m.data_) v = rng.uniform(lo, hi);
    return m;
}

void Matrix::ensure_finite(const char* context) const {
    for (std::size_t k = 0; k < data_.size(); ++k)
        if (!std::isfinite(data_[k]))
            throw DomainError(std::string(context) + ": non-finite entry at flat index " + std::to_string(k));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    Matrix c(a.rows(), b.cols());
    // i,k,j loop order; each c(i,j) still accumulates in ascending k.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    c.ensure_finite("matmul");
    return c;
}

Matrix hadamard_mask(const Matrix& w, const BitMask& m) {
    if (w.rows() != m.rows() || w.cols() != m.cols())
        throw DimensionError("hadamard_mask: shape mismatch");
    Matrix out(w.rows(), w.cols());
    for (std::size_t k = 0; k < w.size(); ++k) out.data()[k] = m.get_flat(k) ? w.data()[k] : 0.0;
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw DimensionError("add: shape mismatch");
    Matrix out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] += b.data()[k];
    out.ensure_finite("add");
    return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw DimensionError("sub: shape mismatch");
    Matrix out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] -= b.data()[k];
    out.ensure_finite("sub");
    return out;
}

Matrix scale(const Matrix& a, double factor) {
    Matrix out = a;
    for (double& v : out.data()) v *= factor;
    out.ensure_finite("scale");
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix outer(std::span<const double> u, std::span<const double> v) {
    Matrix out(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * v[j];
    out.ensure_finite("outer");
    return out;
}

std::vector<double> matvec(const Matrix& w, std::span<const double> x) {
    if (w.cols() != x.size())
        throw DimensionError("matvec: " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                             " times vector of length " + std::to_string(x.size()));
    std::vector<double> y(w.rows(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i) {
        double acc = 0.0;
        const double* row = w.data().data() + i * w.cols();
        for (std::size_t k = 0; k < w.cols(); ++k) acc += row[k] * x[k];
        y[i] = acc;
    }
    return y;
}

std::vector<double> matvec_transposed(const Matrix& w, std::span<const double> x) {
    if (w.rows() != x.size())
        throw DimensionError("matvec_transposed: " + std::to_string(w.rows()) + "x" +
                             std::to_string(w.cols()) + " transposed times vector of length " +
                             std::to_string(x.size()));
    std::vector<double> y(w.cols(), 0.0);
    for (std::size_t k = 0; k < w.rows(); ++k) {
        const double xk = x[k];
        const double* row = w.data().data() + k * w.cols();
        for (std::size_t j = 0; j < w.cols(); ++j) y[j] += row[j] * xk;
    }
    return y;
}

} // namespace svlm
