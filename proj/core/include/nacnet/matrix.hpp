#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace nacnet {

/// Dense row-major matrix of doubles. Sized for desk-scale graphs; all
/// ops are plain loops kept in double precision for the gradient checks.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    bool sameShape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool operator==(const Matrix&) const = default;

    void fill(double v) { data_.assign(data_.size(), v); }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
/// C = A^T * B
Matrix matmulTN(const Matrix& a, const Matrix& b);
/// C = A * B^T
Matrix matmulNT(const Matrix& a, const Matrix& b);

void addInPlace(Matrix& a, const Matrix& b);
void scaleInPlace(Matrix& a, double s);
/// a += s * b
void axpyInPlace(Matrix& a, double s, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);

} // namespace nacnet
