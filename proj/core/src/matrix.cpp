#include "nacnet/matrix.hpp"

namespace nacnet {

// ikj loop order keeps the inner loop contiguous in both b and c.
Matrix matmul(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.rows());
    Matrix c(a.rows(), b.cols());
    const int n = a.rows(), k = a.cols(), m = b.cols();
    for (int i = 0; i < n; ++i) {
        double* crow = c.data() + static_cast<std::size_t>(i) * m;
        for (int p = 0; p < k; ++p) {
            double av = a(i, p);
            if (av == 0.0) continue;
            const double* brow = b.data() + static_cast<std::size_t>(p) * m;
            for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmulTN(const Matrix& a, const Matrix& b) {
    assert(a.rows() == b.rows());
    Matrix c(a.cols(), b.cols());
    const int n = a.rows(), k = a.cols(), m = b.cols();
    for (int p = 0; p < n; ++p) {
        const double* brow = b.data() + static_cast<std::size_t>(p) * m;
        for (int i = 0; i < k; ++i) {
            double av = a(p, i);
            if (av == 0.0) continue;
            double* crow = c.data() + static_cast<std::size_t>(i) * m;
            for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmulNT(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.cols());
    Matrix c(a.rows(), b.rows());
    const int n = a.rows(), k = a.cols(), m = b.rows();
    for (int i = 0; i < n; ++i) {
        const double* arow = a.data() + static_cast<std::size_t>(i) * k;
        for (int j = 0; j < m; ++j) {
            const double* brow = b.data() + static_cast<std::size_t>(j) * k;
            double sum = 0.0;
            for (int p = 0; p < k; ++p) sum += arow[p] * brow[p];
            c(i, j) = sum;
        }
    }
    return c;
}

void addInPlace(Matrix& a, const Matrix& b) {
    assert(a.sameShape(b));
    for (std::size_t i = 0; i < a.size(); ++i) a.raw()[i] += b.raw()[i];
}

void scaleInPlace(Matrix& a, double s) {
    for (double& v : a.raw()) v *= s;
}

void axpyInPlace(Matrix& a, double s, const Matrix& b) {
    assert(a.sameShape(b));
    for (std::size_t i = 0; i < a.size(); ++i) a.raw()[i] += s * b.raw()[i];
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    assert(a.sameShape(b));
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) c.raw()[i] = a.raw()[i] * b.raw()[i];
    return c;
}

} // namespace nacnet
