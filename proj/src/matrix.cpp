#include "vitalcast/matrix.hpp"

#include <cmath>
#include <string>

#include "vitalcast/errors.hpp"

namespace vitalcast {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.size() ? rows.begin()->size() : 0;
    m.data_.reserve(m.rows_ * m.cols_);
    for (const auto& row : rows) {
        require(row.size() == m.cols_, "Matrix::from_rows: ragged rows");
        m.data_.insert(m.data_.end(), row.begin(), row.end());
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void Matrix::fill(double value) {
    for (auto& v : data_) v = value;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "Matrix +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "Matrix -=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double scalar) {
    for (auto& v : data_) v *= scalar;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Matrix lhs, double scalar) { return lhs *= scalar; }
Matrix operator*(double scalar, Matrix rhs) { return rhs *= scalar; }

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    Matrix out(a.rows(), b.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

std::vector<double> tmatvec(const Matrix& a, const std::vector<double>& x) {
    require(a.rows() == x.size(), "tmatvec: dimension mismatch");
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * xi;
    }
    return out;
}

Matrix outer(const std::vector<double>& a, const std::vector<double>& b) {
    Matrix out(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * b[j];
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    require(a.size() == b.size(), "dot: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

Matrix cholesky(const Matrix& a) {
    require(a.rows() == a.cols(), "cholesky: matrix must be square");
    const std::size_t n = a.rows();
    Matrix l(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw Error("cholesky: matrix not positive definite at pivot " + std::to_string(j));
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = a(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const Matrix& chol_lower, const std::vector<double>& b) {
    const std::size_t n = chol_lower.rows();
    require(chol_lower.cols() == n && b.size() == n, "cholesky_solve: dimension mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[i];
        for (std::size_t k = 0; k < i; ++k) acc -= chol_lower(i, k) * y[k];
        y[i] = acc / chol_lower(i, i);
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= chol_lower(k, ii) * x[k];
        x[ii] = acc / chol_lower(ii, ii);
    }
    return x;
}

Matrix cholesky_solve(const Matrix& chol_lower, const Matrix& b) {
    const std::size_t n = chol_lower.rows();
    require(b.rows() == n, "cholesky_solve: dimension mismatch");
    Matrix x(n, b.cols());
    std::vector<double> col(n);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
        auto sol = cholesky_solve(chol_lower, col);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
    }
    return x;
}

}  // namespace vitalcast
