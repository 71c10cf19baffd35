#ifndef VITALCAST_MATRIX_HPP
#define VITALCAST_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace vitalcast {

/// Dense row-major matrix of 64-bit floats. Value semantics throughout; the
/// flat storage is exposed so optimizers can treat weights as one vector.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    Matrix transposed() const;
    bool all_finite() const;
    void fill(double value);

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double scalar);

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Matrix lhs, double scalar);
Matrix operator*(double scalar, Matrix rhs);

Matrix matmul(const Matrix& a, const Matrix& b);

/// A·x for a vector x of length a.cols().
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

/// Aᵀ·x for a vector x of length a.rows() (no explicit transpose).
std::vector<double> tmatvec(const Matrix& a, const std::vector<double>& x);

/// Column vector a times row vector b: rows = a.size(), cols = b.size().
Matrix outer(const std::vector<double>& a, const std::vector<double>& b);

double dot(const std::vector<double>& a, const std::vector<double>& b);
bool all_finite(const std::vector<double>& v);

/// Lower-triangular L with A = L·Lᵀ. Requires a symmetric input; throws
/// Error if A is not positive definite (non-positive pivot).
Matrix cholesky(const Matrix& a);

/// Solves A·x = b given L = cholesky(A), via forward then back substitution.
std::vector<double> cholesky_solve(const Matrix& chol_lower, const std::vector<double>& b);

/// Column-wise solve for a whole right-hand-side matrix.
Matrix cholesky_solve(const Matrix& chol_lower, const Matrix& b);

}  // namespace vitalcast

#endif
