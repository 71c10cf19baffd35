#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "vitalcast/errors.hpp"
#include "vitalcast/matrix.hpp"

using vitalcast::Matrix;

TEST_CASE("construction, indexing, and fill") {
    Matrix m(2, 3, 1.5);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.size() == 6);
    CHECK_FALSE(m.empty());
    CHECK(m(1, 2) == 1.5);

    m(0, 1) = -2.0;
    CHECK(m.storage()[1] == -2.0);  // row-major layout

    m.fill(0.25);
    for (double v : m.storage()) CHECK(v == 0.25);

    CHECK(Matrix().empty());
}

TEST_CASE("from_rows and identity") {
    Matrix a = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(a(0, 0) == 1.0);
    CHECK(a(0, 1) == 2.0);
    CHECK(a(1, 0) == 3.0);
    CHECK(a(1, 1) == 4.0);

    Matrix id = Matrix::identity(3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(id(r, c) == (r == c ? 1.0 : 0.0));
}

TEST_CASE("arithmetic operators") {
    Matrix a = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    Matrix b = Matrix::from_rows({{10.0, 20.0}, {30.0, 40.0}});

    Matrix sum = a + b;
    CHECK(sum == Matrix::from_rows({{11.0, 22.0}, {33.0, 44.0}}));
    Matrix diff = b - a;
    CHECK(diff == Matrix::from_rows({{9.0, 18.0}, {27.0, 36.0}}));
    Matrix scaled = a * 2.0;
    CHECK(scaled == Matrix::from_rows({{2.0, 4.0}, {6.0, 8.0}}));
    CHECK(2.0 * a == scaled);

    Matrix acc = a;
    acc += a;
    acc -= b;
    acc *= -1.0;
    CHECK(acc == Matrix::from_rows({{8.0, 16.0}, {24.0, 32.0}}));
}

TEST_CASE("transpose and matmul hand examples") {
    Matrix a = Matrix::from_rows({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
    Matrix at = a.transposed();
    CHECK(at.rows() == 3);
    CHECK(at.cols() == 2);
    CHECK(at(2, 1) == 6.0);

    Matrix b = Matrix::from_rows({{7.0, 8.0}, {9.0, 10.0}, {11.0, 12.0}});
    Matrix prod = vitalcast::matmul(a, b);
    CHECK(prod == Matrix::from_rows({{58.0, 64.0}, {139.0, 154.0}}));
}

TEST_CASE("matvec, tmatvec, outer, dot") {
    Matrix a = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(vitalcast::matvec(a, {5.0, 6.0}) == std::vector<double>{17.0, 39.0});
    CHECK(vitalcast::tmatvec(a, {5.0, 6.0}) == std::vector<double>{23.0, 34.0});

    Matrix op = vitalcast::outer({1.0, 2.0}, {3.0, 4.0, 5.0});
    CHECK(op == Matrix::from_rows({{3.0, 4.0, 5.0}, {6.0, 8.0, 10.0}}));

    CHECK(vitalcast::dot({1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}) == 32.0);
}

TEST_CASE("all_finite flags NaN and infinity") {
    Matrix m(2, 2, 1.0);
    CHECK(m.all_finite());
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(m.all_finite());

    std::vector<double> v{1.0, 2.0};
    CHECK(vitalcast::all_finite(v));
    v.push_back(std::numeric_limits<double>::infinity());
    CHECK_FALSE(vitalcast::all_finite(v));
}

TEST_CASE("cholesky factors the hand example") {
    Matrix a = Matrix::from_rows({{4.0, 2.0}, {2.0, 3.0}});
    Matrix l = vitalcast::cholesky(a);
    CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(l(0, 1) == 0.0);
    CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(l(1, 1) == doctest::Approx(1.4142135623730951).epsilon(1e-15));
}

TEST_CASE("cholesky_solve solves vector and matrix right-hand sides") {
    Matrix a = Matrix::from_rows({{4.0, 2.0}, {2.0, 3.0}});
    Matrix l = vitalcast::cholesky(a);

    auto x = vitalcast::cholesky_solve(l, std::vector<double>{10.0, 8.0});
    CHECK(x[0] == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.5).epsilon(1e-14));

    Matrix inv = vitalcast::cholesky_solve(l, Matrix::identity(2));
    Matrix should_be_id = vitalcast::matmul(a, inv);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            CHECK(should_be_id(r, c) == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("cholesky solves a larger random SPD system accurately") {
    // A = B·Bᵀ + 0.5·I for a fixed B is symmetric positive definite.
    const std::size_t n = 8;
    Matrix b(n, n);
    double v = 0.1;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            b(r, c) = std::sin(v) * 0.7;
            v += 0.37;
        }
    Matrix a = vitalcast::matmul(b, b.transposed());
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;

    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = static_cast<double>(i) - 3.0;

    Matrix l = vitalcast::cholesky(a);
    auto x = vitalcast::cholesky_solve(l, rhs);
    auto back = vitalcast::matvec(a, x);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(back[i] == doctest::Approx(rhs[i]).epsilon(1e-10));
}

TEST_CASE("cholesky rejects non-positive-definite input") {
    Matrix not_pd = Matrix::from_rows({{1.0, 2.0}, {2.0, 1.0}});
    CHECK_THROWS_AS(vitalcast::cholesky(not_pd), vitalcast::Error);
}

TEST_CASE("shape mismatches are contract violations") {
    Matrix a(2, 3);
    Matrix b(2, 2);
    CHECK_THROWS_AS(vitalcast::matmul(a, b), vitalcast::ContractViolation);
    CHECK_THROWS_AS(a += b, vitalcast::ContractViolation);
    CHECK_THROWS_AS(vitalcast::matvec(a, {1.0, 2.0}), vitalcast::ContractViolation);
    CHECK_THROWS_AS(vitalcast::dot({1.0}, {1.0, 2.0}), vitalcast::ContractViolation);
}
