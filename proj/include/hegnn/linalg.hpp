#ifndef HEGNN_LINALG_HPP
#define HEGNN_LINALG_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hegnn/error.hpp"

namespace hegnn {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// 3x3 matrix, row major.
struct Mat3 {
    std::array<double, 9> a{};

    static Mat3 identity() {
        Mat3 m;
        m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return m;
    }

    double operator()(int r, int c) const { return a[static_cast<size_t>(3 * r + c)]; }
    double& operator()(int r, int c) { return a[static_cast<size_t>(3 * r + c)]; }

    Vec3 apply(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
                a[3] * v.x + a[4] * v.y + a[5] * v.z,
                a[6] * v.x + a[7] * v.y + a[8] * v.z};
    }

    Mat3 mul(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    Mat3 negated() const {
        Mat3 r;
        for (size_t i = 0; i < 9; ++i) r.a[i] = -a[i];
        return r;
    }

    double det() const {
        return a[0] * (a[4] * a[8] - a[5] * a[7])
             - a[1] * (a[3] * a[8] - a[5] * a[6])
             + a[2] * (a[3] * a[7] - a[4] * a[6]);
    }

    double max_abs_diff(const Mat3& o) const {
        double m = 0.0;
        for (size_t i = 0; i < 9; ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
        return m;
    }
};

// Dense row-major matrix of doubles; small sizes only (at most ~61x61 here).
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(double s) const;
    Matrix mul(const Matrix& o) const;
    Matrix transposed() const;

    std::vector<double> apply(const std::vector<double>& v) const;

    double trace() const;
    double max_abs() const;
    double max_abs_diff(const Matrix& o) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Solves A X = B for square A by Gaussian elimination with partial pivoting.
Matrix solve_linear(Matrix a, Matrix b);

// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, ascending.
std::vector<double> symmetric_eigenvalues(Matrix m);

// Rank by thresholding singular values at `rel_tol * sigma_max`. For the
// symmetric matrices used here the singular values are |eigenvalues|.
int symmetric_rank(const Matrix& m, double rel_tol);

} // namespace hegnn

#endif
