#include "hegnn/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hegnn {

Matrix Matrix::operator+(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::invalid_argument, "matrix shape mismatch");
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::invalid_argument, "matrix shape mismatch");
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

Matrix Matrix::operator*(double s) const {
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
}

Matrix Matrix::mul(const Matrix& o) const {
    require(cols_ == o.rows_, ErrorCode::invalid_argument, "matrix shape mismatch");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

Matrix Matrix::transposed() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

std::vector<double> Matrix::apply(const std::vector<double>& v) const {
    require(static_cast<size_t>(cols_) == v.size(), ErrorCode::invalid_argument, "matrix/vector shape mismatch");
    std::vector<double> r(static_cast<size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[static_cast<size_t>(j)];
        r[static_cast<size_t>(i)] = s;
    }
    return r;
}

double Matrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::max_abs_diff(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::invalid_argument, "matrix shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - o.data_[i]));
    return m;
}

Matrix solve_linear(Matrix a, Matrix b) {
    require(a.rows() == a.cols(), ErrorCode::invalid_argument, "solve_linear: square matrix required");
    require(a.rows() == b.rows(), ErrorCode::invalid_argument, "solve_linear: shape mismatch");
    const int n = a.rows();
    const int m = b.cols();
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        require(std::abs(a(pivot, col)) > 1e-300, ErrorCode::domain, "solve_linear: singular matrix");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            for (int j = 0; j < m; ++j) std::swap(b(col, j), b(pivot, j));
        }
        const double inv = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            for (int j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
        }
    }
    Matrix x(n, m);
    for (int r = n - 1; r >= 0; --r) {
        for (int j = 0; j < m; ++j) {
            double s = b(r, j);
            for (int k = r + 1; k < n; ++k) s -= a(r, k) * x(k, j);
            x(r, j) = s / a(r, r);
        }
    }
    return x;
}

std::vector<double> symmetric_eigenvalues(Matrix m) {
    require(m.rows() == m.cols(), ErrorCode::invalid_argument, "symmetric_eigenvalues: square matrix required");
    const int n = m.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(m(p, q)) < 1e-300) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = m(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

int symmetric_rank(const Matrix& m, double rel_tol) {
    std::vector<double> eig = symmetric_eigenvalues(m);
    double sigma_max = 0.0;
    for (double e : eig) sigma_max = std::max(sigma_max, std::abs(e));
    if (sigma_max == 0.0) return 0;
    int rank = 0;
    for (double e : eig)
        if (std::abs(e) > rel_tol * sigma_max) ++rank;
    return rank;
}

} // namespace hegnn
