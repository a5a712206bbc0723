#include "hegnn/specfun.hpp"

#include <cmath>

#include "hegnn/error.hpp"

namespace hegnn::specfun {

namespace {


void check_degree(int l) {
    require(l >= 0, ErrorCode::invalid_argument, "degree must be non-negative");
    require(l <= kMaxDegree, ErrorCode::invalid_argument, "degree exceeds the supported ceiling of 30");
}

} // namespace

UnitVec3 UnitVec3::checked(const Vec3& v) {
    require(std::abs(v.norm() - 1.0) <= 1e-8, ErrorCode::invalid_argument,
            "unit vector required (norm deviates from 1 by more than 1e-8)");
    return UnitVec3{v};
}

UnitVec3 UnitVec3::normalized(const Vec3& v) {
    const double n = v.norm();
    require(n > 1e-12, ErrorCode::invalid_argument, "cannot normalize a near-zero vector");
    return UnitVec3{v * (1.0 / n)};
}

Rotation3 Rotation3::checked(const Mat3& m) {
    const Mat3 gram = m.transposed().mul(m);
    require(gram.max_abs_diff(Mat3::identity()) <= 1e-10, ErrorCode::invalid_argument,
            "rotation matrix is not orthogonal within 1e-10");
    require(std::abs(m.det() - 1.0) <= 1e-10, ErrorCode::invalid_argument,
            "rotation matrix determinant is not +1 within 1e-10");
    return Rotation3{m};
}

Rotation3 Rotation3::from_axis_angle(const Vec3& axis, double angle) {
    const double n = axis.norm();
    require(n > 1e-12, ErrorCode::invalid_argument, "rotation axis must be nonzero");
    const Vec3 u = axis * (1.0 / n);
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Mat3 m;
    m(0, 0) = c + u.x * u.x * t;
    m(0, 1) = u.x * u.y * t - u.z * s;
    m(0, 2) = u.x * u.z * t + u.y * s;
    m(1, 0) = u.y * u.x * t + u.z * s;
    m(1, 1) = c + u.y * u.y * t;
    m(1, 2) = u.y * u.z * t - u.x * s;
    m(2, 0) = u.z * u.x * t - u.y * s;
    m(2, 1) = u.z * u.y * t + u.x * s;
    m(2, 2) = c + u.z * u.z * t;
    return Rotation3{m};
}

double legendre_eval(int l, double t) {
    require(l >= 0, ErrorCode::invalid_argument, "degree must be non-negative");
    require(std::abs(t) <= 1.0 + 1e-12, ErrorCode::domain,
            "legendre argument outside [-1, 1] beyond rounding tolerance");
    t = std::clamp(t, -1.0, 1.0);
    if (l == 0) return 1.0;
    double pm1 = 1.0;
    double p = t;
    for (int k = 1; k < l; ++k) {
        const double next = ((2 * k + 1) * t * p - k * pm1) / (k + 1);
        pm1 = p;
        p = next;
    }
    return p;
}

std::vector<double> sph_harm(int l, const UnitVec3& u) {
    check_degree(l);
    const double x = u.v.x, y = u.v.y, z = u.v.z;
    std::vector<double> out(static_cast<size_t>(2 * l + 1), 0.0);

    // cos(m phi) sin^m(theta) and sin(m phi) sin^m(theta) as Re/Im of (x+iy)^m.
    std::vector<double> am(static_cast<size_t>(l + 1)), bm(static_cast<size_t>(l + 1));
    am[0] = 1.0;
    bm[0] = 0.0;
    for (int m = 1; m <= l; ++m) {
        am[m] = x * am[m - 1] - y * bm[m - 1];
        bm[m] = x * bm[m - 1] + y * am[m - 1];
    }

    // Q_l^m(z) = P_l^m(cos theta) / sin^m(theta), Condon-Shortley free.
    // Climb from the sectoral value (2m-1)!! to degree l in z.
    double norm_ratio = 1.0; // (l-m)!/(l+m)!
    double sectoral = 1.0;   // (2m-1)!!
    for (int m = 0; m <= l; ++m) {
        if (m > 0) {
            norm_ratio /= static_cast<double>((l - m + 1)) * static_cast<double>(l + m);
            sectoral *= 2 * m - 1;
        }
        double q = sectoral;
        if (l > m) {
            double qm1 = q;
            q = z * (2 * m + 1) * qm1;
            for (int k = m + 2; k <= l; ++k) {
                const double next = ((2 * k - 1) * z * q - (k - 1 + m) * qm1) / (k - m);
                qm1 = q;
                q = next;
            }
        }
        const double scale = std::sqrt((2 * l + 1) * norm_ratio);
        if (m == 0) {
            out[static_cast<size_t>(l)] = scale * q;
        } else {
            const double s2 = std::sqrt(2.0) * scale * q;
            out[static_cast<size_t>(l + m)] = s2 * am[m];
            out[static_cast<size_t>(l - m)] = s2 * bm[m];
        }
    }
    return out;
}

namespace {

// Degree-1 block of the rotation in the (y, z, x) basis order.
Matrix degree1_block(const Mat3& r) {
    Matrix d(3, 3);
    const int map[3] = {1, 2, 0}; // m=-1 -> y, m=0 -> z, m=1 -> x
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d(i, j) = r(map[i], map[j]);
    return d;
}

// Recursion from the degree-1 block after Ivanic & Ruedenberg. `prev` is the
// degree l-1 matrix, `d1` the degree-1 block; indices are m-centered.
class WignerRecursion {
public:
    WignerRecursion(const Matrix& d1, const Matrix& prev, int l)
        : d1_(d1), prev_(prev), l_(l) {}

    double entry(int m, int n) const {
        const int l = l_;
        const double d = (m == 0) ? 1.0 : 0.0;
        const double denom = (std::abs(n) == l)
            ? static_cast<double>(2 * l) * (2 * l - 1)
            : static_cast<double>(l - n) * (l + n);
        const double u = std::sqrt(static_cast<double>(l + m) * (l - m) / denom);
        const double v = 0.5 * std::sqrt((1.0 + d) * (l + std::abs(m) - 1) * (l + std::abs(m)) / denom) * (1.0 - 2.0 * d);
        const double w = -0.5 * std::sqrt(static_cast<double>(l - std::abs(m) - 1) * (l - std::abs(m)) / denom) * (1.0 - d);
        double r = 0.0;
        if (u != 0.0) r += u * term_u(m, n);
        if (v != 0.0) r += v * term_v(m, n);
        if (w != 0.0) r += w * term_w(m, n);
        return r;
    }

private:
    double p(int i, int a, int b) const {
        const int l = l_;
        if (b == l) return d1(i, 1) * prev(a, l - 1) - d1(i, -1) * prev(a, -l + 1);
        if (b == -l) return d1(i, 1) * prev(a, -l + 1) + d1(i, -1) * prev(a, l - 1);
        return d1(i, 0) * prev(a, b);
    }

    double term_u(int m, int n) const { return p(0, m, n); }

    double term_v(int m, int n) const {
        if (m == 0) return p(1, 1, n) + p(-1, -1, n);
        if (m > 0) {
            const double s = (m == 1) ? std::sqrt(2.0) : 1.0;
            const double t = (m == 1) ? 0.0 : 1.0;
            return p(1, m - 1, n) * s - p(-1, -m + 1, n) * t;
        }
        const double s = (m == -1) ? std::sqrt(2.0) : 1.0;
        const double t = (m == -1) ? 0.0 : 1.0;
        return p(1, m + 1, n) * t + p(-1, -m - 1, n) * s;
    }

    double term_w(int m, int n) const {
        if (m > 0) return p(1, m + 1, n) + p(-1, -m - 1, n);
        return p(1, m - 1, n) - p(-1, -m + 1, n);
    }

    double d1(int i, int j) const { return d1_(i + 1, j + 1); }
    double prev(int i, int j) const { return prev_(i + l_ - 1, j + l_ - 1); }

    const Matrix& d1_;
    const Matrix& prev_;
    int l_;
};

} // namespace

std::vector<Matrix> wigner_d_stack(int lmax, const Rotation3& r) {
    check_degree(lmax);
    std::vector<Matrix> stack;
    stack.reserve(static_cast<size_t>(lmax) + 1);
    Matrix d0(1, 1);
    d0(0, 0) = 1.0;
    stack.push_back(d0);
    if (lmax == 0) return stack;
    stack.push_back(degree1_block(r.m));
    for (int l = 2; l <= lmax; ++l) {
        const WignerRecursion rec(stack[1], stack[static_cast<size_t>(l - 1)], l);
        Matrix d(2 * l + 1, 2 * l + 1);
        for (int m = -l; m <= l; ++m)
            for (int n = -l; n <= l; ++n) d(m + l, n + l) = rec.entry(m, n);
        stack.push_back(std::move(d));
    }
    return stack;
}

Matrix wigner_d(int l, const Rotation3& r) {
    return wigner_d_stack(l, r).back();
}

Matrix o3_rep(int l, const O3Element& g) {
    Matrix d = wigner_d(l, g.rotation);
    if (g.parity == Parity::odd && (l % 2) == 1) return d * -1.0;
    return d;
}

std::vector<Matrix> o3_rep_stack(int lmax, const O3Element& g) {
    std::vector<Matrix> stack = wigner_d_stack(lmax, g.rotation);
    if (g.parity == Parity::odd)
        for (int l = 1; l <= lmax; l += 2) stack[static_cast<size_t>(l)] = stack[static_cast<size_t>(l)] * -1.0;
    return stack;
}

double rotation_character(int l, double angle) {
    require(l >= 0, ErrorCode::invalid_argument, "degree must be non-negative");
    const double half = 0.5 * angle;
    const double s = std::sin(half);
    // The limit at angle -> 0 (or 2*pi, by periodicity) is 2l+1.
    if (std::abs(s) < 1e-9) return static_cast<double>(2 * l + 1);
    return std::sin((2 * l + 1) * half) / s;
}

} // namespace hegnn::specfun
