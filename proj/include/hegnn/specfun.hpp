#ifndef HEGNN_SPECFUN_HPP
#define HEGNN_SPECFUN_HPP

#include <vector>

#include "hegnn/linalg.hpp"

namespace hegnn::specfun {

// Degree ceiling for spherical harmonics and representation matrices.
inline constexpr int kMaxDegree = 30;

// Validated unit vector (norm within 1e-8 of 1).
struct UnitVec3 {
    Vec3 v;

    static UnitVec3 checked(const Vec3& v);
    // Normalizes; rejects near-zero input.
    static UnitVec3 normalized(const Vec3& v);
};

// Proper rotation: orthogonal within 1e-10 with det +1 within 1e-10.
struct Rotation3 {
    Mat3 m;

    static Rotation3 identity() { return Rotation3{Mat3::identity()}; }
    static Rotation3 checked(const Mat3& m);
    static Rotation3 from_axis_angle(const Vec3& axis, double angle);

    Rotation3 mul(const Rotation3& o) const { return Rotation3{m.mul(o.m)}; }
    Rotation3 inverse() const { return Rotation3{m.transposed()}; }
};

enum class Parity { even, odd };

// Element of O(3): a proper rotation paired with a parity bit. Odd parity
// corresponds to the improper matrix -R on coordinates.
struct O3Element {
    Rotation3 rotation;
    Parity parity = Parity::even;

    static O3Element identity() { return {Rotation3::identity(), Parity::even}; }
    static O3Element inversion() { return {Rotation3::identity(), Parity::odd}; }

    // Action on 3D coordinates.
    Mat3 cartesian() const {
        return parity == Parity::even ? rotation.m : rotation.m.negated();
    }

    O3Element compose(const O3Element& o) const {
        return {rotation.mul(o.rotation),
                parity == o.parity ? Parity::even : Parity::odd};
    }

    O3Element inverse() const { return {rotation.inverse(), parity}; }

    bool approx_equal(const O3Element& o, double tol) const {
        return parity == o.parity && rotation.m.max_abs_diff(o.rotation.m) <= tol;
    }
};

// Legendre polynomial P_l(t) by the three-term recurrence. Inputs within
// 1e-12 of [-1, 1] are clamped; anything further out is rejected.
double legendre_eval(int l, double t);

// Real spherical harmonics of degree l, component normalization:
// ||Y_l(u)||^2 = 2l+1 for every unit u, so the addition theorem reads
// <Y_l(u), Y_l(v)> = (2l+1) P_l(<u, v>).
//
// Basis order is m = -l..l with sin-type components at m < 0 and cos-type
// at m > 0 (no Condon-Shortley phase). The degree-1 block is
// sqrt(3) * (y, z, x), i.e. degree 1 is the Cartesian vector in (y, z, x)
// order. Everything downstream (Wigner matrices, group averages) uses this
// same basis.
std::vector<double> sph_harm(int l, const UnitVec3& u);

// Wigner-D matrix of a rotation in the real basis above, defined by
// sph_harm(l, R u) = wigner_d(l, R) * sph_harm(l, u). Built recursively
// from the degree-1 block.
Matrix wigner_d(int l, const Rotation3& r);

// All Wigner-D matrices for degrees 0..lmax of one rotation. The recursion
// produces every level anyway; this avoids recomputing them per degree.
std::vector<Matrix> wigner_d_stack(int lmax, const Rotation3& r);

// O(3) representation: sigma_l(parity) * D_l(rotation), where inversion
// contributes the sign (-1)^l.
Matrix o3_rep(int l, const O3Element& g);
std::vector<Matrix> o3_rep_stack(int lmax, const O3Element& g);

// Trace of D_l for a rotation by `angle`: sin((2l+1)a/2) / sin(a/2),
// with the continuity value 2l+1 as the angle approaches 0 or 2*pi.
double rotation_character(int l, double angle);

} // namespace hegnn::specfun

#endif
