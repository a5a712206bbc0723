#ifndef HEGNN_TESTS_ORACLES_HPP
#define HEGNN_TESTS_ORACLES_HPP

// Independent test oracles. These deliberately avoid the construction paths
// they are used to check.

#include <cstdint>
#include <functional>
#include <vector>

#include "hegnn/linalg.hpp"
#include "hegnn/rng.hpp"
#include "hegnn/specfun.hpp"

namespace oracles {

// Solves for the matrix D with Y(R u_k) = D Y(u_k) from random sampled
// directions by least squares: D = T S^T (S S^T)^-1. Exact in exact
// arithmetic for any number of samples >= 2l+1.
inline hegnn::Matrix wigner_from_samples(int l, const hegnn::specfun::Rotation3& r, uint64_t seed) {
    using namespace hegnn;
    const int dim = 2 * l + 1;
    const int samples = 4 * dim;
    Rng rng(seed);
    Matrix s(dim, samples), t(dim, samples);
    for (int k = 0; k < samples; ++k) {
        const Vec3 u = rng.unit_vec3();
        const std::vector<double> yu = specfun::sph_harm(l, specfun::UnitVec3::normalized(u));
        const std::vector<double> yru = specfun::sph_harm(l, specfun::UnitVec3::normalized(r.m.apply(u)));
        for (int i = 0; i < dim; ++i) {
            s(i, k) = yu[static_cast<size_t>(i)];
            t(i, k) = yru[static_cast<size_t>(i)];
        }
    }
    const Matrix st = s.transposed();
    return solve_linear(s.mul(st), s.mul(t.transposed())).transposed();
}

// Central finite differences of f along `count` random unit directions in
// parameter space; returns the max relative error against the provided
// analytic directional derivatives.
inline double finite_difference_max_rel_error(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& at,
    const std::vector<double>& grad,
    uint64_t seed,
    int count = 20,
    double step = 1e-6) {
    hegnn::Rng rng(seed);
    double worst = 0.0;
    for (int c = 0; c < count; ++c) {
        std::vector<double> dir(at.size());
        double n2 = 0.0;
        for (double& d : dir) {
            d = rng.normal();
            n2 += d * d;
        }
        const double inv = 1.0 / std::sqrt(n2);
        std::vector<double> plus = at, minus = at;
        double analytic = 0.0;
        for (size_t i = 0; i < at.size(); ++i) {
            plus[i] += step * dir[i] * inv;
            minus[i] -= step * dir[i] * inv;
            analytic += grad[i] * dir[i] * inv;
        }
        const double numeric = (f(plus) - f(minus)) / (2.0 * step);
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
    return worst;
}

} // namespace oracles

#endif
