#include "hegnn/geomgraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hegnn/error.hpp"
#include "hegnn/rng.hpp"

namespace hegnn::geom {

using specfun::O3Element;
using specfun::Parity;
using specfun::Rotation3;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kGolden = 1.61803398874989484820458683436563812;

std::vector<Edge> complete_edges(int n) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(n) * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) edges.push_back({i, j, {}});
    return edges;
}

Matrix unit_scalars(int n) {
    Matrix m(n, 1);
    for (int i = 0; i < n; ++i) m(i, 0) = 1.0;
    return m;
}

GeometricGraph from_vertices(std::vector<Vec3> coords) {
    GeometricGraph g;
    g.node_scalars = unit_scalars(static_cast<int>(coords.size()));
    g.coords = std::move(coords);
    g.edges = complete_edges(g.num_nodes());
    g.center();
    return g;
}

} // namespace

std::vector<std::vector<int>> GeometricGraph::neighbor_lists() const {
    std::vector<std::vector<int>> nbrs(static_cast<size_t>(num_nodes()));
    for (const Edge& e : edges) nbrs[static_cast<size_t>(e.i)].push_back(e.j);
    return nbrs;
}

void GeometricGraph::center() {
    if (centered) return;
    Vec3 mean{};
    for (const Vec3& c : coords) mean += c;
    mean = mean * (1.0 / static_cast<double>(coords.size()));
    for (Vec3& c : coords) c -= mean;
    centered = true;
}

void GeometricGraph::validate() const {
    const int n = num_nodes();
    require(node_scalars.rows() == n, ErrorCode::invalid_argument, "node scalar row count mismatch");
    if (velocities) require(static_cast<int>(velocities->size()) == n, ErrorCode::invalid_argument,
                            "velocity count mismatch");
    for (const Edge& e : edges) {
        require(e.i >= 0 && e.i < n && e.j >= 0 && e.j < n, ErrorCode::invalid_argument,
                "edge endpoint out of range");
        require(e.i != e.j, ErrorCode::invalid_argument, "self loops are not allowed");
    }
    if (centered) {
        Vec3 mean{};
        for (const Vec3& c : coords) mean += c;
        mean = mean * (1.0 / static_cast<double>(n));
        require(mean.norm() <= 1e-10, ErrorCode::internal, "centered graph has drifted off origin");
    }
}

GeometricGraph GeometricGraph::transformed(const O3Element& g) const {
    const Mat3 m = g.cartesian();
    GeometricGraph out = *this;
    for (Vec3& c : out.coords) c = m.apply(c);
    if (out.velocities)
        for (Vec3& v : *out.velocities) v = m.apply(v);
    return out;
}

GeometricGraph make_kfold(int k) {
    require(k >= 2, ErrorCode::invalid_argument, "k-fold structures need k >= 2");
    std::vector<Vec3> coords;
    coords.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double a = 2.0 * kPi * i / k;
        coords.push_back({std::cos(a), std::sin(a), 0.0});
    }
    return from_vertices(std::move(coords));
}

GeometricGraph make_polyhedron(const std::string& name) {
    std::vector<Vec3> coords;
    const double s3 = 1.0 / std::sqrt(3.0);
    if (name == "tetrahedron") {
        coords = {{s3, s3, s3}, {s3, -s3, -s3}, {-s3, s3, -s3}, {-s3, -s3, s3}};
    } else if (name == "cube") {
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) coords.push_back({sx * s3, sy * s3, sz * s3});
    } else if (name == "octahedron") {
        coords = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    } else if (name == "icosahedron") {
        const double r = std::sqrt(1.0 + kGolden * kGolden);
        const double a = 1.0 / r, b = kGolden / r;
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                coords.push_back({0.0, s1 * a, s2 * b});
                coords.push_back({s1 * a, s2 * b, 0.0});
                coords.push_back({s2 * b, 0.0, s1 * a});
            }
    } else if (name == "dodecahedron") {
        // Face centers of the icosahedron above, so the two share one
        // rotation group: the 8 cube vertices plus cyclic permutations of
        // (0, phi, 1/phi), all at circumradius sqrt(3) before scaling.
        const double inv = 1.0 / kGolden;
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) coords.push_back({sx * s3, sy * s3, sz * s3});
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                coords.push_back({0.0, s1 * kGolden * s3, s2 * inv * s3});
                coords.push_back({s1 * inv * s3, 0.0, s2 * kGolden * s3});
                coords.push_back({s2 * kGolden * s3, s1 * inv * s3, 0.0});
            }
    } else {
        fail(ErrorCode::invalid_argument, "unknown polyhedron: " + name);
    }
    return from_vertices(std::move(coords));
}

std::optional<SymmetryWitness> is_symmetric_under(const GeometricGraph& g,
                                                  const O3Element& e,
                                                  double tol) {
    require(g.centered, ErrorCode::invalid_argument, "symmetry detection expects a centered graph");
    const Mat3 m = e.cartesian();
    const int n = g.num_nodes();
    std::vector<int> perm(static_cast<size_t>(n), -1);
    std::vector<bool> taken(static_cast<size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const Vec3 moved = m.apply(g.coords[static_cast<size_t>(i)]);
        int best = -1;
        double best_dist = tol;
        for (int j = 0; j < n; ++j) {
            const double d = (moved - g.coords[static_cast<size_t>(j)]).norm();
            if (d <= best_dist) {
                best = j;
                best_dist = d;
            }
        }
        if (best < 0 || taken[static_cast<size_t>(best)]) return std::nullopt;
        // Node features must agree for the graphs to coincide.
        for (int c = 0; c < g.node_scalars.cols(); ++c)
            if (std::abs(g.node_scalars(i, c) - g.node_scalars(best, c)) > tol) return std::nullopt;
        perm[static_cast<size_t>(i)] = best;
        taken[static_cast<size_t>(best)] = true;
    }
    // The induced bijection must commute with adjacency.
    std::set<std::pair<int, int>> edge_set;
    for (const Edge& ed : g.edges) edge_set.insert({ed.i, ed.j});
    for (const Edge& ed : g.edges)
        if (!edge_set.count({perm[static_cast<size_t>(ed.i)], perm[static_cast<size_t>(ed.j)]}))
            return std::nullopt;
    return SymmetryWitness{e, std::move(perm)};
}

Rotation3 random_rotation(uint64_t seed) {
    Rng rng(seed);
    double q[4];
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& c : q) {
            c = rng.normal();
            n2 += c * c;
        }
    } while (n2 < 1e-12);
    const double inv = 1.0 / std::sqrt(n2);
    const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
    Mat3 m;
    m(0, 0) = 1 - 2 * (y * y + z * z);
    m(0, 1) = 2 * (x * y - z * w);
    m(0, 2) = 2 * (x * z + y * w);
    m(1, 0) = 2 * (x * y + z * w);
    m(1, 1) = 1 - 2 * (x * x + z * z);
    m(1, 2) = 2 * (y * z - x * w);
    m(2, 0) = 2 * (x * z - y * w);
    m(2, 1) = 2 * (y * z + x * w);
    m(2, 2) = 1 - 2 * (x * x + y * y);
    return Rotation3{m};
}

GeometricGraph perturb(const GeometricGraph& g, double epsilon, uint64_t seed) {
    require(epsilon >= 0.0, ErrorCode::invalid_argument, "perturbation ratio must be non-negative");
    require(g.centered, ErrorCode::invalid_argument, "perturb expects a centered graph");
    if (epsilon == 0.0) return g;
    double mean_radius = 0.0;
    for (const Vec3& c : g.coords) mean_radius += c.norm();
    mean_radius /= static_cast<double>(g.num_nodes());
    const double sigma = epsilon * mean_radius;
    Rng rng(seed);
    GeometricGraph out = g;
    for (Vec3& c : out.coords) {
        const Vec3 dir = rng.unit_vec3();
        c += dir * (sigma * rng.normal());
    }
    out.centered = false;
    out.center();
    return out;
}

namespace {

void accelerations(const std::vector<double>& q, const std::vector<Vec3>& x,
                   double softening, std::vector<Vec3>& acc) {
    const size_t n = x.size();
    for (Vec3& a : acc) a = {};
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const Vec3 d = x[i] - x[j];
            const double r2 = d.norm2() + softening * softening;
            const double f = q[i] * q[j] / (r2 * std::sqrt(r2));
            const Vec3 fij = d * f;
            // equal and opposite accumulation keeps total momentum exact
            acc[i] += fij;
            acc[j] -= fij;
        }
    }
}

} // namespace

NBodySample integrate_trajectory(std::vector<double> charges,
                                 std::vector<Vec3> positions,
                                 std::vector<Vec3> velocities,
                                 const NBodyOptions& opt) {
    require(positions.size() >= 2, ErrorCode::invalid_argument, "at least two bodies required");
    require(opt.dt > 0.0, ErrorCode::invalid_argument, "time step must be positive");
    require(charges.size() == positions.size() && velocities.size() == positions.size(),
            ErrorCode::invalid_argument, "charge/position/velocity count mismatch");
    NBodySample sample;
    sample.charges = charges;
    sample.positions_t0 = positions;
    sample.velocities_t0 = velocities;

    std::vector<Vec3> acc(positions.size());
    accelerations(charges, positions, opt.softening, acc);
    for (int step = 0; step < opt.steps; ++step) {
        // kick-drift-kick leapfrog
        for (size_t i = 0; i < positions.size(); ++i) velocities[i] += acc[i] * (0.5 * opt.dt);
        for (size_t i = 0; i < positions.size(); ++i) positions[i] += velocities[i] * opt.dt;
        accelerations(charges, positions, opt.softening, acc);
        for (size_t i = 0; i < positions.size(); ++i) velocities[i] += acc[i] * (0.5 * opt.dt);
    }
    sample.positions_t1 = std::move(positions);
    return sample;
}

std::vector<NBodySample> nbody_simulate(const NBodyOptions& opt, int samples, uint64_t seed) {
    require(opt.bodies >= 2, ErrorCode::invalid_argument, "at least two bodies required");
    require(opt.dt > 0.0, ErrorCode::invalid_argument, "time step must be positive");
    require(samples >= 1, ErrorCode::invalid_argument, "at least one sample required");
    std::vector<NBodySample> out;
    out.reserve(static_cast<size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, static_cast<uint64_t>(s)));
        std::vector<double> charges(static_cast<size_t>(opt.bodies));
        for (double& q : charges) {
            const bool bit = rng.next_u64() & 1;
            q = opt.signed_charges ? (bit ? 1.0 : -1.0) : (bit ? 1.0 : 0.0);
        }
        std::vector<Vec3> pos(static_cast<size_t>(opt.bodies));
        std::vector<Vec3> vel(static_cast<size_t>(opt.bodies));
        for (Vec3& p : pos) p = rng.normal_vec3() * opt.position_sigma;
        for (Vec3& v : vel) v = rng.normal_vec3() * opt.velocity_sigma;
        out.push_back(integrate_trajectory(std::move(charges), std::move(pos), std::move(vel), opt));
    }
    return out;
}

GeometricGraph sample_to_graph(const NBodySample& sample) {
    const int n = static_cast<int>(sample.charges.size());
    GeometricGraph g;
    g.node_scalars = Matrix(n, 1);
    for (int i = 0; i < n; ++i) g.node_scalars(i, 0) = sample.charges[static_cast<size_t>(i)];
    g.coords = sample.positions_t0;
    g.velocities = sample.velocities_t0;
    g.edges = complete_edges(n);
    for (Edge& e : g.edges)
        e.scalars = {sample.charges[static_cast<size_t>(e.i)] * sample.charges[static_cast<size_t>(e.j)]};
    return g;
}

} // namespace hegnn::geom
