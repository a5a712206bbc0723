#ifndef HEGNN_GEOMGRAPH_HPP
#define HEGNN_GEOMGRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hegnn/linalg.hpp"
#include "hegnn/specfun.hpp"

namespace hegnn::geom {

struct Edge {
    int i = 0;
    int j = 0;
    std::vector<double> scalars; // optional invariant edge attributes
};

// Node-featured point cloud with a directed edge list. Graphs are immutable
// by convention after construction.
struct GeometricGraph {
    Matrix node_scalars;                        // N x C_H
    std::vector<Vec3> coords;                   // N
    std::optional<std::vector<Vec3>> velocities;
    std::vector<Edge> edges;                    // ordered pairs, no self loops
    bool centered = false;

    int num_nodes() const { return static_cast<int>(coords.size()); }

    // Neighbor lists derived from the edge list: neighbors(i) = { j : (i,j) in E }.
    std::vector<std::vector<int>> neighbor_lists() const;

    // Translates the coordinate mean to the origin. No-op when the graph is
    // already flagged centered, which makes centering idempotent bitwise.
    void center();

    void validate() const;

    // Applies an O(3) element to coordinates (and velocities, if present).
    GeometricGraph transformed(const specfun::O3Element& g) const;
    GeometricGraph rotated(const specfun::Rotation3& r) const {
        return transformed({r, specfun::Parity::even});
    }
};

struct SymmetryWitness {
    specfun::O3Element element;
    std::vector<int> permutation; // node i maps to permutation[i]
};

// k equally spaced unit-circle nodes in the z=0 plane, identical unit node
// scalars, complete edges, centered.
GeometricGraph make_kfold(int k);

// Regular polyhedron at unit circumradius, centered, complete edges. The
// dodecahedron is aligned with the icosahedron (vertices at its face
// centers) so both share the same rotation group as enumerated in groups.
GeometricGraph make_polyhedron(const std::string& name);

// Nearest-vertex matching of transformed coordinates. Returns the witness
// permutation when every match lands within tol, the map is a bijection,
// adjacency is preserved, and node scalars agree; otherwise nullopt.
std::optional<SymmetryWitness> is_symmetric_under(const GeometricGraph& g,
                                                  const specfun::O3Element& e,
                                                  double tol = 1e-6);

// Haar-uniform rotation from a normalized four-normal quaternion.
specfun::Rotation3 random_rotation(uint64_t seed);

// Displaces every node along a random direction by a N(0, sigma) draw with
// sigma = epsilon * mean_i ||x_i - x_c||, then re-centers. epsilon = 0 is
// the identity.
GeometricGraph perturb(const GeometricGraph& g, double epsilon, uint64_t seed);

// One record of the charged-particle task: initial state plus the positions
// after `steps` leapfrog steps.
struct NBodySample {
    std::vector<double> charges;
    std::vector<Vec3> positions_t0;
    std::vector<Vec3> velocities_t0;
    std::vector<Vec3> positions_t1;
};

struct NBodyOptions {
    int bodies = 5;
    int steps = 1000;
    double dt = 1e-3;
    // Charges are drawn from {0, 1} by default; the signed variant draws
    // from {-1, +1} instead.
    bool signed_charges = false;
    double softening = 0.05;
    double position_sigma = 0.5;
    double velocity_sigma = 0.5;
};

// Coulomb pair forces q_i q_j (x_i - x_j) / (||x_i - x_j||^2 + delta^2)^(3/2),
// unit masses, leapfrog integration. Deterministic in the seed.
std::vector<NBodySample> nbody_simulate(const NBodyOptions& opt, int samples, uint64_t seed);

// Integrates explicit initial conditions; the equivariance tests drive this
// directly with rotated inputs.
NBodySample integrate_trajectory(std::vector<double> charges,
                                 std::vector<Vec3> positions,
                                 std::vector<Vec3> velocities,
                                 const NBodyOptions& opt);

// Graph view of a sample: charge node scalars, velocities, complete edges
// with e_ij = q_i * q_j.
GeometricGraph sample_to_graph(const NBodySample& sample);

} // namespace hegnn::geom

#endif
