#ifndef HEGNN_MODEL_HPP
#define HEGNN_MODEL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hegnn/autodiff.hpp"
#include "hegnn/geomgraph.hpp"
#include "hegnn/params.hpp"

namespace hegnn::model {

// Per-node state carried between layers: invariant features h, coordinates,
// optional velocities, and one steerable block per active degree. A degree-l
// block is channel-major with C_l chunks of length 2l+1, stored in the real
// spherical-harmonic basis of specfun.
struct SteerableState {
    std::vector<int> degrees; // active degrees, ascending
    std::vector<std::vector<double>> h;
    std::vector<Vec3> x;
    std::vector<Vec3> velocities; // empty when unused
    std::vector<std::vector<std::vector<double>>> feat; // [degree index][node]

    int degree_index(int l) const;
};

struct ForwardOptions {
    // Analysis mode: initialization gates fixed to 1 and plain neighbor sums
    // instead of means, so message inner products reduce to the Legendre
    // double sums of the angle-recovery construction.
    bool unit_gates = false;
};

// Node-mean readout of every head.
struct Pooled {
    std::vector<double> h;
    Vec3 x;
    std::vector<int> degrees;
    std::vector<std::vector<double>> feat; // per degree, block-shaped as above
};

// Initialization of the steerable blocks from neighbor-aggregated spherical
// harmonics of the relative directions; masked degrees stay zero.
SteerableState init_features(const geom::GeometricGraph& g, const ModelParams& params,
                             const ForwardOptions& opts = {});

// One cross-degree invariant message per directed edge, plus the cached
// per-degree inner products z that feed it.
struct EdgeMessages {
    std::vector<std::vector<double>> message; // aligned with graph.edges
    std::vector<std::vector<double>> z;
};
EdgeMessages message(const SteerableState& state, const geom::GeometricGraph& g,
                     const ModelParams& params, int layer);

// Residual update of h, x and every steerable block from the messages.
SteerableState aggregate_update(const SteerableState& state, const geom::GeometricGraph& g,
                                const ModelParams& params, int layer, const EdgeMessages& msgs);

// init_features followed by layer_count message/aggregate rounds.
SteerableState forward(const geom::GeometricGraph& g, const ModelParams& params,
                       const ForwardOptions& opts = {});

Pooled pool(const SteerableState& state);

// Builds the whole forward pass plus a mean-squared-error loss against
// target positions on a tape; param_nodes align with store.entries().
struct TapedLoss {
    ad::Tape::Id loss = -1;
    std::vector<ad::Tape::Id> param_nodes;
};
TapedLoss build_training_tape(ad::Tape& tape, const geom::GeometricGraph& g,
                              const ModelParams& params, const std::vector<Vec3>& targets,
                              const ForwardOptions& opts = {});

// Same tape construction, but the loss is the squared norm of the message of
// the first edge; used by the gradient checks.
TapedLoss build_message_tape(ad::Tape& tape, const geom::GeometricGraph& g,
                             const ModelParams& params);

// Eager counterparts used by finite differencing.
double mse_loss(const geom::GeometricGraph& g, const ModelParams& params,
                const std::vector<Vec3>& targets, const ForwardOptions& opts = {});
double message_loss(const geom::GeometricGraph& g, const ModelParams& params);

// Forward-only discrimination protocol: per trial, fresh seeded parameters
// and a random rotation re-drawn while it maps the structure onto itself;
// the trial succeeds when some requested pooled degree differs relatively by
// more than 1e-3 between the structure and its rotated copy.
struct DiscriminationResult {
    int successes = 0;
    int trials = 0;
    double max_statistic = 0.0;
    bool verdict = false; // majority of trials
};
DiscriminationResult discrimination_trials(const geom::GeometricGraph& structure,
                                           const std::vector<int>& degrees, int trials,
                                           uint64_t seed);
bool discriminates(const geom::GeometricGraph& structure, const std::vector<int>& degrees,
                   int trials, uint64_t seed);

// Norm of the plain vertex-direction spherical-harmonic sum, and the
// distinguishability verdict at the 1e-3 cut.
struct SphSumResult {
    double norm = 0.0;
    bool distinguishable = false;
};
SphSumResult sph_sum_check(const geom::GeometricGraph& structure, int l);

// Recovers the multiset of angle cosines from sum-aggregated inner products
// z_l = (2l+1) * sum_n P_l(t_n), l = 1..M. Rejects M > 12 as ill-conditioned.
std::vector<double> recover_angles(std::span<const double> z_values, int count);

} // namespace hegnn::model

#endif
