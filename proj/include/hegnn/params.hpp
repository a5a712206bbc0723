#ifndef HEGNN_PARAMS_HPP
#define HEGNN_PARAMS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hegnn/error.hpp"

namespace hegnn::model {

struct ModelConfig {
    int max_degree = 2;
    // channels[l] for l = 0..max_degree; channels[0] is the width of the
    // invariant node feature h.
    std::vector<int> channels;
    int hidden_width = 32;
    int layer_count = 2;
    bool use_velocity = false;
    // Degrees whose steerable blocks are initialized from spherical
    // harmonics; everything else stays zero. Defaults to all of 0..L.
    std::vector<int> degree_mask;
    // One scalar gate per (degree, channel) by default; the full per-degree
    // Gram (C_l^2 inner products) is available but off by default.
    bool full_gram = false;
    // Adds a gated center-anchored harmonic Y^(l)((x_i - x_c)/||.||) to the
    // initialization. On degree-regular graphs the neighbor-direction sums
    // cancel at odd degrees in the node mean, so the discrimination protocol
    // runs with this on; it is skipped in unit-gate analysis mode.
    bool center_anchor = false;
    // Optional coordinate update from the degree-1 block; off by default
    // and excluded from the acceptance runs.
    bool coord_degree1_update = false;
    int node_scalar_width = 1;
    int edge_scalar_width = 0;

    void validate() const;
    std::vector<int> active_degrees() const; // validated, ascending
    bool degree_active(int l) const;

    // Desk-scale defaults: h width 16, two degree-1 channels, one channel
    // per higher degree.
    static ModelConfig standard(int max_degree);
};

// Handle to one named dense array inside the flat parameter store.
struct ArrayRef {
    int index = -1;
    int rows = 0;
    int cols = 0;
};

class ParamStore {
public:
    struct Entry {
        std::string name;
        size_t offset = 0;
        size_t size = 0;
        int rows = 0;
        int cols = 0;
    };

    ArrayRef add(const std::string& name, int rows, int cols);

    std::span<double> view(const ArrayRef& ref);
    std::span<const double> view(const ArrayRef& ref) const;

    const std::vector<Entry>& entries() const { return entries_; }
    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }
    size_t total_size() const { return data_.size(); }

private:
    std::vector<Entry> entries_;
    std::vector<double> data_;
};

struct DenseRef {
    ArrayRef w, b;
    int in = 0, out = 0;
};

// Two SiLU hidden layers, linear output.
struct MlpRef {
    ArrayRef w1, b1, w2, b2, w3, b3;
    int in = 0, hidden = 0, out = 0;
};

struct ModelParams {
    ModelConfig config;
    ParamStore store;

    DenseRef embed;                 // node scalars -> h
    MlpRef msg_init;                // (h_i, h_j, e_ij, d^2) -> message
    std::vector<MlpRef> gate_init;  // per active degree >= 1: message -> C_l
    std::vector<MlpRef> gate_anchor; // per active degree >= 1: (h_i, r^2) -> C_l

    struct Layer {
        MlpRef msg;                      // (h_i, h_j, e_ij, d^2, z...) -> message
        MlpRef upd_h;                    // (h_i, mean message) -> C0
        MlpRef gate_x;                   // message -> 1
        std::vector<MlpRef> gate_feat;   // per active degree: message -> C_l
        MlpRef gate_vel;                 // h -> 1, first layer only
        MlpRef gate_coord1;              // h -> 1, only with coord_degree1_update
    };
    std::vector<Layer> layers;

    // Deterministic uniform (Glorot) initialization of all dense layers.
    static ModelParams seeded(const ModelConfig& config, uint64_t seed);

    void save(const std::string& path) const;
    static ModelParams load(const std::string& path);

    int message_input_width(bool with_z) const;
    int z_width() const;
};

} // namespace hegnn::model

#endif
