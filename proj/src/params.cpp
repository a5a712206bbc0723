#include "hegnn/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "hegnn/rng.hpp"

namespace hegnn::model {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

} // namespace

void ModelConfig::validate() const {
    require(max_degree >= 0 && max_degree <= 30, ErrorCode::invalid_argument,
            "max_degree must lie in [0, 30]");
    require(static_cast<int>(channels.size()) == max_degree + 1, ErrorCode::invalid_argument,
            "channels must list one entry per degree 0..max_degree");
    require(hidden_width >= 1, ErrorCode::invalid_argument, "hidden_width must be positive");
    require(layer_count >= 0, ErrorCode::invalid_argument, "layer_count must be non-negative");
    require(node_scalar_width >= 1, ErrorCode::invalid_argument, "node_scalar_width must be positive");
    require(edge_scalar_width >= 0, ErrorCode::invalid_argument, "edge_scalar_width must be non-negative");
    require(channels[0] >= 1, ErrorCode::invalid_argument, "degree-0 channel count must be positive");
    for (int l : degree_mask) {
        require(l >= 0 && l <= max_degree, ErrorCode::invalid_argument,
                "degree_mask entries must lie in 0..max_degree");
        require(channels[static_cast<size_t>(l)] >= 1, ErrorCode::invalid_argument,
                "active degrees need at least one channel");
    }
}

std::vector<int> ModelConfig::active_degrees() const {
    std::vector<int> degrees = degree_mask;
    if (degrees.empty())
        for (int l = 0; l <= max_degree; ++l) degrees.push_back(l);
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    return degrees;
}

bool ModelConfig::degree_active(int l) const {
    const std::vector<int> degrees = active_degrees();
    return std::find(degrees.begin(), degrees.end(), l) != degrees.end();
}

ModelConfig ModelConfig::standard(int max_degree) {
    ModelConfig cfg;
    cfg.max_degree = max_degree;
    cfg.channels.assign(static_cast<size_t>(max_degree) + 1, 1);
    cfg.channels[0] = 16;
    if (max_degree >= 1) cfg.channels[1] = 2;
    return cfg;
}

ArrayRef ParamStore::add(const std::string& name, int rows, int cols) {
    require(rows >= 1 && cols >= 1, ErrorCode::invalid_argument, "array shape must be positive");
    for (const Entry& e : entries_)
        require(e.name != name, ErrorCode::internal, "duplicate parameter name: " + name);
    Entry e;
    e.name = name;
    e.offset = data_.size();
    e.size = static_cast<size_t>(rows) * cols;
    e.rows = rows;
    e.cols = cols;
    entries_.push_back(e);
    data_.resize(data_.size() + e.size, 0.0);
    return ArrayRef{static_cast<int>(entries_.size()) - 1, rows, cols};
}

std::span<double> ParamStore::view(const ArrayRef& ref) {
    const Entry& e = entries_.at(static_cast<size_t>(ref.index));
    return std::span<double>(data_).subspan(e.offset, e.size);
}

std::span<const double> ParamStore::view(const ArrayRef& ref) const {
    const Entry& e = entries_.at(static_cast<size_t>(ref.index));
    return std::span<const double>(data_).subspan(e.offset, e.size);
}

namespace {

MlpRef add_mlp(ParamStore& store, const std::string& name, int in, int hidden, int out) {
    MlpRef m;
    m.in = in;
    m.hidden = hidden;
    m.out = out;
    m.w1 = store.add(name + ".w1", hidden, in);
    m.b1 = store.add(name + ".b1", hidden, 1);
    m.w2 = store.add(name + ".w2", hidden, hidden);
    m.b2 = store.add(name + ".b2", hidden, 1);
    m.w3 = store.add(name + ".w3", out, hidden);
    m.b3 = store.add(name + ".b3", out, 1);
    return m;
}

DenseRef add_dense(ParamStore& store, const std::string& name, int in, int out) {
    DenseRef d;
    d.in = in;
    d.out = out;
    d.w = store.add(name + ".w", out, in);
    d.b = store.add(name + ".b", out, 1);
    return d;
}

ModelParams build_layout(const ModelConfig& config) {
    config.validate();
    ModelParams params;
    params.config = config;
    ParamStore& store = params.store;

    const int c0 = config.channels[0];
    const int hidden = config.hidden_width;
    const std::vector<int> degrees = config.active_degrees();

    params.embed = add_dense(store, "embed", config.node_scalar_width, c0);
    params.msg_init = add_mlp(store, "init.msg",
                              2 * c0 + config.edge_scalar_width + 1, hidden, hidden);
    // Degree 0 is the invariant feature h itself: it has no gated block, it
    // only contributes channel products to the message inputs.
    for (int l : degrees)
        if (l >= 1)
            params.gate_init.push_back(add_mlp(store, "init.gate" + std::to_string(l), hidden, hidden,
                                               config.channels[static_cast<size_t>(l)]));
    if (config.center_anchor)
        for (int l : degrees)
            if (l >= 1)
                params.gate_anchor.push_back(add_mlp(store, "init.anchor" + std::to_string(l), c0 + 1, hidden,
                                                     config.channels[static_cast<size_t>(l)]));

    params.layers.resize(static_cast<size_t>(config.layer_count));
    for (int k = 0; k < config.layer_count; ++k) {
        const std::string prefix = "layer" + std::to_string(k);
        ModelParams::Layer& layer = params.layers[static_cast<size_t>(k)];
        layer.msg = add_mlp(store, prefix + ".msg",
                            params.message_input_width(true), hidden, hidden);
        layer.upd_h = add_mlp(store, prefix + ".h", c0 + hidden, hidden, c0);
        layer.gate_x = add_mlp(store, prefix + ".x", hidden, hidden, 1);
        for (int l : degrees)
            if (l >= 1)
                layer.gate_feat.push_back(add_mlp(store, prefix + ".gate" + std::to_string(l), hidden, hidden,
                                                  config.channels[static_cast<size_t>(l)]));
        if (config.use_velocity && k == 0)
            layer.gate_vel = add_mlp(store, prefix + ".vel", c0, hidden, 1);
        if (config.coord_degree1_update && config.degree_active(1))
            layer.gate_coord1 = add_mlp(store, prefix + ".coord1", c0, hidden, 1);
    }
    return params;
}

} // namespace

int ModelParams::z_width() const {
    int z = 0;
    for (int l : config.active_degrees()) {
        const int c = config.channels[static_cast<size_t>(l)];
        // degree 0 always contributes channel-wise h products
        z += (config.full_gram && l >= 1) ? c * c : c;
    }
    return z;
}

int ModelParams::message_input_width(bool with_z) const {
    const int base = 2 * config.channels[0] + config.edge_scalar_width + 1;
    return with_z ? base + z_width() : base;
}

ModelParams ModelParams::seeded(const ModelConfig& config, uint64_t seed) {
    ModelParams params = build_layout(config);
    Rng rng(derive_seed(seed, 0xA11CE));
    for (const ParamStore::Entry& e : params.store.entries()) {
        std::span<double> data = params.store.flat().subspan(e.offset, e.size);
        if (e.cols == 1 && e.name.ends_with(".b")) continue; // dense biases stay zero
        if (e.name.ends_with(".b1") || e.name.ends_with(".b2") || e.name.ends_with(".b3")) continue;
        const double bound = std::sqrt(6.0 / static_cast<double>(e.rows + e.cols));
        for (double& w : data) w = rng.uniform(-bound, bound);
    }
    return params;
}

void ModelParams::save(const std::string& path) const {
    json doc;
    doc["format"] = "hegnn-model";
    doc["version"] = kFormatVersion;
    json cfg;
    cfg["max_degree"] = config.max_degree;
    cfg["channels"] = config.channels;
    cfg["hidden_width"] = config.hidden_width;
    cfg["layer_count"] = config.layer_count;
    cfg["use_velocity"] = config.use_velocity;
    cfg["degree_mask"] = config.degree_mask;
    cfg["full_gram"] = config.full_gram;
    cfg["center_anchor"] = config.center_anchor;
    cfg["coord_degree1_update"] = config.coord_degree1_update;
    cfg["node_scalar_width"] = config.node_scalar_width;
    cfg["edge_scalar_width"] = config.edge_scalar_width;
    doc["config"] = cfg;
    json arrays = json::object();
    for (const ParamStore::Entry& e : store.entries()) {
        const auto data = store.flat().subspan(e.offset, e.size);
        arrays[e.name] = std::vector<double>(data.begin(), data.end());
    }
    doc["arrays"] = arrays;
    std::ofstream out(path);
    require(out.good(), ErrorCode::io, "cannot open checkpoint for writing: " + path);
    out << doc.dump() << '\n';
    require(out.good(), ErrorCode::io, "failed writing checkpoint: " + path);
}

ModelParams ModelParams::load(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io, "cannot open checkpoint: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        fail(ErrorCode::io, std::string("checkpoint parse error: ") + e.what());
    }
    require(doc.value("format", "") == "hegnn-model", ErrorCode::io, "not a model checkpoint: " + path);
    require(doc.value("version", -1) == kFormatVersion, ErrorCode::io,
            "unsupported checkpoint version in " + path);
    const json& cfg = doc.at("config");
    ModelConfig config;
    config.max_degree = cfg.at("max_degree").get<int>();
    config.channels = cfg.at("channels").get<std::vector<int>>();
    config.hidden_width = cfg.at("hidden_width").get<int>();
    config.layer_count = cfg.at("layer_count").get<int>();
    config.use_velocity = cfg.at("use_velocity").get<bool>();
    config.degree_mask = cfg.at("degree_mask").get<std::vector<int>>();
    config.full_gram = cfg.at("full_gram").get<bool>();
    config.center_anchor = cfg.at("center_anchor").get<bool>();
    config.coord_degree1_update = cfg.at("coord_degree1_update").get<bool>();
    config.node_scalar_width = cfg.at("node_scalar_width").get<int>();
    config.edge_scalar_width = cfg.at("edge_scalar_width").get<int>();

    ModelParams params = build_layout(config);
    const json& arrays = doc.at("arrays");
    for (const ParamStore::Entry& e : params.store.entries()) {
        require(arrays.contains(e.name), ErrorCode::io, "checkpoint missing array: " + e.name);
        const auto values = arrays.at(e.name).get<std::vector<double>>();
        require(values.size() == e.size, ErrorCode::io, "checkpoint array has wrong size: " + e.name);
        std::copy(values.begin(), values.end(), params.store.flat().begin() + static_cast<long>(e.offset));
    }
    return params;
}

} // namespace hegnn::model
