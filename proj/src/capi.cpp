#include "hegnn.h"

#include <cstring>
#include <fstream>
#include <string>

#include "hegnn/dataset.hpp"
#include "hegnn/error.hpp"
#include "hegnn/geomgraph.hpp"
#include "hegnn/groups.hpp"
#include "hegnn/model.hpp"
#include "hegnn/specfun.hpp"
#include "hegnn/train.hpp"
#include "hegnn/verify.hpp"

using namespace hegnn;

struct hegnn_group {
    groups::FiniteGroup group;
};

struct hegnn_graph {
    geom::GeometricGraph graph;
};

namespace {

thread_local std::string t_last_error;

hegnn_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return HEGNN_ERROR_INVALID_ARGUMENT;
        case ErrorCode::domain: return HEGNN_ERROR_DOMAIN;
        case ErrorCode::io: return HEGNN_ERROR_IO;
        case ErrorCode::verification: return HEGNN_ERROR_VERIFICATION;
        case ErrorCode::internal: return HEGNN_ERROR_INTERNAL;
    }
    return HEGNN_ERROR_INTERNAL;
}

template <class Fn>
hegnn_status guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return HEGNN_OK;
    } catch (const Error& e) {
        t_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return HEGNN_ERROR_INTERNAL;
    }
}

specfun::Rotation3 rotation_from(const double rotation[9]) {
    require(rotation != nullptr, ErrorCode::invalid_argument, "rotation must not be null");
    Mat3 m;
    for (int i = 0; i < 9; ++i) m.a[static_cast<size_t>(i)] = rotation[i];
    return specfun::Rotation3::checked(m);
}

specfun::O3Element element_from(const double rotation[9], int odd_parity) {
    return {rotation_from(rotation), odd_parity ? specfun::Parity::odd : specfun::Parity::even};
}

void require_out(const void* p, const char* what) {
    require(p != nullptr, ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

std::vector<geom::NBodySample> load_slice(const char* path, int offset, int count) {
    require_out(path, "dataset path");
    require(offset >= 0 && count >= 1, ErrorCode::invalid_argument, "bad dataset slice");
    const auto all = geom::read_dataset(path);
    require(static_cast<size_t>(offset + count) <= all.size(), ErrorCode::invalid_argument,
            "dataset slice exceeds the record count");
    return {all.begin() + offset, all.begin() + offset + count};
}

} // namespace

extern "C" {

const char* hegnn_version(void) { return "0.1.0"; }

const char* hegnn_last_error(void) { return t_last_error.c_str(); }

void hegnn_string_free(char* s) { delete[] s; }

hegnn_status hegnn_legendre(int l, double t, double* out) {
    return guarded([&] {
        require_out(out, "out");
        *out = specfun::legendre_eval(l, t);
    });
}

hegnn_status hegnn_sph_harm(int l, const double dir[3], double* out) {
    return guarded([&] {
        require_out(dir, "dir");
        require_out(out, "out");
        const auto y = specfun::sph_harm(l, specfun::UnitVec3::checked({dir[0], dir[1], dir[2]}));
        std::memcpy(out, y.data(), y.size() * sizeof(double));
    });
}

hegnn_status hegnn_wigner_d(int l, const double rotation[9], double* out) {
    return guarded([&] {
        require_out(out, "out");
        const Matrix d = specfun::wigner_d(l, rotation_from(rotation));
        std::memcpy(out, d.data().data(), d.data().size() * sizeof(double));
    });
}

hegnn_status hegnn_o3_rep(int l, const double rotation[9], int odd_parity, double* out) {
    return guarded([&] {
        require_out(out, "out");
        const Matrix d = specfun::o3_rep(l, element_from(rotation, odd_parity));
        std::memcpy(out, d.data().data(), d.data().size() * sizeof(double));
    });
}

hegnn_status hegnn_rotation_character(int l, double angle, double* out) {
    return guarded([&] {
        require_out(out, "out");
        *out = specfun::rotation_character(l, angle);
    });
}

hegnn_status hegnn_group_create(const char* name, hegnn_group** out) {
    return guarded([&] {
        require_out(name, "name");
        require_out(out, "out");
        *out = new hegnn_group{groups::enumerate_group(name)};
    });
}

void hegnn_group_destroy(hegnn_group* group) { delete group; }

size_t hegnn_group_order(const hegnn_group* group) {
    return group ? group->group.order() : 0;
}

hegnn_status hegnn_group_element(const hegnn_group* group, size_t index,
                                 double rotation[9], int* odd_parity) {
    return guarded([&] {
        require_out(group, "group");
        require_out(rotation, "rotation");
        require_out(odd_parity, "odd_parity");
        require(index < group->group.order(), ErrorCode::invalid_argument, "element index out of range");
        const auto& e = group->group.elements[index];
        std::memcpy(rotation, e.rotation.m.a.data(), 9 * sizeof(double));
        *odd_parity = e.parity == specfun::Parity::odd ? 1 : 0;
    });
}

hegnn_status hegnn_group_average(const hegnn_group* group, int l, double* out) {
    return guarded([&] {
        require_out(group, "group");
        require_out(out, "out");
        const Matrix m = groups::group_average(l, group->group);
        std::memcpy(out, m.data().data(), m.data().size() * sizeof(double));
    });
}

hegnn_status hegnn_group_brute_trace(const hegnn_group* group, int l, double* out) {
    return guarded([&] {
        require_out(group, "group");
        require_out(out, "out");
        *out = groups::brute_force_trace(l, group->group);
    });
}

hegnn_status hegnn_group_fixed_dim(const hegnn_group* group, int l, int* out) {
    return guarded([&] {
        require_out(group, "group");
        require_out(out, "out");
        *out = groups::fixed_subspace_dim(l, group->group);
    });
}

hegnn_status hegnn_trace_closed_form(const char* name, int l, long* out) {
    return guarded([&] {
        require_out(name, "name");
        require_out(out, "out");
        *out = groups::trace_closed_form(l, groups::GroupTag::parse(name));
    });
}

hegnn_status hegnn_degenerate_degrees(const char* names, int lmax, uint8_t* flags) {
    return guarded([&] {
        require_out(names, "names");
        require_out(flags, "flags");
        require(lmax >= 0, ErrorCode::invalid_argument, "lmax must be non-negative");
        std::vector<groups::GroupTag> tags;
        std::string list(names);
        size_t pos = 0;
        while (pos <= list.size()) {
            const size_t comma = list.find(',', pos);
            const std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            require(!item.empty(), ErrorCode::invalid_argument, "empty group name in list");
            tags.push_back(groups::GroupTag::parse(item));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        const auto degrees = groups::degenerate_degrees(tags, lmax);
        for (int l = 0; l <= lmax; ++l) flags[l] = degrees.count(l) ? 1 : 0;
    });
}

hegnn_status hegnn_graph_kfold(int k, hegnn_graph** out) {
    return guarded([&] {
        require_out(out, "out");
        *out = new hegnn_graph{geom::make_kfold(k)};
    });
}

hegnn_status hegnn_graph_polyhedron(const char* name, hegnn_graph** out) {
    return guarded([&] {
        require_out(name, "name");
        require_out(out, "out");
        *out = new hegnn_graph{geom::make_polyhedron(name)};
    });
}

void hegnn_graph_destroy(hegnn_graph* graph) { delete graph; }

size_t hegnn_graph_num_nodes(const hegnn_graph* graph) {
    return graph ? static_cast<size_t>(graph->graph.num_nodes()) : 0;
}

hegnn_status hegnn_graph_coords(const hegnn_graph* graph, double* out) {
    return guarded([&] {
        require_out(graph, "graph");
        require_out(out, "out");
        for (size_t i = 0; i < graph->graph.coords.size(); ++i) {
            out[3 * i + 0] = graph->graph.coords[i].x;
            out[3 * i + 1] = graph->graph.coords[i].y;
            out[3 * i + 2] = graph->graph.coords[i].z;
        }
    });
}

hegnn_status hegnn_graph_rotate(const hegnn_graph* graph, const double rotation[9],
                                int odd_parity, hegnn_graph** out) {
    return guarded([&] {
        require_out(graph, "graph");
        require_out(out, "out");
        *out = new hegnn_graph{graph->graph.transformed(element_from(rotation, odd_parity))};
    });
}

hegnn_status hegnn_graph_perturb(const hegnn_graph* graph, double epsilon, uint64_t seed,
                                 hegnn_graph** out) {
    return guarded([&] {
        require_out(graph, "graph");
        require_out(out, "out");
        *out = new hegnn_graph{geom::perturb(graph->graph, epsilon, seed)};
    });
}

hegnn_status hegnn_graph_symmetry(const hegnn_graph* graph, const double rotation[9],
                                  int odd_parity, double tol, int* found, int* permutation) {
    return guarded([&] {
        require_out(graph, "graph");
        require_out(found, "found");
        const auto witness = geom::is_symmetric_under(graph->graph, element_from(rotation, odd_parity),
                                                      tol > 0.0 ? tol : 1e-6);
        *found = witness.has_value() ? 1 : 0;
        if (witness && permutation)
            for (size_t i = 0; i < witness->permutation.size(); ++i)
                permutation[i] = witness->permutation[i];
    });
}

hegnn_status hegnn_random_rotation(uint64_t seed, double rotation[9]) {
    return guarded([&] {
        require_out(rotation, "rotation");
        const auto r = geom::random_rotation(seed);
        std::memcpy(rotation, r.m.a.data(), 9 * sizeof(double));
    });
}

hegnn_status hegnn_sph_sum(const hegnn_graph* graph, int l, double* norm, int* distinguishable) {
    return guarded([&] {
        require_out(graph, "graph");
        require_out(norm, "norm");
        require_out(distinguishable, "distinguishable");
        const auto result = model::sph_sum_check(graph->graph, l);
        *norm = result.norm;
        *distinguishable = result.distinguishable ? 1 : 0;
    });
}

hegnn_status hegnn_discriminate(const hegnn_graph* graph, const int* degrees, size_t n_degrees,
                                int trials, uint64_t seed, int* successes, int* verdict,
                                double* statistic) {
    return guarded([&] {
        require_out(graph, "graph");
        require_out(degrees, "degrees");
        require(n_degrees >= 1, ErrorCode::invalid_argument, "at least one degree required");
        const std::vector<int> list(degrees, degrees + n_degrees);
        const auto result = model::discrimination_trials(graph->graph, list, trials, seed);
        if (successes) *successes = result.successes;
        if (verdict) *verdict = result.verdict ? 1 : 0;
        if (statistic) *statistic = result.max_statistic;
    });
}

hegnn_status hegnn_recover_angles(const double* z, size_t count, double* cosines) {
    return guarded([&] {
        require_out(z, "z");
        require_out(cosines, "cosines");
        const auto roots = model::recover_angles(std::span<const double>(z, count),
                                                 static_cast<int>(count));
        std::memcpy(cosines, roots.data(), roots.size() * sizeof(double));
    });
}

hegnn_status hegnn_nbody_generate(const hegnn_nbody_config* config, int samples, uint64_t seed,
                                  const char* path) {
    return guarded([&] {
        require_out(config, "config");
        require_out(path, "path");
        geom::NBodyOptions opt;
        opt.bodies = config->bodies;
        opt.steps = config->steps;
        opt.dt = config->dt;
        opt.signed_charges = config->signed_charges != 0;
        geom::write_dataset(geom::nbody_simulate(opt, samples, seed), path);
    });
}

namespace {

model::ModelConfig model_config_from(const hegnn_train_config* config) {
    require(config != nullptr, ErrorCode::invalid_argument, "train config must not be null");
    model::ModelConfig cfg = model::ModelConfig::standard(config->max_degree);
    cfg.hidden_width = config->hidden_width;
    cfg.layer_count = config->layers;
    cfg.use_velocity = true;
    cfg.edge_scalar_width = 1;
    return cfg;
}

} // namespace

hegnn_status hegnn_nbody_train(const char* dataset_path, int train_count, int val_count,
                               const hegnn_train_config* config, const char* checkpoint_path,
                               const char* loss_csv_path) {
    return guarded([&] {
        require_out(checkpoint_path, "checkpoint path");
        const auto train_set = load_slice(dataset_path, 0, train_count);
        const auto val_set = val_count > 0
            ? load_slice(dataset_path, train_count, val_count)
            : std::vector<geom::NBodySample>{};
        train::TrainConfig tcfg;
        tcfg.epochs = config ? config->epochs : tcfg.epochs;
        tcfg.batch_size = config ? config->batch_size : tcfg.batch_size;
        tcfg.learning_rate = config ? config->learning_rate : tcfg.learning_rate;
        tcfg.seed = config ? config->seed : 0;
        const auto result = train::train(train_set, val_set, model_config_from(config), tcfg);
        result.params.save(checkpoint_path);
        if (loss_csv_path) {
            std::string csv = "epoch,train_mse,val_mse\n";
            char line[128];
            for (const auto& h : result.history) {
                std::snprintf(line, sizeof line, "%d,%.12g,%.12g\n", h.epoch, h.train_mse, h.val_mse);
                csv += line;
            }
            std::snprintf(line, sizeof line, "# version=%s seed=%llu\n", hegnn_version(),
                          static_cast<unsigned long long>(tcfg.seed));
            csv += line;
            std::ofstream out(loss_csv_path);
            require(out.good(), ErrorCode::io, std::string("cannot open loss csv: ") + loss_csv_path);
            out << csv;
        }
    });
}

hegnn_status hegnn_nbody_eval(const char* dataset_path, int offset, int count,
                              const char* checkpoint_path, double* mse) {
    return guarded([&] {
        require_out(checkpoint_path, "checkpoint path");
        require_out(mse, "mse");
        const auto samples = load_slice(dataset_path, offset, count);
        const auto params = model::ModelParams::load(checkpoint_path);
        *mse = train::evaluate_mse(samples, params);
    });
}

hegnn_status hegnn_nbody_linear_baseline(const char* dataset_path, int offset, int count,
                                         double horizon, double* mse) {
    return guarded([&] {
        require_out(mse, "mse");
        *mse = train::linear_baseline_mse(load_slice(dataset_path, offset, count), horizon);
    });
}

hegnn_status hegnn_verify(uint64_t seed, int fault, char** report_json, int* passed) {
    return guarded([&] {
        require(fault >= 0 && fault <= 2, ErrorCode::invalid_argument, "fault must be 0, 1 or 2");
        const auto report = verify::run(seed, static_cast<verify::Fault>(fault));
        if (report_json) {
            const std::string json = report.to_json();
            char* buf = new char[json.size() + 1];
            std::memcpy(buf, json.c_str(), json.size() + 1);
            *report_json = buf;
        }
        if (passed) *passed = report.all_passed ? 1 : 0;
        require(report.all_passed, ErrorCode::verification, "verification suite failed");
    });
}

} // extern "C"
