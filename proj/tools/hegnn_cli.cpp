// Command-line front end over the hegnn C API. Emits CSV tables for the
// expressivity and trace experiments, runs the verification suite, and
// drives the N-body generate/train/eval pipeline.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hegnn.h"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(hegnn_status status) {
    if (status == HEGNN_OK) return;
    const std::string msg = hegnn_last_error();
    if (status == HEGNN_ERROR_INVALID_ARGUMENT) throw UsageError(msg);
    throw RunError(msg);
}

uint64_t mix_seed(uint64_t seed, const std::string& tag) {
    uint64_t h = 1469598103934665603ULL ^ seed;
    for (const char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

// "a..b" inclusive, or a comma list of degrees.
std::vector<int> parse_degrees(const std::string& text) {
    std::vector<int> out;
    const auto dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            const int lo = std::stoi(text.substr(0, dots));
            const int hi = std::stoi(text.substr(dots + 2));
            if (lo > hi) throw UsageError("degree range is empty: " + text);
            for (int l = lo; l <= hi; ++l) out.push_back(l);
        } else {
            size_t pos = 0;
            while (pos <= text.size()) {
                const size_t comma = text.find(',', pos);
                out.push_back(std::stoi(text.substr(pos, comma - pos)));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
    } catch (const std::invalid_argument&) {
        throw UsageError("cannot parse degrees: " + text);
    }
    if (out.empty()) throw UsageError("no degrees given");
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

using GraphPtr = std::unique_ptr<hegnn_graph, decltype(&hegnn_graph_destroy)>;

GraphPtr make_structure(const std::string& name) {
    hegnn_graph* g = nullptr;
    if (name.rfind("kfold:", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(name.substr(6));
        } catch (const std::invalid_argument&) {
            throw UsageError("bad k-fold argument: " + name);
        }
        check(hegnn_graph_kfold(k, &g));
    } else {
        check(hegnn_graph_polyhedron(name.c_str(), &g));
    }
    return GraphPtr(g, &hegnn_graph_destroy);
}

struct CsvTable {
    std::string header;
    std::vector<std::string> rows;
    std::string metadata;

    void write(const std::string& path) const {
        std::vector<std::string> sorted = rows;
        std::sort(sorted.begin(), sorted.end());
        std::string text = header + "\n";
        for (const std::string& r : sorted) text += r + "\n";
        text += metadata + "\n";
        if (path.empty() || path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out.good()) throw RunError("cannot open output file: " + path);
        out << text;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_expressivity(const std::string& structures, const std::string& degrees,
                     const std::string& mode, bool cumulative, int trials, uint64_t seed,
                     const std::string& out) {
    if (mode != "forward" && mode != "sph-sum") throw UsageError("mode must be forward or sph-sum");
    const auto degree_list = parse_degrees(degrees);
    CsvTable table;
    table.header = "structure,config,mode,distinguishable,norm,successes,trials";
    for (const std::string& name : split_list(structures)) {
        const GraphPtr graph = make_structure(name);
        for (const int l : degree_list) {
            if (mode == "sph-sum") {
                double norm = 0.0;
                int able = 0;
                check(hegnn_sph_sum(graph.get(), l, &norm, &able));
                table.rows.push_back(name + ",l=" + std::to_string(l) + ",sph-sum," +
                                     (able ? "true" : "false") + "," + fmt(norm) + ",,");
                continue;
            }
            std::vector<int> request;
            if (cumulative)
                for (int d = 1; d <= l; ++d) request.push_back(d);
            else
                request.push_back(l);
            const std::string config = cumulative ? ("l<=" + std::to_string(l)) : ("l=" + std::to_string(l));
            int successes = 0, verdict = 0;
            double stat = 0.0;
            check(hegnn_discriminate(graph.get(), request.data(), request.size(), trials,
                                     mix_seed(seed, name + "/" + config), &successes, &verdict, &stat));
            table.rows.push_back(name + "," + config + ",forward," + (verdict ? "true" : "false") +
                                 "," + fmt(stat) + "," + std::to_string(successes) + "," +
                                 std::to_string(trials));
        }
    }
    table.metadata = "# version=" + std::string(hegnn_version()) + " seed=" + std::to_string(seed) +
                     " zero_cut=0.001 trials=" + std::to_string(trials);
    table.write(out);
    return 0;
}

int cmd_traces(const std::string& groups, int lmax, const std::string& out) {
    if (lmax < 0 || lmax > 30) throw UsageError("lmax must lie in 0..30");
    CsvTable table;
    table.header = "group,l,closed_form,brute_force,degenerate";
    for (const std::string& name : split_list(groups)) {
        hegnn_group* g = nullptr;
        check(hegnn_group_create(name.c_str(), &g));
        const std::unique_ptr<hegnn_group, decltype(&hegnn_group_destroy)> guard(g, &hegnn_group_destroy);
        for (int l = 0; l <= lmax; ++l) {
            long closed = 0;
            double brute = 0.0;
            check(hegnn_trace_closed_form(name.c_str(), l, &closed));
            check(hegnn_group_brute_trace(g, l, &brute));
            char row[160];
            std::snprintf(row, sizeof row, "%s,%02d,%ld,%.12g,%s", name.c_str(), l, closed, brute,
                          closed == 0 ? "true" : "false");
            table.rows.push_back(row);
        }
    }
    table.metadata = "# version=" + std::string(hegnn_version()) +
                     " brute_force_tolerance=1e-6 lmax=" + std::to_string(lmax);
    table.write(out);
    return 0;
}

int cmd_verify(uint64_t seed, const std::string& fault, const std::string& out) {
    int fault_code = 0;
    if (fault == "parity") fault_code = 1;
    else if (fault == "gate") fault_code = 2;
    else if (!fault.empty()) throw UsageError("unknown fault: " + fault);

    char* report = nullptr;
    int passed = 0;
    const hegnn_status status = hegnn_verify(seed, fault_code, &report, &passed);
    if (status != HEGNN_OK && status != HEGNN_ERROR_VERIFICATION) check(status);
    const std::string json = report ? report : "{}";
    hegnn_string_free(report);
    if (out.empty() || out == "-") {
        std::cout << json << "\n";
    } else {
        std::ofstream file(out);
        if (!file.good()) throw RunError("cannot open output file: " + out);
        file << json << "\n";
    }
    std::cerr << (passed ? "verification passed" : "verification FAILED") << "\n";
    return passed ? 0 : 1;
}

int cmd_perturb(const std::string& epsilons, int trials, uint64_t seed, const std::string& out) {
    CsvTable table;
    table.header = "epsilon,config,successes,trials,rate";
    const GraphPtr tetra = make_structure("tetrahedron");
    for (const std::string& etext : split_list(epsilons)) {
        double eps = 0.0;
        try {
            eps = std::stod(etext);
        } catch (const std::invalid_argument&) {
            throw UsageError("cannot parse epsilon: " + etext);
        }
        if (eps < 0.0) throw UsageError("epsilon must be non-negative");
        const std::vector<std::pair<std::string, std::vector<int>>> configs = {
            {"l=3", {3}}, {"l<=3", {1, 2, 3}}};
        for (const auto& [label, degrees] : configs) {
            int successes = 0;
            for (int t = 0; t < trials; ++t) {
                const uint64_t trial_seed = mix_seed(seed, etext + "/" + label + "/" + std::to_string(t));
                hegnn_graph* noisy = nullptr;
                check(hegnn_graph_perturb(tetra.get(), eps, trial_seed, &noisy));
                const GraphPtr guard(noisy, &hegnn_graph_destroy);
                int ok = 0, verdict = 0;
                double stat = 0.0;
                check(hegnn_discriminate(noisy, degrees.data(), degrees.size(), 1,
                                         trial_seed ^ 0x9e37ULL, &ok, &verdict, &stat));
                successes += verdict;
            }
            char row[160];
            std::snprintf(row, sizeof row, "%s,%s,%d,%d,%.12g", etext.c_str(), label.c_str(),
                          successes, trials, static_cast<double>(successes) / trials);
            table.rows.push_back(row);
        }
    }
    table.metadata = "# version=" + std::string(hegnn_version()) + " seed=" + std::to_string(seed) +
                     " structure=tetrahedron zero_cut=0.001";
    table.write(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-degree equivariant graph networks: expressivity tables, verification, N-body training"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.allow_config_extras(false); // unknown keys in a config file are errors
    app.require_subcommand(1);

    // expressivity
    auto* exp = app.add_subcommand("expressivity", "distinguishability of symmetric structures per degree");
    std::string exp_structures, exp_degrees, exp_mode = "forward", exp_out;
    bool exp_cumulative = false;
    int exp_trials = 5;
    uint64_t exp_seed = 0;
    exp->add_option("--structures", exp_structures, "comma list: polyhedron names and kfold:k")->required();
    exp->add_option("--degrees", exp_degrees, "range a..b or comma list")->required();
    exp->add_option("--mode", exp_mode, "forward or sph-sum");
    exp->add_flag("--cumulative", exp_cumulative, "use all degrees 1..l instead of l alone");
    exp->add_option("--trials", exp_trials, "forward-mode trials per cell");
    exp->add_option("--seed", exp_seed, "base seed");
    exp->add_option("--out", exp_out, "output CSV path (stdout if omitted)");

    // traces
    auto* tr = app.add_subcommand("traces", "closed-form vs brute-force group-average traces");
    std::string tr_groups, tr_out;
    int tr_lmax = 30;
    tr->add_option("--groups", tr_groups, "comma list: Ci, Cn, Dn, T, O, I")->required();
    tr->add_option("--lmax", tr_lmax, "maximum degree (<= 30)");
    tr->add_option("--out", tr_out, "output CSV path (stdout if omitted)");

    // verify
    auto* ver = app.add_subcommand("verify", "run the cross-module invariant suite");
    uint64_t ver_seed = 0;
    std::string ver_fault, ver_out;
    ver->add_option("--seed", ver_seed, "suite seed");
    ver->add_option("--inject-fault", ver_fault, "negative control: parity or gate");
    ver->add_option("--out", ver_out, "report JSON path (stdout if omitted)");

    // perturb
    auto* per = app.add_subcommand("perturb", "discrimination of the perturbed tetrahedron");
    std::string per_eps = "0.01,0.05,0.1,0.5", per_out;
    int per_trials = 20;
    uint64_t per_seed = 0;
    per->add_option("--epsilons", per_eps, "comma list of noise ratios");
    per->add_option("--trials", per_trials, "trials per epsilon and config");
    per->add_option("--seed", per_seed, "base seed");
    per->add_option("--out", per_out, "output CSV path (stdout if omitted)");

    // nbody generate / train / eval
    auto* nb = app.add_subcommand("nbody", "charged-particle dataset, training and evaluation");
    nb->require_subcommand(1);

    auto* gen = nb->add_subcommand("generate", "write a line-delimited JSON dataset");
    hegnn_nbody_config gen_cfg{5, 500, 2e-3, 0};
    int gen_samples = 700;
    uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--bodies", gen_cfg.bodies, "particle count");
    gen->add_option("--steps", gen_cfg.steps, "leapfrog steps");
    gen->add_option("--dt", gen_cfg.dt, "time step");
    gen->add_flag("--signed-charges", gen_cfg.signed_charges, "draw charges from {-1,+1} instead of {0,1}");
    gen->add_option("--samples", gen_samples, "number of records");
    gen->add_option("--seed", gen_seed, "dataset seed");
    gen->add_option("--out", gen_out, "dataset path")->required();

    auto* trn = nb->add_subcommand("train", "train on a dataset prefix");
    hegnn_train_config trn_cfg{2, 32, 2, 30, 16, 5e-4, 0};
    std::string trn_dataset, trn_ckpt, trn_loss;
    int trn_train = 500, trn_val = 100;
    trn->add_option("--dataset", trn_dataset, "dataset path")->required();
    trn->add_option("--train-count", trn_train, "training records from the start");
    trn->add_option("--val-count", trn_val, "validation records after the training slice");
    trn->add_option("--max-degree", trn_cfg.max_degree, "highest steerable degree");
    trn->add_option("--hidden", trn_cfg.hidden_width, "MLP width");
    trn->add_option("--layers", trn_cfg.layers, "message-passing layers");
    trn->add_option("--epochs", trn_cfg.epochs, "training epochs");
    trn->add_option("--batch", trn_cfg.batch_size, "batch size");
    trn->add_option("--lr", trn_cfg.learning_rate, "Adam learning rate");
    trn->add_option("--seed", trn_cfg.seed, "training seed");
    trn->add_option("--checkpoint", trn_ckpt, "checkpoint output path")->required();
    trn->add_option("--loss-csv", trn_loss, "per-epoch loss CSV output path");

    auto* ev = nb->add_subcommand("eval", "test MSE of a checkpoint plus the ballistic baseline");
    std::string ev_dataset, ev_ckpt;
    int ev_offset = 600, ev_count = 100;
    double ev_horizon = 1.0;
    ev->add_option("--dataset", ev_dataset, "dataset path")->required();
    ev->add_option("--offset", ev_offset, "first record of the evaluation slice");
    ev->add_option("--count", ev_count, "records in the evaluation slice");
    ev->add_option("--checkpoint", ev_ckpt, "checkpoint path")->required();
    ev->add_option("--horizon", ev_horizon, "extrapolation horizon steps*dt for the baseline");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (exp->parsed())
            return cmd_expressivity(exp_structures, exp_degrees, exp_mode, exp_cumulative,
                                    exp_trials, exp_seed, exp_out);
        if (tr->parsed()) return cmd_traces(tr_groups, tr_lmax, tr_out);
        if (ver->parsed()) return cmd_verify(ver_seed, ver_fault, ver_out);
        if (per->parsed()) return cmd_perturb(per_eps, per_trials, per_seed, per_out);
        if (nb->parsed()) {
            if (gen->parsed()) {
                check(hegnn_nbody_generate(&gen_cfg, gen_samples, gen_seed, gen_out.c_str()));
                std::cerr << "wrote " << gen_samples << " records to " << gen_out
                          << " (horizon " << gen_cfg.steps * gen_cfg.dt << ")\n";
                return 0;
            }
            if (trn->parsed()) {
                check(hegnn_nbody_train(trn_dataset.c_str(), trn_train, trn_val, &trn_cfg,
                                        trn_ckpt.c_str(), trn_loss.empty() ? nullptr : trn_loss.c_str()));
                std::cerr << "checkpoint written to " << trn_ckpt << "\n";
                return 0;
            }
            if (ev->parsed()) {
                double mse = 0.0, baseline = 0.0;
                check(hegnn_nbody_eval(ev_dataset.c_str(), ev_offset, ev_count, ev_ckpt.c_str(), &mse));
                check(hegnn_nbody_linear_baseline(ev_dataset.c_str(), ev_offset, ev_count,
                                                  ev_horizon, &baseline));
                std::printf("model_mse=%.12g\nlinear_mse=%.12g\n", mse, baseline);
                return 0;
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
