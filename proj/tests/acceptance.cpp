// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Exercises the shared C API where the behavior is part of the
// external surface, and the core library where per-degree state access is
// needed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "hegnn.h"

#include "hegnn/autodiff.hpp"
#include "hegnn/geomgraph.hpp"
#include "hegnn/groups.hpp"
#include "hegnn/model.hpp"
#include "hegnn/rng.hpp"
#include "hegnn/specfun.hpp"
#include "hegnn/train.hpp"

using namespace hegnn;

namespace {

int g_failures = 0;

struct Criterion {
    const char* label;
    std::chrono::steady_clock::time_point start;
    bool ok = true;
    std::string detail;

    explicit Criterion(const char* label) : label(label), start(std::chrono::steady_clock::now()) {}

    void expect(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }

    double finish(double runtime_limit_s = 0.0) {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (runtime_limit_s > 0.0 && elapsed > runtime_limit_s && ok) {
            ok = false;
            detail = "runtime " + std::to_string(elapsed) + " s exceeded the " +
                     std::to_string(runtime_limit_s) + " s limit";
        }
        std::printf("%s %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", label, elapsed,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
        return elapsed;
    }
};

// ---- criterion 1: trace table, closed form vs brute force ----------------

void criterion1() {
    Criterion c("criterion 1: trace table closed form vs brute force (Ci, Cn, Dn n<=21, T, O, I; l <= 30)");
    std::vector<std::string> names = {"Ci", "T", "O", "I"};
    for (int n = 2; n <= 21; ++n) {
        names.push_back("C" + std::to_string(n));
        names.push_back("D" + std::to_string(n));
    }
    for (const std::string& name : names) {
        hegnn_group* g = nullptr;
        c.expect(hegnn_group_create(name.c_str(), &g) == HEGNN_OK, "group " + name + " failed to build");
        if (!g) break;
        for (int l = 0; l <= 30; ++l) {
            long closed = 0;
            double brute = 0.0;
            c.expect(hegnn_trace_closed_form(name.c_str(), l, &closed) == HEGNN_OK, "closed form " + name);
            c.expect(hegnn_group_brute_trace(g, l, &brute) == HEGNN_OK, "brute trace " + name);
            c.expect(std::abs(brute - static_cast<double>(closed)) < 1e-6,
                     name + " l=" + std::to_string(l) + ": brute " + std::to_string(brute) +
                         " vs closed " + std::to_string(closed));
            c.expect(std::lround(brute) == closed, name + " l=" + std::to_string(l) + ": rounding mismatch");
        }
        hegnn_group_destroy(g);
    }
    c.finish(30.0);
}

// ---- criterion 2: degeneration table ---------------------------------------

std::set<int> degenerate_set(const std::string& names, int lmax) {
    std::vector<uint8_t> flags(static_cast<size_t>(lmax) + 1, 0);
    if (hegnn_degenerate_degrees(names.c_str(), lmax, flags.data()) != HEGNN_OK) return {};
    std::set<int> out;
    for (int l = 0; l <= lmax; ++l)
        if (flags[static_cast<size_t>(l)]) out.insert(l);
    return out;
}

void criterion2() {
    Criterion c("criterion 2: degeneration table rows for l <= 14");
    const int lmax = 14;

    auto odd_below = [&](int bound) {
        std::set<int> s;
        for (int l = 1; l <= lmax; l += 2)
            if (l < bound) s.insert(l);
        return s;
    };
    auto all_odd = odd_below(lmax + 1);

    // 2k-folds carry {Ci, D_2k}; (2k+1)-folds carry D_{2k+1} alone.
    for (int k = 2; k <= 10; ++k) {
        const std::string dn = "D" + std::to_string(k);
        const std::string groups = (k % 2 == 0) ? dn + ",Ci" : dn;
        const std::set<int> expect = (k % 2 == 0) ? all_odd : odd_below(k);
        c.expect(degenerate_set(groups, lmax) == expect, "k-fold row k=" + std::to_string(k));
    }

    std::set<int> tetra = {1, 2, 5};
    c.expect(degenerate_set("T", lmax) == tetra, "tetrahedron row");

    std::set<int> cube = all_odd;
    cube.insert(2);
    c.expect(degenerate_set("Ci,O", lmax) == cube, "cube/octahedron row");

    std::set<int> icosa = all_odd;
    for (int l : {2, 4, 8, 14}) icosa.insert(l);
    c.expect(degenerate_set("Ci,I", lmax) == icosa, "dodecahedron/icosahedron row");

    c.finish(10.0);
}

// ---- criterion 3: spherical-harmonic-sum table ------------------------------

void criterion3() {
    Criterion c("criterion 3: sphere-sum expressivity table, 5 polyhedra x L=1..30 (gap 1 / 1e-3)");
    // Verbatim True(1)/False(0) cells, rows L = 1..30.
    const char* tetra = "001101111111111111111111111111";
    const char* cube = "000101010101010101010101010101";
    const char* dodeca = "000001000101000101010101010101";
    const std::pair<const char*, const char*> columns[] = {
        {"tetrahedron", tetra}, {"cube", cube}, {"octahedron", cube},
        {"dodecahedron", dodeca}, {"icosahedron", dodeca}};
    for (const auto& [shape, cells] : columns) {
        hegnn_graph* g = nullptr;
        c.expect(hegnn_graph_polyhedron(shape, &g) == HEGNN_OK, std::string("structure ") + shape);
        if (!g) break;
        for (int l = 1; l <= 30; ++l) {
            double norm = -1.0;
            int able = -1;
            c.expect(hegnn_sph_sum(g, l, &norm, &able) == HEGNN_OK, "sph-sum call");
            const bool expect = cells[l - 1] == '1';
            c.expect(able == (expect ? 1 : 0), std::string(shape) + " L=" + std::to_string(l) +
                                                   " verdict, norm=" + std::to_string(norm));
            if (expect)
                c.expect(norm > 1.0, std::string(shape) + " L=" + std::to_string(l) + " norm gap high");
            else
                c.expect(norm < 1e-3, std::string(shape) + " L=" + std::to_string(l) + " norm gap low");
        }
        hegnn_graph_destroy(g);
    }
    c.finish(20.0);
}

// ---- criterion 4: forward discrimination vs the predicate -------------------

struct Cell {
    std::string structure;
    std::string groups;
    std::vector<int> degrees;
    std::string label;
};

void criterion4() {
    Criterion c("criterion 4: forward discrimination matches the degeneration predicate (l <= 11)");
    const std::pair<std::string, std::string> structures[] = {
        {"tetrahedron", "T"}, {"cube", "Ci,O"}, {"octahedron", "Ci,O"},
        {"dodecahedron", "Ci,I"}, {"icosahedron", "Ci,I"},
        {"kfold:2", "D2,Ci"}, {"kfold:3", "D3"}, {"kfold:5", "D5"}, {"kfold:10", "D10,Ci"}};

    std::vector<Cell> cells;
    for (const auto& [structure, groups] : structures) {
        const bool is_kfold = structure.rfind("kfold:", 0) == 0;
        for (int l = 1; l <= 11; ++l)
            cells.push_back({structure, groups, {l}, "l=" + std::to_string(l)});
        const std::vector<int> cumulative = is_kfold ? std::vector<int>{1, 2} : std::vector<int>{2, 3, 4, 6};
        for (int top : cumulative) {
            std::vector<int> degrees;
            for (int l = 1; l <= top; ++l) degrees.push_back(l);
            cells.push_back({structure, groups, degrees, "l<=" + std::to_string(top)});
        }
    }

    for (const Cell& cell : cells) {
        const std::set<int> degenerate = degenerate_set(cell.groups, 11);
        bool expect_able = false;
        for (int l : cell.degrees) expect_able = expect_able || !degenerate.count(l);

        hegnn_graph* g = nullptr;
        if (cell.structure.rfind("kfold:", 0) == 0)
            c.expect(hegnn_graph_kfold(std::stoi(cell.structure.substr(6)), &g) == HEGNN_OK, "structure");
        else
            c.expect(hegnn_graph_polyhedron(cell.structure.c_str(), &g) == HEGNN_OK, "structure");
        if (!g) break;

        int successes = 0, verdict = -1;
        double stat = 0.0;
        uint64_t seed = 1469598103934665603ULL;
        for (const char ch : cell.structure + "/" + cell.label) seed = (seed ^ ch) * 1099511628211ULL;
        c.expect(hegnn_discriminate(g, cell.degrees.data(), cell.degrees.size(), 5, seed,
                                    &successes, &verdict, &stat) == HEGNN_OK,
                 "discrimination call " + cell.structure + " " + cell.label);
        if (expect_able)
            c.expect(successes >= 4, cell.structure + " " + cell.label + ": expected >= 4/5, got " +
                                         std::to_string(successes) + "/5 (stat " + std::to_string(stat) + ")");
        else
            c.expect(successes <= 2 && verdict == 0,
                     cell.structure + " " + cell.label + ": expected indistinguishable, got " +
                         std::to_string(successes) + "/5 (stat " + std::to_string(stat) + ")");
        hegnn_graph_destroy(g);
    }
    c.finish(0.0);
}

// ---- criterion 5: equivariance suite ----------------------------------------

double block_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void criterion5() {
    Criterion c("criterion 5: equivariance of h, x and steerable blocks over 200 random cases (1e-8)");
    using specfun::O3Element;
    using specfun::Parity;
    for (uint64_t trial = 0; trial < 200 && c.ok; ++trial) {
        Rng rng(derive_seed(9000, trial));
        const int n = 3 + static_cast<int>(rng.next_u64() % 3);
        geom::GeometricGraph g;
        g.node_scalars = Matrix(n, 1);
        for (int i = 0; i < n; ++i) g.node_scalars(i, 0) = rng.normal();
        for (int i = 0; i < n; ++i) g.coords.push_back(rng.normal_vec3());
        g.velocities.emplace();
        for (int i = 0; i < n; ++i) g.velocities->push_back(rng.normal_vec3());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) g.edges.push_back({i, j, {}});
        g.center();

        model::ModelConfig cfg = model::ModelConfig::standard(1 + static_cast<int>(trial % 4));
        cfg.hidden_width = 12;
        cfg.layer_count = 1 + static_cast<int>(trial % 2);
        cfg.use_velocity = true;
        cfg.center_anchor = (trial % 2 == 0);
        const model::ModelParams params = model::ModelParams::seeded(cfg, derive_seed(17, trial));
        const O3Element e{geom::random_rotation(derive_seed(23, trial)),
                          (trial % 2 == 0) ? Parity::even : Parity::odd};

        const model::SteerableState out = model::forward(g, params);
        const model::SteerableState moved = model::forward(g.transformed(e), params);
        const Mat3 cart = e.cartesian();
        for (int i = 0; i < n && c.ok; ++i) {
            c.expect(block_diff(moved.h[static_cast<size_t>(i)], out.h[static_cast<size_t>(i)]) < 1e-8,
                     "h invariance, trial " + std::to_string(trial));
            c.expect((moved.x[static_cast<size_t>(i)] - cart.apply(out.x[static_cast<size_t>(i)])).norm() < 1e-8,
                     "x equivariance, trial " + std::to_string(trial));
            for (size_t k = 0; k < out.degrees.size(); ++k) {
                const int l = out.degrees[k];
                const Matrix rep = specfun::o3_rep(l, e);
                const int width = 2 * l + 1;
                const auto& block = out.feat[k][static_cast<size_t>(i)];
                std::vector<double> expect(block.size());
                for (size_t ch = 0; ch < block.size() / static_cast<size_t>(width); ++ch) {
                    const std::vector<double> chunk(block.begin() + static_cast<long>(ch) * width,
                                                    block.begin() + static_cast<long>(ch + 1) * width);
                    const auto movedc = rep.apply(chunk);
                    std::copy(movedc.begin(), movedc.end(), expect.begin() + static_cast<long>(ch) * width);
                }
                c.expect(block_diff(moved.feat[k][static_cast<size_t>(i)], expect) < 1e-8,
                         "degree " + std::to_string(l) + " transformation, trial " + std::to_string(trial));
            }
        }
    }
    c.finish(60.0);
}

// ---- criterion 6: Legendre identity and angle recovery ----------------------

void criterion6() {
    Criterion c("criterion 6: message identity vs Legendre double sums (1e-9) and angle recovery (1e-6)");
    for (uint64_t trial = 0; trial < 50 && c.ok; ++trial) {
        Rng rng(derive_seed(31337, trial));
        const int n = 4 + static_cast<int>(rng.next_u64() % 3);
        geom::GeometricGraph g;
        g.node_scalars = Matrix(n, 1);
        for (int i = 0; i < n; ++i) {
            g.node_scalars(i, 0) = 1.0;
            g.coords.push_back(rng.normal_vec3());
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) g.edges.push_back({i, j, {}});
        g.center();

        model::ModelConfig cfg;
        cfg.max_degree = 4;
        cfg.channels = {1, 1, 1, 1, 1};
        cfg.degree_mask = {1, 2, 3, 4};
        cfg.hidden_width = 8;
        cfg.layer_count = 1;
        const model::ModelParams params = model::ModelParams::seeded(cfg, derive_seed(3, trial));
        model::ForwardOptions opts;
        opts.unit_gates = true;
        const model::SteerableState s = model::init_features(g, params, opts);
        const model::EdgeMessages msgs = model::message(s, g, params, 0);
        const auto nbrs = g.neighbor_lists();
        for (size_t e = 0; e < g.edges.size() && c.ok; ++e) {
            const int i = g.edges[e].i, j = g.edges[e].j;
            for (int l = 1; l <= 4; ++l) {
                double expect = 0.0;
                for (int snode : nbrs[static_cast<size_t>(i)])
                    for (int tnode : nbrs[static_cast<size_t>(j)]) {
                        const Vec3 xis = g.coords[static_cast<size_t>(i)] - g.coords[static_cast<size_t>(snode)];
                        const Vec3 xjt = g.coords[static_cast<size_t>(j)] - g.coords[static_cast<size_t>(tnode)];
                        expect += (2 * l + 1) * specfun::legendre_eval(l, xis.dot(xjt) / (xis.norm() * xjt.norm()));
                    }
                c.expect(std::abs(msgs.z[e][static_cast<size_t>(l - 1)] - expect) < 1e-9,
                         "z identity, trial " + std::to_string(trial));
            }
        }
    }

    // Round trips for multisets of sizes 1..6, including a repeated cosine.
    Rng rng(515);
    for (int m = 1; m <= 6 && c.ok; ++m) {
        for (int rep = 0; rep < 5 && c.ok; ++rep) {
            std::vector<double> truth;
            for (int i = 0; i < m; ++i) truth.push_back(rng.uniform(-0.95, 0.95));
            if (rep == 4 && m >= 2) truth[1] = truth[0]; // repeated root
            std::sort(truth.begin(), truth.end());
            std::vector<double> z;
            for (int l = 1; l <= m; ++l) {
                double acc = 0.0;
                for (double t : truth) acc += specfun::legendre_eval(l, t);
                z.push_back((2 * l + 1) * acc);
            }
            std::vector<double> roots(static_cast<size_t>(m));
            c.expect(hegnn_recover_angles(z.data(), z.size(), roots.data()) == HEGNN_OK, "recover call");
            for (int i = 0; i < m; ++i)
                c.expect(std::abs(roots[static_cast<size_t>(i)] - truth[static_cast<size_t>(i)]) < 1e-6,
                         "angle recovery m=" + std::to_string(m));
        }
    }
    c.finish(0.0);
}

// ---- criterion 7: gradient correctness ---------------------------------------

void criterion7() {
    Criterion c("criterion 7: finite-difference gradient checks across 100 seeds (< 1e-5)");

    // Direct primitive sweep: one tape touching every op.
    for (uint64_t seed = 0; seed < 10 && c.ok; ++seed) {
        Rng rng(derive_seed(777, seed));
        std::vector<double> p(14);
        for (double& x : p) x = rng.normal();
        ad::Tape tape;
        const auto pid = tape.param(p);
        const auto a = tape.slice(pid, 0, 4);
        const auto b = tape.slice(pid, 4, 4);
        const auto w = tape.slice(pid, 8, 4);
        const auto s = tape.slice(pid, 12, 1);
        const auto mixed = tape.mul(tape.add(a, b), tape.sub(a, b));
        const auto gated = tape.scale(tape.scale_const(mixed, 0.5), s);
        const auto y = tape.silu(tape.matvec(w, tape.concat(std::vector<ad::Tape::Id>{
                                                  tape.dot(gated, a), tape.sum(gated)}),
                                             2, 2));
        const auto loss = tape.dot(y, y);
        const auto grad = tape.gradients(loss, std::vector<ad::Tape::Id>{pid})[0];

        auto eval = [&](const std::vector<double>& q) {
            ad::Tape t2;
            const auto qid = t2.constant(q);
            const auto a2 = t2.slice(qid, 0, 4);
            const auto b2 = t2.slice(qid, 4, 4);
            const auto w2 = t2.slice(qid, 8, 4);
            const auto s2 = t2.slice(qid, 12, 1);
            const auto mixed2 = t2.mul(t2.add(a2, b2), t2.sub(a2, b2));
            const auto gated2 = t2.scale(t2.scale_const(mixed2, 0.5), s2);
            const auto y2 = t2.silu(t2.matvec(w2, t2.concat(std::vector<ad::Tape::Id>{
                                                   t2.dot(gated2, a2), t2.sum(gated2)}),
                                              2, 2));
            return t2.value(t2.dot(y2, y2))[0];
        };
        Rng dir_rng(derive_seed(778, seed));
        for (int trial = 0; trial < 10 && c.ok; ++trial) {
            std::vector<double> dir(p.size());
            double n2 = 0.0;
            for (double& d : dir) {
                d = dir_rng.normal();
                n2 += d * d;
            }
            const double inv = 1.0 / std::sqrt(n2);
            std::vector<double> plus = p, minus = p;
            double analytic = 0.0;
            for (size_t i = 0; i < p.size(); ++i) {
                plus[i] += 1e-6 * dir[i] * inv;
                minus[i] -= 1e-6 * dir[i] * inv;
                analytic += grad[i] * dir[i] * inv;
            }
            const double numeric = (eval(plus) - eval(minus)) / 2e-6;
            const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            c.expect(std::abs(numeric - analytic) / denom < 1e-5,
                     "primitive sweep, seed " + std::to_string(seed));
        }
    }

    for (uint64_t seed = 0; seed < 30 && c.ok; ++seed)
        c.expect(train::grad_check(train::GradCheckTarget::dense_layer, derive_seed(1000, seed)) < 1e-5,
                 "dense layer, seed " + std::to_string(seed));
    for (uint64_t seed = 0; seed < 30 && c.ok; ++seed)
        c.expect(train::grad_check(train::GradCheckTarget::message_op, derive_seed(2000, seed)) < 1e-5,
                 "message op, seed " + std::to_string(seed));
    for (uint64_t seed = 0; seed < 30 && c.ok; ++seed)
        c.expect(train::grad_check(train::GradCheckTarget::full_model, derive_seed(3000, seed)) < 1e-5,
                 "full model, seed " + std::to_string(seed));
    c.finish(60.0);
}

// ---- criterion 8: perturbation experiment ------------------------------------

void criterion8() {
    Criterion c("criterion 8: perturbed tetrahedron, degree-3 discrimination 20/20 at each epsilon");
    hegnn_graph* tetra = nullptr;
    c.expect(hegnn_graph_polyhedron("tetrahedron", &tetra) == HEGNN_OK, "structure");
    const double epsilons[] = {0.01, 0.05, 0.1, 0.5};
    const std::pair<const char*, std::vector<int>> configs[] = {
        {"l=3", {3}}, {"l<=3", {1, 2, 3}}};
    for (const double eps : epsilons) {
        for (const auto& [label, degrees] : configs) {
            int successes = 0;
            for (int t = 0; t < 20; ++t) {
                const uint64_t seed = derive_seed(static_cast<uint64_t>(eps * 10000), static_cast<uint64_t>(t));
                hegnn_graph* noisy = nullptr;
                c.expect(hegnn_graph_perturb(tetra, eps, seed, &noisy) == HEGNN_OK, "perturb");
                if (!noisy) break;
                int ok = 0, verdict = 0;
                double stat = 0.0;
                c.expect(hegnn_discriminate(noisy, degrees.data(), degrees.size(), 1, seed ^ 0x5bd1ULL,
                                            &ok, &verdict, &stat) == HEGNN_OK, "discriminate");
                successes += verdict;
                hegnn_graph_destroy(noisy);
            }
            c.expect(successes == 20, std::string("epsilon ") + std::to_string(eps) + " " + label +
                                          ": " + std::to_string(successes) + "/20");
        }
    }
    hegnn_graph_destroy(tetra);
    c.finish(0.0);
}

// ---- criterion 9: N-body property target -------------------------------------

void criterion9() {
    Criterion c("criterion 9: 5-body training beats 0.5x the ballistic baseline; loss history rotation invariant (1e-6)");

    geom::NBodyOptions opt;
    opt.bodies = 5;
    opt.steps = 500;
    opt.dt = 2e-3;
    const auto samples = geom::nbody_simulate(opt, 700, 20240601);
    const std::vector<geom::NBodySample> train_set(samples.begin(), samples.begin() + 500);
    const std::vector<geom::NBodySample> val_set(samples.begin() + 500, samples.begin() + 600);
    const std::vector<geom::NBodySample> test_set(samples.begin() + 600, samples.begin() + 700);

    model::ModelConfig cfg = model::ModelConfig::standard(2);
    cfg.hidden_width = 32;
    cfg.layer_count = 2;
    cfg.use_velocity = true;
    cfg.edge_scalar_width = 1;

    train::TrainConfig tcfg;
    tcfg.epochs = 18;
    tcfg.batch_size = 16;
    tcfg.learning_rate = 2e-3;
    tcfg.seed = 7;

    const auto result = train::train(train_set, val_set, cfg, tcfg);
    const double model_mse = train::evaluate_mse(test_set, result.params);
    const double baseline = train::linear_baseline_mse(test_set, opt.steps * opt.dt);
    char buf[160];
    std::snprintf(buf, sizeof buf, "model %.5g vs baseline %.5g (ratio %.3f)", model_mse, baseline,
                  model_mse / baseline);
    c.expect(model_mse < 0.5 * baseline, buf);
    if (c.ok) c.detail = buf;

    // Joint rotation of every sample must reproduce the full loss history.
    const auto rot = geom::random_rotation(99);
    auto rotate_all = [&](std::vector<geom::NBodySample> set) {
        for (auto& s : set) {
            for (Vec3& p : s.positions_t0) p = rot.m.apply(p);
            for (Vec3& p : s.velocities_t0) p = rot.m.apply(p);
            for (Vec3& p : s.positions_t1) p = rot.m.apply(p);
        }
        return set;
    };
    const auto turned = train::train(rotate_all(train_set), rotate_all(val_set), cfg, tcfg);
    for (size_t e = 0; e < result.history.size(); ++e) {
        c.expect(std::abs(result.history[e].train_mse - turned.history[e].train_mse) < 1e-6,
                 "train loss history drifted at epoch " + std::to_string(e));
        c.expect(std::abs(result.history[e].val_mse - turned.history[e].val_mse) < 1e-6,
                 "val loss history drifted at epoch " + std::to_string(e));
    }
    c.finish(600.0);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
