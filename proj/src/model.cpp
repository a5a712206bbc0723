#include "hegnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "hegnn/rng.hpp"
#include "hegnn/specfun.hpp"

namespace hegnn::model {

using geom::GeometricGraph;

namespace {

// Geometry of the input graph shared by both execution backends. Directions
// and squared distances at initialization come straight from the input
// coordinates and are constants with respect to the parameters.
struct GraphPlan {
    std::vector<std::vector<int>> neighbors;
    std::vector<std::vector<size_t>> incident; // edge indices grouped by source node
    std::vector<Vec3> init_dir;                // per edge, (x_i - x_j) normalized
    std::vector<double> init_d2;
    std::vector<int> block_degrees;            // active degrees >= 1
    bool degree0_active = false;

    GraphPlan(const GeometricGraph& g, const ModelConfig& cfg) {
        g.validate();
        neighbors = g.neighbor_lists();
        for (const auto& n : neighbors)
            require(!n.empty(), ErrorCode::invalid_argument, "graph has an isolated node");
        incident.resize(static_cast<size_t>(g.num_nodes()));
        init_dir.reserve(g.edges.size());
        init_d2.reserve(g.edges.size());
        for (size_t e = 0; e < g.edges.size(); ++e) {
            const auto& edge = g.edges[e];
            require(static_cast<int>(edge.scalars.size()) == cfg.edge_scalar_width,
                    ErrorCode::invalid_argument, "edge scalar width does not match the model config");
            incident[static_cast<size_t>(edge.i)].push_back(e);
            const Vec3 d = g.coords[static_cast<size_t>(edge.i)] - g.coords[static_cast<size_t>(edge.j)];
            const double dist = d.norm();
            require(dist >= 1e-12, ErrorCode::invalid_argument, "coincident neighbor coordinates");
            init_dir.push_back(d * (1.0 / dist));
            init_d2.push_back(dist * dist);
        }
        require(g.node_scalars.cols() == cfg.node_scalar_width, ErrorCode::invalid_argument,
                "node scalar width does not match the model config");
        if (cfg.use_velocity)
            require(g.velocities.has_value(), ErrorCode::invalid_argument,
                    "model config expects velocities but the graph has none");
        for (int l : cfg.active_degrees()) {
            if (l == 0)
                degree0_active = true;
            else
                block_degrees.push_back(l);
        }
    }
};

template <class B>
struct Bound {
    std::vector<typename B::Value> arrays; // aligned with store.entries()
};

Bound<ad::EagerBackend> bind_params(ad::EagerBackend&, const ModelParams& params) {
    Bound<ad::EagerBackend> bound;
    for (const auto& e : params.store.entries()) {
        const auto span = params.store.flat().subspan(e.offset, e.size);
        bound.arrays.emplace_back(span.begin(), span.end());
    }
    return bound;
}

Bound<ad::TapeBackend> bind_params(ad::TapeBackend& b, const ModelParams& params) {
    Bound<ad::TapeBackend> bound;
    for (const auto& e : params.store.entries())
        bound.arrays.push_back(b.tape->param(params.store.flat().subspan(e.offset, e.size)));
    return bound;
}

template <class B>
class Runner {
public:
    using V = typename B::Value;

    struct State {
        std::vector<V> h, x, vel;
        std::vector<std::vector<V>> feat; // [block degree index][node]
    };

    struct Edges {
        std::vector<V> message;
        std::vector<V> z;
    };

    Runner(B& b, const GeometricGraph& g, const ModelParams& params, ForwardOptions opts)
        : b_(b), g_(g), p_(params), cfg_(params.config), opts_(opts),
          plan_(g, params.config), bound_(bind_params(b, params)) {}

    const GraphPlan& plan() const { return plan_; }
    const std::vector<typename B::Value>& bound_arrays() const { return bound_.arrays; }

    State init() {
        const int n = g_.num_nodes();
        State s;
        s.h.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::vector<double> row(static_cast<size_t>(cfg_.node_scalar_width));
            for (int c = 0; c < cfg_.node_scalar_width; ++c) row[static_cast<size_t>(c)] = g_.node_scalars(i, c);
            s.h.push_back(dense(p_.embed, b_.constant(std::move(row))));
        }
        for (int i = 0; i < n; ++i) {
            const Vec3& c = g_.coords[static_cast<size_t>(i)];
            s.x.push_back(b_.constant({c.x, c.y, c.z}));
        }
        if (cfg_.use_velocity)
            for (int i = 0; i < n; ++i) {
                const Vec3& v = (*g_.velocities)[static_cast<size_t>(i)];
                s.vel.push_back(b_.constant({v.x, v.y, v.z}));
            }

        // Invariant init message per edge, then gated spherical harmonics.
        std::vector<V> m_init;
        m_init.reserve(g_.edges.size());
        for (size_t e = 0; e < g_.edges.size(); ++e) {
            const auto& edge = g_.edges[e];
            std::vector<V> parts = {s.h[static_cast<size_t>(edge.i)], s.h[static_cast<size_t>(edge.j)]};
            if (cfg_.edge_scalar_width > 0) parts.push_back(b_.constant(edge.scalars));
            parts.push_back(b_.constant({plan_.init_d2[e]}));
            m_init.push_back(mlp(p_.msg_init, b_.concat(parts)));
        }

        // Centroid for the optional anchored harmonics; translation safe.
        Vec3 centroid{};
        if (cfg_.center_anchor && !opts_.unit_gates) {
            for (const Vec3& c : g_.coords) centroid += c;
            centroid = centroid * (1.0 / static_cast<double>(n));
        }

        s.feat.resize(plan_.block_degrees.size());
        for (size_t k = 0; k < plan_.block_degrees.size(); ++k) {
            const int l = plan_.block_degrees[k];
            const int ch = cfg_.channels[static_cast<size_t>(l)];
            std::vector<V> y_edge;
            y_edge.reserve(g_.edges.size());
            for (size_t e = 0; e < g_.edges.size(); ++e)
                y_edge.push_back(b_.constant(specfun::sph_harm(l, specfun::UnitVec3::checked(plan_.init_dir[e]))));
            s.feat[k].reserve(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                std::vector<V> contributions;
                for (size_t e : plan_.incident[static_cast<size_t>(i)]) {
                    if (opts_.unit_gates) {
                        std::vector<V> chans(static_cast<size_t>(ch), y_edge[e]);
                        contributions.push_back(b_.concat(chans));
                    } else {
                        const V gate = mlp(p_.gate_init[k], m_init[e]);
                        std::vector<V> chans;
                        chans.reserve(static_cast<size_t>(ch));
                        for (int c = 0; c < ch; ++c)
                            chans.push_back(b_.scale(y_edge[e], b_.slice(gate, c, 1)));
                        contributions.push_back(b_.concat(chans));
                    }
                }
                V acc = accumulate(contributions);
                if (!opts_.unit_gates)
                    acc = b_.scale_const(acc, 1.0 / static_cast<double>(contributions.size()));
                if (cfg_.center_anchor && !opts_.unit_gates) {
                    const Vec3 rel = g_.coords[static_cast<size_t>(i)] - centroid;
                    const double r = rel.norm();
                    if (r > 1e-12) { // a node sitting on the centroid has no anchor direction
                        const V y = b_.constant(specfun::sph_harm(l, specfun::UnitVec3::normalized(rel)));
                        const V gate = mlp(p_.gate_anchor[k],
                                           b_.concat(std::vector<V>{s.h[static_cast<size_t>(i)],
                                                                    b_.constant({r * r})}));
                        std::vector<V> chans;
                        chans.reserve(static_cast<size_t>(ch));
                        for (int c = 0; c < ch; ++c)
                            chans.push_back(b_.scale(y, b_.slice(gate, c, 1)));
                        acc = b_.add(acc, b_.concat(chans));
                    }
                }
                s.feat[k].push_back(std::move(acc));
            }
        }
        return s;
    }

    Edges compute_messages(const State& s, int layer_index) {
        const auto& layer = p_.layers.at(static_cast<size_t>(layer_index));
        Edges out;
        out.message.reserve(g_.edges.size());
        out.z.reserve(g_.edges.size());
        for (size_t e = 0; e < g_.edges.size(); ++e) {
            const auto& edge = g_.edges[e];
            const size_t i = static_cast<size_t>(edge.i), j = static_cast<size_t>(edge.j);
            const V diff = b_.sub(s.x[i], s.x[j]);
            const V d2 = b_.dot(diff, diff);
            std::vector<V> zparts;
            if (plan_.degree0_active)
                for (int c = 0; c < cfg_.channels[0]; ++c)
                    zparts.push_back(b_.dot(b_.slice(s.h[i], c, 1), b_.slice(s.h[j], c, 1)));
            for (size_t k = 0; k < plan_.block_degrees.size(); ++k) {
                const int l = plan_.block_degrees[k];
                const int width = 2 * l + 1;
                const int ch = cfg_.channels[static_cast<size_t>(l)];
                if (cfg_.full_gram) {
                    for (int c1 = 0; c1 < ch; ++c1)
                        for (int c2 = 0; c2 < ch; ++c2)
                            zparts.push_back(b_.dot(b_.slice(s.feat[k][i], c1 * width, width),
                                                    b_.slice(s.feat[k][j], c2 * width, width)));
                } else {
                    for (int c = 0; c < ch; ++c)
                        zparts.push_back(b_.dot(b_.slice(s.feat[k][i], c * width, width),
                                                b_.slice(s.feat[k][j], c * width, width)));
                }
            }
            std::vector<V> parts = {s.h[i], s.h[j]};
            if (cfg_.edge_scalar_width > 0) parts.push_back(b_.constant(edge.scalars));
            parts.push_back(d2);
            const V zvec = zparts.empty() ? b_.constant({}) : b_.concat(zparts);
            if (!zparts.empty()) parts.push_back(zvec);
            out.message.push_back(mlp(layer.msg, b_.concat(parts)));
            out.z.push_back(zvec);
        }
        return out;
    }

    State apply_updates(const State& s, int layer_index, const Edges& msgs) {
        const auto& layer = p_.layers.at(static_cast<size_t>(layer_index));
        const int n = g_.num_nodes();
        State out = s;
        for (int i = 0; i < n; ++i) {
            const size_t ui = static_cast<size_t>(i);
            const auto& inc = plan_.incident[ui];
            std::vector<V> m_list;
            m_list.reserve(inc.size());
            for (size_t e : inc) m_list.push_back(msgs.message[e]);
            const V m_mean = mean(m_list);

            out.h[ui] = b_.add(s.h[ui], mlp(layer.upd_h, b_.concat(std::vector<V>{s.h[ui], m_mean})));

            std::vector<V> x_contrib;
            x_contrib.reserve(inc.size());
            for (size_t e : inc) {
                const auto& edge = g_.edges[e];
                const V diff = b_.sub(s.x[static_cast<size_t>(edge.i)], s.x[static_cast<size_t>(edge.j)]);
                x_contrib.push_back(b_.scale(diff, mlp(layer.gate_x, msgs.message[e])));
            }
            out.x[ui] = b_.add(s.x[ui], mean(x_contrib));
            if (cfg_.use_velocity && layer_index == 0)
                out.x[ui] = b_.add(out.x[ui], b_.scale(s.vel[ui], mlp(layer.gate_vel, s.h[ui])));
            if (cfg_.coord_degree1_update && !plan_.block_degrees.empty() && plan_.block_degrees[0] == 1) {
                // channel 0 of the degree-1 block, reordered (y,z,x) -> (x,y,z)
                const V v1 = b_.slice(s.feat[0][ui], 0, 3);
                const V xyz = b_.concat(std::vector<V>{b_.slice(v1, 2, 1), b_.slice(v1, 0, 1), b_.slice(v1, 1, 1)});
                out.x[ui] = b_.add(out.x[ui], b_.scale(xyz, mlp(layer.gate_coord1, s.h[ui])));
            }

            for (size_t k = 0; k < plan_.block_degrees.size(); ++k) {
                const int l = plan_.block_degrees[k];
                const int width = 2 * l + 1;
                const int ch = cfg_.channels[static_cast<size_t>(l)];
                std::vector<V> f_contrib;
                f_contrib.reserve(inc.size());
                for (size_t e : inc) {
                    const auto& edge = g_.edges[e];
                    const V fdiff = b_.sub(s.feat[k][static_cast<size_t>(edge.i)],
                                           s.feat[k][static_cast<size_t>(edge.j)]);
                    const V gate = mlp(layer.gate_feat[k], msgs.message[e]);
                    std::vector<V> chans;
                    chans.reserve(static_cast<size_t>(ch));
                    for (int c = 0; c < ch; ++c)
                        chans.push_back(b_.scale(b_.slice(fdiff, c * width, width), b_.slice(gate, c, 1)));
                    f_contrib.push_back(b_.concat(chans));
                }
                out.feat[k][ui] = b_.add(s.feat[k][ui], mean(f_contrib));
            }
        }
        return out;
    }

    State run() {
        State s = init();
        for (int k = 0; k < cfg_.layer_count; ++k) s = apply_updates(s, k, compute_messages(s, k));
        return s;
    }

    // Mean squared error over nodes and coordinate components.
    V mse(const State& s, const std::vector<Vec3>& targets) {
        require(targets.size() == s.x.size(), ErrorCode::invalid_argument, "target count mismatch");
        std::vector<V> sq;
        sq.reserve(s.x.size());
        for (size_t i = 0; i < s.x.size(); ++i) {
            const V diff = b_.sub(s.x[i], b_.constant({targets[i].x, targets[i].y, targets[i].z}));
            sq.push_back(b_.dot(diff, diff));
        }
        V acc = sq[0];
        for (size_t i = 1; i < sq.size(); ++i) acc = b_.add(acc, sq[i]);
        return b_.scale_const(acc, 1.0 / (3.0 * static_cast<double>(s.x.size())));
    }

    V mlp(const MlpRef& m, const V& in) {
        V h1 = b_.silu(b_.add(b_.matvec(arr(m.w1), in, m.hidden, m.in), arr(m.b1)));
        V h2 = b_.silu(b_.add(b_.matvec(arr(m.w2), h1, m.hidden, m.hidden), arr(m.b2)));
        return b_.add(b_.matvec(arr(m.w3), h2, m.out, m.hidden), arr(m.b3));
    }

private:
    const V& arr(const ArrayRef& r) const { return bound_.arrays[static_cast<size_t>(r.index)]; }

    V dense(const DenseRef& d, const V& in) {
        return b_.add(b_.matvec(arr(d.w), in, d.out, d.in), arr(d.b));
    }

    V accumulate(const std::vector<V>& items) {
        V acc = items.at(0);
        for (size_t i = 1; i < items.size(); ++i) acc = b_.add(acc, items[i]);
        return acc;
    }

    V mean(const std::vector<V>& items) {
        return b_.scale_const(accumulate(items), 1.0 / static_cast<double>(items.size()));
    }

    B& b_;
    const GeometricGraph& g_;
    const ModelParams& p_;
    const ModelConfig& cfg_;
    ForwardOptions opts_;
    GraphPlan plan_;
    Bound<B> bound_;
};

SteerableState to_public(const Runner<ad::EagerBackend>::State& s, const GraphPlan& plan) {
    SteerableState out;
    out.degrees = plan.block_degrees;
    out.h = s.h;
    out.x.reserve(s.x.size());
    for (const auto& v : s.x) out.x.push_back({v[0], v[1], v[2]});
    for (const auto& v : s.vel) out.velocities.push_back({v[0], v[1], v[2]});
    out.feat = s.feat;
    return out;
}

Runner<ad::EagerBackend>::State from_public(const SteerableState& s) {
    Runner<ad::EagerBackend>::State out;
    out.h = s.h;
    for (const Vec3& v : s.x) out.x.push_back({v.x, v.y, v.z});
    for (const Vec3& v : s.velocities) out.vel.push_back({v.x, v.y, v.z});
    out.feat = s.feat;
    return out;
}

} // namespace

int SteerableState::degree_index(int l) const {
    for (size_t k = 0; k < degrees.size(); ++k)
        if (degrees[k] == l) return static_cast<int>(k);
    return -1;
}

SteerableState init_features(const GeometricGraph& g, const ModelParams& params,
                             const ForwardOptions& opts) {
    ad::EagerBackend b;
    Runner<ad::EagerBackend> runner(b, g, params, opts);
    return to_public(runner.init(), runner.plan());
}

EdgeMessages message(const SteerableState& state, const GeometricGraph& g,
                     const ModelParams& params, int layer) {
    ad::EagerBackend b;
    Runner<ad::EagerBackend> runner(b, g, params, {});
    const auto edges = runner.compute_messages(from_public(state), layer);
    return EdgeMessages{edges.message, edges.z};
}

SteerableState aggregate_update(const SteerableState& state, const GeometricGraph& g,
                                const ModelParams& params, int layer, const EdgeMessages& msgs) {
    ad::EagerBackend b;
    Runner<ad::EagerBackend> runner(b, g, params, {});
    Runner<ad::EagerBackend>::Edges edges{msgs.message, msgs.z};
    return to_public(runner.apply_updates(from_public(state), layer, edges), runner.plan());
}

SteerableState forward(const GeometricGraph& g, const ModelParams& params,
                       const ForwardOptions& opts) {
    ad::EagerBackend b;
    Runner<ad::EagerBackend> runner(b, g, params, opts);
    return to_public(runner.run(), runner.plan());
}

Pooled pool(const SteerableState& state) {
    require(!state.h.empty(), ErrorCode::invalid_argument, "cannot pool an empty state");
    Pooled out;
    out.degrees = state.degrees;
    const double inv = 1.0 / static_cast<double>(state.h.size());
    out.h.assign(state.h[0].size(), 0.0);
    for (const auto& h : state.h)
        for (size_t c = 0; c < h.size(); ++c) out.h[c] += h[c] * inv;
    for (const Vec3& v : state.x) out.x += v * inv;
    out.feat.resize(state.feat.size());
    for (size_t k = 0; k < state.feat.size(); ++k) {
        out.feat[k].assign(state.feat[k][0].size(), 0.0);
        for (const auto& block : state.feat[k])
            for (size_t c = 0; c < block.size(); ++c) out.feat[k][c] += block[c] * inv;
    }
    return out;
}

TapedLoss build_training_tape(ad::Tape& tape, const GeometricGraph& g,
                              const ModelParams& params, const std::vector<Vec3>& targets,
                              const ForwardOptions& opts) {
    ad::TapeBackend b{&tape};
    Runner<ad::TapeBackend> runner(b, g, params, opts);
    TapedLoss out;
    out.param_nodes = runner.bound_arrays();
    out.loss = runner.mse(runner.run(), targets);
    return out;
}

TapedLoss build_message_tape(ad::Tape& tape, const GeometricGraph& g, const ModelParams& params) {
    require(params.config.layer_count >= 1, ErrorCode::invalid_argument,
            "message tape needs at least one layer");
    ad::TapeBackend b{&tape};
    Runner<ad::TapeBackend> runner(b, g, params, {});
    TapedLoss out;
    out.param_nodes = runner.bound_arrays();
    const auto state = runner.init();
    const auto edges = runner.compute_messages(state, 0);
    out.loss = tape.dot(edges.message.at(0), edges.message.at(0));
    return out;
}

double mse_loss(const GeometricGraph& g, const ModelParams& params,
                const std::vector<Vec3>& targets, const ForwardOptions& opts) {
    ad::EagerBackend b;
    Runner<ad::EagerBackend> runner(b, g, params, opts);
    return runner.mse(runner.run(), targets)[0];
}

double message_loss(const GeometricGraph& g, const ModelParams& params) {
    ad::EagerBackend b;
    Runner<ad::EagerBackend> runner(b, g, params, {});
    const auto state = runner.init();
    const auto edges = runner.compute_messages(state, 0);
    return ad::EagerBackend::dot(edges.message.at(0), edges.message.at(0))[0];
}

namespace {

double block_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

ModelConfig discrimination_config(const std::vector<int>& degrees) {
    require(!degrees.empty(), ErrorCode::invalid_argument, "at least one degree required");
    int max_degree = 0;
    for (int l : degrees) {
        require(l >= 0 && l <= specfun::kMaxDegree, ErrorCode::invalid_argument,
                "requested degree outside 0..30");
        max_degree = std::max(max_degree, l);
    }
    ModelConfig cfg;
    cfg.max_degree = max_degree;
    cfg.channels.assign(static_cast<size_t>(max_degree) + 1, 1);
    cfg.channels[0] = 8;
    cfg.hidden_width = 16;
    cfg.layer_count = 2;
    cfg.degree_mask = degrees;
    cfg.node_scalar_width = 1;
    cfg.center_anchor = true;
    return cfg;
}

} // namespace

DiscriminationResult discrimination_trials(const GeometricGraph& structure,
                                           const std::vector<int>& degrees, int trials,
                                           uint64_t seed) {
    require(structure.centered, ErrorCode::invalid_argument, "structure must be centered");
    require(trials >= 1, ErrorCode::invalid_argument, "at least one trial required");
    const ModelConfig cfg = discrimination_config(degrees);
    constexpr double kZeroCut = 1e-3;

    DiscriminationResult result;
    result.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const ModelParams params = ModelParams::seeded(cfg, derive_seed(seed, 2 * static_cast<uint64_t>(t)));
        // Re-draw until the rotated copy does not coincide with the original.
        specfun::Rotation3 rot = specfun::Rotation3::identity();
        bool found = false;
        for (uint64_t attempt = 0; attempt < 64 && !found; ++attempt) {
            rot = geom::random_rotation(derive_seed(seed, 2 * static_cast<uint64_t>(t) + 1) + attempt);
            found = !geom::is_symmetric_under(structure, {rot, specfun::Parity::even}).has_value();
        }
        require(found, ErrorCode::internal, "could not draw a non-coincident rotation");

        const SteerableState s0 = forward(structure, params);
        const SteerableState s1 = forward(structure.rotated(rot), params);
        const Pooled p0 = pool(s0);
        const Pooled p1 = pool(s1);
        double stat = 0.0;
        for (int l : degrees) {
            if (l == 0) continue; // invariant head never separates the copies
            const int k = s0.degree_index(l);
            require(k >= 0, ErrorCode::internal, "requested degree missing from state");
            std::vector<double> diff = p0.feat[static_cast<size_t>(k)];
            for (size_t c = 0; c < diff.size(); ++c) diff[c] -= p1.feat[static_cast<size_t>(k)][c];
            stat = std::max(stat, block_norm(diff) / (1.0 + block_norm(p0.feat[static_cast<size_t>(k)])));
        }
        result.max_statistic = std::max(result.max_statistic, stat);
        if (stat > kZeroCut) ++result.successes;
    }
    result.verdict = 2 * result.successes > trials;
    return result;
}

bool discriminates(const GeometricGraph& structure, const std::vector<int>& degrees,
                   int trials, uint64_t seed) {
    return discrimination_trials(structure, degrees, trials, seed).verdict;
}

SphSumResult sph_sum_check(const GeometricGraph& structure, int l) {
    require(structure.centered, ErrorCode::invalid_argument, "structure must be centered");
    std::vector<double> acc(static_cast<size_t>(2 * l + 1), 0.0);
    for (const Vec3& c : structure.coords) {
        require(c.norm() > 1e-12, ErrorCode::invalid_argument, "node at the origin");
        const auto y = specfun::sph_harm(l, specfun::UnitVec3::normalized(c));
        for (size_t k = 0; k < acc.size(); ++k) acc[k] += y[k];
    }
    SphSumResult result;
    result.norm = block_norm(acc);
    result.distinguishable = result.norm > 1e-3;
    return result;
}

namespace {

std::vector<std::complex<double>> durand_kerner(const std::vector<double>& monic) {
    // monic[k] is the coefficient of t^k, monic.back() == 1
    const int degree = static_cast<int>(monic.size()) - 1;
    std::vector<std::complex<double>> roots(static_cast<size_t>(degree));
    const std::complex<double> seed(0.4, 0.9);
    std::complex<double> p(1.0, 0.0);
    for (auto& r : roots) {
        p *= seed;
        r = p;
    }
    auto eval = [&](std::complex<double> t) {
        std::complex<double> acc(0.0, 0.0);
        for (int k = degree; k >= 0; --k) acc = acc * t + monic[static_cast<size_t>(k)];
        return acc;
    };
    for (int iter = 0; iter < 600; ++iter) {
        double moved = 0.0;
        for (int i = 0; i < degree; ++i) {
            std::complex<double> den(1.0, 0.0);
            for (int j = 0; j < degree; ++j)
                if (j != i) den *= roots[static_cast<size_t>(i)] - roots[static_cast<size_t>(j)];
            const std::complex<double> delta = eval(roots[static_cast<size_t>(i)]) / den;
            roots[static_cast<size_t>(i)] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return roots;
}

} // namespace

std::vector<double> recover_angles(std::span<const double> z_values, int count) {
    require(count >= 1, ErrorCode::invalid_argument, "need at least one angle");
    require(count <= 12, ErrorCode::domain,
            "angle recovery is ill-conditioned beyond 12 angles");
    require(static_cast<int>(z_values.size()) >= count, ErrorCode::invalid_argument,
            "need z values for every degree 1..count");
    const int m = count;

    // Legendre coefficients in the monomial basis via the recurrence.
    std::vector<std::vector<double>> coef(static_cast<size_t>(m) + 1);
    coef[0] = {1.0};
    if (m >= 1) coef[1] = {0.0, 1.0};
    for (int l = 2; l <= m; ++l) {
        coef[static_cast<size_t>(l)].assign(static_cast<size_t>(l) + 1, 0.0);
        for (int k = 0; k <= l - 1; ++k)
            coef[static_cast<size_t>(l)][static_cast<size_t>(k + 1)] +=
                (2.0 * l - 1.0) * coef[static_cast<size_t>(l - 1)][static_cast<size_t>(k)] / l;
        for (int k = 0; k + 2 <= l; ++k)
            coef[static_cast<size_t>(l)][static_cast<size_t>(k)] -=
                (l - 1.0) * coef[static_cast<size_t>(l - 2)][static_cast<size_t>(k)] / l;
    }

    // Power sums from the Legendre sums (triangular solve).
    std::vector<double> s(static_cast<size_t>(m) + 1, 0.0);
    s[0] = static_cast<double>(m);
    for (int l = 1; l <= m; ++l) {
        double acc = z_values[static_cast<size_t>(l - 1)] / (2.0 * l + 1.0);
        for (int k = 0; k < l; ++k) acc -= coef[static_cast<size_t>(l)][static_cast<size_t>(k)] * s[static_cast<size_t>(k)];
        s[static_cast<size_t>(l)] = acc / coef[static_cast<size_t>(l)][static_cast<size_t>(l)];
    }

    // Newton's identities: power sums -> elementary symmetric polynomials.
    std::vector<double> e(static_cast<size_t>(m) + 1, 0.0);
    e[0] = 1.0;
    for (int k = 1; k <= m; ++k) {
        double acc = 0.0;
        double sign = 1.0;
        for (int i = 1; i <= k; ++i) {
            acc += sign * e[static_cast<size_t>(k - i)] * s[static_cast<size_t>(i)];
            sign = -sign;
        }
        e[static_cast<size_t>(k)] = acc / k;
    }

    // Vieta: the monic polynomial with the cosines as roots.
    std::vector<double> monic(static_cast<size_t>(m) + 1, 0.0);
    for (int k = 0; k <= m; ++k)
        monic[static_cast<size_t>(m - k)] = (k % 2 == 0 ? 1.0 : -1.0) * e[static_cast<size_t>(k)];

    const auto roots = durand_kerner(monic);
    std::vector<double> cosines;
    cosines.reserve(roots.size());
    for (const auto& r : roots) cosines.push_back(std::clamp(r.real(), -1.0, 1.0));
    std::sort(cosines.begin(), cosines.end());
    return cosines;
}

} // namespace hegnn::model
