#include "hegnn/train.hpp"

#include <algorithm>
#include <cmath>

#include "hegnn/rng.hpp"

namespace hegnn::train {

using geom::NBodySample;
using model::ModelConfig;
using model::ModelParams;

void TrainConfig::validate() const {
    require(learning_rate > 0.0, ErrorCode::invalid_argument, "learning rate must be positive");
    require(beta1 > 0.0 && beta1 < 1.0, ErrorCode::invalid_argument, "beta1 must lie in (0, 1)");
    require(beta2 > 0.0 && beta2 < 1.0, ErrorCode::invalid_argument, "beta2 must lie in (0, 1)");
    require(epsilon > 0.0, ErrorCode::invalid_argument, "epsilon must be positive");
    require(batch_size >= 1, ErrorCode::invalid_argument, "batch size must be positive");
    require(epochs >= 1, ErrorCode::invalid_argument, "epoch count must be positive");
}

namespace {

double sample_loss_and_grad(const NBodySample& sample, const ModelParams& params,
                            std::vector<double>& grad_accum) {
    const geom::GeometricGraph g = geom::sample_to_graph(sample);
    ad::Tape tape;
    const model::TapedLoss taped = model::build_training_tape(tape, g, params, sample.positions_t1);
    const double loss = tape.value(taped.loss)[0];
    const auto grads = tape.gradients(taped.loss, taped.param_nodes);
    const auto& entries = params.store.entries();
    for (size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        for (size_t i = 0; i < e.size; ++i) grad_accum[e.offset + i] += grads[k][i];
    }
    return loss;
}

} // namespace

TrainResult train(const std::vector<NBodySample>& train_set,
                  const std::vector<NBodySample>& val_set,
                  const ModelConfig& cfg, const TrainConfig& tcfg) {
    require(!train_set.empty(), ErrorCode::invalid_argument, "empty training set");
    tcfg.validate();

    TrainResult result{ModelParams::seeded(cfg, tcfg.seed), {}};
    ModelParams& params = result.params;
    const size_t dim = params.store.total_size();
    std::vector<double> m(dim, 0.0), v(dim, 0.0), grad(dim, 0.0);
    long step = 0;

    std::vector<size_t> order(train_set.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
        // deterministic shuffle per epoch
        Rng shuffle_rng(derive_seed(tcfg.seed, 0x5u + static_cast<uint64_t>(epoch)));
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.next_u64() % i]);

        double epoch_loss = 0.0;
        size_t seen = 0;
        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(tcfg.batch_size)) {
            const size_t stop = std::min(order.size(), start + static_cast<size_t>(tcfg.batch_size));
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (size_t idx = start; idx < stop; ++idx)
                batch_loss += sample_loss_and_grad(train_set[order[idx]], params, grad);
            const double inv = 1.0 / static_cast<double>(stop - start);
            batch_loss *= inv;
            require(std::isfinite(batch_loss), ErrorCode::domain,
                    "training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                        ", step " + std::to_string(step));
            epoch_loss += batch_loss * static_cast<double>(stop - start);
            seen += stop - start;

            ++step;
            const double bc1 = 1.0 - std::pow(tcfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(tcfg.beta2, static_cast<double>(step));
            auto flat = params.store.flat();
            for (size_t i = 0; i < dim; ++i) {
                const double gi = grad[i] * inv;
                m[i] = tcfg.beta1 * m[i] + (1.0 - tcfg.beta1) * gi;
                v[i] = tcfg.beta2 * v[i] + (1.0 - tcfg.beta2) * gi * gi;
                flat[i] -= tcfg.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + tcfg.epsilon);
            }
        }

        EpochLoss entry;
        entry.epoch = epoch;
        entry.train_mse = epoch_loss / static_cast<double>(seen);
        entry.val_mse = val_set.empty() ? 0.0 : evaluate_mse(val_set, params);
        require(std::isfinite(entry.val_mse), ErrorCode::domain,
                "training diverged: non-finite validation loss at epoch " + std::to_string(epoch));
        result.history.push_back(entry);
    }
    return result;
}

double evaluate_mse(const std::vector<NBodySample>& samples, const ModelParams& params) {
    require(!samples.empty(), ErrorCode::invalid_argument, "empty evaluation set");
    double acc = 0.0;
    for (const NBodySample& s : samples)
        acc += model::mse_loss(geom::sample_to_graph(s), params, s.positions_t1);
    return acc / static_cast<double>(samples.size());
}

double linear_baseline_mse(const std::vector<NBodySample>& samples, double horizon) {
    require(!samples.empty(), ErrorCode::invalid_argument, "empty evaluation set");
    double acc = 0.0;
    for (const NBodySample& s : samples) {
        double sq = 0.0;
        for (size_t i = 0; i < s.positions_t0.size(); ++i) {
            const Vec3 pred = s.positions_t0[i] + s.velocities_t0[i] * horizon;
            sq += (pred - s.positions_t1[i]).norm2();
        }
        acc += sq / (3.0 * static_cast<double>(s.positions_t0.size()));
    }
    return acc / static_cast<double>(samples.size());
}

namespace {

geom::GeometricGraph tiny_graph(uint64_t seed) {
    Rng rng(seed);
    geom::GeometricGraph g;
    g.node_scalars = Matrix(3, 1);
    for (int i = 0; i < 3; ++i) g.node_scalars(i, 0) = rng.normal();
    for (int i = 0; i < 3; ++i) g.coords.push_back(rng.normal_vec3());
    g.velocities.emplace();
    for (int i = 0; i < 3; ++i) g.velocities->push_back(rng.normal_vec3());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) g.edges.push_back({i, j, {}});
    g.center();
    return g;
}

// Central finite differences of `f` along random unit directions against the
// analytic gradient `grad`.
double directional_fd_error(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> at, std::span<const double> grad,
                            uint64_t seed) {
    Rng rng(seed);
    const double step = 1e-6;
    double worst = 0.0;
    std::vector<double> plus(at.begin(), at.end()), minus(at.begin(), at.end());
    for (int c = 0; c < 20; ++c) {
        std::vector<double> dir(at.size());
        double n2 = 0.0;
        for (double& d : dir) {
            d = rng.normal();
            n2 += d * d;
        }
        const double inv = 1.0 / std::sqrt(n2);
        double analytic = 0.0;
        for (size_t i = 0; i < at.size(); ++i) {
            plus[i] = at[i] + step * dir[i] * inv;
            minus[i] = at[i] - step * dir[i] * inv;
            analytic += grad[i] * dir[i] * inv;
        }
        const double numeric = (f(plus) - f(minus)) / (2.0 * step);
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
    return worst;
}

} // namespace

double grad_check(GradCheckTarget target, uint64_t seed, double grad_fault) {
    if (target == GradCheckTarget::dense_layer) {
        // y = silu(W x), loss = <y, y>
        Rng rng(derive_seed(seed, 1));
        std::vector<double> w(20);
        std::vector<double> x(5);
        for (double& c : w) c = rng.normal();
        for (double& c : x) c = rng.normal();
        ad::Tape tape;
        const auto wid = tape.param(w);
        const auto y = tape.silu(tape.matvec(wid, tape.constant(x), 4, 5));
        const auto loss = tape.dot(y, y);
        auto grad = tape.gradients(loss, std::vector<ad::Tape::Id>{wid})[0];
        for (double& gi : grad) gi += grad_fault;
        auto f = [&](std::span<const double> p) {
            double acc = 0.0;
            for (int r = 0; r < 4; ++r) {
                double row = 0.0;
                for (int c = 0; c < 5; ++c) row += p[static_cast<size_t>(5 * r + c)] * x[static_cast<size_t>(c)];
                const double s = row / (1.0 + std::exp(-row));
                acc += s * s;
            }
            return acc;
        };
        return directional_fd_error(f, w, grad, derive_seed(seed, 2));
    }

    const geom::GeometricGraph g = tiny_graph(derive_seed(seed, 3));
    ModelConfig cfg = ModelConfig::standard(2);
    cfg.channels = {6, 1, 1};
    cfg.hidden_width = 10;
    cfg.layer_count = 2;
    cfg.use_velocity = (target == GradCheckTarget::full_model);
    cfg.center_anchor = true;
    const ModelParams params = ModelParams::seeded(cfg, derive_seed(seed, 4));

    std::vector<Vec3> targets;
    {
        Rng rng(derive_seed(seed, 5));
        for (int i = 0; i < g.num_nodes(); ++i) targets.push_back(rng.normal_vec3());
    }

    ad::Tape tape;
    const model::TapedLoss taped = (target == GradCheckTarget::message_op)
        ? model::build_message_tape(tape, g, params)
        : model::build_training_tape(tape, g, params, targets);
    const auto grads = tape.gradients(taped.loss, taped.param_nodes);
    std::vector<double> grad(params.store.total_size(), 0.0);
    const auto& entries = params.store.entries();
    for (size_t k = 0; k < entries.size(); ++k)
        for (size_t i = 0; i < entries[k].size; ++i) grad[entries[k].offset + i] = grads[k][i];
    for (double& gi : grad) gi += grad_fault;

    auto f = [&](std::span<const double> p) {
        ModelParams probe = ModelParams::seeded(cfg, 0);
        std::copy(p.begin(), p.end(), probe.store.flat().begin());
        return (target == GradCheckTarget::message_op)
            ? model::message_loss(g, probe)
            : model::mse_loss(g, probe, targets);
    };
    return directional_fd_error(f, params.store.flat(), grad, derive_seed(seed, 6));
}

} // namespace hegnn::train
