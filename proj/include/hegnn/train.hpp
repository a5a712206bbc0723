#ifndef HEGNN_TRAIN_HPP
#define HEGNN_TRAIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hegnn/geomgraph.hpp"
#include "hegnn/model.hpp"

namespace hegnn::train {

struct TrainConfig {
    double learning_rate = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 16;
    int epochs = 30;
    uint64_t seed = 0;

    void validate() const;
};

struct EpochLoss {
    int epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainResult {
    model::ModelParams params;
    std::vector<EpochLoss> history;
};

// Adam on the mean squared error between predicted and true final positions.
// Deterministic given the seeds; aborts with a diagnostic on non-finite loss.
TrainResult train(const std::vector<geom::NBodySample>& train_set,
                  const std::vector<geom::NBodySample>& val_set,
                  const model::ModelConfig& cfg, const TrainConfig& tcfg);

// Mean over samples of the per-sample coordinate MSE of the model.
double evaluate_mse(const std::vector<geom::NBodySample>& samples,
                    const model::ModelParams& params);

// Closed-form ballistic extrapolation x0 + v0 * horizon.
double linear_baseline_mse(const std::vector<geom::NBodySample>& samples, double horizon);

enum class GradCheckTarget { dense_layer, message_op, full_model };

// Max relative error between tape gradients and central finite differences
// along 20 random parameter directions. `grad_fault` perturbs the analytic
// gradient; the verification suite uses it as a negative control.
double grad_check(GradCheckTarget target, uint64_t seed, double grad_fault = 0.0);

} // namespace hegnn::train

#endif
