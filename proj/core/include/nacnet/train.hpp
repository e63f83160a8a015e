#pragma once

#include "nacnet/gnn.hpp"
#include "nacnet/matrix.hpp"
#include "nacnet/tme_graph.hpp"

#include <cstdint>
#include <vector>

namespace nacnet {

struct TrainConfig {
    double lr = 1e-3;
    int epochs = 250;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    /// Early stopping: stop once the epoch loss has not improved by at
    /// least min_delta for this many consecutive epochs. 0 disables it.
    int patience = 0;
    double min_delta = 1e-4;
    std::uint64_t seed = 1;

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

/// One training graph with its (standardized) feature matrix and class.
struct TrainExample {
    const TmeGraph* graph = nullptr;
    const Matrix* features = nullptr;
    int label = 0;  // 0 = RD, 1 = pCR
};

struct TrainResult {
    ModelParams params;
    /// Entry 0 is the evaluation loss before any update (about ln 2 for a
    /// fresh model on balanced data); entry e is the mean training loss of
    /// epoch e.
    std::vector<double> loss_curve;
    int epochs_run = 0;
    double prior_pcr = 0.5;  // class prior of the training set
};

/// Trains from a fresh initialization with per-example adaptive-moment
/// updates. Deterministic given the seed; a non-finite loss aborts with
/// diagnostics naming the epoch and step.
TrainResult trainModel(const std::vector<TrainExample>& data, const ModelConfig& model_cfg,
                       const TrainConfig& train_cfg);

/// Adaptive-moment state over the flat parameter vector.
class AdamOptimizer {
public:
    AdamOptimizer(long param_count, const TrainConfig& cfg);

    /// Applies one update of params from grads (shapes must match).
    void step(ModelParams& params, const ModelParams& grads);

    long stepsTaken() const { return steps_; }

private:
    TrainConfig cfg_;
    long steps_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
    std::vector<double> grad_flat_;
};

} // namespace nacnet
