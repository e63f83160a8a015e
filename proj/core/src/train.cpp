#include "nacnet/train.hpp"

#include "nacnet/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace nacnet {

void TrainConfig::validate() const {
    if (lr < 0.0) throw ConfigError("learning rate must be non-negative");
    if (epochs < 0) throw ConfigError("epoch count must be non-negative");
    if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
        throw ConfigError("adaptive-moment betas must lie in [0, 1)");
    }
    if (adam_eps <= 0.0) throw ConfigError("optimizer epsilon must be positive");
    if (patience < 0) throw ConfigError("patience must be non-negative");
    if (min_delta < 0.0) throw ConfigError("min_delta must be non-negative");
}

AdamOptimizer::AdamOptimizer(long param_count, const TrainConfig& cfg)
    : cfg_(cfg),
      m_(static_cast<std::size_t>(param_count), 0.0),
      v_(static_cast<std::size_t>(param_count), 0.0) {
    grad_flat_.reserve(m_.size());
}

void AdamOptimizer::step(ModelParams& params, const ModelParams& grads) {
    grad_flat_.clear();
    grads.visitConst([this](double g) { grad_flat_.push_back(g); });
    if (grad_flat_.size() != m_.size()) {
        throw DataError("optimizer state covers " + std::to_string(m_.size()) +
                        " parameters, gradients cover " + std::to_string(grad_flat_.size()));
    }
    ++steps_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));
    std::size_t i = 0;
    params.visit([this, bc1, bc2, &i](double& w) {
        const double g = grad_flat_[i];
        m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
        v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g * g;
        const double mhat = m_[i] / bc1;
        const double vhat = v_[i] / bc2;
        w -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.adam_eps);
        ++i;
    });
}

namespace {

void validateDataset(const std::vector<TrainExample>& data, const ModelConfig& cfg) {
    if (data.size() < 2) {
        throw DataError("training needs at least two examples, got " +
                        std::to_string(data.size()));
    }
    bool has_pcr = false;
    bool has_rd = false;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const TrainExample& ex = data[i];
        if (ex.graph == nullptr || ex.features == nullptr) {
            throw DataError("training example " + std::to_string(i) + " is incomplete");
        }
        if (ex.label != 0 && ex.label != 1) {
            throw DataError("training example " + std::to_string(i) + " has label " +
                            std::to_string(ex.label) + ", expected 0 or 1");
        }
        if (ex.graph->numNodes() == 0) {
            throw DataError("training example " + std::to_string(i) + " has an empty graph");
        }
        if (ex.features->rows() != ex.graph->numNodes() ||
            ex.features->cols() != cfg.input_dim) {
            throw DataError("training example " + std::to_string(i) +
                            " features do not match its graph and model input size");
        }
        (ex.label == 1 ? has_pcr : has_rd) = true;
    }
    if (!has_pcr || !has_rd) {
        throw DataError("training set must contain both pCR and RD examples");
    }
}

double meanEvalLoss(const ModelParams& params, const std::vector<TrainExample>& data) {
    double total = 0.0;
    for (const TrainExample& ex : data) {
        ForwardCache cache = forward(params, *ex.graph, *ex.features, false, nullptr);
        total += crossEntropyLoss(cache, ex.label);
    }
    return total / static_cast<double>(data.size());
}

} // namespace

TrainResult trainModel(const std::vector<TrainExample>& data, const ModelConfig& model_cfg,
                       const TrainConfig& train_cfg) {
    model_cfg.validate();
    train_cfg.validate();
    validateDataset(data, model_cfg);

    Rng rng(train_cfg.seed);
    TrainResult result;
    result.params = initModel(model_cfg, rng);

    long pcr = 0;
    for (const TrainExample& ex : data) pcr += ex.label;
    result.prior_pcr = static_cast<double>(pcr) / static_cast<double>(data.size());

    result.loss_curve.push_back(meanEvalLoss(result.params, data));

    AdamOptimizer optimizer(result.params.paramCount(), train_cfg);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    double best_loss = result.loss_curve.front();
    int stale_epochs = 0;
    for (int epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t step = 0; step < order.size(); ++step) {
            const TrainExample& ex = data[order[step]];
            ForwardCache cache = forward(result.params, *ex.graph, *ex.features, true, &rng);
            const double loss = crossEntropyLoss(cache, ex.label);
            if (!std::isfinite(loss)) {
                throw DataError("training diverged: loss " + std::to_string(loss) +
                                " at epoch " + std::to_string(epoch) + ", step " +
                                std::to_string(step) + " (lr " + std::to_string(train_cfg.lr) +
                                ", seed " + std::to_string(train_cfg.seed) + ")");
            }
            epoch_loss += loss;
            ModelParams grads = zerosLike(result.params);
            backward(result.params, cache, ex.label, grads);
            optimizer.step(result.params, grads);
        }
        epoch_loss /= static_cast<double>(order.size());
        result.loss_curve.push_back(epoch_loss);
        result.epochs_run = epoch;

        if (train_cfg.patience > 0) {
            if (epoch_loss < best_loss - train_cfg.min_delta) {
                best_loss = epoch_loss;
                stale_epochs = 0;
            } else if (++stale_epochs >= train_cfg.patience) {
                break;
            }
        }
    }
    return result;
}

} // namespace nacnet
