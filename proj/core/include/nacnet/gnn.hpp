#pragma once

#include "nacnet/matrix.hpp"
#include "nacnet/rng.hpp"
#include "nacnet/tme_graph.hpp"

#include <functional>
#include <vector>

namespace nacnet {

/// Architecture of the predictor: stacked blocks of GIN aggregation,
/// dense multi-head self-attention with a post-norm residual, and a GCN
/// propagation step, followed by mean pooling and a linear 2-class head.
struct ModelConfig {
    int input_dim = 29;
    int hidden = 256;
    int blocks = 2;
    int heads = 2;
    double dropout = 0.5;
    double layernorm_eps = 1e-5;

    int headDim() const { return hidden / heads; }
    void validate() const;
    bool operator==(const ModelConfig&) const = default;
};

/// GIN update: MLP((1 + alpha) * h_v + sum of neighbor features), where the
/// MLP is two dense layers with ReLU after each.
struct GinParams {
    double alpha = 0.0;
    Matrix w1, b1;  // d_in x h, 1 x h
    Matrix w2, b2;  // h x h,    1 x h
};

/// Per-head query/key/value projections plus the output projection applied
/// to the concatenated heads.
struct AttentionParams {
    std::vector<Matrix> q, k, v;  // each h x head_dim
    Matrix out_w, out_b;          // h x h, 1 x h
};

struct LayerNormParams {
    Matrix gamma, beta;  // 1 x h each
};

struct GcnParams {
    Matrix w, b;  // h x h, 1 x h
};

struct BlockParams {
    GinParams gin;
    AttentionParams attn;
    LayerNormParams norm;
    GcnParams gcn;
};

struct ModelParams {
    ModelConfig cfg;
    std::vector<BlockParams> blocks;
    Matrix head_w, head_b;  // h x 2, 1 x 2

    long paramCount() const;

    /// Calls fn on every learnable scalar in a fixed traversal order. The
    /// same order is used for checkpoints, optimizer state, and gradient
    /// checks, so a params struct and its gradient struct stay aligned.
    void visit(const std::function<void(double&)>& fn);
    void visitConst(const std::function<void(double)>& fn) const;
};

/// Random initialization: He-scaled weights, zero biases, alpha 0, unit
/// layer-norm scale. The classifier head starts near zero so an untrained
/// model scores close to the uninformed ln 2 loss.
ModelParams initModel(const ModelConfig& cfg, Rng& rng);

/// Allocates every tensor of the architecture, zero-filled (checkpoint
/// loading, gradient accumulators).
ModelParams emptyModel(const ModelConfig& cfg);

/// Same shapes as p, every scalar zero (gradient accumulator).
ModelParams zerosLike(const ModelParams& p);

/// GIN aggregation before the MLP: (1 + alpha) * H + A * H.
Matrix ginAggregate(const Matrix& h, const std::vector<std::vector<int>>& adj,
                    double alpha);

/// Pre-residual attention output: per head softmax(Q K^T / sqrt(d_head)) V,
/// heads concatenated, then output-projected.
Matrix attentionForward(const Matrix& hprime, const AttentionParams& p, int heads);

/// Symmetric normalized adjacency with self-loops:
/// D^{-1/2} (A + I) D^{-1/2} where D is the degree matrix of A + I.
Matrix normalizedAdjacency(const TmeGraph& g);

/// GCN propagation: ReLU(ahat * h * W + b).
Matrix gcnForward(const Matrix& h, const Matrix& ahat, const GcnParams& p);

/// Everything the backward pass needs, recorded during forward.
struct BlockCache {
    Matrix input;      // block input X
    Matrix s;          // (1+alpha) X + A X
    Matrix z1, h1;     // first MLP layer pre/post ReLU
    Matrix z2, hprime; // second MLP layer pre/post ReLU (GIN output)
    std::vector<Matrix> qh, kh, vh;  // per-head projections, n x head_dim
    std::vector<Matrix> prob;        // per-head attention rows, n x n
    Matrix concat;     // heads side by side, n x h
    Matrix attn_out;   // after output projection
    Matrix drop_mask;  // 0 or 1/keep per entry; empty in eval mode
    Matrix res;        // hprime + dropout(attn_out)
    Matrix xhat;       // layer-norm normalized rows
    std::vector<double> inv_std;     // per-row 1/sqrt(var + eps)
    Matrix tilde;      // layer-norm output
    Matrix gcn_in;     // ahat * tilde
    Matrix gcn_pre;    // gcn_in * W + b, pre ReLU
    Matrix out;        // block output
};

struct ForwardCache {
    std::vector<std::vector<int>> adj;
    Matrix ahat;
    std::vector<BlockCache> blocks;
    Matrix pooled;       // 1 x h mean over final node embeddings
    Matrix pool_mask;    // dropout mask before the head; empty in eval mode
    Matrix pool_dropped; // 1 x h
    Matrix logits;       // 1 x 2
    Matrix probs;        // 1 x 2, sums to 1
};

/// Full forward pass. Dropout fires only when training is true, drawing
/// masks from rng (required then, may be null otherwise). Requires n >= 1.
ForwardCache forward(const ModelParams& p, const TmeGraph& g, const Matrix& features,
                     bool training, Rng* rng);

/// Cross-entropy of the cached prediction against label (0 = RD, 1 = pCR).
double crossEntropyLoss(const ForwardCache& cache, int label);

/// Reverse-mode gradients of the cross-entropy loss, accumulated into
/// grads (same shapes as p). When d_input is non-null it receives the
/// gradient with respect to the feature matrix.
void backward(const ModelParams& p, const ForwardCache& cache, int label,
              ModelParams& grads, Matrix* d_input = nullptr);

struct Prediction {
    double prob_pcr = 0.0;
    double prob_rd = 0.0;
    bool from_prior = false;  // empty graph fallback
    Matrix embeddings;        // n x h final node embeddings (density-map export)
};

/// Deterministic inference (dropout off). An empty graph falls back to the
/// training-set prior and sets from_prior.
Prediction predictGraph(const ModelParams& p, const TmeGraph& g, const Matrix& features,
                        double prior_pcr);

/// Central finite differences over every parameter and every input entry
/// against the analytic gradients; returns the max relative error, where
/// relative error = |a - b| / max(1, |a|, |b|).
double gradCheck(const ModelParams& p, const TmeGraph& g, const Matrix& features,
                 int label, double step = 1e-5);

} // namespace nacnet
