#include "nacnet/gnn.hpp"

#include "nacnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nacnet {
namespace {

Matrix reluOf(const Matrix& m) {
    Matrix r = m;
    for (double& v : r.raw()) v = v > 0.0 ? v : 0.0;
    return r;
}

/// Zeroes grad entries where the matching pre-activation was clipped.
Matrix gatedByPositive(const Matrix& grad, const Matrix& pre) {
    Matrix r = grad;
    for (std::size_t i = 0; i < r.raw().size(); ++i) {
        if (pre.raw()[i] <= 0.0) r.raw()[i] = 0.0;
    }
    return r;
}

void addRowBias(Matrix& m, const Matrix& bias) {
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) m(r, c) += bias(0, c);
}

Matrix colSums(const Matrix& m) {
    Matrix s(1, m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) s(0, c) += m(r, c);
    return s;
}

void rowSoftmaxInPlace(Matrix& m) {
    for (int r = 0; r < m.rows(); ++r) {
        double mx = m(r, 0);
        for (int c = 1; c < m.cols(); ++c) mx = std::max(mx, m(r, c));
        double sum = 0.0;
        for (int c = 0; c < m.cols(); ++c) {
            m(r, c) = std::exp(m(r, c) - mx);
            sum += m(r, c);
        }
        for (int c = 0; c < m.cols(); ++c) m(r, c) /= sum;
    }
}

Matrix dropoutMask(int rows, int cols, double rate, Rng& rng) {
    Matrix m(rows, cols);
    const double inv_keep = 1.0 / (1.0 - rate);
    for (double& v : m.raw()) v = rng.uniform() < rate ? 0.0 : inv_keep;
    return m;
}

/// Shared attention math; cache slots are filled only when requested.
Matrix attentionCore(const Matrix& hprime, const AttentionParams& p, int heads,
                     std::vector<Matrix>* qh_out, std::vector<Matrix>* kh_out,
                     std::vector<Matrix>* vh_out, std::vector<Matrix>* prob_out,
                     Matrix* concat_out) {
    const int n = hprime.rows();
    const int head_dim = p.q.at(0).cols();
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

    Matrix concat(n, heads * head_dim);
    for (int h = 0; h < heads; ++h) {
        Matrix qh = matmul(hprime, p.q[h]);
        Matrix kh = matmul(hprime, p.k[h]);
        Matrix vh = matmul(hprime, p.v[h]);
        Matrix prob = matmulNT(qh, kh);
        scaleInPlace(prob, scale);
        rowSoftmaxInPlace(prob);
        Matrix head_out = matmul(prob, vh);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < head_dim; ++c) concat(r, h * head_dim + c) = head_out(r, c);
        if (qh_out) (*qh_out)[h] = std::move(qh);
        if (kh_out) (*kh_out)[h] = std::move(kh);
        if (vh_out) (*vh_out)[h] = std::move(vh);
        if (prob_out) (*prob_out)[h] = std::move(prob);
    }
    Matrix out = matmul(concat, p.out_w);
    addRowBias(out, p.out_b);
    if (concat_out) *concat_out = std::move(concat);
    return out;
}

/// Allocates every tensor of the architecture, zero-filled.
ModelParams makeSkeleton(const ModelConfig& cfg) {
    cfg.validate();
    ModelParams p;
    p.cfg = cfg;
    p.blocks.resize(cfg.blocks);
    for (int b = 0; b < cfg.blocks; ++b) {
        const int d_in = b == 0 ? cfg.input_dim : cfg.hidden;
        BlockParams& blk = p.blocks[b];
        blk.gin.w1 = Matrix(d_in, cfg.hidden);
        blk.gin.b1 = Matrix(1, cfg.hidden);
        blk.gin.w2 = Matrix(cfg.hidden, cfg.hidden);
        blk.gin.b2 = Matrix(1, cfg.hidden);
        blk.attn.q.assign(cfg.heads, Matrix(cfg.hidden, cfg.headDim()));
        blk.attn.k.assign(cfg.heads, Matrix(cfg.hidden, cfg.headDim()));
        blk.attn.v.assign(cfg.heads, Matrix(cfg.hidden, cfg.headDim()));
        blk.attn.out_w = Matrix(cfg.hidden, cfg.hidden);
        blk.attn.out_b = Matrix(1, cfg.hidden);
        blk.norm.gamma = Matrix(1, cfg.hidden);
        blk.norm.beta = Matrix(1, cfg.hidden);
        blk.gcn.w = Matrix(cfg.hidden, cfg.hidden);
        blk.gcn.b = Matrix(1, cfg.hidden);
    }
    p.head_w = Matrix(cfg.hidden, 2);
    p.head_b = Matrix(1, 2);
    return p;
}

template <typename Params, typename Fn>
void visitScalars(Params& p, Fn&& fn) {
    for (auto& blk : p.blocks) {
        fn(blk.gin.alpha);
        for (auto* m : {&blk.gin.w1, &blk.gin.b1, &blk.gin.w2, &blk.gin.b2}) {
            for (auto& v : m->raw()) fn(v);
        }
        for (std::size_t h = 0; h < blk.attn.q.size(); ++h) {
            for (auto& v : blk.attn.q[h].raw()) fn(v);
            for (auto& v : blk.attn.k[h].raw()) fn(v);
            for (auto& v : blk.attn.v[h].raw()) fn(v);
        }
        for (auto* m : {&blk.attn.out_w, &blk.attn.out_b, &blk.norm.gamma, &blk.norm.beta,
                        &blk.gcn.w, &blk.gcn.b}) {
            for (auto& v : m->raw()) fn(v);
        }
    }
    for (auto& v : p.head_w.raw()) fn(v);
    for (auto& v : p.head_b.raw()) fn(v);
}

} // namespace

void ModelConfig::validate() const {
    if (input_dim <= 0) throw ConfigError("model input dimension must be positive");
    if (hidden <= 0) throw ConfigError("hidden size must be positive");
    if (blocks < 1 || blocks > 4) {
        throw ConfigError("block count " + std::to_string(blocks) + " outside 1..4");
    }
    if (heads < 1 || hidden % heads != 0) {
        throw ConfigError("head count " + std::to_string(heads) +
                          " must divide hidden size " + std::to_string(hidden));
    }
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout rate outside [0, 1)");
    if (layernorm_eps <= 0.0) throw ConfigError("layer-norm epsilon must be positive");
}

long ModelParams::paramCount() const {
    long count = 0;
    visitConst([&count](double) { ++count; });
    return count;
}

void ModelParams::visit(const std::function<void(double&)>& fn) {
    visitScalars(*this, fn);
}

void ModelParams::visitConst(const std::function<void(double)>& fn) const {
    visitScalars(*this, fn);
}

ModelParams initModel(const ModelConfig& cfg, Rng& rng) {
    ModelParams p = makeSkeleton(cfg);
    auto fillNormal = [&rng](Matrix& m, double stdev) {
        for (double& v : m.raw()) v = rng.normal() * stdev;
    };
    for (BlockParams& blk : p.blocks) {
        fillNormal(blk.gin.w1, std::sqrt(2.0 / blk.gin.w1.rows()));
        fillNormal(blk.gin.w2, std::sqrt(2.0 / blk.gin.w2.rows()));
        for (int h = 0; h < cfg.heads; ++h) {
            fillNormal(blk.attn.q[h], std::sqrt(1.0 / cfg.hidden));
            fillNormal(blk.attn.k[h], std::sqrt(1.0 / cfg.hidden));
            fillNormal(blk.attn.v[h], std::sqrt(1.0 / cfg.hidden));
        }
        fillNormal(blk.attn.out_w, std::sqrt(1.0 / cfg.hidden));
        blk.norm.gamma.fill(1.0);
        fillNormal(blk.gcn.w, std::sqrt(2.0 / cfg.hidden));
    }
    // Near-zero head so the untrained loss sits at the uninformed ln 2.
    fillNormal(p.head_w, 0.01);
    return p;
}

ModelParams emptyModel(const ModelConfig& cfg) { return makeSkeleton(cfg); }

ModelParams zerosLike(const ModelParams& p) { return makeSkeleton(p.cfg); }

Matrix ginAggregate(const Matrix& h, const std::vector<std::vector<int>>& adj,
                    double alpha) {
    if (static_cast<int>(adj.size()) != h.rows()) {
        throw DataError("adjacency size " + std::to_string(adj.size()) +
                        " does not match feature rows " + std::to_string(h.rows()));
    }
    Matrix s(h.rows(), h.cols());
    const double self = 1.0 + alpha;
    for (int i = 0; i < h.rows(); ++i) {
        for (int c = 0; c < h.cols(); ++c) s(i, c) = self * h(i, c);
        for (int j : adj[i]) {
            for (int c = 0; c < h.cols(); ++c) s(i, c) += h(j, c);
        }
    }
    return s;
}

Matrix attentionForward(const Matrix& hprime, const AttentionParams& p, int heads) {
    return attentionCore(hprime, p, heads, nullptr, nullptr, nullptr, nullptr, nullptr);
}

Matrix normalizedAdjacency(const TmeGraph& g) {
    const int n = g.numNodes();
    Matrix ahat(n, n);
    std::vector<double> inv_sqrt(n);
    const std::vector<std::vector<int>> adj = g.adjacencyList();
    for (int i = 0; i < n; ++i) {
        inv_sqrt[i] = 1.0 / std::sqrt(1.0 + static_cast<double>(adj[i].size()));
    }
    for (int i = 0; i < n; ++i) ahat(i, i) = inv_sqrt[i] * inv_sqrt[i];
    for (const auto& [i, j] : g.edges) {
        ahat(i, j) = ahat(j, i) = inv_sqrt[i] * inv_sqrt[j];
    }
    return ahat;
}

Matrix gcnForward(const Matrix& h, const Matrix& ahat, const GcnParams& p) {
    Matrix pre = matmul(matmul(ahat, h), p.w);
    addRowBias(pre, p.b);
    return reluOf(pre);
}

ForwardCache forward(const ModelParams& p, const TmeGraph& g, const Matrix& features,
                     bool training, Rng* rng) {
    p.cfg.validate();
    const int n = g.numNodes();
    if (n == 0) throw DataError("forward pass needs a non-empty graph");
    if (features.rows() != n || features.cols() != p.cfg.input_dim) {
        throw DataError("feature matrix is " + std::to_string(features.rows()) + "x" +
                        std::to_string(features.cols()) + ", model expects " +
                        std::to_string(n) + "x" + std::to_string(p.cfg.input_dim));
    }
    const bool use_dropout = training && p.cfg.dropout > 0.0;
    if (use_dropout && rng == nullptr) {
        throw DataError("training forward needs an rng for the dropout masks");
    }

    ForwardCache cache;
    cache.adj = g.adjacencyList();
    cache.ahat = normalizedAdjacency(g);
    cache.blocks.resize(p.blocks.size());

    Matrix x = features;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        const BlockParams& blk = p.blocks[b];
        BlockCache& c = cache.blocks[b];
        c.input = std::move(x);

        c.s = ginAggregate(c.input, cache.adj, blk.gin.alpha);
        c.z1 = matmul(c.s, blk.gin.w1);
        addRowBias(c.z1, blk.gin.b1);
        c.h1 = reluOf(c.z1);
        c.z2 = matmul(c.h1, blk.gin.w2);
        addRowBias(c.z2, blk.gin.b2);
        c.hprime = reluOf(c.z2);

        c.qh.resize(p.cfg.heads);
        c.kh.resize(p.cfg.heads);
        c.vh.resize(p.cfg.heads);
        c.prob.resize(p.cfg.heads);
        c.attn_out = attentionCore(c.hprime, blk.attn, p.cfg.heads, &c.qh, &c.kh, &c.vh,
                                   &c.prob, &c.concat);

        c.res = c.hprime;
        if (use_dropout) {
            c.drop_mask = dropoutMask(n, p.cfg.hidden, p.cfg.dropout, *rng);
            addInPlace(c.res, hadamard(c.attn_out, c.drop_mask));
        } else {
            addInPlace(c.res, c.attn_out);
        }

        c.xhat = Matrix(n, p.cfg.hidden);
        c.inv_std.resize(n);
        c.tilde = Matrix(n, p.cfg.hidden);
        for (int i = 0; i < n; ++i) {
            double mean = 0.0;
            for (int f = 0; f < p.cfg.hidden; ++f) mean += c.res(i, f);
            mean /= p.cfg.hidden;
            double var = 0.0;
            for (int f = 0; f < p.cfg.hidden; ++f) {
                const double d = c.res(i, f) - mean;
                var += d * d;
            }
            var /= p.cfg.hidden;
            c.inv_std[i] = 1.0 / std::sqrt(var + p.cfg.layernorm_eps);
            for (int f = 0; f < p.cfg.hidden; ++f) {
                c.xhat(i, f) = (c.res(i, f) - mean) * c.inv_std[i];
                c.tilde(i, f) = blk.norm.gamma(0, f) * c.xhat(i, f) + blk.norm.beta(0, f);
            }
        }

        c.gcn_in = matmul(cache.ahat, c.tilde);
        c.gcn_pre = matmul(c.gcn_in, blk.gcn.w);
        addRowBias(c.gcn_pre, blk.gcn.b);
        c.out = reluOf(c.gcn_pre);
        x = c.out;
    }

    cache.pooled = Matrix(1, p.cfg.hidden);
    for (int i = 0; i < n; ++i)
        for (int f = 0; f < p.cfg.hidden; ++f) cache.pooled(0, f) += x(i, f);
    scaleInPlace(cache.pooled, 1.0 / n);

    if (use_dropout) {
        cache.pool_mask = dropoutMask(1, p.cfg.hidden, p.cfg.dropout, *rng);
        cache.pool_dropped = hadamard(cache.pooled, cache.pool_mask);
    } else {
        cache.pool_dropped = cache.pooled;
    }

    cache.logits = matmul(cache.pool_dropped, p.head_w);
    addRowBias(cache.logits, p.head_b);
    cache.probs = cache.logits;
    rowSoftmaxInPlace(cache.probs);
    return cache;
}

double crossEntropyLoss(const ForwardCache& cache, int label) {
    if (label != 0 && label != 1) {
        throw DataError("class label must be 0 (RD) or 1 (pCR), got " + std::to_string(label));
    }
    return -std::log(cache.probs(0, label));
}

void backward(const ModelParams& p, const ForwardCache& cache, int label,
              ModelParams& grads, Matrix* d_input) {
    if (label != 0 && label != 1) {
        throw DataError("class label must be 0 (RD) or 1 (pCR), got " + std::to_string(label));
    }
    const int hidden = p.cfg.hidden;
    const int n = cache.blocks.back().out.rows();

    Matrix dlogits = cache.probs;
    dlogits(0, label) -= 1.0;

    addInPlace(grads.head_w, matmulTN(cache.pool_dropped, dlogits));
    addInPlace(grads.head_b, dlogits);

    Matrix dpooled = matmulNT(dlogits, p.head_w);
    if (cache.pool_mask.size() != 0) dpooled = hadamard(dpooled, cache.pool_mask);

    Matrix dx(n, hidden);
    for (int i = 0; i < n; ++i)
        for (int f = 0; f < hidden; ++f) dx(i, f) = dpooled(0, f) / n;

    for (int b = static_cast<int>(p.blocks.size()) - 1; b >= 0; --b) {
        const BlockParams& blk = p.blocks[b];
        const BlockCache& c = cache.blocks[b];
        BlockParams& gb = grads.blocks[b];

        Matrix dgcn_pre = gatedByPositive(dx, c.gcn_pre);
        addInPlace(gb.gcn.w, matmulTN(c.gcn_in, dgcn_pre));
        addInPlace(gb.gcn.b, colSums(dgcn_pre));
        Matrix dgcn_in = matmulNT(dgcn_pre, blk.gcn.w);
        // ahat is symmetric, so the adjoint multiply reuses it directly.
        Matrix dtilde = matmul(cache.ahat, dgcn_in);

        Matrix dres(n, hidden);
        for (int i = 0; i < n; ++i) {
            double m1 = 0.0;
            double m2 = 0.0;
            for (int f = 0; f < hidden; ++f) {
                const double dt = dtilde(i, f);
                gb.norm.gamma(0, f) += dt * c.xhat(i, f);
                gb.norm.beta(0, f) += dt;
                const double dxhat = dt * blk.norm.gamma(0, f);
                m1 += dxhat;
                m2 += dxhat * c.xhat(i, f);
            }
            m1 /= hidden;
            m2 /= hidden;
            for (int f = 0; f < hidden; ++f) {
                const double dxhat = dtilde(i, f) * blk.norm.gamma(0, f);
                dres(i, f) = c.inv_std[i] * (dxhat - m1 - c.xhat(i, f) * m2);
            }
        }

        Matrix dhprime = dres;  // residual branch
        Matrix dattn_out = dres;
        if (c.drop_mask.size() != 0) dattn_out = hadamard(dattn_out, c.drop_mask);

        addInPlace(gb.attn.out_w, matmulTN(c.concat, dattn_out));
        addInPlace(gb.attn.out_b, colSums(dattn_out));
        Matrix dconcat = matmulNT(dattn_out, blk.attn.out_w);

        const int head_dim = p.cfg.headDim();
        const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
        for (int h = 0; h < p.cfg.heads; ++h) {
            Matrix dhead(n, head_dim);
            for (int r = 0; r < n; ++r)
                for (int f = 0; f < head_dim; ++f) dhead(r, f) = dconcat(r, h * head_dim + f);

            Matrix dprob = matmulNT(dhead, c.vh[h]);
            Matrix dvh = matmulTN(c.prob[h], dhead);

            Matrix dz(n, n);
            for (int r = 0; r < n; ++r) {
                double dot = 0.0;
                for (int j = 0; j < n; ++j) dot += dprob(r, j) * c.prob[h](r, j);
                for (int j = 0; j < n; ++j) {
                    dz(r, j) = c.prob[h](r, j) * (dprob(r, j) - dot);
                }
            }

            Matrix dqh = matmul(dz, c.kh[h]);
            scaleInPlace(dqh, scale);
            Matrix dkh = matmulTN(dz, c.qh[h]);
            scaleInPlace(dkh, scale);

            addInPlace(gb.attn.q[h], matmulTN(c.hprime, dqh));
            addInPlace(gb.attn.k[h], matmulTN(c.hprime, dkh));
            addInPlace(gb.attn.v[h], matmulTN(c.hprime, dvh));
            addInPlace(dhprime, matmulNT(dqh, blk.attn.q[h]));
            addInPlace(dhprime, matmulNT(dkh, blk.attn.k[h]));
            addInPlace(dhprime, matmulNT(dvh, blk.attn.v[h]));
        }

        Matrix dz2 = gatedByPositive(dhprime, c.z2);
        addInPlace(gb.gin.w2, matmulTN(c.h1, dz2));
        addInPlace(gb.gin.b2, colSums(dz2));
        Matrix dh1 = matmulNT(dz2, blk.gin.w2);
        Matrix dz1 = gatedByPositive(dh1, c.z1);
        addInPlace(gb.gin.w1, matmulTN(c.s, dz1));
        addInPlace(gb.gin.b1, colSums(dz1));
        Matrix ds = matmulNT(dz1, blk.gin.w1);

        double dalpha = 0.0;
        for (std::size_t i = 0; i < ds.raw().size(); ++i) {
            dalpha += ds.raw()[i] * c.input.raw()[i];
        }
        gb.gin.alpha += dalpha;

        // The aggregation is linear and A is symmetric, so its adjoint is
        // the same map applied to the upstream gradient.
        dx = ginAggregate(ds, cache.adj, blk.gin.alpha);
    }

    if (d_input != nullptr) *d_input = std::move(dx);
}

Prediction predictGraph(const ModelParams& p, const TmeGraph& g, const Matrix& features,
                        double prior_pcr) {
    Prediction pred;
    if (g.numNodes() == 0) {
        pred.prob_pcr = prior_pcr;
        pred.prob_rd = 1.0 - prior_pcr;
        pred.from_prior = true;
        pred.embeddings = Matrix(0, p.cfg.hidden);
        return pred;
    }
    ForwardCache cache = forward(p, g, features, false, nullptr);
    pred.prob_rd = cache.probs(0, 0);
    pred.prob_pcr = cache.probs(0, 1);
    pred.embeddings = cache.blocks.back().out;
    return pred;
}

double gradCheck(const ModelParams& p, const TmeGraph& g, const Matrix& features,
                 int label, double step) {
    ModelParams params = p;
    Matrix feats = features;

    ModelParams grads = zerosLike(params);
    Matrix d_input;
    {
        ForwardCache cache = forward(params, g, feats, false, nullptr);
        backward(params, cache, label, grads, &d_input);
    }
    std::vector<double> analytic;
    analytic.reserve(params.paramCount() + feats.size());
    grads.visitConst([&analytic](double v) { analytic.push_back(v); });
    for (double v : d_input.raw()) analytic.push_back(v);

    auto evalLoss = [&]() {
        return crossEntropyLoss(forward(params, g, feats, false, nullptr), label);
    };
    double max_rel = 0.0;
    std::size_t idx = 0;
    auto check = [&](double& v) {
        const double saved = v;
        v = saved + step;
        const double up = evalLoss();
        v = saved - step;
        const double down = evalLoss();
        v = saved;
        const double fd = (up - down) / (2.0 * step);
        const double a = analytic[idx++];
        const double rel = std::fabs(a - fd) / std::max({1.0, std::fabs(a), std::fabs(fd)});
        max_rel = std::max(max_rel, rel);
    };
    params.visit(check);
    for (double& v : feats.raw()) check(v);
    return max_rel;
}

} // namespace nacnet
