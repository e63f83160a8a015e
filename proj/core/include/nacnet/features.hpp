#pragma once

#include "nacnet/matrix.hpp"
#include "nacnet/tme_graph.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nacnet {

/// Fixed column layout of the node feature matrix:
///   [0..11]  one-hot histology label (code 1..12)
///   [12]     log1p(cluster tile count) (raw count if log_count off)
///   [13..24] texture embedding
///   [25..28] degree, betweenness, pagerank, closeness
inline constexpr int kTextureDim = 12;
inline constexpr int kOneHotCols = 12;
inline constexpr int kCountCol = 12;
inline constexpr int kTextureCol = 13;
inline constexpr int kSnaCol = 25;
inline constexpr int kFeatureDim = 29;

/// Human-readable layout string recorded in .nfm headers.
std::string featureLayoutString();

/// Per-node texture embeddings keyed by node id. Produced upstream by an
/// image encoder; each row is a softmax-normalized 12-vector.
struct TextureTable {
    std::map<int, std::vector<double>> rows;
};

/// Parses .feat text: lines `FEAT <node_id> <v1> ... <v12>`. Wrong row
/// length or duplicate ids are errors that name the node id.
TextureTable parseTextures(const std::string& text);
std::string writeTextures(const TextureTable& t);

/// All-zero textures for every node of g (texture ablation fallback).
TextureTable zeroTextures(const TmeGraph& g);

struct FeatureConfig {
    bool log_count = true;
    int threads = 1;
};

/// Raw (unstandardized) n x 29 feature matrix for a graph. Every node
/// needs a texture row; missing or wrong-length rows raise DataError.
Matrix assembleFeatures(const TmeGraph& g, const TextureTable& textures,
                        const FeatureConfig& cfg = {});

/// Column-wise training statistics. One-hot columns and constant columns
/// pass through unscaled; the rest map to mean 0, std 1.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stdev;
    std::vector<std::uint8_t> scaled;

    bool fitted() const { return !mean.empty(); }
    bool operator==(const Standardizer&) const = default;
};

/// Fits over the pooled rows of the given matrices (the training fold).
Standardizer fitStandardizer(const std::vector<const Matrix*>& training);
void applyStandardizer(Matrix& m, const Standardizer& s);

/// Feature-subset switches for the ablation study: L = label + count,
/// I = texture, S = SNA. Disabled groups are zeroed in place, which keeps
/// the model input width fixed.
struct AblationFlags {
    bool label_count = true;
    bool texture = true;
    bool sna = true;

    /// Parses strings like "LIS", "LS", "S", or "none".
    static AblationFlags parse(const std::string& s);
    std::string str() const;
    bool operator==(const AblationFlags&) const = default;
};

void applyAblation(Matrix& m, const AblationFlags& flags);

/// .nfm serialization: header `NFM 1 <n> <d>`, a layout comment, then
/// `ROW <node_id> <d values>` per node. Round-trips bit-exactly. The
/// default layout tag describes the 29-column node feature layout; pass
/// another tag when storing other per-node matrices (e.g. embeddings).
std::string writeFeatureMatrix(const Matrix& m, const std::string& layout = "");
Matrix parseFeatureMatrix(const std::string& text);

} // namespace nacnet
