#pragma once

#include "nacnet/histology_map.hpp"
#include "nacnet/response.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace nacnet {

/// A planted adjacency motif: two touching same-label blobs, one of
/// label_a and one of label_b. `rate` is the number of instances placed
/// (rounded to the nearest integer).
struct MotifRate {
    int label_a = 0;
    int label_b = 0;
    double rate = 0.0;
};

/// Recipe for a synthetic histology map. Maps are generated by planting
/// label-pair adjacency motifs on an empty grid and then sprinkling
/// uniform single-tile noise. Each motif half is a blob_rows x blob_cols
/// rectangle, and both halves of a motif land inside one clustering
/// window so they survive thresholding and sit within edge range.
struct SynthSpec {
    int rows = 40;
    int cols = 40;
    int tile_px = kDefaultTilePx;
    Response group = Response::Pcr;
    int window = 10;       // alignment grid, matches BuilderConfig.window
    int blob_rows = 3;
    int blob_cols = 4;
    double noise_density = 0.15;
    std::vector<MotifRate> motif_rates;
};

/// The documented high-signal motif mix for the synthetic benchmark:
/// pCR maps are rich in immune-tumor and necrosis-tumor motifs, RD maps
/// in MVD-stroma and stroma-adipose motifs, with the opposite pairs kept
/// at a low floor so every census key has nonzero variance in both
/// groups.
std::vector<MotifRate> defaultMotifRates(Response group);

/// SynthSpec with defaultMotifRates for `group`.
SynthSpec makeBenchmarkSpec(Response group, int rows = 40, int cols = 40);

/// Pure function of (spec, seed). Throws DataError when the requested
/// blobs cannot fit on the map.
HistologyMap synthesizeMap(const SynthSpec& spec, std::uint64_t seed);

/// Stand-in texture embeddings for synthetic graphs: softmax of a faint
/// label one-hot plus Gaussian noise, per node. Real texture vectors come
/// from an upstream encoder; these only mimic their shape and a weak
/// label correlation.
struct TextureSynthConfig {
    double label_signal = 0.25;
    double noise = 1.0;
};

std::vector<std::vector<double>> synthTextures(const std::vector<int>& node_labels,
                                               std::uint64_t seed,
                                               const TextureSynthConfig& cfg = {});

} // namespace nacnet
