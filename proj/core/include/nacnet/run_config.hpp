#pragma once

#include "nacnet/features.hpp"
#include "nacnet/gnn.hpp"
#include "nacnet/graph_builder.hpp"
#include "nacnet/synth.hpp"
#include "nacnet/train.hpp"

#include <string>

namespace nacnet {

/// Every tunable of the pipeline in one place, loadable from a `key=value`
/// text file ('#' comments allowed) and overridable by CLI flags. Unknown
/// keys are rejected; the effective values are echoed into the comment
/// header of every output artifact.
struct RunConfig {
    BuilderConfig builder;
    FeatureConfig features;
    ModelConfig model;
    TrainConfig train;

    // Synthetic dataset shape.
    int synth_rows = 40;
    int synth_cols = 40;
    int synth_tile_px = kDefaultTilePx;
    double synth_noise_density = 0.15;
    TextureSynthConfig texture;

    static RunConfig fromText(const std::string& text);
    static RunConfig fromFile(const std::string& path);

    /// Sets one key; throws ConfigError for unknown keys or bad values.
    void set(const std::string& key, const std::string& value);

    void validate() const;

    /// Deterministic one-line `key=value` echo of the effective values.
    std::string echo() const;
};

} // namespace nacnet
