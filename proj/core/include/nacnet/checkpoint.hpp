#pragma once

#include "nacnet/features.hpp"
#include "nacnet/gnn.hpp"

#include <string>

namespace nacnet {

/// Everything needed to reproduce inference on raw inputs: the trained
/// parameters plus the preprocessing that was fitted alongside them.
struct Checkpoint {
    ModelParams params;
    Standardizer standardizer;
    AblationFlags ablation;
    bool log_count = true;
    double prior_pcr = 0.5;  // empty-graph fallback, from the training set
};

/// Versioned text container; doubles are hexfloat so the round-trip is
/// bit-exact. parseCheckpoint(writeCheckpoint(c)) reproduces c.
std::string writeCheckpoint(const Checkpoint& c);
Checkpoint parseCheckpoint(const std::string& text);

} // namespace nacnet
