#include "nacnet/synth.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/rng.hpp"

#include <algorithm>
#include <cmath>

namespace nacnet {

std::string responseName(Response r) { return r == Response::Pcr ? "pCR" : "RD"; }

Response responseFromName(const std::string& name) {
    if (name == "pcr" || name == "pCR") return Response::Pcr;
    if (name == "rd" || name == "RD") return Response::Rd;
    throw ConfigError("unknown response group: '" + name + "' (expected pCR or RD)");
}

std::vector<MotifRate> defaultMotifRates(Response group) {
    const double hi = 6.0, mid = 4.0, lo = 1.0;
    if (group == Response::Pcr) {
        return {
            {kLabelImmuneCells, kLabelTumor, hi},
            {kLabelNecrosis, kLabelTumor, mid},
            {kLabelMvd, kLabelStroma, lo},
            {kLabelStroma, kLabelAdiposeTissue, lo},
        };
    }
    return {
        {kLabelImmuneCells, kLabelTumor, lo},
        {kLabelNecrosis, kLabelTumor, lo},
        {kLabelMvd, kLabelStroma, hi},
        {kLabelStroma, kLabelAdiposeTissue, mid},
    };
}

SynthSpec makeBenchmarkSpec(Response group, int rows, int cols) {
    SynthSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.group = group;
    spec.motif_rates = defaultMotifRates(group);
    return spec;
}

namespace {

struct Placement {
    int row = 0, col = 0;   // top-left tile of the full motif footprint
    bool vertical = false;  // false: A left of B, true: A above B
};

bool footprintFree(const HistologyMap& m, int r0, int c0, int fr, int fc) {
    for (int r = r0; r < r0 + fr; ++r)
        for (int c = c0; c < c0 + fc; ++c)
            if (m.at(r, c) != 0) return false;
    return true;
}

void stamp(HistologyMap& m, int r0, int c0, int fr, int fc, int label) {
    for (int r = r0; r < r0 + fr; ++r)
        for (int c = c0; c < c0 + fc; ++c)
            m.at(r, c) = static_cast<std::uint8_t>(label);
}

} // namespace

HistologyMap synthesizeMap(const SynthSpec& spec, std::uint64_t seed) {
    if (spec.blob_rows <= 0 || spec.blob_cols <= 0 || spec.window <= 0) {
        throw ConfigError("blob dimensions and window must be positive");
    }
    for (const auto& mr : spec.motif_rates) {
        if (!isValidLabel(mr.label_a) || mr.label_a == 0 || !isValidLabel(mr.label_b) || mr.label_b == 0) {
            throw ConfigError("motif labels must be histology codes 1..12");
        }
        if (mr.rate < 0.0) throw ConfigError("motif rate must be non-negative");
    }

    HistologyMap m = makeMap(spec.rows, spec.cols, spec.tile_px);
    Rng rng(seed);

    long blob_tiles = static_cast<long>(spec.blob_rows) * spec.blob_cols;
    long demand = 0;
    for (const auto& mr : spec.motif_rates) demand += std::llround(mr.rate) * 2 * blob_tiles;
    if (demand > static_cast<long>(spec.rows) * spec.cols) {
        throw DataError("motif blobs need " + std::to_string(demand) + " tiles but the map has only " +
                        std::to_string(static_cast<long>(spec.rows) * spec.cols));
    }

    const int win_rows = (spec.rows + spec.window - 1) / spec.window;
    const int win_cols = (spec.cols + spec.window - 1) / spec.window;

    for (const auto& mr : spec.motif_rates) {
        long count = std::llround(mr.rate);
        for (long i = 0; i < count; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < 500 && !placed; ++attempt) {
                Placement p;
                p.vertical = rng.below(2) == 1;
                int fr = p.vertical ? 2 * spec.blob_rows : spec.blob_rows;
                int fc = p.vertical ? spec.blob_cols : 2 * spec.blob_cols;

                // Constrain the footprint to a single window (clipped at the
                // map border) so the two blobs always cluster and connect.
                int wr = static_cast<int>(rng.below(static_cast<std::uint64_t>(win_rows)));
                int wc = static_cast<int>(rng.below(static_cast<std::uint64_t>(win_cols)));
                int wr0 = wr * spec.window, wc0 = wc * spec.window;
                int wr1 = std::min(wr0 + spec.window, spec.rows);
                int wc1 = std::min(wc0 + spec.window, spec.cols);
                int slack_r = (wr1 - wr0) - fr;
                int slack_c = (wc1 - wc0) - fc;
                if (slack_r < 0 || slack_c < 0) continue;
                p.row = wr0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(slack_r + 1)));
                p.col = wc0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(slack_c + 1)));

                if (!footprintFree(m, p.row, p.col, fr, fc)) continue;
                if (p.vertical) {
                    stamp(m, p.row, p.col, spec.blob_rows, spec.blob_cols, mr.label_a);
                    stamp(m, p.row + spec.blob_rows, p.col, spec.blob_rows, spec.blob_cols, mr.label_b);
                } else {
                    stamp(m, p.row, p.col, spec.blob_rows, spec.blob_cols, mr.label_a);
                    stamp(m, p.row, p.col + spec.blob_cols, spec.blob_rows, spec.blob_cols, mr.label_b);
                }
                placed = true;
            }
            if (!placed) {
                throw DataError("could not place a " + labelSlug(mr.label_a) + "-" + labelSlug(mr.label_b) +
                                " motif after 500 attempts; map too crowded");
            }
        }
    }

    // Single-tile noise on remaining background. Almost always below the
    // clustering thresholds, so it perturbs tile statistics without
    // spawning extra nodes.
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            if (m.at(r, c) != 0) continue;
            if (rng.uniform() < spec.noise_density) {
                m.at(r, c) = static_cast<std::uint8_t>(1 + rng.below(kNumLabels));
            }
        }
    }
    return m;
}

std::vector<std::vector<double>> synthTextures(const std::vector<int>& node_labels,
                                               std::uint64_t seed,
                                               const TextureSynthConfig& cfg) {
    Rng rng(seed);
    std::vector<std::vector<double>> out;
    out.reserve(node_labels.size());
    for (int label : node_labels) {
        std::vector<double> logits(kNumLabels, 0.0);
        for (int j = 0; j < kNumLabels; ++j) logits[static_cast<std::size_t>(j)] = cfg.noise * rng.normal();
        if (label >= 1 && label <= kNumLabels) {
            logits[static_cast<std::size_t>(label - 1)] += cfg.label_signal;
        }
        double mx = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (double& v : logits) {
            v = std::exp(v - mx);
            sum += v;
        }
        for (double& v : logits) v /= sum;
        out.push_back(std::move(logits));
    }
    return out;
}

} // namespace nacnet
