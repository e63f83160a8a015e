#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nacnet {

/// Tissue class codes. 0 marks background/discarded tiles and never forms
/// graph nodes; 1..12 are the histology classes in fixed order.
enum : int {
    kLabelBackground = 0,
    kLabelHemorrhage = 1,
    kLabelImmuneCells = 2,
    kLabelCis = 3,
    kLabelMvd = 4,
    kLabelMucinousChanges = 5,
    kLabelNecrosis = 6,
    kLabelPgcc = 7,
    kLabelStroma = 8,
    kLabelTumor = 9,
    kLabelAdiposeTissue = 10,
    kLabelMuscleTissue = 11,
    kLabelApocrineChange = 12,
};

inline constexpr int kNumLabels = 12;           // nonzero histology classes
inline constexpr int kMaxLabelCode = 12;
inline constexpr int kDefaultTilePx = 150;

/// Machine-friendly label names, indexed by code (0..12). The table is the
/// single source of truth for names used in CLI flags and census keys.
const std::array<std::string, 13>& labelSlugs();

const std::string& labelSlug(int code);

/// Slug -> code; throws ConfigError for unknown slugs.
int labelFromSlug(const std::string& slug);

bool isValidLabel(int code);

/// Grid of per-tile histology label codes, row-major. The starting
/// representation of the whole pipeline.
struct HistologyMap {
    int rows = 0;
    int cols = 0;
    int tile_px = kDefaultTilePx;
    std::vector<std::uint8_t> cells;  // rows*cols codes in 0..12

    std::uint8_t at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
    std::uint8_t& at(int r, int c) { return cells[static_cast<std::size_t>(r) * cols + c]; }

    bool operator==(const HistologyMap&) const = default;
};

/// Empty (all-background) map of the given shape.
HistologyMap makeMap(int rows, int cols, int tile_px = kDefaultTilePx);

/// Parses the .hmap text form: header `HMAP 1 <rows> <cols> <tile_px>`
/// followed by rows lines of cols space-separated codes. '#' comment lines
/// are skipped. Errors name the offending physical line.
HistologyMap parseMap(const std::string& text);

/// Canonical .hmap form: single spaces, LF endings, trailing newline.
/// parseMap(writeMap(m)) == m, and writeMap(parseMap(t)) == t for
/// canonical t.
std::string writeMap(const HistologyMap& m);

} // namespace nacnet
