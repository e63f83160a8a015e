#include "nacnet/histology_map.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/text_io.hpp"

#include <sstream>

namespace nacnet {

const std::array<std::string, 13>& labelSlugs() {
    static const std::array<std::string, 13> slugs = {
        "background",      "hemorrhage",     "immune_cells", "cis",
        "mvd",             "mucinous_changes", "necrosis",   "pgcc",
        "stroma",          "tumor",          "adipose_tissue",
        "muscle_tissue",   "apocrine_change",
    };
    return slugs;
}

const std::string& labelSlug(int code) {
    if (!isValidLabel(code)) throw ConfigError("label code out of range: " + std::to_string(code));
    return labelSlugs()[static_cast<std::size_t>(code)];
}

int labelFromSlug(const std::string& slug) {
    const auto& slugs = labelSlugs();
    for (int i = 0; i < static_cast<int>(slugs.size()); ++i) {
        if (slugs[static_cast<std::size_t>(i)] == slug) return i;
    }
    throw ConfigError("unknown histology label: '" + slug + "'");
}

bool isValidLabel(int code) { return code >= 0 && code <= kMaxLabelCode; }

HistologyMap makeMap(int rows, int cols, int tile_px) {
    if (rows <= 0 || cols <= 0 || tile_px <= 0) {
        throw ConfigError("map dimensions and tile_px must be positive");
    }
    HistologyMap m;
    m.rows = rows;
    m.cols = cols;
    m.tile_px = tile_px;
    m.cells.assign(static_cast<std::size_t>(rows) * cols, 0);
    return m;
}

HistologyMap parseMap(const std::string& text) {
    std::istringstream in(text);
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError("empty .hmap input");

    auto toks = splitWs(line);
    if (toks.size() != 5 || toks[0] != "HMAP" || toks[1] != "1") {
        throw ParseError("line " + std::to_string(reader.lineNumber()) +
                         ": expected header 'HMAP 1 <rows> <cols> <tile_px>'");
    }
    long rows = parseLong(toks[2], "rows");
    long cols = parseLong(toks[3], "cols");
    long tile_px = parseLong(toks[4], "tile_px");
    if (rows <= 0 || cols <= 0 || tile_px <= 0) {
        throw ParseError("line " + std::to_string(reader.lineNumber()) +
                         ": rows, cols and tile_px must be positive");
    }

    HistologyMap m = makeMap(static_cast<int>(rows), static_cast<int>(cols), static_cast<int>(tile_px));
    for (int r = 0; r < m.rows; ++r) {
        if (!reader.next(line)) {
            throw ParseError("unexpected end of input: expected " + std::to_string(m.rows) +
                             " cell rows, got " + std::to_string(r));
        }
        auto cells = splitWs(line);
        if (static_cast<long>(cells.size()) != cols) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) + ": expected " +
                             std::to_string(cols) + " cells, got " + std::to_string(cells.size()));
        }
        for (int c = 0; c < m.cols; ++c) {
            long code = parseLong(cells[static_cast<std::size_t>(c)],
                                  "line " + std::to_string(reader.lineNumber()) + ", cell " + std::to_string(c));
            if (!isValidLabel(static_cast<int>(code))) {
                throw ParseError("line " + std::to_string(reader.lineNumber()) + ": label code " +
                                 std::to_string(code) + " out of range 0..12");
            }
            m.at(r, c) = static_cast<std::uint8_t>(code);
        }
    }
    if (reader.next(line)) {
        throw ParseError("line " + std::to_string(reader.lineNumber()) + ": trailing content after cell grid");
    }
    return m;
}

std::string writeMap(const HistologyMap& m) {
    std::string out;
    out.reserve(static_cast<std::size_t>(m.rows) * (static_cast<std::size_t>(m.cols) * 3 + 1) + 32);
    out += "HMAP 1 " + std::to_string(m.rows) + ' ' + std::to_string(m.cols) + ' ' +
           std::to_string(m.tile_px) + '\n';
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            if (c) out += ' ';
            out += std::to_string(static_cast<int>(m.at(r, c)));
        }
        out += '\n';
    }
    return out;
}

} // namespace nacnet
