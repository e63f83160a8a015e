#include "nacnet/features.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/parallel.hpp"
#include "nacnet/sna.hpp"
#include "nacnet/text_io.hpp"

#include <cmath>
#include <sstream>

namespace nacnet {

std::string featureLayoutString() {
    return "onehot[12] count[1] texture[12] degree betweenness pagerank closeness";
}

TextureTable parseTextures(const std::string& text) {
    TextureTable table;
    std::istringstream in(text);
    LineReader reader(in);
    std::string line;
    while (reader.next(line)) {
        std::vector<std::string> toks = splitWs(line);
        if (toks.empty()) continue;
        if (toks[0] != "FEAT") {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": expected FEAT record, got '" + toks[0] + "'");
        }
        if (toks.size() != 2 + kTextureDim) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": FEAT record needs a node id and " +
                             std::to_string(kTextureDim) + " values, got " +
                             std::to_string(toks.size() - 1) + " fields");
        }
        const long id = parseLong(toks[1], "node id");
        if (id < 0) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": negative node id " + std::to_string(id));
        }
        if (table.rows.count(static_cast<int>(id))) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": duplicate texture row for node " + std::to_string(id));
        }
        std::vector<double> row(kTextureDim);
        for (int k = 0; k < kTextureDim; ++k) {
            row[k] = parseDouble(toks[2 + k], "texture value");
        }
        table.rows.emplace(static_cast<int>(id), std::move(row));
    }
    return table;
}

std::string writeTextures(const TextureTable& t) {
    std::string out;
    for (const auto& [id, row] : t.rows) {
        out += "FEAT " + std::to_string(id);
        for (double v : row) {
            out += ' ';
            out += formatDouble(v);
        }
        out += '\n';
    }
    return out;
}

TextureTable zeroTextures(const TmeGraph& g) {
    TextureTable table;
    for (const TmeNode& node : g.nodes) {
        table.rows.emplace(node.id, std::vector<double>(kTextureDim, 0.0));
    }
    return table;
}

Matrix assembleFeatures(const TmeGraph& g, const TextureTable& textures,
                        const FeatureConfig& cfg) {
    const int n = g.numNodes();
    Matrix feat(n, kFeatureDim);

    const std::vector<int> degree = degreeCentrality(g);
    const std::vector<double> betweenness = betweennessCentrality(g, cfg.threads);
    const std::vector<double> pagerank = pageRank(g).scores;
    const std::vector<double> closeness = closenessCentrality(g, cfg.threads);

    for (int i = 0; i < n; ++i) {
        const TmeNode& node = g.nodes[i];
        auto it = textures.rows.find(node.id);
        if (it == textures.rows.end()) {
            throw DataError("no texture row for node " + std::to_string(node.id));
        }
        if (static_cast<int>(it->second.size()) != kTextureDim) {
            throw DataError("texture row for node " + std::to_string(node.id) +
                            " has " + std::to_string(it->second.size()) +
                            " values, expected " + std::to_string(kTextureDim));
        }
        feat(i, node.label - 1) = 1.0;
        const double count = static_cast<double>(node.count);
        feat(i, kCountCol) = cfg.log_count ? std::log1p(count) : count;
        for (int k = 0; k < kTextureDim; ++k) {
            feat(i, kTextureCol + k) = it->second[k];
        }
        feat(i, kSnaCol + 0) = static_cast<double>(degree[i]);
        feat(i, kSnaCol + 1) = betweenness[i];
        feat(i, kSnaCol + 2) = pagerank[i];
        feat(i, kSnaCol + 3) = closeness[i];
    }
    return feat;
}

Standardizer fitStandardizer(const std::vector<const Matrix*>& training) {
    long total_rows = 0;
    for (const Matrix* m : training) {
        if (m == nullptr) throw DataError("null matrix passed to standardizer fit");
        if (m->cols() != kFeatureDim) {
            throw DataError("standardizer expects " + std::to_string(kFeatureDim) +
                            " columns, got " + std::to_string(m->cols()));
        }
        total_rows += m->rows();
    }
    if (total_rows == 0) throw DataError("standardizer fit needs at least one row");

    Standardizer s;
    s.mean.assign(kFeatureDim, 0.0);
    s.stdev.assign(kFeatureDim, 1.0);
    s.scaled.assign(kFeatureDim, 0);

    for (int c = kOneHotCols; c < kFeatureDim; ++c) {
        double sum = 0.0;
        for (const Matrix* m : training) {
            for (int r = 0; r < m->rows(); ++r) sum += (*m)(r, c);
        }
        const double mean = sum / static_cast<double>(total_rows);
        double sq = 0.0;
        for (const Matrix* m : training) {
            for (int r = 0; r < m->rows(); ++r) {
                const double d = (*m)(r, c) - mean;
                sq += d * d;
            }
        }
        const double var = sq / static_cast<double>(total_rows);
        const double stdev = std::sqrt(var);
        if (stdev > 0.0) {
            s.mean[c] = mean;
            s.stdev[c] = stdev;
            s.scaled[c] = 1;
        }
    }
    return s;
}

void applyStandardizer(Matrix& m, const Standardizer& s) {
    if (!s.fitted()) throw DataError("standardizer applied before fit");
    if (m.cols() != kFeatureDim) {
        throw DataError("standardizer expects " + std::to_string(kFeatureDim) +
                        " columns, got " + std::to_string(m.cols()));
    }
    for (int c = 0; c < kFeatureDim; ++c) {
        if (!s.scaled[c]) continue;
        const double mean = s.mean[c];
        const double inv = 1.0 / s.stdev[c];
        for (int r = 0; r < m.rows(); ++r) {
            m(r, c) = (m(r, c) - mean) * inv;
        }
    }
}

AblationFlags AblationFlags::parse(const std::string& s) {
    AblationFlags f{false, false, false};
    if (s == "none") return f;
    for (char c : s) {
        switch (c) {
        case 'L': f.label_count = true; break;
        case 'I': f.texture = true; break;
        case 'S': f.sna = true; break;
        default:
            throw ConfigError("unknown feature group '" + std::string(1, c) +
                              "' in ablation string '" + s + "' (expected L, I, S, or none)");
        }
    }
    return f;
}

std::string AblationFlags::str() const {
    std::string s;
    if (label_count) s += 'L';
    if (texture) s += 'I';
    if (sna) s += 'S';
    return s.empty() ? "none" : s;
}

void applyAblation(Matrix& m, const AblationFlags& flags) {
    if (m.cols() != kFeatureDim) {
        throw DataError("ablation expects " + std::to_string(kFeatureDim) +
                        " columns, got " + std::to_string(m.cols()));
    }
    auto zeroCols = [&m](int begin, int end) {
        for (int r = 0; r < m.rows(); ++r)
            for (int c = begin; c < end; ++c) m(r, c) = 0.0;
    };
    if (!flags.label_count) zeroCols(0, kCountCol + 1);
    if (!flags.texture) zeroCols(kTextureCol, kTextureCol + kTextureDim);
    if (!flags.sna) zeroCols(kSnaCol, kSnaCol + 4);
}

std::string writeFeatureMatrix(const Matrix& m, const std::string& layout) {
    std::string out = "NFM 1 " + std::to_string(m.rows()) + ' ' +
                      std::to_string(m.cols()) + '\n';
    out += "# layout: " + (layout.empty() ? featureLayoutString() : layout) + '\n';
    for (int r = 0; r < m.rows(); ++r) {
        out += "ROW " + std::to_string(r);
        for (int c = 0; c < m.cols(); ++c) {
            out += ' ';
            out += formatDouble(m(r, c));
        }
        out += '\n';
    }
    return out;
}

Matrix parseFeatureMatrix(const std::string& text) {
    std::istringstream in(text);
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError("empty feature matrix document");
    std::vector<std::string> toks = splitWs(line);
    if (toks.size() != 4 || toks[0] != "NFM") {
        throw ParseError("line " + std::to_string(reader.lineNumber()) +
                         ": expected header 'NFM 1 <rows> <cols>'");
    }
    if (toks[1] != "1") {
        throw ParseError("unsupported feature matrix version '" + toks[1] + "'");
    }
    const long rows = parseLong(toks[2], "row count");
    const long cols = parseLong(toks[3], "column count");
    if (rows < 0 || cols <= 0) {
        throw ParseError("invalid feature matrix shape " + std::to_string(rows) +
                         " x " + std::to_string(cols));
    }

    Matrix m(static_cast<int>(rows), static_cast<int>(cols));
    long seen = 0;
    while (reader.next(line)) {
        toks = splitWs(line);
        if (toks.empty()) continue;
        if (toks[0] != "ROW") {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": expected ROW record, got '" + toks[0] + "'");
        }
        if (static_cast<long>(toks.size()) != 2 + cols) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) + ": ROW needs " +
                             std::to_string(cols) + " values, got " +
                             std::to_string(static_cast<long>(toks.size()) - 2));
        }
        const long id = parseLong(toks[1], "node id");
        if (id != seen) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": expected row for node " + std::to_string(seen) +
                             ", got node " + std::to_string(id));
        }
        for (long c = 0; c < cols; ++c) {
            m(static_cast<int>(id), static_cast<int>(c)) =
                parseDouble(toks[2 + c], "feature value");
        }
        ++seen;
    }
    if (seen != rows) {
        throw ParseError("feature matrix header promises " + std::to_string(rows) +
                         " rows, found " + std::to_string(seen));
    }
    return m;
}

} // namespace nacnet
