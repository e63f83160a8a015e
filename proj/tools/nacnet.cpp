// Command-line front end for the TME-graph pipeline: dataset synthesis,
// graph construction, feature assembly, census statistics, training,
// prediction, and cross-validation. Every file is written atomically and
// carries a deterministic comment header echoing the effective config.

#include <CLI11.hpp>

#include "nacnet/census.hpp"
#include "nacnet/checkpoint.hpp"
#include "nacnet/errors.hpp"
#include "nacnet/eval.hpp"
#include "nacnet/features.hpp"
#include "nacnet/gnn.hpp"
#include "nacnet/graph_builder.hpp"
#include "nacnet/group_compare.hpp"
#include "nacnet/histology_map.hpp"
#include "nacnet/metrics.hpp"
#include "nacnet/parallel.hpp"
#include "nacnet/response.hpp"
#include "nacnet/rng.hpp"
#include "nacnet/run_config.hpp"
#include "nacnet/stats.hpp"
#include "nacnet/synth.hpp"
#include "nacnet/text_io.hpp"
#include "nacnet/tme_graph.hpp"
#include "nacnet/train.hpp"
#include "nacnet/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace nacnet;

namespace {

/// Flags shared by every subcommand.
struct CommonOpts {
    std::string config_path;
    int threads = 1;
};

void addCommonFlags(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "key=value config file");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
}

RunConfig loadRunConfig(const CommonOpts& opts) {
    if (opts.config_path.empty()) return RunConfig{};
    return RunConfig::fromFile(opts.config_path);
}

/// Deterministic comment header for output artifacts (no timestamps, so
/// identical runs produce identical bytes).
std::string artifactHeader(const std::string& subcommand, const RunConfig& cfg) {
    return std::string("# nacnet ") + kVersion + ' ' + subcommand + "\n# config: " +
           cfg.echo() + '\n';
}

std::string patientIdFor(int index) {
    std::string digits = std::to_string(index);
    while (digits.size() < 3) digits.insert(digits.begin(), '0');
    return "p" + digits;
}

/// Per-tile float grid (correlation / motif density export), `.hmap`-like:
/// `FGRID 1 <rows> <cols> <tile_px>` then rows of values.
std::string writeFloatGrid(int rows, int cols, int tile_px, const std::vector<double>& values) {
    std::string out = "FGRID 1 " + std::to_string(rows) + ' ' + std::to_string(cols) + ' ' +
                      std::to_string(tile_px) + '\n';
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c > 0) out += ' ';
            out += formatDouble(values[static_cast<std::size_t>(r) * cols + c]);
        }
        out += '\n';
    }
    return out;
}

std::string manifestBaseDir(const std::string& manifest_path) {
    return fs::path(manifest_path).parent_path().string();
}

std::vector<PatientSummary> summarizeManifest(const std::string& manifest_path, int threads) {
    const std::vector<ManifestEntry> entries = parseManifest(readFile(manifest_path));
    const std::string base = manifestBaseDir(manifest_path);
    std::vector<PatientSummary> summaries(entries.size());
    parallelFor(static_cast<int>(entries.size()), threads, [&](int i) {
        const ManifestEntry& e = entries[i];
        const std::string tmeg = base.empty() ? e.tmeg_path : (fs::path(base) / e.tmeg_path).string();
        const std::string hmap = base.empty() ? e.hmap_path : (fs::path(base) / e.hmap_path).string();
        const CensusTable census = computeCensus(parseGraph(readFile(tmeg)));
        const std::vector<double> props = labelProportions(parseMap(readFile(hmap)));
        summaries[static_cast<std::size_t>(i)] =
            summarizePatient(e.patient_id, e.label, census, props);
    });
    return summaries;
}

// ---------------------------------------------------------------- synth

struct SynthOpts {
    CommonOpts common;
    std::string out_dir;   // dataset mode
    std::string out_map;   // single-map mode
    std::string group = "pCR";
    std::vector<std::string> motif_rates;
    int rows = 0;  // 0 = keep config value
    int cols = 0;
    int patients = 80;
    double pcr_fraction = 0.5;
    std::uint64_t seed = 1;
};

/// `label-label=rate` -> MotifRate; slugs contain no '-' so the split is
/// unambiguous.
MotifRate parseMotifRate(const std::string& text) {
    const std::size_t eq = text.find('=');
    const std::size_t dash = text.find('-');
    if (eq == std::string::npos || dash == std::string::npos || dash > eq) {
        throw ConfigError("bad motif rate '" + text + "' (expected labelA-labelB=rate)");
    }
    MotifRate rate;
    rate.label_a = labelFromSlug(text.substr(0, dash));
    rate.label_b = labelFromSlug(text.substr(dash + 1, eq - dash - 1));
    rate.rate = parseDouble(text.substr(eq + 1), "motif rate");
    return rate;
}

void runSynthSingleMap(const SynthOpts& opts, const RunConfig& cfg) {
    SynthSpec spec = makeBenchmarkSpec(responseFromName(opts.group), cfg.synth_rows, cfg.synth_cols);
    spec.tile_px = cfg.synth_tile_px;
    spec.window = cfg.builder.window;
    spec.noise_density = cfg.synth_noise_density;
    for (const std::string& text : opts.motif_rates) {
        const MotifRate rate = parseMotifRate(text);
        bool replaced = false;
        for (MotifRate& existing : spec.motif_rates) {
            if ((existing.label_a == rate.label_a && existing.label_b == rate.label_b) ||
                (existing.label_a == rate.label_b && existing.label_b == rate.label_a)) {
                existing.rate = rate.rate;
                replaced = true;
            }
        }
        if (!replaced) spec.motif_rates.push_back(rate);
    }
    const HistologyMap map = synthesizeMap(spec, opts.seed);
    atomicWriteFile(opts.out_map, artifactHeader("synth", cfg) + writeMap(map));
    std::cout << map.rows << "x" << map.cols << " map (" << opts.group << ") -> "
              << opts.out_map << '\n';
}

void runSynth(const SynthOpts& opts) {
    RunConfig cfg = loadRunConfig(opts.common);
    if (opts.rows > 0) cfg.synth_rows = opts.rows;
    if (opts.cols > 0) cfg.synth_cols = opts.cols;
    cfg.validate();
    if (opts.out_dir.empty() == opts.out_map.empty()) {
        throw DataError("synth needs exactly one of --out-dir (dataset) or --out (single map)");
    }
    if (!opts.out_map.empty()) {
        runSynthSingleMap(opts, cfg);
        return;
    }
    if (opts.patients < 2) throw DataError("synthetic dataset needs at least 2 patients");
    if (opts.pcr_fraction < 0.0 || opts.pcr_fraction > 1.0) {
        throw DataError("pCR fraction outside [0, 1]");
    }
    const int n_pcr = static_cast<int>(std::lround(opts.patients * opts.pcr_fraction));

    fs::create_directories(opts.out_dir);
    std::vector<ManifestEntry> entries(static_cast<std::size_t>(opts.patients));
    parallelFor(opts.patients, opts.common.threads, [&](int i) {
        const Response group = i < n_pcr ? Response::Pcr : Response::Rd;
        SynthSpec spec = makeBenchmarkSpec(group, cfg.synth_rows, cfg.synth_cols);
        spec.tile_px = cfg.synth_tile_px;
        spec.window = cfg.builder.window;
        spec.noise_density = cfg.synth_noise_density;

        const std::uint64_t patient_seed = mixSeed(opts.seed, static_cast<std::uint64_t>(i));
        const HistologyMap map = synthesizeMap(spec, patient_seed);
        const TmeGraph graph = buildGraph(map, cfg.builder, 1);

        std::vector<int> node_labels;
        node_labels.reserve(graph.nodes.size());
        for (const TmeNode& node : graph.nodes) node_labels.push_back(node.label);
        const std::vector<std::vector<double>> tex =
            synthTextures(node_labels, mixSeed(patient_seed, 7919), cfg.texture);
        TextureTable table;
        for (std::size_t n = 0; n < tex.size(); ++n) {
            table.rows.emplace(graph.nodes[n].id, tex[n]);
        }

        const std::string id = patientIdFor(i);
        const std::string header = artifactHeader("synth", cfg);
        atomicWriteFile((fs::path(opts.out_dir) / (id + ".hmap")).string(),
                        header + writeMap(map));
        atomicWriteFile((fs::path(opts.out_dir) / (id + ".tmeg")).string(),
                        header + writeGraph(graph));
        atomicWriteFile((fs::path(opts.out_dir) / (id + ".feat")).string(),
                        header + writeTextures(table));
        entries[static_cast<std::size_t>(i)] = {id, id + ".hmap", id + ".tmeg", id + ".feat",
                                                group == Response::Pcr ? 1 : 0};
    });

    atomicWriteFile((fs::path(opts.out_dir) / "manifest.csv").string(),
                    artifactHeader("synth", cfg) + writeManifest(entries));
    std::cout << "wrote " << opts.patients << " patients (" << n_pcr << " pCR, "
              << opts.patients - n_pcr << " RD) to " << opts.out_dir << '\n';
}

// ----------------------------------------------------------- build-graph

struct BuildGraphOpts {
    CommonOpts common;
    std::string in_path;
    std::string out_path;
};

void runBuildGraph(const BuildGraphOpts& opts) {
    const RunConfig cfg = loadRunConfig(opts.common);
    const HistologyMap map = parseMap(readFile(opts.in_path));
    const TmeGraph graph = buildGraph(map, cfg.builder, opts.common.threads);
    atomicWriteFile(opts.out_path, artifactHeader("build-graph", cfg) + writeGraph(graph));
    std::cout << graph.numNodes() << " nodes, " << graph.numEdges() << " edges -> "
              << opts.out_path << '\n';
}

// -------------------------------------------------------------- features

struct FeaturesOpts {
    CommonOpts common;
    std::string graph_path;
    std::string textures_path;
    std::string out_path;
    bool zero_textures = false;
};

void runFeatures(const FeaturesOpts& opts) {
    const RunConfig cfg = loadRunConfig(opts.common);
    const TmeGraph graph = parseGraph(readFile(opts.graph_path));
    if (!opts.zero_textures && opts.textures_path.empty()) {
        throw DataError("features needs --textures or --zero-textures");
    }
    const TextureTable textures = opts.zero_textures
                                      ? zeroTextures(graph)
                                      : parseTextures(readFile(opts.textures_path));
    FeatureConfig fc = cfg.features;
    fc.threads = opts.common.threads;
    const Matrix features = assembleFeatures(graph, textures, fc);
    atomicWriteFile(opts.out_path, artifactHeader("features", cfg) + writeFeatureMatrix(features));
    std::cout << features.rows() << " nodes x " << features.cols() << " features -> "
              << opts.out_path << '\n';
}

// ---------------------------------------------------------------- census

struct CensusOpts {
    CommonOpts common;
    std::string graph_path;
    std::string out_path;
    std::string map_path;
    std::string density_out;
};

void runCensus(const CensusOpts& opts) {
    const RunConfig cfg = loadRunConfig(opts.common);
    const TmeGraph graph = parseGraph(readFile(opts.graph_path));
    const CensusTable census = computeCensus(graph);
    atomicWriteFile(opts.out_path, artifactHeader("census", cfg) + censusCsv(census));

    if (!opts.density_out.empty()) {
        if (opts.map_path.empty()) {
            throw DataError("--density-out needs --map for the grid dimensions");
        }
        const HistologyMap map = parseMap(readFile(opts.map_path));
        // Edge-motif density: each edge contributes one count at the tile
        // holding the midpoint of its two centroids.
        std::vector<double> grid(static_cast<std::size_t>(map.rows) * map.cols, 0.0);
        for (const auto& [i, j] : graph.edges) {
            const double mx = 0.5 * (graph.nodes[i].cx + graph.nodes[j].cx);
            const double my = 0.5 * (graph.nodes[i].cy + graph.nodes[j].cy);
            int col = static_cast<int>(mx / map.tile_px);
            int row = static_cast<int>(my / map.tile_px);
            col = std::clamp(col, 0, map.cols - 1);
            row = std::clamp(row, 0, map.rows - 1);
            grid[static_cast<std::size_t>(row) * map.cols + col] += 1.0;
        }
        atomicWriteFile(opts.density_out,
                        artifactHeader("census", cfg) +
                            writeFloatGrid(map.rows, map.cols, map.tile_px, grid));
    }
    std::cout << census.totalEdges() << " edges, " << census.totalTriangles()
              << " triangles -> " << opts.out_path << '\n';
}

// --------------------------------------------------------------- compare

struct CompareOpts {
    CommonOpts common;
    std::string manifest_path;
    std::string out_path;
};

void runCompare(const CompareOpts& opts) {
    const RunConfig cfg = loadRunConfig(opts.common);
    const std::vector<PatientSummary> summaries =
        summarizeManifest(opts.manifest_path, opts.common.threads);
    const std::vector<GroupComparisonRow> rows = compareGroups(summaries);
    atomicWriteFile(opts.out_path, artifactHeader("compare", cfg) + comparisonCsv(rows));

    int significant = 0;
    for (const GroupComparisonRow& row : rows) significant += row.welch.p < 0.01;
    std::cout << rows.size() << " keys compared, " << significant << " with p < 0.01 -> "
              << opts.out_path << '\n';
}

// ------------------------------------------------------------- relevance

struct RelevanceOpts {
    CommonOpts common;
    std::string manifest_path;
    std::string method = "pearson";
    int k = 0;  // 0 = all (pearson) / 10 (mrmr)
    std::string out_path;
    std::string map_for;
    std::string map_out;
};

void runRelevance(const RelevanceOpts& opts) {
    const RunConfig cfg = loadRunConfig(opts.common);
    const std::vector<PatientSummary> summaries =
        summarizeManifest(opts.manifest_path, opts.common.threads);
    if (summaries.size() < 3) {
        throw DataError("relevance ranking needs at least 3 patients, got " +
                        std::to_string(summaries.size()));
    }
    const SummaryMatrix sm = summaryMatrix(summaries);
    const int d = static_cast<int>(sm.keys.size());

    std::string csv;
    if (opts.method == "pearson") {
        const std::vector<double> r = pearsonPerFeature(sm.values, sm.response);
        std::vector<int> order(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(), [&r](int a, int b) {
            return std::fabs(r[static_cast<std::size_t>(a)]) >
                   std::fabs(r[static_cast<std::size_t>(b)]);
        });
        const int take = opts.k > 0 ? std::min(opts.k, d) : d;
        csv = "rank,key,r\n";
        for (int i = 0; i < take; ++i) {
            const int c = order[static_cast<std::size_t>(i)];
            csv += std::to_string(i + 1) + ',' + sm.keys[static_cast<std::size_t>(c)] + ',' +
                   formatDouble(r[static_cast<std::size_t>(c)]) + '\n';
        }
    } else if (opts.method == "mrmr") {
        const int take = opts.k > 0 ? opts.k : std::min(10, d);
        const std::vector<RankedFeature> ranked = mrmrRank(sm.values, sm.response, take);
        csv = "rank,key,score,relevance\n";
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            csv += std::to_string(i + 1) + ',' +
                   sm.keys[static_cast<std::size_t>(ranked[i].index)] + ',' +
                   formatDouble(ranked[i].score) + ',' + formatDouble(ranked[i].relevance) +
                   '\n';
        }
    } else {
        throw DataError("unknown relevance method '" + opts.method +
                        "' (expected pearson or mrmr)");
    }
    atomicWriteFile(opts.out_path, artifactHeader("relevance", cfg) + csv);

    if (!opts.map_out.empty()) {
        if (opts.map_for.empty()) {
            throw DataError("--map-out needs --map-for naming the patient to render");
        }
        const std::vector<ManifestEntry> entries = parseManifest(readFile(opts.manifest_path));
        const ManifestEntry* entry = nullptr;
        for (const ManifestEntry& e : entries) {
            if (e.patient_id == opts.map_for) entry = &e;
        }
        if (entry == nullptr) {
            throw DataError("patient '" + opts.map_for + "' not in manifest");
        }
        const std::string base = manifestBaseDir(opts.manifest_path);
        const std::string hmap_path =
            base.empty() ? entry->hmap_path : (fs::path(base) / entry->hmap_path).string();
        const HistologyMap map = parseMap(readFile(hmap_path));

        // Label correlation map: every tile takes the Pearson r of its
        // label's proportion against the response; background stays 0.
        const std::vector<double> r = pearsonPerFeature(sm.values, sm.response);
        std::vector<double> r_by_label(kNumLabels + 1, 0.0);
        for (int code = 1; code <= kNumLabels; ++code) {
            const std::string key = "prop:" + labelSlug(code);
            for (std::size_t c = 0; c < sm.keys.size(); ++c) {
                if (sm.keys[c] == key) r_by_label[static_cast<std::size_t>(code)] = r[c];
            }
        }
        std::vector<double> grid(static_cast<std::size_t>(map.rows) * map.cols, 0.0);
        for (std::size_t i = 0; i < map.cells.size(); ++i) {
            grid[i] = r_by_label[map.cells[i]];
        }
        atomicWriteFile(opts.map_out,
                        artifactHeader("relevance", cfg) +
                            writeFloatGrid(map.rows, map.cols, map.tile_px, grid));
    }
    std::cout << "ranked " << d << " keys (" << opts.method << ") -> " << opts.out_path
              << '\n';
}

// ----------------------------------------------------------------- train

struct TrainOpts {
    CommonOpts common;
    std::string manifest_path;
    std::string out_path;
    std::string loss_out;
    std::string ablation = "LIS";
    double lr = 0.0;     // 0 = keep config value
    int epochs = -1;     // -1 = keep config value
    std::uint64_t seed = 1;
};

void runTrain(const TrainOpts& opts, const CLI::App* sub) {
    RunConfig cfg = loadRunConfig(opts.common);
    if (sub->count("--lr") > 0) cfg.train.lr = opts.lr;
    if (sub->count("--epochs") > 0) cfg.train.epochs = opts.epochs;
    cfg.train.seed = opts.seed;
    cfg.validate();
    const AblationFlags ablation = AblationFlags::parse(opts.ablation);

    const std::vector<ManifestEntry> entries = parseManifest(readFile(opts.manifest_path));
    std::vector<PatientRecord> patients = loadPatients(
        entries, manifestBaseDir(opts.manifest_path), cfg.features, opts.common.threads);

    std::vector<Matrix> mats;
    mats.reserve(patients.size());
    for (const PatientRecord& p : patients) {
        Matrix m = p.features;
        applyAblation(m, ablation);
        mats.push_back(std::move(m));
    }
    std::vector<const Matrix*> view;
    for (const Matrix& m : mats) view.push_back(&m);
    const Standardizer standardizer = fitStandardizer(view);
    for (Matrix& m : mats) applyStandardizer(m, standardizer);

    std::vector<TrainExample> examples;
    for (std::size_t i = 0; i < patients.size(); ++i) {
        examples.push_back({&patients[i].graph, &mats[i], patients[i].label});
    }
    const TrainResult result = trainModel(examples, cfg.model, cfg.train);

    Checkpoint ckpt;
    ckpt.params = result.params;
    ckpt.standardizer = standardizer;
    ckpt.ablation = ablation;
    ckpt.log_count = cfg.features.log_count;
    ckpt.prior_pcr = result.prior_pcr;
    atomicWriteFile(opts.out_path, artifactHeader("train", cfg) + writeCheckpoint(ckpt));

    if (!opts.loss_out.empty()) {
        std::string csv = "epoch,loss\n";
        for (std::size_t e = 0; e < result.loss_curve.size(); ++e) {
            csv += std::to_string(e) + ',' + formatDouble(result.loss_curve[e]) + '\n';
        }
        atomicWriteFile(opts.loss_out, artifactHeader("train", cfg) + csv);
    }
    std::cout << "trained on " << patients.size() << " patients for " << result.epochs_run
              << " epochs, final loss " << formatDouble(result.loss_curve.back()) << " -> "
              << opts.out_path << '\n';
}

// --------------------------------------------------------------- predict

struct PredictOpts {
    CommonOpts common;
    std::string model_path;
    std::string graph_path;
    std::string textures_path;
    std::string id;
    std::string out_path;
    std::string embeddings_out;
    bool zero_textures = false;
};

void runPredict(const PredictOpts& opts) {
    const Checkpoint ckpt = parseCheckpoint(readFile(opts.model_path));
    const TmeGraph graph = parseGraph(readFile(opts.graph_path));
    if (!opts.zero_textures && opts.textures_path.empty()) {
        throw DataError("predict needs --features or --zero-textures");
    }
    const TextureTable textures = opts.zero_textures
                                      ? zeroTextures(graph)
                                      : parseTextures(readFile(opts.textures_path));

    Prediction pred;
    if (graph.numNodes() == 0) {
        pred = predictGraph(ckpt.params, graph, Matrix(0, kFeatureDim), ckpt.prior_pcr);
        std::cerr << "warning: empty graph, falling back to the training-set prior\n";
    } else {
        FeatureConfig fc;
        fc.log_count = ckpt.log_count;
        fc.threads = opts.common.threads;
        Matrix features = assembleFeatures(graph, textures, fc);
        applyAblation(features, ckpt.ablation);
        applyStandardizer(features, ckpt.standardizer);
        pred = predictGraph(ckpt.params, graph, features, ckpt.prior_pcr);
    }

    const std::string id =
        opts.id.empty() ? fs::path(opts.graph_path).stem().string() : opts.id;
    const Response call = pred.prob_pcr >= 0.5 ? Response::Pcr : Response::Rd;
    const std::string csv = "id,prob_pcr,prob_rd,pred\n" + id + ',' +
                            formatDouble(pred.prob_pcr) + ',' + formatDouble(pred.prob_rd) +
                            ',' + responseName(call) + '\n';
    if (opts.out_path.empty()) {
        std::cout << csv;
    } else {
        atomicWriteFile(opts.out_path, csv);
    }

    if (!opts.embeddings_out.empty()) {
        atomicWriteFile(opts.embeddings_out,
                        writeFeatureMatrix(pred.embeddings,
                                           "embedding[" +
                                               std::to_string(pred.embeddings.cols()) + "]"));
    }
}

// -------------------------------------------------------------------- cv

struct CvOpts {
    CommonOpts common;
    std::string manifest_path;
    std::string out_path;
    std::string roc_dir;
    std::string ablation = "LIS";
    int k = 8;
    std::uint64_t seed = 1;
};

void runCvCommand(const CvOpts& opts) {
    RunConfig cfg = loadRunConfig(opts.common);
    const std::vector<ManifestEntry> entries = parseManifest(readFile(opts.manifest_path));
    const std::vector<PatientRecord> patients = loadPatients(
        entries, manifestBaseDir(opts.manifest_path), cfg.features, opts.common.threads);

    CvConfig cv_cfg;
    cv_cfg.k = opts.k;
    cv_cfg.seed = opts.seed;
    cv_cfg.ablation = AblationFlags::parse(opts.ablation);
    cv_cfg.model = cfg.model;
    cv_cfg.train = cfg.train;
    cv_cfg.threads = opts.common.threads;
    const CvReport report = runCv(patients, cv_cfg);

    atomicWriteFile(opts.out_path, artifactHeader("cv", cfg) + reportCsv(report));
    if (!opts.roc_dir.empty()) {
        fs::create_directories(opts.roc_dir);
        for (std::size_t f = 0; f < report.folds.size(); ++f) {
            if (report.folds[f].roc.empty()) continue;
            atomicWriteFile((fs::path(opts.roc_dir) / ("fold" + std::to_string(f) + ".csv")).string(),
                            artifactHeader("cv", cfg) + rocCsv(report.folds[f].roc));
        }
    }
    std::cout << opts.k << "-fold cv (" << opts.ablation << "): mean acc "
              << formatDouble(report.mean.acc) << ", mean auc " << formatDouble(report.mean.auc)
              << " -> " << opts.out_path << '\n';
}

// ------------------------------------------------------------ grad-check

struct GradCheckOpts {
    CommonOpts common;
    int hidden = 32;
    int blocks = 2;
    int heads = 2;
    int nodes = 4;
    std::uint64_t seed = 1;
    double step = 1e-5;
    double tol = 1e-4;
};

void runGradCheck(const GradCheckOpts& opts) {
    ModelConfig cfg;
    cfg.hidden = opts.hidden;
    cfg.blocks = opts.blocks;
    cfg.heads = opts.heads;
    cfg.validate();

    Rng rng(opts.seed);
    TmeGraph graph;
    for (int i = 0; i < opts.nodes; ++i) {
        TmeNode node;
        node.id = i;
        node.label = 1 + static_cast<int>(rng.below(kNumLabels));
        node.count = 1 + static_cast<int>(rng.below(20));
        node.cx = rng.uniform(0.0, 3000.0);
        node.cy = rng.uniform(0.0, 3000.0);
        graph.nodes.push_back(node);
    }
    for (int i = 0; i < opts.nodes; ++i) {
        for (int j = i + 1; j < opts.nodes; ++j) {
            if (rng.uniform() < 0.6) graph.edges.push_back({i, j});
        }
    }

    Matrix features(opts.nodes, cfg.input_dim);
    for (double& v : features.raw()) v = rng.normal();
    const ModelParams params = initModel(cfg, rng);

    const double err = gradCheck(params, graph, features, 1, opts.step);
    std::cout << "parameters " << params.paramCount() << '\n'
              << "max_relative_error " << formatDouble(err) << '\n';
    if (!(err < opts.tol)) {
        throw DataError("gradient check failed: max relative error " + formatDouble(err) +
                        " exceeds tolerance " + formatDouble(opts.tol));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial tumor-microenvironment graph pipeline: histology label maps to "
                 "treatment-response prediction"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SynthOpts synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic label maps");
    synth_cmd->add_option("--out-dir", synth.out_dir, "dataset mode: output directory");
    synth_cmd->add_option("--out", synth.out_map, "single-map mode: output .hmap path");
    synth_cmd->add_option("--patients", synth.patients, "number of patients (dataset mode)");
    synth_cmd->add_option("--pcr-fraction", synth.pcr_fraction, "fraction with pCR response");
    synth_cmd->add_option("--group", synth.group, "pCR or RD (single-map mode)");
    synth_cmd->add_option("--rows", synth.rows, "map rows");
    synth_cmd->add_option("--cols", synth.cols, "map columns");
    synth_cmd->add_option("--motif-rate", synth.motif_rates,
                          "labelA-labelB=rate motif override (repeatable)");
    synth_cmd->add_option("--seed", synth.seed, "generator seed");
    addCommonFlags(synth_cmd, synth.common);
    synth_cmd->callback([&synth]() { runSynth(synth); });

    BuildGraphOpts build;
    auto* build_cmd = app.add_subcommand("build-graph", "Build the TME graph from a label map");
    build_cmd->add_option("--in", build.in_path, "input .hmap")->required();
    build_cmd->add_option("--out", build.out_path, "output .tmeg")->required();
    addCommonFlags(build_cmd, build.common);
    build_cmd->callback([&build]() { runBuildGraph(build); });

    FeaturesOpts feat;
    auto* feat_cmd = app.add_subcommand("features", "Assemble the node feature matrix");
    feat_cmd->add_option("--graph", feat.graph_path, "input .tmeg")->required();
    feat_cmd->add_option("--textures", feat.textures_path, "per-node texture .feat");
    feat_cmd->add_flag("--zero-textures", feat.zero_textures, "use all-zero texture rows");
    feat_cmd->add_option("--out", feat.out_path, "output .nfm")->required();
    addCommonFlags(feat_cmd, feat.common);
    feat_cmd->callback([&feat]() { runFeatures(feat); });

    CensusOpts census;
    auto* census_cmd = app.add_subcommand("census", "Edge and triangle census by label");
    census_cmd->add_option("--graph", census.graph_path, "input .tmeg")->required();
    census_cmd->add_option("--out", census.out_path, "output census CSV")->required();
    census_cmd->add_option("--map", census.map_path, ".hmap for density grid dimensions");
    census_cmd->add_option("--density-out", census.density_out, "per-tile edge density grid");
    addCommonFlags(census_cmd, census.common);
    census_cmd->callback([&census]() { runCensus(census); });

    CompareOpts compare;
    auto* compare_cmd = app.add_subcommand("compare", "Welch t-tests between response groups");
    compare_cmd->add_option("--manifest", compare.manifest_path, "dataset manifest")->required();
    compare_cmd->add_option("--out", compare.out_path, "output stats CSV")->required();
    addCommonFlags(compare_cmd, compare.common);
    compare_cmd->callback([&compare]() { runCompare(compare); });

    RelevanceOpts relevance;
    auto* rel_cmd = app.add_subcommand("relevance", "Rank motif keys by relevance");
    rel_cmd->add_option("--manifest", relevance.manifest_path, "dataset manifest")->required();
    rel_cmd->add_option("--method", relevance.method, "pearson or mrmr")
        ->check(CLI::IsMember({"pearson", "mrmr"}));
    rel_cmd->add_option("--k", relevance.k, "how many keys to emit");
    rel_cmd->add_option("--out", relevance.out_path, "output ranks CSV")->required();
    rel_cmd->add_option("--map-for", relevance.map_for, "patient id for the correlation map");
    rel_cmd->add_option("--map-out", relevance.map_out, "per-tile correlation grid path");
    addCommonFlags(rel_cmd, relevance.common);
    rel_cmd->callback([&relevance]() { runRelevance(relevance); });

    TrainOpts train;
    auto* train_cmd = app.add_subcommand("train", "Train the classifier on a manifest");
    train_cmd->add_option("--data", train.manifest_path, "dataset manifest")->required();
    train_cmd->add_option("--out", train.out_path, "output checkpoint")->required();
    train_cmd->add_option("--lr", train.lr, "learning rate");
    train_cmd->add_option("--epochs", train.epochs, "max training epochs");
    train_cmd->add_option("--seed", train.seed, "training seed");
    train_cmd->add_option("--ablation", train.ablation, "feature groups to keep (L, I, S)");
    train_cmd->add_option("--loss-out", train.loss_out, "loss curve CSV");
    addCommonFlags(train_cmd, train.common);
    train_cmd->callback([&train, train_cmd]() { runTrain(train, train_cmd); });

    PredictOpts predict;
    auto* predict_cmd = app.add_subcommand("predict", "Score one graph with a checkpoint");
    predict_cmd->add_option("--model", predict.model_path, "checkpoint path")->required();
    predict_cmd->add_option("--graph", predict.graph_path, "input .tmeg")->required();
    predict_cmd->add_option("--features", predict.textures_path, "per-node texture .feat");
    predict_cmd->add_flag("--zero-textures", predict.zero_textures, "use all-zero texture rows");
    predict_cmd->add_option("--id", predict.id, "patient id for the output row");
    predict_cmd->add_option("--out", predict.out_path, "prediction CSV (default stdout)");
    predict_cmd->add_option("--embeddings-out", predict.embeddings_out,
                            "per-node final embeddings (.nfm)");
    addCommonFlags(predict_cmd, predict.common);
    predict_cmd->callback([&predict]() { runPredict(predict); });

    CvOpts cv;
    auto* cv_cmd = app.add_subcommand("cv", "Stratified k-fold cross-validation");
    cv_cmd->add_option("--manifest", cv.manifest_path, "dataset manifest")->required();
    cv_cmd->add_option("--k", cv.k, "fold count");
    cv_cmd->add_option("--seed", cv.seed, "fold and training seed");
    cv_cmd->add_option("--ablation", cv.ablation, "feature groups to keep (L, I, S)");
    cv_cmd->add_option("--out", cv.out_path, "metric report CSV")->required();
    cv_cmd->add_option("--roc-out", cv.roc_dir, "directory for per-fold ROC CSVs");
    addCommonFlags(cv_cmd, cv.common);
    cv_cmd->callback([&cv]() { runCvCommand(cv); });

    GradCheckOpts grad;
    auto* grad_cmd = app.add_subcommand("grad-check",
                                        "Finite-difference check of the backward pass");
    grad_cmd->add_option("--hidden", grad.hidden, "hidden width");
    grad_cmd->add_option("--blocks", grad.blocks, "block count");
    grad_cmd->add_option("--heads", grad.heads, "attention heads");
    grad_cmd->add_option("--nodes", grad.nodes, "graph size");
    grad_cmd->add_option("--seed", grad.seed, "instance seed");
    grad_cmd->add_option("--step", grad.step, "finite-difference step");
    grad_cmd->add_option("--tol", grad.tol, "max relative error accepted");
    addCommonFlags(grad_cmd, grad.common);
    grad_cmd->callback([&grad]() { runGradCheck(grad); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
