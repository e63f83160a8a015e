#include "nacnet/eval.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/parallel.hpp"
#include "nacnet/response.hpp"
#include "nacnet/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace nacnet {
namespace {

const char* kManifestHeader = "patient_id,hmap_path,tmeg_path,feat_path,label";

std::vector<std::string> splitCsvLine(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(field);
    return fields;
}

int parseResponseLabel(const std::string& s, int line_number) {
    if (s == "pCR" || s == "1") return 1;
    if (s == "RD" || s == "0") return 0;
    throw ParseError("line " + std::to_string(line_number) + ": unknown response label '" +
                     s + "' (expected pCR, RD, 1, or 0)");
}

std::string resolvePath(const std::string& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

double foldMean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double foldStd(const std::vector<double>& v, double mean) {
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    return std::sqrt(sq / static_cast<double>(v.size()));
}

} // namespace

std::vector<ManifestEntry> parseManifest(const std::string& text) {
    std::istringstream in(text);
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError("empty manifest");
    if (line != kManifestHeader) {
        throw ParseError("line " + std::to_string(reader.lineNumber()) +
                         ": manifest must start with header '" + kManifestHeader + "'");
    }
    std::vector<ManifestEntry> entries;
    std::unordered_set<std::string> seen;
    while (reader.next(line)) {
        const std::vector<std::string> fields = splitCsvLine(line);
        if (fields.size() != 5) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": manifest row needs 5 fields, got " +
                             std::to_string(fields.size()));
        }
        for (int i = 0; i < 4; ++i) {
            if (fields[i].empty()) {
                throw ParseError("line " + std::to_string(reader.lineNumber()) +
                                 ": empty manifest field");
            }
        }
        if (!seen.insert(fields[0]).second) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": duplicate patient id '" + fields[0] + "'");
        }
        ManifestEntry e;
        e.patient_id = fields[0];
        e.hmap_path = fields[1];
        e.tmeg_path = fields[2];
        e.feat_path = fields[3];
        e.label = parseResponseLabel(fields[4], reader.lineNumber());
        entries.push_back(std::move(e));
    }
    return entries;
}

std::string writeManifest(const std::vector<ManifestEntry>& entries) {
    std::string out = std::string(kManifestHeader) + '\n';
    for (const ManifestEntry& e : entries) {
        out += e.patient_id + ',' + e.hmap_path + ',' + e.tmeg_path + ',' + e.feat_path +
               ',' + responseName(e.label == 1 ? Response::Pcr : Response::Rd) + '\n';
    }
    return out;
}

std::vector<PatientRecord> loadPatients(const std::vector<ManifestEntry>& entries,
                                        const std::string& base_dir,
                                        const FeatureConfig& cfg, int threads) {
    std::vector<PatientRecord> patients(entries.size());
    parallelFor(static_cast<int>(entries.size()), threads, [&](int i) {
        const ManifestEntry& e = entries[i];
        PatientRecord& p = patients[i];
        p.id = e.patient_id;
        p.label = e.label;
        const std::string tmeg_path = resolvePath(base_dir, e.tmeg_path);
        const std::string feat_path = resolvePath(base_dir, e.feat_path);
        try {
            p.graph = parseGraph(readFile(tmeg_path));
        } catch (const std::exception& ex) {
            throw DataError(tmeg_path + ": " + ex.what());
        }
        try {
            const TextureTable textures = parseTextures(readFile(feat_path));
            FeatureConfig per_patient = cfg;
            per_patient.threads = 1;  // patients already run in parallel
            p.features = assembleFeatures(p.graph, textures, per_patient);
        } catch (const std::exception& ex) {
            throw DataError(feat_path + ": " + ex.what());
        }
    });
    return patients;
}

std::vector<int> FoldPlan::trainIndices(int fold, int num_patients) const {
    std::vector<bool> is_test(static_cast<std::size_t>(num_patients), false);
    for (int idx : test_indices.at(static_cast<std::size_t>(fold))) {
        is_test[static_cast<std::size_t>(idx)] = true;
    }
    std::vector<int> train;
    for (int i = 0; i < num_patients; ++i) {
        if (!is_test[static_cast<std::size_t>(i)]) train.push_back(i);
    }
    return train;
}

FoldPlan makeFolds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    const int n = static_cast<int>(labels.size());
    if (k < 2) throw DataError("cross-validation needs at least 2 folds");
    if (k > n) {
        throw DataError("fold count " + std::to_string(k) + " exceeds patient count " +
                        std::to_string(n));
    }
    std::vector<int> pcr;
    std::vector<int> rd;
    for (int i = 0; i < n; ++i) {
        if (labels[i] == 1) pcr.push_back(i);
        else if (labels[i] == 0) rd.push_back(i);
        else throw DataError("patient label must be 0 or 1, got " + std::to_string(labels[i]));
    }
    if (pcr.empty() || rd.empty()) {
        throw DataError("cross-validation needs both classes present");
    }

    Rng rng(seed);
    rng.shuffle(pcr);
    rng.shuffle(rd);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.test_indices.resize(static_cast<std::size_t>(k));
    // Deal pCR then RD round-robin with one running cursor, so per-class
    // counts and fold sizes both stay within one patient of each other.
    int cursor = 0;
    for (int idx : pcr) plan.test_indices[static_cast<std::size_t>(cursor++ % k)].push_back(idx);
    for (int idx : rd) plan.test_indices[static_cast<std::size_t>(cursor++ % k)].push_back(idx);
    for (auto& fold : plan.test_indices) std::sort(fold.begin(), fold.end());
    return plan;
}

CvReport runCv(const std::vector<PatientRecord>& patients, const CvConfig& cfg) {
    cfg.model.validate();
    cfg.train.validate();
    {
        std::unordered_set<std::string> ids;
        for (const PatientRecord& p : patients) {
            if (!ids.insert(p.id).second) {
                throw DataError("duplicate patient id '" + p.id + "'");
            }
        }
    }
    std::vector<int> labels;
    labels.reserve(patients.size());
    for (const PatientRecord& p : patients) labels.push_back(p.label);
    const FoldPlan plan = makeFolds(labels, cfg.k, cfg.seed);

    CvReport report;
    report.folds.resize(static_cast<std::size_t>(cfg.k));
    parallelFor(cfg.k, cfg.threads, [&](int f) {
        const std::vector<int>& test = plan.test_indices[static_cast<std::size_t>(f)];
        const std::vector<int> train = plan.trainIndices(f, static_cast<int>(patients.size()));

        std::unordered_set<std::string> test_ids;
        for (int idx : test) test_ids.insert(patients[static_cast<std::size_t>(idx)].id);
        for (int idx : train) {
            if (test_ids.count(patients[static_cast<std::size_t>(idx)].id)) {
                throw DataError("leakage: patient '" + patients[static_cast<std::size_t>(idx)].id +
                                "' appears in both sides of fold " + std::to_string(f));
            }
        }

        // Ablation is applied to the raw features before the standardizer
        // fit, so dropped columns are constant and pass through unscaled.
        std::vector<Matrix> train_mats;
        train_mats.reserve(train.size());
        for (int idx : train) {
            Matrix m = patients[static_cast<std::size_t>(idx)].features;
            applyAblation(m, cfg.ablation);
            train_mats.push_back(std::move(m));
        }
        std::vector<const Matrix*> fit_view;
        fit_view.reserve(train_mats.size());
        for (const Matrix& m : train_mats) fit_view.push_back(&m);
        const Standardizer standardizer = fitStandardizer(fit_view);
        for (Matrix& m : train_mats) applyStandardizer(m, standardizer);

        std::vector<TrainExample> examples;
        examples.reserve(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            examples.push_back({&patients[static_cast<std::size_t>(train[i])].graph,
                                &train_mats[i],
                                patients[static_cast<std::size_t>(train[i])].label});
        }
        TrainConfig fold_cfg = cfg.train;
        fold_cfg.seed = mixSeed(cfg.seed, static_cast<std::uint64_t>(f));
        const TrainResult trained = trainModel(examples, cfg.model, fold_cfg);

        FoldOutcome& out = report.folds[static_cast<std::size_t>(f)];
        for (int idx : test) {
            const PatientRecord& p = patients[static_cast<std::size_t>(idx)];
            Matrix m = p.features;
            applyAblation(m, cfg.ablation);
            applyStandardizer(m, standardizer);
            const Prediction pred = predictGraph(trained.params, p.graph, m, trained.prior_pcr);
            out.test_ids.push_back(p.id);
            out.scores.push_back(pred.prob_pcr);
            out.labels.push_back(p.label);
        }
        out.metrics = computeMetrics(out.scores, out.labels);
        const bool has_both = std::count(out.labels.begin(), out.labels.end(), 1) > 0 &&
                              std::count(out.labels.begin(), out.labels.end(), 0) > 0;
        if (has_both) out.roc = rocCurve(out.scores, out.labels);
    });

    auto collect = [&report](auto pick) {
        std::vector<double> v;
        for (const FoldOutcome& f : report.folds) v.push_back(pick(f.metrics));
        return v;
    };
    auto summarize = [&](auto pick, double MetricRow::* field) {
        std::vector<double> v = collect(pick);
        const double m = foldMean(v);
        report.mean.*field = m;
        report.stddev.*field = foldStd(v, m);
    };
    summarize([](const MetricRow& m) { return m.acc; }, &MetricRow::acc);
    summarize([](const MetricRow& m) { return m.sens; }, &MetricRow::sens);
    summarize([](const MetricRow& m) { return m.spec; }, &MetricRow::spec);
    summarize([](const MetricRow& m) { return m.prec; }, &MetricRow::prec);
    summarize([](const MetricRow& m) { return m.f1; }, &MetricRow::f1);
    {
        // AUC is undefined on single-class folds; those folds are left out
        // of the mean and spread.
        std::vector<double> v;
        for (const FoldOutcome& f : report.folds) {
            if (!std::isnan(f.metrics.auc)) v.push_back(f.metrics.auc);
        }
        if (v.empty()) {
            report.mean.auc = report.stddev.auc = std::numeric_limits<double>::quiet_NaN();
        } else {
            report.mean.auc = foldMean(v);
            report.stddev.auc = foldStd(v, report.mean.auc);
        }
    }

    std::vector<double> all_scores;
    std::vector<int> all_labels;
    for (const FoldOutcome& f : report.folds) {
        all_scores.insert(all_scores.end(), f.scores.begin(), f.scores.end());
        all_labels.insert(all_labels.end(), f.labels.begin(), f.labels.end());
    }
    report.pooled = computeMetrics(all_scores, all_labels);
    return report;
}

std::string reportCsv(const CvReport& report) {
    std::string out = "fold,acc,auc,sens,spec,prec,f1\n";
    auto row = [](const std::string& name, const MetricRow& m) {
        return name + ',' + formatDouble(m.acc) + ',' + formatDouble(m.auc) + ',' +
               formatDouble(m.sens) + ',' + formatDouble(m.spec) + ',' +
               formatDouble(m.prec) + ',' + formatDouble(m.f1) + '\n';
    };
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
        out += row(std::to_string(f), report.folds[f].metrics);
    }
    out += row("mean", report.mean);
    out += row("std", report.stddev);
    out += row("pooled", report.pooled);
    return out;
}

std::string rocCsv(const std::vector<RocPoint>& roc) {
    std::string out = "fpr,tpr\n";
    for (const RocPoint& p : roc) {
        out += formatDouble(p.fpr) + ',' + formatDouble(p.tpr) + '\n';
    }
    return out;
}

} // namespace nacnet
