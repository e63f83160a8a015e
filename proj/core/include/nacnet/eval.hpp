#pragma once

#include "nacnet/features.hpp"
#include "nacnet/metrics.hpp"
#include "nacnet/tme_graph.hpp"
#include "nacnet/train.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nacnet {

/// One line of the dataset manifest CSV
/// (`patient_id,hmap_path,tmeg_path,feat_path,label`).
struct ManifestEntry {
    std::string patient_id;
    std::string hmap_path;
    std::string tmeg_path;
    std::string feat_path;
    int label = 0;  // 1 = pCR, 0 = RD
};

/// Parses the manifest text; paths stay as written (resolved by callers
/// against the manifest's directory). Duplicate patient ids are rejected.
std::vector<ManifestEntry> parseManifest(const std::string& text);
std::string writeManifest(const std::vector<ManifestEntry>& entries);

/// A loaded patient: graph plus raw (unstandardized, unablated) features.
struct PatientRecord {
    std::string id;
    TmeGraph graph;
    Matrix features;
    int label = 0;
};

/// Reads every graph and texture file and assembles raw feature matrices.
/// base_dir resolves relative manifest paths; patients load in parallel.
std::vector<PatientRecord> loadPatients(const std::vector<ManifestEntry>& entries,
                                        const std::string& base_dir,
                                        const FeatureConfig& cfg, int threads = 1);

/// Stratified cross-validation split: test folds partition the patients
/// and per-class counts differ by at most one across folds.
struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> test_indices;  // per fold, into the patient list

    std::vector<int> trainIndices(int fold, int num_patients) const;
};

FoldPlan makeFolds(const std::vector<int>& labels, int k, std::uint64_t seed);

struct CvConfig {
    int k = 8;
    std::uint64_t seed = 1;
    AblationFlags ablation;
    ModelConfig model;
    TrainConfig train;
    int threads = 1;
};

struct FoldOutcome {
    MetricRow metrics;
    std::vector<RocPoint> roc;  // empty when the fold has one class
    std::vector<std::string> test_ids;
    std::vector<double> scores;  // prob_pCR per test patient
    std::vector<int> labels;
};

struct CvReport {
    std::vector<FoldOutcome> folds;
    MetricRow mean;    // across folds; AUC mean skips undefined folds
    MetricRow stddev;
    MetricRow pooled;  // all test predictions evaluated together
};

/// Per fold: ablate + standardize on the training patients only, train a
/// fresh model, score the held-out patients. A patient id shared between
/// the two sides of any fold aborts (leakage guard).
CvReport runCv(const std::vector<PatientRecord>& patients, const CvConfig& cfg);

/// `fold,acc,auc,sens,spec,prec,f1` rows for each fold, then mean, std,
/// and pooled rows.
std::string reportCsv(const CvReport& report);

/// `fpr,tpr` rows of one fold's ROC curve.
std::string rocCsv(const std::vector<RocPoint>& roc);

} // namespace nacnet
