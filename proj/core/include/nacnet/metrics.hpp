#pragma once

#include <string>
#include <vector>

namespace nacnet {

/// Binary confusion counts with pCR as the positive class.
struct Confusion {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
    bool operator==(const Confusion&) const = default;
};

/// Counts predictions at a probability threshold: scores are prob_pCR,
/// labels are 1 for pCR and 0 for RD; score >= threshold predicts pCR.
Confusion confusionAtThreshold(const std::vector<double>& scores,
                               const std::vector<int>& labels, double threshold = 0.5);

/// Ratio metrics from confusion counts. An undefined ratio (zero
/// denominator) is reported as 0.
double accuracy(const Confusion& c);
double sensitivity(const Confusion& c);
double specificity(const Confusion& c);
double precision(const Confusion& c);
double f1Score(const Confusion& c);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    bool operator==(const RocPoint&) const = default;
};

/// Exact ROC step curve from (0,0) to (1,1). Tied scores collapse into a
/// single segment, so the trapezoid rule below averages over ties.
std::vector<RocPoint> rocCurve(const std::vector<double>& scores,
                               const std::vector<int>& labels);

/// Area under the ROC curve by trapezoidal integration. Returns NaN when
/// only one class is present (undefined, callers exclude it from means).
double aucScore(const std::vector<double>& scores, const std::vector<int>& labels);

/// One evaluated fold (or a pooled evaluation).
struct MetricRow {
    Confusion confusion;
    double acc = 0.0;
    double auc = 0.0;   // NaN when undefined
    double sens = 0.0;
    double spec = 0.0;
    double prec = 0.0;
    double f1 = 0.0;
};

MetricRow computeMetrics(const std::vector<double>& scores, const std::vector<int>& labels);

} // namespace nacnet
