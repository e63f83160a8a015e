#include "nacnet/metrics.hpp"

#include "nacnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nacnet {
namespace {

void checkInputs(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) {
        throw DataError("metric inputs disagree: " + std::to_string(scores.size()) +
                        " scores vs " + std::to_string(labels.size()) + " labels");
    }
    if (scores.empty()) throw DataError("metrics need at least one prediction");
    for (int y : labels) {
        if (y != 0 && y != 1) {
            throw DataError("labels must be 0 (RD) or 1 (pCR), got " + std::to_string(y));
        }
    }
}

double ratio(long num, long den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

Confusion confusionAtThreshold(const std::vector<double>& scores,
                               const std::vector<int>& labels, double threshold) {
    checkInputs(scores, labels);
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= threshold;
        const bool truth = labels[i] == 1;
        if (pred && truth) ++c.tp;
        else if (pred && !truth) ++c.fp;
        else if (!pred && !truth) ++c.tn;
        else ++c.fn;
    }
    return c;
}

double accuracy(const Confusion& c) { return ratio(c.tp + c.tn, c.total()); }
double sensitivity(const Confusion& c) { return ratio(c.tp, c.tp + c.fn); }
double specificity(const Confusion& c) { return ratio(c.tn, c.tn + c.fp); }
double precision(const Confusion& c) { return ratio(c.tp, c.tp + c.fp); }

double f1Score(const Confusion& c) {
    const double p = precision(c);
    const double s = sensitivity(c);
    return (p + s) == 0.0 ? 0.0 : 2.0 * p * s / (p + s);
}

std::vector<RocPoint> rocCurve(const std::vector<double>& scores,
                               const std::vector<int>& labels) {
    checkInputs(scores, labels);
    long pos = 0;
    long neg = 0;
    for (int y : labels) (y == 1 ? pos : neg) += 1;
    if (pos == 0 || neg == 0) {
        throw DataError("ROC curve needs both classes present");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    std::vector<RocPoint> curve;
    curve.push_back({0.0, 0.0});
    long tp = 0;
    long fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Sweep the whole tie group before emitting a point; this draws a
        // single diagonal segment across tied scores.
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        curve.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                         static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return curve;
}

double aucScore(const std::vector<double>& scores, const std::vector<int>& labels) {
    checkInputs(scores, labels);
    long pos = 0;
    for (int y : labels) pos += (y == 1);
    if (pos == 0 || pos == static_cast<long>(labels.size())) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const std::vector<RocPoint> curve = rocCurve(scores, labels);
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        area += (curve[i].fpr - curve[i - 1].fpr) * 0.5 * (curve[i].tpr + curve[i - 1].tpr);
    }
    return area;
}

MetricRow computeMetrics(const std::vector<double>& scores, const std::vector<int>& labels) {
    MetricRow row;
    row.confusion = confusionAtThreshold(scores, labels);
    row.acc = accuracy(row.confusion);
    row.auc = aucScore(scores, labels);
    row.sens = sensitivity(row.confusion);
    row.spec = specificity(row.confusion);
    row.prec = precision(row.confusion);
    row.f1 = f1Score(row.confusion);
    return row;
}

} // namespace nacnet
