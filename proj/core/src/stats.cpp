#include "nacnet/stats.hpp"

#include "nacnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nacnet {
namespace {

double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

/// Sample variance with the n-1 divisor.
double sampleVariance(const std::vector<double>& v, double m) {
    if (v.size() < 2) return 0.0;
    double sq = 0.0;
    for (double x : v) {
        const double d = x - m;
        sq += d * d;
    }
    return sq / static_cast<double>(v.size() - 1);
}

/// Continued-fraction kernel of the regularized incomplete beta function
/// (modified Lentz iteration).
double betaContinuedFraction(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-14;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

std::vector<double> labelProportions(const HistologyMap& m) {
    std::vector<long> counts(kNumLabels, 0);
    long nonzero = 0;
    for (std::uint8_t code : m.cells) {
        if (code == kLabelBackground) continue;
        ++counts[code - 1];
        ++nonzero;
    }
    if (nonzero == 0) {
        throw DataError("label proportions undefined: map has only background tiles");
    }
    std::vector<double> props(kNumLabels, 0.0);
    for (int i = 0; i < kNumLabels; ++i) {
        props[i] = static_cast<double>(counts[i]) / static_cast<double>(nonzero);
    }
    return props;
}

double pearsonCorrelation(const std::vector<double>& x, const std::vector<double>& y,
                          bool* constant) {
    if (constant != nullptr) *constant = false;
    if (x.size() != y.size()) {
        throw DataError("Pearson correlation needs equal-length samples, got " +
                        std::to_string(x.size()) + " and " + std::to_string(y.size()));
    }
    if (x.size() < 2) {
        throw DataError("Pearson correlation needs at least two samples");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        if (constant != nullptr) *constant = true;
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

WelchResult welchTTest(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw DataError("Welch t-test needs at least two samples per group, got " +
                        std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    WelchResult r;
    r.n_a = static_cast<long>(a.size());
    r.n_b = static_cast<long>(b.size());
    r.mean_a = mean(a);
    r.mean_b = mean(b);
    const double va = sampleVariance(a, r.mean_a);
    const double vb = sampleVariance(b, r.mean_b);
    r.std_a = std::sqrt(va);
    r.std_b = std::sqrt(vb);

    const double sa = va / static_cast<double>(r.n_a);
    const double sb = vb / static_cast<double>(r.n_b);
    const double se2 = sa + sb;
    const double diff = r.mean_a - r.mean_b;

    if (se2 == 0.0) {
        if (diff == 0.0) {
            r.t = 0.0;
            r.df = static_cast<double>(r.n_a + r.n_b - 2);
            r.p = 1.0;
        } else {
            r.t = diff > 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
            r.df = static_cast<double>(r.n_a + r.n_b - 2);
            r.p = 0.0;
        }
        return r;
    }

    r.t = diff / std::sqrt(se2);
    r.df = se2 * se2 /
           (sa * sa / static_cast<double>(r.n_a - 1) + sb * sb / static_cast<double>(r.n_b - 1));
    r.p = studentTwoSidedP(r.t, r.df);
    return r;
}

double regularizedIncompleteBeta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DataError("incomplete beta parameters must be positive");
    }
    if (x < 0.0 || x > 1.0) {
        throw DataError("incomplete beta argument outside [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // The continued fraction converges fast for x below the mean a/(a+b).
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betaContinuedFraction(a, b, x) / a;
    }
    return 1.0 - front * betaContinuedFraction(b, a, 1.0 - x) / b;
}

double studentTwoSidedP(double t, double df) {
    if (df <= 0.0) throw DataError("t distribution needs positive degrees of freedom");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return regularizedIncompleteBeta(0.5 * df, 0.5, x);
}

std::vector<double> pearsonPerFeature(const Matrix& features,
                                      const std::vector<double>& response) {
    if (static_cast<int>(response.size()) != features.rows()) {
        throw DataError("response length " + std::to_string(response.size()) +
                        " does not match feature rows " + std::to_string(features.rows()));
    }
    std::vector<double> r(features.cols(), 0.0);
    std::vector<double> col(features.rows());
    for (int c = 0; c < features.cols(); ++c) {
        for (int i = 0; i < features.rows(); ++i) col[i] = features(i, c);
        r[c] = pearsonCorrelation(col, response);
    }
    return r;
}

std::vector<RankedFeature> mrmrRank(const Matrix& features,
                                    const std::vector<double>& response, int k) {
    const int d = features.cols();
    if (k < 0 || k > d) {
        throw DataError("mRMR selection size " + std::to_string(k) + " outside [0, " +
                        std::to_string(d) + "]");
    }
    const std::vector<double> r_response = pearsonPerFeature(features, response);
    std::vector<double> relevance(d);
    for (int c = 0; c < d; ++c) relevance[c] = std::fabs(r_response[c]);

    // Pairwise feature correlations, filled lazily: only columns that get
    // selected ever need their row computed.
    std::vector<std::vector<double>> cross(d);
    auto crossRow = [&](int c) -> const std::vector<double>& {
        if (cross[c].empty()) {
            std::vector<double> cc(features.rows());
            std::vector<double> other(features.rows());
            for (int i = 0; i < features.rows(); ++i) cc[i] = features(i, c);
            cross[c].resize(d);
            for (int o = 0; o < d; ++o) {
                for (int i = 0; i < features.rows(); ++i) other[i] = features(i, o);
                cross[c][o] = std::fabs(pearsonCorrelation(cc, other));
            }
        }
        return cross[c];
    };

    std::vector<RankedFeature> ranked;
    std::vector<bool> selected(d, false);
    for (int pick = 0; pick < k; ++pick) {
        int best = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < d; ++c) {
            if (selected[c]) continue;
            double redundancy = 0.0;
            for (const RankedFeature& s : ranked) redundancy += crossRow(s.index)[c];
            if (!ranked.empty()) redundancy /= static_cast<double>(ranked.size());
            const double score = relevance[c] - redundancy;
            if (score > best_score) {
                best_score = score;
                best = c;
            }
        }
        selected[best] = true;
        ranked.push_back({best, best_score, relevance[best]});
    }
    return ranked;
}

} // namespace nacnet
