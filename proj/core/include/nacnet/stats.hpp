#pragma once

#include "nacnet/histology_map.hpp"
#include "nacnet/matrix.hpp"

#include <string>
#include <vector>

namespace nacnet {

/// Per-class tile fraction over the nonzero (non-background) tiles of a
/// map; entries sum to 1. All-background maps are a DataError.
std::vector<double> labelProportions(const HistologyMap& m);

/// Pearson correlation of two equal-length samples. When either sample is
/// constant r is defined as 0 and *constant (if given) is set.
double pearsonCorrelation(const std::vector<double>& x, const std::vector<double>& y,
                          bool* constant = nullptr);

/// Welch (unequal-variance) two-sample t-test, group a minus group b.
/// Degenerate zero-variance cases follow the convention t = 0, p = 1 when
/// the means agree and |t| = inf, p = 0 when they differ.
struct WelchResult {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double std_a = 0.0;   // sample standard deviations (n-1)
    double std_b = 0.0;
    long n_a = 0;
    long n_b = 0;
    double t = 0.0;
    double df = 0.0;      // Welch-Satterthwaite degrees of freedom
    double p = 1.0;       // two-sided
};

WelchResult welchTTest(const std::vector<double>& a, const std::vector<double>& b);

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
/// x in [0, 1], by continued fraction (modified Lentz). Accurate to ~1e-10.
double regularizedIncompleteBeta(double a, double b, double x);

/// Two-sided p-value of a Student t statistic with df degrees of freedom:
/// P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double studentTwoSidedP(double t, double df);

/// One step of the greedy minimum-redundancy maximum-relevance ranking.
struct RankedFeature {
    int index = 0;
    double score = 0.0;      // relevance - mean |r| with already-selected
    double relevance = 0.0;  // |Pearson r| against the response
};

/// Greedy mRMR over the columns of a samples x features matrix using the
/// correlation-difference scheme. The first pick maximizes relevance; ties
/// break toward the lowest column index.
std::vector<RankedFeature> mrmrRank(const Matrix& features,
                                    const std::vector<double>& response, int k);

/// Per-column Pearson r against the response (constant columns give 0).
std::vector<double> pearsonPerFeature(const Matrix& features,
                                      const std::vector<double>& response);

} // namespace nacnet
