#include <doctest.h>

#include "nacnet/errors.hpp"
#include "nacnet/histology_map.hpp"
#include "nacnet/rng.hpp"
#include "nacnet/stats.hpp"

#include <cmath>
#include <vector>

using namespace nacnet;

TEST_CASE("label proportions over nonzero tiles") {
    HistologyMap m = makeMap(2, 2);
    m.at(0, 0) = kLabelTumor;
    m.at(0, 1) = kLabelTumor;
    m.at(1, 0) = kLabelStroma;
    // One background tile stays out of the denominator.
    const std::vector<double> p = labelProportions(m);
    REQUIRE(p.size() == 12);
    CHECK(p[kLabelTumor - 1] == doctest::Approx(2.0 / 3.0));
    CHECK(p[kLabelStroma - 1] == doctest::Approx(1.0 / 3.0));
    double sum = 0.0;
    for (const double v : p) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(labelProportions(makeMap(3, 3)), DataError);
}

TEST_CASE("all-tumor map puts everything in the tumor bin") {
    HistologyMap m = makeMap(2, 2);
    for (auto& c : m.cells) c = kLabelTumor;
    const std::vector<double> p = labelProportions(m);
    CHECK(p[kLabelTumor - 1] == 1.0);
    for (int i = 0; i < 12; ++i)
        if (i != kLabelTumor - 1) CHECK(p[static_cast<std::size_t>(i)] == 0.0);
}

TEST_CASE("Pearson correlation reference values") {
    // Independently computed: r((1,2,3,4), (0,0,1,1)) = 2/sqrt(5).
    const double r = pearsonCorrelation({1, 2, 3, 4}, {0, 0, 1, 1});
    CHECK(r == doctest::Approx(0.894427190999916).epsilon(1e-12));
    CHECK(std::fabs(r - 0.8944) < 1e-4);

    CHECK(pearsonCorrelation({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(pearsonCorrelation({1, 1, 0, 0}, {0, 0, 1, 1}) == doctest::Approx(-1.0));
}

TEST_CASE("constant samples give r = 0 with the flag set") {
    bool constant = false;
    CHECK(pearsonCorrelation({2, 2, 2}, {1, 2, 3}, &constant) == 0.0);
    CHECK(constant);
    constant = false;
    CHECK(pearsonCorrelation({1, 2, 3}, {5, 5, 5}, &constant) == 0.0);
    CHECK(constant);
    constant = true;
    pearsonCorrelation({1, 2}, {3, 4}, &constant);
    CHECK_FALSE(constant);
}

TEST_CASE("Pearson r is affine-invariant with sign from the slope") {
    Rng rng(91);
    std::vector<double> x(20), y(20);
    for (std::size_t i = 0; i < 20; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    const double r = pearsonCorrelation(x, y);
    std::vector<double> xs = x;
    for (double& v : xs) v = 3.0 * v + 11.0;
    CHECK(pearsonCorrelation(xs, y) == doctest::Approx(r).epsilon(1e-12));
    for (double& v : xs) v = -v;
    CHECK(pearsonCorrelation(xs, y) == doctest::Approx(-r).epsilon(1e-12));
}

TEST_CASE("Welch t-test reference: (1,2,3) vs (7,8,9)") {
    const WelchResult w = welchTTest({1, 2, 3}, {7, 8, 9});
    CHECK(w.mean_a == doctest::Approx(2.0));
    CHECK(w.mean_b == doctest::Approx(8.0));
    CHECK(w.n_a == 3);
    CHECK(w.n_b == 3);
    CHECK(w.std_a == doctest::Approx(1.0));
    CHECK(w.df == doctest::Approx(4.0));
    // Frozen external oracle values.
    CHECK(w.t == doctest::Approx(-7.3484692283495345).epsilon(1e-12));
    CHECK(w.p == doctest::Approx(0.0018262606682599833).epsilon(1e-9));
    // Acceptance tolerances.
    CHECK(std::fabs(std::fabs(w.t) - 7.348) < 1e-3);
    CHECK(std::fabs(w.p - 0.0018) < 2e-4);
}

TEST_CASE("Welch t negates under group swap, p unchanged") {
    Rng rng(93);
    std::vector<double> a(6), b(9);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal() + 0.5;
    const WelchResult ab = welchTTest(a, b);
    const WelchResult ba = welchTTest(b, a);
    CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
    CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
    CHECK(ab.df == doctest::Approx(ba.df).epsilon(1e-12));
}

TEST_CASE("degenerate Welch cases") {
    // Identical constant groups: difference 0, defined as t = 0, p = 1.
    const WelchResult same = welchTTest({4, 4, 4}, {4, 4, 4});
    CHECK(same.t == 0.0);
    CHECK(same.p == 1.0);
    // Distinct constant groups: infinite separation.
    const WelchResult apart = welchTTest({1, 1, 1}, {2, 2, 2});
    CHECK(std::isinf(apart.t));
    CHECK(apart.t < 0.0);
    CHECK(apart.p == 0.0);
    // Groups must have >= 2 members.
    CHECK_THROWS_AS(welchTTest({1}, {2, 3}), DataError);
    CHECK_THROWS_AS(welchTTest({}, {2, 3}), DataError);
}

TEST_CASE("identical groups give t = 0, p = 1") {
    const WelchResult w = welchTTest({1, 2, 3, 4}, {1, 2, 3, 4});
    CHECK(w.t == doctest::Approx(0.0));
    CHECK(w.p == doctest::Approx(1.0));
}

TEST_CASE("Student two-sided p against frozen external values") {
    struct Case {
        double t, df, p;
    };
    // Computed once with an independent statistics package.
    const Case cases[] = {
        {1.0, 1.0, 0.49999999999999956},
        {2.5, 2.0, 0.1296117202215108},
        {0.5, 10.0, 0.6278936057429729},
        {3.2, 30.0, 0.0032386017119531373},
        {1.96, 100.0, 0.052778901366229654},
        {12.0, 5.0, 7.089492517161528e-05},
    };
    for (const Case& c : cases) {
        CHECK(studentTwoSidedP(c.t, c.df) == doctest::Approx(c.p).epsilon(1e-9));
        CHECK(studentTwoSidedP(-c.t, c.df) == doctest::Approx(c.p).epsilon(1e-9));
    }
    CHECK(studentTwoSidedP(0.0, 7.0) == doctest::Approx(1.0));
}

TEST_CASE("regularized incomplete beta identities") {
    CHECK(regularizedIncompleteBeta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularizedIncompleteBeta(2.0, 3.0, 1.0) == 1.0);
    // Symmetry: I_x(a,b) + I_{1-x}(b,a) = 1.
    Rng rng(97);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(0.1, 10.0);
        const double b = rng.uniform(0.1, 10.0);
        const double x = rng.uniform();
        const double lhs = regularizedIncompleteBeta(a, b, x) +
                           regularizedIncompleteBeta(b, a, 1.0 - x);
        CHECK(lhs == doctest::Approx(1.0).epsilon(1e-9));
    }
    // I_x(1,1) = x (uniform distribution).
    CHECK(regularizedIncompleteBeta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK_THROWS_AS(regularizedIncompleteBeta(-1.0, 2.0, 0.5), DataError);
    CHECK_THROWS_AS(regularizedIncompleteBeta(1.0, 2.0, 1.5), DataError);
}

TEST_CASE("pearsonPerFeature applies the scalar function per column") {
    Matrix m(4, 3);
    const double xs[] = {1, 2, 3, 4};
    for (int r = 0; r < 4; ++r) {
        m(r, 0) = xs[r];
        m(r, 1) = -xs[r];
        m(r, 2) = 7.0;  // constant
    }
    const std::vector<double> response = {0, 0, 1, 1};
    const std::vector<double> r = pearsonPerFeature(m, response);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(0.894427190999916));
    CHECK(r[1] == doctest::Approx(-0.894427190999916));
    CHECK(r[2] == 0.0);
}

TEST_CASE("mRMR picks relevance first, then punishes redundancy") {
    // Column 0: strongly correlated with response. Column 1: its exact
    // duplicate. Column 2: weaker but independent signal.
    Matrix m(8, 3);
    const double strong[] = {0.1, 0.2, 0.15, 0.05, 0.9, 0.8, 0.95, 0.85};
    const double weak[] = {0.3, 0.1, 0.4, 0.2, 0.45, 0.35, 0.2, 0.5};
    const std::vector<double> response = {0, 0, 0, 0, 1, 1, 1, 1};
    for (int r = 0; r < 8; ++r) {
        m(r, 0) = strong[r];
        m(r, 1) = strong[r];
        m(r, 2) = weak[r];
    }
    const std::vector<RankedFeature> ranked = mrmrRank(m, response, 3);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].index == 0);  // tie with col 1 broken by index
    CHECK(ranked[0].score == doctest::Approx(ranked[0].relevance));
    CHECK(ranked[1].index == 2);  // duplicate demoted by redundancy 1
    CHECK(ranked[2].index == 1);
    CHECK(ranked[2].score == doctest::Approx(ranked[2].relevance - 1.0).epsilon(1e-9));
}

TEST_CASE("mRMR single feature and k clamping") {
    Matrix m(4, 1);
    for (int r = 0; r < 4; ++r) m(r, 0) = r;
    const std::vector<double> response = {0, 0, 1, 1};
    const auto ranked = mrmrRank(m, response, 1);
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].index == 0);
    CHECK(ranked[0].score == doctest::Approx(0.894427190999916));
    CHECK(mrmrRank(m, response, 5).size() == 1);  // k beyond feature count
}

namespace {

/// Straightforward re-run of the greedy scheme, scalar correlations only.
std::vector<int> mrmrOracle(const Matrix& m, const std::vector<double>& y, int k) {
    const int d = m.cols();
    auto column = [&m](int c) {
        std::vector<double> v(static_cast<std::size_t>(m.rows()));
        for (int r = 0; r < m.rows(); ++r) v[static_cast<std::size_t>(r)] = m(r, c);
        return v;
    };
    std::vector<double> rel(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) rel[static_cast<std::size_t>(c)] = std::fabs(pearsonCorrelation(column(c), y));

    std::vector<int> picked;
    std::vector<bool> used(static_cast<std::size_t>(d), false);
    while (static_cast<int>(picked.size()) < k) {
        int best = -1;
        double best_score = 0.0;
        for (int c = 0; c < d; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            double redundancy = 0.0;
            for (const int s : picked)
                redundancy += std::fabs(pearsonCorrelation(column(c), column(s)));
            if (!picked.empty()) redundancy /= static_cast<double>(picked.size());
            const double score = rel[static_cast<std::size_t>(c)] - redundancy;
            if (best == -1 || score > best_score) {
                best = c;
                best_score = score;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        picked.push_back(best);
    }
    return picked;
}

} // namespace

TEST_CASE("mRMR matches an independently coded greedy on random data") {
    Rng rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 8 + static_cast<int>(rng.below(8));
        const int d = 2 + static_cast<int>(rng.below(6));
        Matrix m(n, d);
        for (double& v : m.raw()) v = rng.normal();
        std::vector<double> y(static_cast<std::size_t>(n));
        for (double& v : y) v = rng.below(2) ? 1.0 : 0.0;
        if (y.front() == y.back()) y.front() = 1.0 - y.front();  // keep y non-constant

        const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        const auto ranked = mrmrRank(m, y, k);
        const auto expect = mrmrOracle(m, y, k);
        REQUIRE(ranked.size() == expect.size());
        for (std::size_t i = 0; i < ranked.size(); ++i) CHECK(ranked[i].index == expect[i]);
    }
}

TEST_CASE("mRMR breaks exact ties toward the lowest index") {
    // f0 equals the response, so every later candidate's redundancy against
    // f0 equals its relevance and all scores collapse to zero: the greedy
    // must then walk the remaining columns in index order.
    Matrix m(6, 4);
    const std::vector<double> response = {0, 0, 0, 1, 1, 1};
    const double f1[] = {1, -1, 1, -1, 1, -1};
    const double f2[] = {0.3, 0.1, 0.2, 0.9, 1.1, 1.0};
    for (int r = 0; r < 6; ++r) {
        m(r, 0) = response[static_cast<std::size_t>(r)];
        m(r, 1) = f1[r];
        m(r, 2) = f2[r];
        m(r, 3) = 5.0;  // constant
    }
    const auto ranked = mrmrRank(m, response, 4);
    REQUIRE(ranked.size() == 4);
    CHECK(ranked[0].index == 0);
    CHECK(ranked[1].index == 1);
    CHECK(ranked[2].index == 2);
    CHECK(ranked[3].index == 3);
    // Scores never exceed relevance once anything is selected.
    for (std::size_t i = 1; i < ranked.size(); ++i)
        CHECK(ranked[i].score <= ranked[i].relevance + 1e-12);
}
