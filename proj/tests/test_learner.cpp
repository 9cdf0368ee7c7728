#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <variant>
#include <vector>

#include "pbdl/cover.hpp"
#include "pbdl/dist.hpp"
#include "pbdl/empirical.hpp"
#include "pbdl/learner.hpp"
#include "pbdl/rng.hpp"

using namespace pbdl;

namespace {

EmpiricalCdf ecdf(const std::vector<std::int64_t>& counts) {
    return empirical_cdf_from_counts(counts, 0.05);
}

} // namespace

TEST_SUITE("learner") {

TEST_CASE("delta statistic by hand") {
    // counts (4,4,2) on {0,1,2}: fhat = (0.4, 0.4, 0.2)
    const auto e = ecdf({4, 4, 2});

    // Y = one variable at 2/4, no shift: f_Y = (0.5, 0.5) on {0,1}.
    // Delta = ((|0.5-0.4| + |0.5-0.4|) + 1 - 0.8) / 2 = 0.2
    SparseForm y;
    y.k = 2;
    y.grid = {2};
    y.ones = 0;
    CHECK(delta_statistic(y, e, 2) == doctest::Approx(0.2));

    // Empty product shifted to 1: point mass there, support {1}.
    // Delta = (|1 - 0.4| + 1 - 0.4) / 2 = 0.6
    SparseForm point;
    point.k = 2;
    point.ones = 1;
    CHECK(delta_statistic(point, e, 2) == doctest::Approx(0.6));

    // Support sticking out of the domain is a caller error.
    SparseForm wide;
    wide.k = 2;
    wide.grid = {1, 1};
    wide.ones = 1;
    CHECK_THROWS_AS(delta_statistic(wide, e, 2), std::invalid_argument);
}

TEST_CASE("h statistic by hand") {
    // Bin(2, 1/2) shifted by 1 on domain {0..4}: pmf (0, .25, .5, .25, 0),
    // cdf (0, .25, .75, 1, 1).  counts (2,2,4,0,2): ecdf (.2, .4, .8, .8, 1).
    HeavyBinomialForm y;
    y.k = 2;
    y.ell = 2;
    y.q_num = 4;
    y.q_den = 8;
    y.ones = 1;
    const auto e = ecdf({2, 2, 4, 0, 2});
    CHECK(h_statistic(y, e, 4) == doctest::Approx(0.2));

    HeavyBinomialForm wide = y;
    wide.ell = 5;
    CHECK_THROWS_AS(h_statistic(wide, e, 4), std::invalid_argument);
}

TEST_CASE("exponents and thresholds") {
    TvLearnerConfig cfg;
    cfg.epsilon = 0.2;
    cfg.tau = 1.0;
    CHECK(cfg.beta() == doctest::Approx(13.0 / 12.0));
    CHECK(cfg.alpha() == doctest::Approx(4.5));
    CHECK(cfg.eps_beta() == doctest::Approx(std::pow(0.2, 13.0 / 12.0)));
    CHECK(cfg.eps_alpha() == doctest::Approx(std::pow(0.2, 4.5)));

    // Defaults derive from epsilon.
    CHECK(h_threshold(cfg) == doctest::Approx(0.350510));
    CHECK(delta_threshold(cfg, 8) == doctest::Approx(0.187777));
    CHECK(delta_threshold(cfg, 0) ==
          doctest::Approx(cfg.eps_beta() + 2.0 * cfg.eps_alpha()));
    CHECK_FALSE(cfg.thresholds.any_override());

    // Explicit values win verbatim.
    cfg.thresholds.delta_base = 0.3;
    cfg.thresholds.delta_per_support = 0.01;
    cfg.thresholds.h = 0.5;
    CHECK(cfg.thresholds.any_override());
    CHECK(delta_threshold(cfg, 2) == doctest::Approx(0.33));
    CHECK(h_threshold(cfg) == doctest::Approx(0.5));
}

TEST_CASE("delta and h tests compare against their thresholds") {
    const auto e = ecdf({4, 4, 2});
    SparseForm y;
    y.k = 2;
    y.grid = {2};
    y.ones = 0;
    TvLearnerConfig cfg;
    cfg.thresholds.delta_base = 0.25;
    cfg.thresholds.delta_per_support = 0.0;
    CHECK(delta_test(y, e, 2, cfg));
    cfg.thresholds.delta_base = 0.15;
    CHECK_FALSE(delta_test(y, e, 2, cfg));

    HeavyBinomialForm h;
    h.k = 2;
    h.ell = 2;
    h.q_num = 4;
    h.q_den = 8;
    h.ones = 1;
    const auto e2 = ecdf({2, 2, 4, 0, 2});
    cfg.thresholds.h = 0.25;
    CHECK(h_test(h, e2, 4, cfg));
    cfg.thresholds.h = 0.15;
    CHECK_FALSE(h_test(h, e2, 4, cfg));
}

TEST_CASE("tv sample size ties to the DKW budget at epsilon^alpha") {
    TvLearnerConfig cfg;
    cfg.epsilon = 0.35;
    cfg.tau = 1.0;
    CHECK(tv_sample_size(cfg) == 7308195);
    CHECK(tv_sample_size(cfg) == dkw_sample_size(cfg.eps_alpha(), 0.05));
}

TEST_CASE("learn_tv accepts an exact point mass and certifies") {
    // All mass at 3; the ell=0, ones=3 sparse form matches with Delta = 0.
    std::vector<std::int64_t> counts(11, 0);
    counts[3] = 1000;

    TvLearnerConfig cfg;
    cfg.epsilon = 0.05; // small enough that condition (1) holds at k=2
    cfg.tau = 1.0;
    cfg.k_override = 2;

    const TvHypothesis h = learn_tv_counts(counts, cfg);
    REQUIRE(std::holds_alternative<SparseForm>(h.element));
    const auto& s = std::get<SparseForm>(h.element);
    CHECK(s.ell() == 0);
    CHECK(s.ones == 3);
    CHECK(h.statistic == 0.0);
    CHECK(h.accepted_sparse);
    CHECK(h.threshold == doctest::Approx(delta_threshold(cfg, 0)));
    CHECK(h.certified);

    // Any hand-set threshold voids certification.
    TvLearnerConfig overridden = cfg;
    overridden.thresholds.h = 0.5;
    CHECK_FALSE(learn_tv_counts(counts, overridden).certified);

    // So does a cover cap...
    TvLearnerConfig capped = cfg;
    capped.heavy_q_stride_cap = 2;
    CHECK_FALSE(learn_tv_counts(counts, capped).certified);

    // ...and an epsilon too coarse for condition (1).
    TvLearnerConfig coarse = cfg;
    coarse.epsilon = 0.35;
    CHECK_FALSE(learn_tv_counts(counts, coarse).certified);
}

TEST_CASE("learn_tv finds the exact sparse element behind a sample") {
    // Two deterministic ones plus a fair coin: truth is (0,0,.5,.5,0,...).
    ProbVector target;
    target.probs = {1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const Pmf truth = pbd_pmf(target);
    const auto counts = sample_pbd_counts(target, 20000, 4242);

    TvLearnerConfig cfg;
    cfg.epsilon = 0.25;
    cfg.k_override = 2;
    cfg.thresholds.delta_base = 0.08;
    cfg.thresholds.delta_per_support = 0.0;
    cfg.thresholds.h = 1e-9;

    const TvHypothesis h = learn_tv_counts(counts, cfg);
    REQUIRE(std::holds_alternative<SparseForm>(h.element));
    const auto& s = std::get<SparseForm>(h.element);
    CHECK(s.ell() == 1);
    CHECK(s.grid == std::vector<std::int64_t>{2});
    CHECK(s.ones == 2);
    CHECK(h.accepted_sparse);
    CHECK_FALSE(h.certified);
    CHECK(h.threshold == doctest::Approx(0.08));
    CHECK(h.statistic <= 0.08);
    // The accepted element reproduces the target exactly.
    CHECK(tv_distance(truth, cover_element_pmf(h.element, 10)) == 0.0);

    // SampleSet overload is just a counting front end.
    SampleSet s2;
    s2.domain_max = 10;
    for (std::size_t v = 0; v < counts.size(); ++v)
        for (std::int64_t c = 0; c < counts[v]; ++c)
            s2.values.push_back(static_cast<std::int64_t>(v));
    const TvHypothesis h2 = learn_tv(s2, cfg);
    CHECK(h2.statistic == h.statistic);
    CHECK(element_ones(h2.element) == element_ones(h.element));
}

TEST_CASE("learn_tv tests every sparse form before any heavy form") {
    std::vector<std::int64_t> counts(11, 0);
    counts[5] = 100;
    TvLearnerConfig cfg;
    cfg.epsilon = 0.25;
    cfg.k_override = 2;
    // Absurdly generous thresholds: the very first element must win, and the
    // first element of a cover is the ell=0, ones=0 sparse form.
    cfg.thresholds.delta_base = 2.0;
    cfg.thresholds.delta_per_support = 0.0;
    cfg.thresholds.h = 2.0;

    const TvHypothesis h = learn_tv_counts(counts, cfg);
    REQUIRE(std::holds_alternative<SparseForm>(h.element));
    CHECK(std::get<SparseForm>(h.element).ell() == 0);
    CHECK(std::get<SparseForm>(h.element).ones == 0);
    CHECK(h.accepted_sparse);
    CHECK(h.statistic == doctest::Approx(1.0)); // Delta of a wrong point mass
}

TEST_CASE("learn_tv on a near-binomial target lands close in Kolmogorov") {
    ProbVector target;
    target.probs.assign(40, 0.2);
    const Pmf truth = pbd_pmf(target);
    const auto counts = sample_pbd_counts(target, 100000, 777);

    TvLearnerConfig cfg;
    cfg.epsilon = 0.35;
    cfg.tau = 1.0;
    cfg.k_override = 2;
    cfg.thresholds.delta_base = 0.12;
    cfg.thresholds.h = 0.12;

    const TvHypothesis h = learn_tv_counts(counts, cfg);
    CHECK(h.statistic <= h.threshold);
    const Pmf el = cover_element_pmf(h.element, 40);
    CHECK(kolmogorov_distance(el, truth) <= 0.3);
}

TEST_CASE("learn_tv reports the best statistics when nothing accepts") {
    TvLearnerConfig cfg;
    cfg.epsilon = 0.2;
    cfg.k_override = 2;
    cfg.thresholds.delta_base = 0.0;
    cfg.thresholds.delta_per_support = 0.0;
    cfg.thresholds.h = 0.0;

    // Tenths can't be hit exactly by quarter-grid products, so no statistic
    // reaches zero.
    const std::vector<std::int64_t> counts{1, 2, 3, 4, 0, 0, 0};
    CHECK_THROWS_AS(learn_tv_counts(counts, cfg), NoAcceptingElement);
    try {
        learn_tv_counts(counts, cfg);
    } catch (const NoAcceptingElement& ex) {
        CHECK(ex.best_delta > 0.0);
        CHECK(ex.best_delta <= 1.0);
        CHECK(ex.best_h > 0.0);
        CHECK(ex.best_h <= 1.0);
        CHECK(std::string(ex.what()).find("no cover element") != std::string::npos);
    }
}

TEST_CASE("learn_kolmogorov nails a point mass") {
    SampleSet s;
    s.domain_max = 10;
    s.values.assign(2000, 5);

    const KolmogorovResult r = learn_kolmogorov(s, 0.2, 2);
    REQUIRE(std::holds_alternative<SparseForm>(r.element));
    CHECK(std::get<SparseForm>(r.element).ell() == 0);
    CHECK(std::get<SparseForm>(r.element).ones == 5);
    CHECK(r.statistic == 0.0);
    CHECK(r.certified);

    std::vector<std::int64_t> counts(11, 0);
    counts[5] = 2000;
    const KolmogorovResult rc = learn_kolmogorov_counts(counts, 0.2, 2);
    CHECK(rc.statistic == r.statistic);
    CHECK(element_ones(rc.element) == 5);
}

TEST_CASE("learn_kolmogorov meets its distance bound on a binomial") {
    ProbVector target;
    target.probs.assign(12, 0.35);
    const Pmf truth = pbd_pmf(target);
    const auto counts = sample_pbd_counts(target, 20000, 99);

    const KolmogorovResult r = learn_kolmogorov_counts(counts, 0.2, 2);
    CHECK(r.statistic <= 0.1); // the acceptance condition itself
    CHECK(r.certified);
    const Pmf el = cover_element_pmf(r.element, 12);
    CHECK(kolmogorov_distance(el, truth) <= 0.2);
}

TEST_CASE("learn_kolmogorov rejects bad epsilon and reports a miss") {
    std::vector<std::int64_t> counts(7, 1);
    CHECK_THROWS_AS(learn_kolmogorov_counts(counts, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(learn_kolmogorov_counts(counts, 1.0, 2), std::invalid_argument);

    // A flat empirical CDF is nowhere within eps/2 = 0.005 of a shifted
    // binomial CDF, so the scan exhausts the cover.
    try {
        learn_kolmogorov_counts(counts, 0.01, 2);
        FAIL("expected NoAcceptingElement");
    } catch (const NoAcceptingElement& ex) {
        CHECK(ex.best_delta == -1.0); // no Delta stage in this learner
        CHECK(ex.best_h > 0.005);
        CHECK(ex.best_h <= 1.0);
    }
}

TEST_CASE("unimodal sample size") {
    CHECK(unimodal_sample_size(1000, 0.2) == 62296);
    CHECK_THROWS_AS(unimodal_sample_size(0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(unimodal_sample_size(5, 0.0), std::invalid_argument);
}

TEST_CASE("learn_unimodal isolates a heavy point") {
    SampleSet s;
    s.domain_max = 10;
    s.values.assign(500, 7);

    const HistogramHypothesis h = learn_unimodal(s, 0.2);
    REQUIRE(h.boundaries.size() >= 2);
    CHECK(h.boundaries.front() == 0);
    CHECK(h.boundaries.back() == 11);
    CHECK(std::is_sorted(h.boundaries.begin(), h.boundaries.end()));
    for (std::size_t i = 0; i + 1 < h.boundaries.size(); ++i)
        CHECK(h.boundaries[i] < h.boundaries[i + 1]);
    CHECK(h.sample_count == 500);
    CHECK(h.domain_max() == 10);
    CHECK(h.interval_count() ==
          static_cast<std::int64_t>(h.boundaries.size()) - 1);

    // The heavy point must sit alone in a width-1 interval holding all mass.
    bool found = false;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        if (h.counts[i] == 500) {
            CHECK(h.boundaries[i] == 7);
            CHECK(h.boundaries[i + 1] == 8);
            found = true;
        } else {
            CHECK(h.counts[i] == 0);
        }
    }
    CHECK(found);

    const Pmf flat = histogram_pmf(h);
    CHECK(flat.mass[7] == doctest::Approx(1.0));
    CHECK(tv_distance(flat, Pmf{{0, 0, 0, 0, 0, 0, 0, 1.0, 0, 0, 0}}) ==
          doctest::Approx(0.0));

    SampleSet empty;
    empty.domain_max = 3;
    CHECK_THROWS_AS(learn_unimodal(empty, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(learn_unimodal(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(learn_unimodal(s, 1.0), std::invalid_argument);
}

TEST_CASE("learn_unimodal approximates a binomial within epsilon") {
    ProbVector target;
    target.probs.assign(60, 0.3);
    const Pmf truth = pbd_pmf(target);
    const auto m = unimodal_sample_size(60, 0.3);

    SampleSet s;
    s.domain_max = 60;
    s.values = sample_pbd(target, m, 31337);

    const HistogramHypothesis h = learn_unimodal(s, 0.3);
    CHECK(h.sample_count == m);
    CHECK(h.boundaries.front() == 0);
    CHECK(h.boundaries.back() == 61);

    // Counts are exact recounts of the sample within each interval.
    const auto vc = value_counts(s);
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        std::int64_t c = 0;
        for (std::int64_t z = h.boundaries[i]; z < h.boundaries[i + 1]; ++z)
            c += vc[static_cast<std::size_t>(z)];
        CHECK(h.counts[i] == c);
    }

    double total = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) total += h.mass(i);
    CHECK(total == doctest::Approx(1.0));

    CHECK(tv_distance(histogram_pmf(h), truth) <= 0.15); // well under epsilon
}

TEST_CASE("histogram_sample is forced into the only loaded interval") {
    HistogramHypothesis h;
    h.boundaries = {0, 3, 4, 5};
    h.counts = {0, 100, 0};
    h.sample_count = 100;

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const HistogramDraw d = histogram_sample(h, seed);
        CHECK(d.value == 3);
        // ceil(log2 3) + 8 interval bits; the width-1 interval needs none.
        CHECK(d.bits_used == 10);
    }
    CHECK(histogram_sample_bit_cap(h) == 2 + 2 + 16);

    // Draws from one stream consume disjoint bit ranges.
    BitStream bits(12345);
    const auto d1 = histogram_sample(h, bits);
    const auto d2 = histogram_sample(h, bits);
    CHECK(bits.bits_consumed() == static_cast<std::uint64_t>(d1.bits_used + d2.bits_used));
}

TEST_CASE("histogram_sample uses exactly log2(width) bits on a dyadic interval") {
    HistogramHypothesis h;
    h.boundaries = {0, 8};
    h.counts = {64};
    h.sample_count = 64;

    std::map<std::int64_t, int> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const HistogramDraw d = histogram_sample(h, seed);
        CHECK(d.bits_used == 3);
        CHECK(d.value >= 0);
        CHECK(d.value < 8);
        ++seen[d.value];
    }
    CHECK(seen.size() == 8); // every value reachable
    CHECK(histogram_sample(h, 77).value == histogram_sample(h, 77).value);

    HistogramHypothesis unit;
    unit.boundaries = {0, 1};
    unit.counts = {5};
    unit.sample_count = 5;
    const HistogramDraw d = histogram_sample(unit, 9);
    CHECK(d.value == 0);
    CHECK(d.bits_used == 0); // one interval, width one: nothing to decide
}

TEST_CASE("histogram_sample stays near-uniform on a non-dyadic width") {
    HistogramHypothesis h;
    h.boundaries = {0, 5};
    h.counts = {10};
    h.sample_count = 10;

    const int trials = 20000;
    std::vector<int> freq(5, 0);
    for (int t = 0; t < trials; ++t) {
        const HistogramDraw d = histogram_sample(h, static_cast<std::uint64_t>(t));
        CHECK(d.bits_used == 11); // ceil(log2 5) + 8 point bits
        ++freq[static_cast<std::size_t>(d.value)];
    }
    for (int f : freq) {
        // 0.2 +- (4 sigma + multiply-shift quantization)
        CHECK(static_cast<double>(f) / trials == doctest::Approx(0.2).epsilon(0.09));
    }
    CHECK(histogram_sample_bit_cap(h) >= 11);
}

TEST_CASE("histogram_sample splits intervals by their counts") {
    HistogramHypothesis h;
    h.boundaries = {0, 3, 7};
    h.counts = {75, 25};
    h.sample_count = 100;

    const int trials = 40000;
    int low = 0;
    for (int t = 0; t < trials; ++t) {
        const HistogramDraw d = histogram_sample(h, static_cast<std::uint64_t>(t));
        CHECK(d.value >= 0);
        CHECK(d.value < 7);
        // 9 interval bits, then 10 point bits on [0,3) or 2 on [3,7)
        CHECK((d.bits_used == 19 || d.bits_used == 11));
        if (d.value < 3) ++low;
        CHECK(d.bits_used <= histogram_sample_bit_cap(h));
    }
    CHECK(static_cast<double>(low) / trials == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("kolmogorov tv gap report") {
    HeavyBinomialForm x;
    x.k = 5;
    x.ell = 100;
    x.q_num = 255;
    x.q_den = 510;
    x.ones = 0;
    HeavyBinomialForm y = x;
    y.ones = 1;

    const GapReport same = kolmogorov_tv_gap_check(x, x, 102);
    CHECK(same.d_tv == 0.0);
    CHECK(same.d_k == 0.0);
    CHECK(same.residual == 0.0);
    CHECK(same.half_bound_ok);

    // Shifting Bin(100, 1/2) by one: both distances equal the mode mass, so
    // the residual is exactly -d_k.
    const GapReport r = kolmogorov_tv_gap_check(x, y, 102);
    CHECK(r.d_tv == doctest::Approx(r.d_k));
    CHECK(r.d_k == doctest::Approx(binomial_pmf(100, 0.5).mass[50]));
    CHECK(r.residual == doctest::Approx(-r.d_k));
    CHECK(r.half_bound_ok);

    HeavyBinomialForm other_k = y;
    other_k.k = 4;
    CHECK_THROWS_AS(kolmogorov_tv_gap_check(x, other_k, 102), std::invalid_argument);
}

} // TEST_SUITE
