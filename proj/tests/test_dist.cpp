#include <doctest.h>

#include <pbdl/dist.hpp>
#include <pbdl/poisson.hpp>
#include <pbdl/rng.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

using namespace pbdl;

namespace {

ProbVector random_probs(Rng& rng, std::size_t n) {
    ProbVector p;
    p.probs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) p.probs.push_back(rng.next_unit());
    return p;
}

double max_abs_diff(const Pmf& a, const Pmf& b) {
    REQUIRE(a.mass.size() == b.mass.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.mass.size(); ++i)
        m = std::max(m, std::fabs(a.mass[i] - b.mass[i]));
    return m;
}

} // namespace

TEST_SUITE("dist") {

TEST_CASE("pbd_pmf on tiny prob vectors") {
    Pmf one = pbd_pmf(ProbVector{{0.5}});
    CHECK(one.mass == std::vector<double>{0.5, 0.5});

    Pmf two = pbd_pmf(ProbVector{{0.5, 0.5}});
    REQUIRE(two.mass.size() == 3);
    CHECK(two.mass[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(two.mass[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.mass[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("brute force oracle on tiny prob vectors") {
    Pmf det = brute_force_pbd_pmf(ProbVector{{1.0, 0.0}});
    CHECK(det.mass == std::vector<double>{0.0, 1.0, 0.0});

    Pmf f = brute_force_pbd_pmf(ProbVector{{0.5, 0.5, 0.5}});
    REQUIRE(f.mass.size() == 4);
    CHECK(f.mass[0] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(f.mass[1] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(f.mass[2] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(f.mass[3] == doctest::Approx(0.125).epsilon(1e-12));

    ProbVector big;
    big.probs.assign(26, 0.5);
    CHECK_THROWS_AS(brute_force_pbd_pmf(big), std::invalid_argument);
}

TEST_CASE("pbd_pmf matches the 2^n oracle on random inputs") {
    Rng rng(substream_seed(11, 1));
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng.next_below(12);
        const ProbVector p = random_probs(rng, n);
        CHECK(max_abs_diff(pbd_pmf(p), brute_force_pbd_pmf(p)) <= 1e-12);
    }
}

TEST_CASE("pbd_pmf output is a unimodal pmf") {
    Rng rng(substream_seed(11, 2));
    for (int t = 0; t < 200; ++t) {
        const ProbVector p = random_probs(rng, 1 + rng.next_below(40));
        const Pmf f = pbd_pmf(p);
        validate(f);
        CHECK(is_unimodal(f));
    }
    CHECK_FALSE(is_unimodal(Pmf{{0.4, 0.1, 0.4, 0.1}}));
    CHECK(is_unimodal(Pmf{{0.25, 0.25, 0.25, 0.25}}));
}

TEST_CASE("binomial_pmf agrees with pbd_pmf and handles degenerate q") {
    Pmf b = binomial_pmf(2, 0.5);
    CHECK(max_abs_diff(b, pbd_pmf(ProbVector{{0.5, 0.5}})) <= 1e-12);

    Pmf zero = binomial_pmf(5, 0.0);
    CHECK(zero.mass.front() == 1.0);
    CHECK(zero.mass.back() == 0.0);
    Pmf ones = binomial_pmf(5, 1.0);
    CHECK(ones.mass.back() == 1.0);

    ProbVector p;
    p.probs.assign(12, 0.3);
    CHECK(max_abs_diff(binomial_pmf(12, 0.3), pbd_pmf(p)) <= 1e-12);

    validate(binomial_pmf(5000, 0.3), 1e-9);
    CHECK_THROWS_AS(binomial_pmf(-1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(binomial_pmf(3, 1.5), std::invalid_argument);
}

TEST_CASE("tv_distance basics") {
    Pmf a{{0.5, 0.5}};
    CHECK(tv_distance(a, a) == 0.0);

    Pmf lo{{1.0, 0.0, 0.0}};
    Pmf hi{{0.0, 0.0, 1.0}};
    CHECK(tv_distance(lo, hi) == 1.0);

    Pmf b5{{0.5, 0.5}};
    Pmf b7{{0.3, 0.7}};
    CHECK(tv_distance(b5, b7) == doctest::Approx(0.2).epsilon(1e-12));

    // domains pad with zero mass
    Pmf padded{{0.5, 0.5, 0.0, 0.0}};
    CHECK(tv_distance(b5, padded) == 0.0);
}

TEST_CASE("kolmogorov_distance basics and the tv sandwich") {
    Pmf b5{{0.5, 0.5}};
    Pmf b7{{0.3, 0.7}};
    CHECK(kolmogorov_distance(b5, b7) == doctest::Approx(0.2).epsilon(1e-12));

    Rng rng(substream_seed(11, 3));
    for (int t = 0; t < 1000; ++t) {
        const Pmf a = pbd_pmf(random_probs(rng, 1 + rng.next_below(20)));
        const Pmf b = pbd_pmf(random_probs(rng, 1 + rng.next_below(20)));
        const double dk = kolmogorov_distance(a, b);
        const double dtv = tv_distance(a, b);
        CHECK(dk <= dtv + 1e-15);
        CHECK(dk <= 2.0 * dtv + 1e-15);
    }
}

TEST_CASE("tv_distance is a metric on random triples") {
    Rng rng(substream_seed(11, 4));
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.next_below(15);
        const Pmf a = pbd_pmf(random_probs(rng, n));
        const Pmf b = pbd_pmf(random_probs(rng, n));
        const Pmf c = pbd_pmf(random_probs(rng, n));
        CHECK(tv_distance(a, b) == tv_distance(b, a));
        CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12);
    }
}

TEST_CASE("pmf/cdf round trips") {
    Rng rng(substream_seed(11, 5));
    for (int t = 0; t < 100; ++t) {
        const Pmf f = pbd_pmf(random_probs(rng, 1 + rng.next_below(25)));
        const Cdf c = pmf_to_cdf(f);
        CHECK(c.cum.back() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(max_abs_diff(cdf_to_pmf(c), f) <= 1e-12);
    }
    CHECK_THROWS_AS(cdf_to_pmf(Cdf{}), std::invalid_argument);
}

TEST_CASE("kolmogorov_distance_cdf pads short domains with their last value") {
    const Cdf a = pmf_to_cdf(Pmf{{1.0}});           // point mass at 0, domain {0}
    const Cdf b = pmf_to_cdf(Pmf{{1.0, 0.0, 0.0}}); // same mass, domain {0,1,2}
    CHECK(kolmogorov_distance_cdf(a, b) == 0.0);

    const Cdf c = pmf_to_cdf(Pmf{{0.0, 0.0, 1.0}});
    CHECK(kolmogorov_distance_cdf(a, c) == 1.0);
}

TEST_CASE("validate rejects malformed inputs") {
    CHECK_THROWS_AS(validate(ProbVector{}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProbVector{{0.5, -0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProbVector{{1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProbVector{{std::nan("")}}), std::invalid_argument);

    CHECK_THROWS_AS(validate(Pmf{}), std::invalid_argument);
    CHECK_THROWS_AS(validate(Pmf{{0.5, 0.6}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(Pmf{{1.2, -0.2}}), std::invalid_argument);
    validate(Pmf{{0.25, 0.75}});
}

TEST_CASE("sampling determinism and substream independence") {
    Rng rng(substream_seed(11, 6));
    const ProbVector p = random_probs(rng, 10);

    const auto a = sample_pbd(p, 50, 42);
    const auto b = sample_pbd(p, 50, 42);
    CHECK(a == b);

    // draw j only touches substream (seed, offset + j)
    const auto tail = sample_pbd(p, 30, 42, 20);
    for (int j = 0; j < 30; ++j) CHECK(tail[j] == a[j + 20]);
    for (int j = 0; j < 50; ++j) CHECK(sample_pbd_one(p, 42, j) == a[j]);

    const auto other = sample_pbd(p, 50, 43);
    CHECK(other != a);
}

TEST_CASE("deterministic prob vectors sample deterministically") {
    ProbVector all1;
    all1.probs.assign(3, 1.0);
    for (auto v : sample_pbd(all1, 20, 7)) CHECK(v == 3);
    ProbVector all0;
    all0.probs.assign(3, 0.0);
    for (auto v : sample_pbd(all0, 20, 7)) CHECK(v == 0);
}

TEST_CASE("sample_pbd_counts equals bucketed sample_pbd") {
    Rng rng(substream_seed(11, 7));
    const ProbVector p = random_probs(rng, 12);
    const auto values = sample_pbd(p, 2000, 99);
    const auto counts = sample_pbd_counts(p, 2000, 99);
    REQUIRE(counts.size() == 13);
    std::vector<std::int64_t> bucketed(13, 0);
    for (auto v : values) ++bucketed[static_cast<std::size_t>(v)];
    CHECK(counts == bucketed);
}

TEST_CASE("threshold bernoulli reproduces float bernoulli bit for bit") {
    Rng pick(substream_seed(11, 8));
    for (int t = 0; t < 50; ++t) {
        const double p = pick.next_unit();
        const std::uint64_t thr = bernoulli_threshold(p);
        Rng a(substream_seed(11, 9, t)), b(substream_seed(11, 9, t));
        for (int i = 0; i < 2000; ++i)
            CHECK(a.next_bernoulli(p) == b.next_bernoulli_threshold(thr));
    }
    CHECK(bernoulli_threshold(0.0) == 0);
    CHECK(bernoulli_threshold(1.0) == (std::uint64_t{1} << 53));
}

TEST_CASE("sample mean concentrates") {
    ProbVector p;
    p.probs.assign(100, 0.5);
    const auto counts = sample_pbd_counts(p, 100000, 5);
    double mean = 0.0;
    for (std::size_t v = 0; v < counts.size(); ++v)
        mean += static_cast<double>(v) * static_cast<double>(counts[v]);
    mean /= 1e5;
    // sd of the mean is 5/sqrt(1e5) ~ 0.0158; allow 3 sigma
    CHECK(std::fabs(mean - 50.0) < 0.0475);
}

TEST_CASE("sample_pmf hits the right buckets") {
    Pmf point{{0.0, 0.0, 0.0, 0.0, 0.0, 1.0}};
    for (auto v : sample_pmf(point, 100, 3)) CHECK(v == 5);

    const auto a = sample_pmf(Pmf{{0.25, 0.5, 0.25}}, 64, 17);
    const auto b = sample_pmf(Pmf{{0.25, 0.5, 0.25}}, 64, 17);
    CHECK(a == b);

    std::vector<std::int64_t> freq(3, 0);
    for (auto v : sample_pmf(Pmf{{0.25, 0.5, 0.25}}, 40000, 23)) ++freq[v];
    CHECK(std::fabs(freq[0] / 4e4 - 0.25) < 0.01);
    CHECK(std::fabs(freq[1] / 4e4 - 0.50) < 0.01);
}

TEST_CASE("translated poisson parameter mapping") {
    TranslatedPoissonParams a{5.0, 5.0};
    CHECK(a.shift() == 0);
    CHECK(a.lambda() == doctest::Approx(5.0).epsilon(1e-12));

    TranslatedPoissonParams b{10.0, 4.0};
    CHECK(b.shift() == 6);
    CHECK(b.lambda() == doctest::Approx(4.0).epsilon(1e-12));

    TranslatedPoissonParams c{5.25, 4.5};
    CHECK(c.shift() == 0); // floor(0.75)
    CHECK(c.lambda() == doctest::Approx(4.5 + 0.75).epsilon(1e-12));
}

TEST_CASE("translated poisson equals shifted poisson at integer offsets") {
    const auto tp = translated_poisson_pmf(TranslatedPoissonParams{5.0, 5.0}, 60);
    const auto po = shifted_poisson_pmf(0, 5.0, 60);
    CHECK(max_abs_diff(tp.pmf, po.pmf) == 0.0);

    const auto tp2 = translated_poisson_pmf(TranslatedPoissonParams{10.0, 4.0}, 80);
    const auto po2 = shifted_poisson_pmf(6, 4.0, 80);
    CHECK(max_abs_diff(tp2.pmf, po2.pmf) == 0.0);
}

TEST_CASE("translated poisson approximates a binomial") {
    ProbVector p;
    p.probs.assign(400, 0.5);
    const auto tp = translated_poisson_pmf(TranslatedPoissonParams{200.0, 100.0}, 400);
    // measured 0.0126; the sqrt(q/m)-scale bound for this pair
    CHECK(tv_distance(pbd_pmf(p), tp.pmf) <= 0.02);
}

TEST_CASE("poisson truncation accounting") {
    CHECK_THROWS_AS(shifted_poisson_pmf(0, 25.0, 5), std::domain_error);

    // shift -3 pushes P(Poisson(1) < 3) below zero; admit it via tail_tol
    const auto cut = shifted_poisson_pmf(-3, 1.0, 10, 1.0);
    CHECK(cut.below_zero_mass > 0.9);
    CHECK(cut.lost_mass >= cut.below_zero_mass);
    CHECK_THROWS_AS(shifted_poisson_pmf(-3, 1.0, 10), std::domain_error);

    const auto ok = shifted_poisson_pmf(2, 3.0, 40);
    CHECK(ok.lost_mass <= 1e-9);
    double s = 0.0;
    for (double v : ok.pmf.mass) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
}

} // TEST_SUITE("dist")
