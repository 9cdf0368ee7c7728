#include "pbdl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace pbdl {

double TvLearnerConfig::eps_beta() const { return std::pow(epsilon, beta()); }
double TvLearnerConfig::eps_alpha() const { return std::pow(epsilon, alpha()); }

CoverConfig TvLearnerConfig::cover_config(std::int64_t n) const {
    CoverConfig cc;
    cc.n = n;
    cc.epsilon = eps_beta();
    cc.k_override = k_override;
    cc.sparse_ell_cap = sparse_ell_cap;
    cc.heavy_q_stride_cap = heavy_q_stride_cap;
    cc.element_cap = element_cap;
    return cc;
}

NoAcceptingElement::NoAcceptingElement(double bd, double bh)
    : std::runtime_error("no cover element passed its test (best delta " +
                         std::to_string(bd) + ", best H " + std::to_string(bh) + ")"),
      best_delta(bd),
      best_h(bh) {}

namespace {

double empirical_mass_at(const EmpiricalCdf& e, std::int64_t z) {
    const std::int64_t lo = z > 0 ? e.cum_counts[static_cast<std::size_t>(z - 1)] : 0;
    const std::int64_t hi = e.cum_counts[static_cast<std::size_t>(z)];
    return static_cast<double>(hi - lo) / static_cast<double>(e.sample_count);
}

} // namespace

double delta_statistic(const SparseForm& y, const EmpiricalCdf& e, std::int64_t n) {
    const std::int64_t lo = y.ones;
    const std::int64_t hi = y.ones + y.ell();
    if (lo < 0 || hi > n)
        throw std::invalid_argument("delta_statistic: form does not fit the domain");
    Pmf fy;
    if (y.grid.empty()) {
        fy.mass = {1.0}; // empty product: all mass at zero successes
    } else {
        std::vector<double> probs(y.grid.size());
        for (std::size_t i = 0; i < y.grid.size(); ++i) probs[i] = y.prob(i);
        fy = pbd_pmf(ProbVector{probs});
    }
    double abs_gap = 0.0, supp_mass = 0.0;
    for (std::int64_t z = lo; z <= hi; ++z) {
        const double fhat = empirical_mass_at(e, z);
        abs_gap += std::abs(fy.mass[static_cast<std::size_t>(z - lo)] - fhat);
        supp_mass += fhat;
    }
    return 0.5 * (abs_gap + 1.0 - supp_mass);
}

double h_statistic(const HeavyBinomialForm& y, const EmpiricalCdf& e, std::int64_t n) {
    if (y.ones + y.ell > n)
        throw std::invalid_argument("h_statistic: form does not fit the domain");
    const Pmf fy = cover_element_pmf(CoverElement{y}, n);
    double cum = 0.0, worst = 0.0;
    for (std::int64_t z = 0; z <= n; ++z) {
        cum += fy.mass[static_cast<std::size_t>(z)];
        worst = std::max(worst, std::abs(cum - e.cum(z)));
    }
    return worst;
}

double delta_threshold(const TvLearnerConfig& cfg, std::int64_t ell) {
    const double base =
        cfg.thresholds.delta_base >= 0.0 ? cfg.thresholds.delta_base : cfg.eps_beta();
    const double per = cfg.thresholds.delta_per_support >= 0.0
                           ? cfg.thresholds.delta_per_support
                           : 2.0 * cfg.eps_alpha();
    return base + static_cast<double>(ell + 1) * per;
}

double h_threshold(const TvLearnerConfig& cfg) {
    return cfg.thresholds.h >= 0.0 ? cfg.thresholds.h
                                   : 2.0 * cfg.eps_beta() + cfg.eps_alpha();
}

bool delta_test(const SparseForm& y, const EmpiricalCdf& e, std::int64_t n,
                const TvLearnerConfig& cfg) {
    return delta_statistic(y, e, n) <= delta_threshold(cfg, y.ell());
}

bool h_test(const HeavyBinomialForm& y, const EmpiricalCdf& e, std::int64_t n,
            const TvLearnerConfig& cfg) {
    return h_statistic(y, e, n) <= h_threshold(cfg);
}

std::int64_t tv_sample_size(const TvLearnerConfig& cfg) {
    return dkw_sample_size(cfg.eps_alpha(), 0.05);
}

namespace {

struct ScanHit {
    std::size_t index;
    double statistic;
    double threshold;
};

// First index whose statistic clears its threshold, scanning chunks in
// parallel.  stat(i) must be pure.  best_out tracks the minimum statistic
// over everything evaluated before (and including) the hit's chunk.
template <typename StatFn, typename ThrFn>
std::optional<ScanHit> first_accepting(std::size_t count, Exec exec, StatFn&& stat,
                                       ThrFn&& thr, double& best_out) {
    std::optional<ScanHit> hit;
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < count; ++i) {
            const double s = stat(i);
            best_out = std::min(best_out, s);
            const double t = thr(i);
            if (s <= t) return ScanHit{i, s, t};
        }
        return std::nullopt;
    }
    constexpr std::size_t kChunk = 128;
    std::vector<double> stats(kChunk);
    for (std::size_t base = 0; base < count; base += kChunk) {
        const std::size_t end = std::min(count, base + kChunk);
#pragma omp parallel for schedule(dynamic, 4)
        for (std::size_t i = base; i < end; ++i) stats[i - base] = stat(i);
        for (std::size_t i = base; i < end; ++i) {
            const double s = stats[i - base];
            best_out = std::min(best_out, s);
            const double t = thr(i);
            if (s <= t && !hit) hit = ScanHit{i, s, t};
        }
        if (hit) return hit;
    }
    return std::nullopt;
}

} // namespace

TvHypothesis learn_tv(const SampleSet& samples, const TvLearnerConfig& cfg, Exec exec) {
    return learn_tv_counts(value_counts(samples), cfg, exec);
}

TvHypothesis learn_tv_counts(const std::vector<std::int64_t>& counts,
                             const TvLearnerConfig& cfg, Exec exec) {
    const auto n = static_cast<std::int64_t>(counts.size()) - 1;
    const CoverBuildResult cover = build_cover(cfg.cover_config(n), exec);
    const EmpiricalCdf e = empirical_cdf_from_counts(counts, 0.05);

    // Sparse forms precede heavy ones in cover order, which gives the
    // required all-sparse-first test schedule in a single scan.
    std::size_t sparse_count = 0;
    std::int64_t max_sparse_support = 0;
    for (const auto& el : cover.elements) {
        if (!std::holds_alternative<SparseForm>(el)) break;
        ++sparse_count;
        max_sparse_support =
            std::max(max_sparse_support, std::get<SparseForm>(el).ell() + 1);
    }

    const bool condition1 =
        cfg.epsilon > cfg.eps_beta() + 4.0 * static_cast<double>(max_sparse_support) *
                                           cfg.eps_alpha();
    const bool certified =
        cover.certified && condition1 && !cfg.thresholds.any_override();

    double best_delta = std::numeric_limits<double>::infinity();
    auto sparse_hit = first_accepting(
        sparse_count, exec,
        [&](std::size_t i) {
            return delta_statistic(std::get<SparseForm>(cover.elements[i]), e, n);
        },
        [&](std::size_t i) {
            return delta_threshold(cfg, std::get<SparseForm>(cover.elements[i]).ell());
        },
        best_delta);
    if (sparse_hit) {
        return TvHypothesis{cover.elements[sparse_hit->index], sparse_hit->statistic,
                            sparse_hit->threshold, true, certified};
    }

    const std::size_t heavy_count = cover.elements.size() - sparse_count;
    double best_h = std::numeric_limits<double>::infinity();
    auto heavy_hit = first_accepting(
        heavy_count, exec,
        [&](std::size_t i) {
            return h_statistic(
                std::get<HeavyBinomialForm>(cover.elements[sparse_count + i]), e, n);
        },
        [&](std::size_t) { return h_threshold(cfg); }, best_h);
    if (heavy_hit) {
        return TvHypothesis{cover.elements[sparse_count + heavy_hit->index],
                            heavy_hit->statistic, heavy_hit->threshold, false,
                            certified};
    }
    throw NoAcceptingElement(best_delta, best_h);
}

std::int64_t kolmogorov_sample_size(double epsilon, double delta) {
    if (epsilon <= 0.0 || delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("kolmogorov_sample_size: bad arguments");
    const double numer = std::max(9216.0, 18.0 * std::log(1.0 / delta));
    return static_cast<std::int64_t>(std::ceil(numer / (epsilon * epsilon)));
}

KolmogorovResult learn_kolmogorov(const SampleSet& samples, double epsilon,
                                  std::int64_t k_override, Exec exec) {
    return learn_kolmogorov_counts(value_counts(samples), epsilon, k_override, exec);
}

KolmogorovResult learn_kolmogorov_counts(const std::vector<std::int64_t>& counts,
                                         double epsilon, std::int64_t k_override,
                                         Exec exec) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("learn_kolmogorov: epsilon must be in (0,1)");
    const auto n = static_cast<std::int64_t>(counts.size()) - 1;
    CoverConfig cc;
    cc.n = n;
    cc.epsilon = epsilon / 8.0;
    cc.k_override = k_override;
    const CoverBuildResult cover = build_cover(cc, exec);
    const EmpiricalCdf e = empirical_cdf_from_counts(counts, 0.05);

    auto gap = [&](std::size_t i) {
        const Pmf& fy = cover.pmfs[i];
        double cum = 0.0, worst = 0.0;
        for (std::int64_t z = 0; z <= n; ++z) {
            cum += fy.mass[static_cast<std::size_t>(z)];
            worst = std::max(worst, std::abs(cum - e.cum(z)));
        }
        return worst;
    };

    double best_gap = std::numeric_limits<double>::infinity();
    auto hit = first_accepting(
        cover.elements.size(), exec, gap, [&](std::size_t) { return epsilon / 2.0; },
        best_gap);
    if (!hit) throw NoAcceptingElement(-1.0, best_gap);
    return KolmogorovResult{cover.elements[hit->index], hit->statistic,
                            cover.certified};
}

std::int64_t unimodal_sample_size(std::int64_t n, double epsilon) {
    if (n < 1 || epsilon <= 0.0)
        throw std::invalid_argument("unimodal_sample_size: bad arguments");
    const double bits = std::log2(static_cast<double>(n) + 1.0);
    return static_cast<std::int64_t>(
        std::ceil(50.0 * bits / (epsilon * epsilon * epsilon)));
}

namespace {

// Geometric sub-bucket widths 1, ~(1+eps), ~(1+eps)^2, ... growing away from
// the lighter end of [a, b), clamped to fit.
std::vector<std::int64_t> geometric_widths(std::int64_t length, double epsilon) {
    std::vector<std::int64_t> widths;
    double target = 1.0;
    std::int64_t remaining = length;
    while (remaining > 0) {
        auto w = static_cast<std::int64_t>(std::llround(target));
        w = std::max<std::int64_t>(1, std::min(w, remaining));
        widths.push_back(w);
        remaining -= w;
        target *= 1.0 + epsilon;
    }
    return widths;
}

} // namespace

HistogramHypothesis learn_unimodal(const SampleSet& samples, double epsilon) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("learn_unimodal: epsilon must be in (0,1)");
    const std::int64_t n = samples.domain_max;
    const auto counts = value_counts(samples);
    const auto total = static_cast<std::int64_t>(samples.values.size());
    if (total <= 0) throw std::invalid_argument("learn_unimodal: no samples");
    const double cap = static_cast<double>(total) * epsilon / 10.0;

    std::vector<std::int64_t> prefix(static_cast<std::size_t>(n) + 2, 0);
    for (std::int64_t z = 0; z <= n; ++z)
        prefix[static_cast<std::size_t>(z) + 1] =
            prefix[static_cast<std::size_t>(z)] + counts[static_cast<std::size_t>(z)];
    auto range_count = [&](std::int64_t a, std::int64_t b) { // [a, b)
        return prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a)];
    };

    // Greedy maximal intervals of empirical mass <= eps/10; a single point
    // heavier than that stands alone.
    std::vector<std::pair<std::int64_t, std::int64_t>> coarse;
    std::int64_t start = 0;
    double acc = 0.0;
    for (std::int64_t z = 0; z <= n; ++z) {
        const auto c = static_cast<double>(counts[static_cast<std::size_t>(z)]);
        if (acc + c > cap && z > start) {
            coarse.emplace_back(start, z);
            start = z;
            acc = c;
        } else {
            acc += c;
        }
    }
    coarse.emplace_back(start, n + 1);

    // Refine each interval geometrically from its lighter half so the fine
    // buckets sit where a unimodal density can change fastest.
    std::vector<std::int64_t> boundaries{0};
    for (const auto& [a, b] : coarse) {
        const std::int64_t len = b - a;
        if (len == 1) {
            boundaries.push_back(b);
            continue;
        }
        const std::int64_t mid = a + len / 2;
        const bool left_lighter = range_count(a, mid) <= range_count(mid, b);
        auto widths = geometric_widths(len, epsilon);
        if (!left_lighter) std::reverse(widths.begin(), widths.end());
        std::int64_t edge = a;
        for (std::int64_t w : widths) {
            edge += w;
            boundaries.push_back(edge);
        }
    }

    HistogramHypothesis h;
    h.boundaries = std::move(boundaries);
    h.sample_count = total;
    h.counts.reserve(h.boundaries.size() - 1);
    for (std::size_t i = 0; i + 1 < h.boundaries.size(); ++i)
        h.counts.push_back(range_count(h.boundaries[i], h.boundaries[i + 1]));
    return h;
}

Pmf histogram_pmf(const HistogramHypothesis& h) {
    Pmf p;
    p.mass.assign(static_cast<std::size_t>(h.domain_max()) + 1, 0.0);
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const std::int64_t a = h.boundaries[i], b = h.boundaries[i + 1];
        const double per = static_cast<double>(h.counts[i]) /
                           (static_cast<double>(h.sample_count) *
                            static_cast<double>(b - a));
        for (std::int64_t z = a; z < b; ++z) p.mass[static_cast<std::size_t>(z)] = per;
    }
    return p;
}

namespace {

int ceil_log2(std::int64_t v) {
    int b = 0;
    while ((std::int64_t{1} << b) < v) ++b;
    return b;
}

} // namespace

std::int64_t histogram_sample_bit_cap(const HistogramHypothesis& h) {
    const auto m = static_cast<std::int64_t>(h.counts.size());
    std::int64_t maxw = 1;
    for (std::size_t i = 0; i + 1 < h.boundaries.size(); ++i)
        maxw = std::max(maxw, h.boundaries[i + 1] - h.boundaries[i]);
    return ceil_log2(m) + ceil_log2(maxw) + 16;
}

HistogramDraw histogram_sample(const HistogramHypothesis& h, BitStream& bits) {
    const auto m = static_cast<std::int64_t>(h.counts.size());
    const auto before = static_cast<std::int64_t>(bits.bits_consumed());

    // Interval stage: u1 / 2^b1 plays the uniform variate; smallest i with
    // u1 * K < cum_i * 2^b1 inverts the CDF without any floating point.
    std::size_t interval = 0;
    if (m > 1) {
        const int b1 = ceil_log2(m) + 8;
        const std::uint64_t u1 = bits.take_bits(b1);
        const auto lhs = static_cast<unsigned __int128>(u1) *
                         static_cast<unsigned __int128>(h.sample_count);
        std::int64_t cum = 0;
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            cum += h.counts[i];
            const auto rhs = static_cast<unsigned __int128>(cum) << b1;
            if (lhs < rhs) {
                interval = i;
                break;
            }
            interval = i; // u1 at the very top lands in the last interval
        }
    }

    // Point stage: exact for power-of-two widths, multiply-shift otherwise.
    const std::int64_t a = h.boundaries[interval];
    const std::int64_t w = h.boundaries[interval + 1] - a;
    std::int64_t offset = 0;
    if (w > 1) {
        const int lg = ceil_log2(w);
        if ((std::int64_t{1} << lg) == w) {
            offset = static_cast<std::int64_t>(bits.take_bits(lg));
        } else {
            const int b2 = lg + 8;
            const std::uint64_t u2 = bits.take_bits(b2);
            offset = static_cast<std::int64_t>(
                (static_cast<unsigned __int128>(u2) *
                 static_cast<unsigned __int128>(w)) >>
                b2);
        }
    }
    return HistogramDraw{a + offset,
                         static_cast<std::int64_t>(bits.bits_consumed()) - before};
}

HistogramDraw histogram_sample(const HistogramHypothesis& h, std::uint64_t seed) {
    BitStream bits(seed);
    return histogram_sample(h, bits);
}

GapReport kolmogorov_tv_gap_check(const HeavyBinomialForm& x,
                                  const HeavyBinomialForm& y, std::int64_t n) {
    if (x.k != y.k)
        throw std::invalid_argument("kolmogorov_tv_gap_check: forms must share k");
    const Pmf px = cover_element_pmf(CoverElement{x}, n);
    const Pmf py = cover_element_pmf(CoverElement{y}, n);
    GapReport r;
    r.d_tv = tv_distance(px, py);
    r.d_k = kolmogorov_distance(px, py);
    r.residual = r.d_tv - 2.0 * r.d_k;
    r.half_bound_ok = 0.5 * r.d_k <= r.d_tv + 1e-15;
    return r;
}

} // namespace pbdl
