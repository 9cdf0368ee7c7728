#include "pbdl/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pbdl/rng.hpp"

namespace pbdl {

CompetitionResult competition_counts(const Pmf& a, const Pmf& b,
                                     const std::vector<std::int64_t>& counts,
                                     std::int64_t total, double delta) {
    if (total <= 0) throw std::invalid_argument("competition: no samples");
    if (delta <= 0.0) throw std::invalid_argument("competition: delta must be positive");
    const std::size_t domain =
        std::max({a.mass.size(), b.mass.size(), counts.size()});
    double p1 = 0.0, q1 = 0.0;
    std::int64_t in_w1 = 0;
    for (std::size_t w = 0; w < domain; ++w) {
        const double pa = w < a.mass.size() ? a.mass[w] : 0.0;
        const double pb = w < b.mass.size() ? b.mass[w] : 0.0;
        if (pa >= pb) { // ties belong to W1
            p1 += pa;
            q1 += pb;
            if (w < counts.size()) in_w1 += counts[w];
        }
    }
    CompetitionResult r;
    r.p1 = p1;
    r.q1 = q1;
    r.t_stat = static_cast<double>(in_w1) / static_cast<double>(total);
    if (p1 - q1 <= 5.0 * delta) {
        r.outcome = Outcome::Draw; // candidates too close for the sample to split
    } else if (r.t_stat > p1 - 1.5 * delta) {
        r.outcome = Outcome::WinFirst;
    } else if (r.t_stat < q1 + 1.5 * delta) {
        r.outcome = Outcome::WinSecond;
    } else {
        r.outcome = Outcome::Draw;
    }
    return r;
}

CompetitionResult competition(const Pmf& a, const Pmf& b, const SampleSet& samples,
                              double delta) {
    const auto counts = value_counts(samples);
    return competition_counts(a, b, counts,
                              static_cast<std::int64_t>(samples.values.size()), delta);
}

namespace {

// Does candidate i lose against j on this sample?
bool loses_to(const std::vector<Pmf>& cands,
              const std::vector<std::int64_t>& counts, std::int64_t total,
              double delta, std::size_t i, std::size_t j) {
    const CompetitionResult r =
        competition_counts(cands[i], cands[j], counts, total, delta);
    return r.outcome == Outcome::WinSecond;
}

std::optional<std::size_t> tournament_counts(const std::vector<Pmf>& cands,
                                             const std::vector<std::int64_t>& counts,
                                             std::int64_t total, double delta,
                                             Exec exec) {
    const std::size_t n = cands.size();
    if (n == 0) throw std::invalid_argument("tournament: no candidates");
    if (n == 1) return std::size_t{0};
    for (std::size_t i = 0; i < n; ++i) {
        bool lost = false;
        if (exec == Exec::Serial) {
            for (std::size_t j = 0; j < n && !lost; ++j) {
                if (j == i) continue;
                if (loses_to(cands, counts, total, delta, i, j)) lost = true;
            }
        } else {
            // Chunked so a loss stops the row early; the predicate is pure,
            // so parallel evaluation cannot change the answer.
            constexpr std::size_t kChunk = 256;
            for (std::size_t base = 0; base < n && !lost; base += kChunk) {
                const std::size_t end = std::min(n, base + kChunk);
                bool chunk_lost = false;
#pragma omp parallel for schedule(static) reduction(|| : chunk_lost)
                for (std::size_t j = base; j < end; ++j) {
                    if (j == i || chunk_lost) continue;
                    if (loses_to(cands, counts, total, delta, i, j)) chunk_lost = true;
                }
                lost = chunk_lost;
            }
        }
        if (!lost) return i;
    }
    return std::nullopt;
}

} // namespace

std::optional<std::size_t> tournament(const std::vector<Pmf>& candidates,
                                      const SampleSet& samples, double delta,
                                      Exec exec) {
    const auto counts = value_counts(samples);
    return tournament_counts(candidates, counts,
                             static_cast<std::int64_t>(samples.values.size()), delta,
                             exec);
}

std::optional<std::size_t> tournament(const std::vector<Pmf>& candidates,
                                      const SampleSet& samples,
                                      const TournamentConfig& config, Exec exec) {
    const auto total = static_cast<std::int64_t>(samples.values.size());
    if (config.sample_count < 0 || config.sample_count >= total) {
        return tournament(candidates, samples, config.delta, exec);
    }
    // Partial Fisher-Yates over a copy picks sample_count values without
    // replacement, deterministically in (rng_seed, position).
    std::vector<std::int64_t> vals = samples.values;
    Rng rng(substream_seed(config.rng_seed, 0x746f7572)); // "tour"
    std::vector<std::int64_t> counts(static_cast<std::size_t>(samples.domain_max) + 1, 0);
    for (std::int64_t i = 0; i < config.sample_count; ++i) {
        const auto remaining = static_cast<std::uint64_t>(total - i);
        const auto pick = i + static_cast<std::int64_t>(rng.next_below(remaining));
        std::swap(vals[static_cast<std::size_t>(i)], vals[static_cast<std::size_t>(pick)]);
        ++counts[static_cast<std::size_t>(vals[static_cast<std::size_t>(i)])];
    }
    return tournament_counts(candidates, counts, config.sample_count, config.delta,
                             exec);
}

std::int64_t tournament_sample_size(double delta, std::int64_t n_candidates) {
    if (delta <= 0.0 || n_candidates < 1)
        throw std::invalid_argument("tournament_sample_size: bad arguments");
    const double m = (8.0 / (delta * delta)) *
                     std::log(40.0 * static_cast<double>(n_candidates));
    return static_cast<std::int64_t>(std::ceil(m));
}

std::vector<ProbVector> generic_grid_cover(std::int64_t n, double delta,
                                           std::int64_t element_cap) {
    if (n < 1) throw std::invalid_argument("generic_grid_cover: n must be >= 1");
    if (delta <= 0.0) throw std::invalid_argument("generic_grid_cover: delta must be positive");
    const double alpha = delta / static_cast<double>(n);
    const auto levels = static_cast<std::int64_t>(std::floor(1.0 / alpha)) + 1;
    double est = 1.0;
    for (std::int64_t i = 0; i < n; ++i) est *= static_cast<double>(levels);
    if (est > static_cast<double>(element_cap))
        throw std::length_error("generic_grid_cover: grid exceeds element_cap=" +
                                std::to_string(element_cap));

    std::vector<ProbVector> out;
    out.reserve(static_cast<std::size_t>(est));
    std::vector<std::int64_t> digit(static_cast<std::size_t>(n), 0);
    for (;;) {
        ProbVector pv;
        pv.probs.reserve(static_cast<std::size_t>(n));
        for (std::int64_t d : digit)
            pv.probs.push_back(std::min(1.0, static_cast<double>(d) * alpha));
        out.push_back(std::move(pv));
        // odometer, last coordinate fastest
        std::int64_t pos = n - 1;
        while (pos >= 0) {
            if (++digit[static_cast<std::size_t>(pos)] < levels) break;
            digit[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

} // namespace pbdl
