#include "pbdl/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <stdexcept>
#include <string>

#include "pbdl/empirical.hpp"
#include "pbdl/rng.hpp"
#include "pbdl/selection.hpp"

namespace pbdl {

void validate(const WeightedPbd& w) {
    const std::size_t g = w.weights.size();
    if (g == 0) throw std::invalid_argument("weighted: no weight groups");
    if (w.counts.size() != g || w.probs.size() != g)
        throw std::invalid_argument("weighted: weights/counts/probs size mismatch");
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j)
            if (w.weights[i] == w.weights[j])
                throw std::invalid_argument("weighted: weights must be distinct");
        if (w.counts[i] < 1)
            throw std::invalid_argument("weighted: counts must be >= 1");
        if (static_cast<std::int64_t>(w.probs[i].size()) != w.counts[i])
            throw std::invalid_argument("weighted: probs[" + std::to_string(i) +
                                        "] length != counts[" + std::to_string(i) + "]");
        validate(ProbVector{w.probs[i]});
    }
}

namespace {

bool all_integral(const std::vector<double>& weights) {
    for (double w : weights) {
        if (std::abs(w) > 4.5e15) return false;
        if (w != std::floor(w)) return false;
    }
    return true;
}

constexpr double kMergeTol = 1e-9;

} // namespace

std::optional<std::size_t> WeightedRange::try_index(double v) const {
    if (integral) {
        const auto r = std::llround(v);
        if (std::abs(v - static_cast<double>(r)) > kMergeTol) return std::nullopt;
        const auto it = std::lower_bound(ivalues.begin(), ivalues.end(), r);
        if (it == ivalues.end() || *it != r) return std::nullopt;
        return static_cast<std::size_t>(it - ivalues.begin());
    }
    const auto it = std::lower_bound(values.begin(), values.end(), v - kMergeTol);
    if (it == values.end() || *it > v + kMergeTol) return std::nullopt;
    return static_cast<std::size_t>(it - values.begin());
}

std::size_t WeightedRange::index_of(double v) const {
    if (const auto i = try_index(v)) return *i;
    throw std::out_of_range("weighted range: value " + std::to_string(v) +
                            " not attainable");
}

WeightedRange weighted_range(const std::vector<double>& weights,
                             const std::vector<std::int64_t>& counts) {
    if (weights.empty() || weights.size() != counts.size())
        throw std::invalid_argument("weighted_range: weights/counts mismatch");
    WeightedRange r;
    r.integral = all_integral(weights);
    if (r.integral) {
        std::set<std::int64_t> sums{0};
        for (std::size_t g = 0; g < weights.size(); ++g) {
            const auto w = static_cast<std::int64_t>(std::llround(weights[g]));
            std::set<std::int64_t> next;
            for (std::int64_t s : sums)
                for (std::int64_t t = 0; t <= counts[g]; ++t) next.insert(s + w * t);
            sums = std::move(next);
        }
        r.ivalues.assign(sums.begin(), sums.end());
        r.values.reserve(r.ivalues.size());
        for (std::int64_t v : r.ivalues) r.values.push_back(static_cast<double>(v));
        return r;
    }
    std::vector<double> sums{0.0};
    for (std::size_t g = 0; g < weights.size(); ++g) {
        std::vector<double> next;
        next.reserve(sums.size() * static_cast<std::size_t>(counts[g] + 1));
        for (double s : sums)
            for (std::int64_t t = 0; t <= counts[g]; ++t)
                next.push_back(s + weights[g] * static_cast<double>(t));
        std::sort(next.begin(), next.end());
        sums.clear();
        for (double v : next) // merge values closer than the tolerance
            if (sums.empty() || v - sums.back() > kMergeTol) sums.push_back(v);
    }
    r.values = std::move(sums);
    return r;
}

std::vector<double> range_pmf_from_groups(const std::vector<double>& weights,
                                          const std::vector<Pmf>& group_pmfs,
                                          const WeightedRange& range,
                                          std::int64_t tuple_cap) {
    const std::size_t g = weights.size();
    if (group_pmfs.size() != g)
        throw std::invalid_argument("range_pmf_from_groups: group count mismatch");
    double tuples = 1.0;
    for (const auto& p : group_pmfs) tuples *= static_cast<double>(p.mass.size());
    if (tuples > static_cast<double>(tuple_cap))
        throw std::length_error("weighted: tuple enumeration exceeds tuple_cap=" +
                                std::to_string(tuple_cap));

    std::vector<double> mass(range.size(), 0.0);
    const std::size_t last = g - 1;
    std::vector<std::size_t> digit(last, 0);
    for (;;) {
        double prob = 1.0, partial = 0.0;
        for (std::size_t d = 0; d < last; ++d) {
            prob *= group_pmfs[d].mass[digit[d]];
            partial += weights[d] * static_cast<double>(digit[d]);
        }
        if (prob > 0.0) {
            for (std::size_t t = 0; t < group_pmfs[last].mass.size(); ++t) {
                const double p = prob * group_pmfs[last].mass[t];
                if (p == 0.0) continue;
                const double v = partial + weights[last] * static_cast<double>(t);
                mass[range.index_of(v)] += p;
            }
        }
        std::size_t pos = last;
        while (pos > 0) {
            --pos;
            if (++digit[pos] < group_pmfs[pos].mass.size()) break;
            digit[pos] = 0;
            if (pos == 0) return mass;
        }
        if (last == 0) return mass;
    }
}

WeightedPmf weighted_pmf(const WeightedPbd& w, std::int64_t tuple_cap) {
    validate(w);
    WeightedPmf out;
    out.range = weighted_range(w.weights, w.counts);
    std::vector<Pmf> group_pmfs;
    group_pmfs.reserve(w.weights.size());
    for (const auto& probs : w.probs) group_pmfs.push_back(pbd_pmf(ProbVector{probs}));
    out.mass = range_pmf_from_groups(w.weights, group_pmfs, out.range, tuple_cap);
    return out;
}

namespace {

std::vector<double> element_probs(const CoverElement& e, std::int64_t n) {
    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(n));
    if (std::holds_alternative<SparseForm>(e)) {
        const auto& s = std::get<SparseForm>(e);
        for (std::size_t i = 0; i < s.grid.size(); ++i) probs.push_back(s.prob(i));
        probs.insert(probs.end(), static_cast<std::size_t>(s.ones), 1.0);
    } else {
        const auto& h = std::get<HeavyBinomialForm>(e);
        probs.insert(probs.end(), static_cast<std::size_t>(h.ell), h.q());
        probs.insert(probs.end(), static_cast<std::size_t>(h.ones), 1.0);
    }
    probs.resize(static_cast<std::size_t>(n), 0.0);
    return probs;
}

} // namespace

WeightedLearnResult learn_weighted(const std::vector<double>& sample_values,
                                   const std::vector<double>& weights,
                                   const std::vector<std::int64_t>& counts,
                                   const WeightedLearnConfig& cfg, Exec exec) {
    if (sample_values.empty())
        throw std::invalid_argument("learn_weighted: no samples");
    WeightedLearnResult res;
    res.delta = cfg.epsilon;
    const WeightedRange range = weighted_range(weights, counts);

    SampleSet positions;
    positions.domain_max = static_cast<std::int64_t>(range.size()) - 1;
    positions.values.reserve(sample_values.size());
    for (double v : sample_values) {
        const auto idx = range.try_index(v);
        if (!idx)
            throw std::runtime_error("learn_weighted: sample value " +
                                     std::to_string(v) + " not in the weighted range");
        positions.values.push_back(static_cast<std::int64_t>(*idx));
    }

    const std::size_t g = weights.size();
    std::vector<CoverBuildResult> covers;
    covers.reserve(g);
    bool certified = true;
    double product = 1.0;
    for (std::size_t j = 0; j < g; ++j) {
        CoverConfig cc;
        cc.n = counts[j];
        cc.epsilon = cfg.epsilon;
        cc.k_override = cfg.k_override;
        cc.sparse_ell_cap = cfg.sparse_ell_cap;
        cc.heavy_q_stride_cap = cfg.heavy_q_stride_cap;
        cc.element_cap = cfg.per_group_element_cap;
        covers.push_back(build_cover(cc, exec));
        certified = certified && covers.back().certified;
        product *= static_cast<double>(covers.back().elements.size());
    }
    if (product > static_cast<double>(cfg.product_cap))
        throw std::length_error("learn_weighted: product cover exceeds product_cap=" +
                                std::to_string(cfg.product_cap));
    const auto product_size = static_cast<std::int64_t>(product);
    res.product_size = product_size;
    res.required_samples = tournament_sample_size(cfg.epsilon, product_size);
    certified = certified &&
                static_cast<std::int64_t>(sample_values.size()) >= res.required_samples;

    // Mixed-radix decode of a product index into per-group cover indices,
    // group 0 the slowest digit.
    auto combo_of = [&](std::int64_t idx) {
        std::vector<std::size_t> combo(g);
        for (std::size_t j = g; j-- > 0;) {
            const auto sz = static_cast<std::int64_t>(covers[j].elements.size());
            combo[j] = static_cast<std::size_t>(idx % sz);
            idx /= sz;
        }
        return combo;
    };

    std::vector<Pmf> candidates(static_cast<std::size_t>(product_size));
#pragma omp parallel for schedule(dynamic, 8) if (exec == Exec::Parallel)
    for (std::int64_t i = 0; i < product_size; ++i) {
        const auto combo = combo_of(i);
        std::vector<Pmf> group_pmfs(g);
        for (std::size_t j = 0; j < g; ++j) group_pmfs[j] = covers[j].pmfs[combo[j]];
        candidates[static_cast<std::size_t>(i)].mass =
            range_pmf_from_groups(weights, group_pmfs, range, cfg.tuple_cap);
    }

    const auto winner = tournament(candidates, positions, cfg.epsilon, exec);
    if (!winner) throw TournamentFailure{};
    res.winner_index = *winner;

    const auto combo = combo_of(static_cast<std::int64_t>(*winner));
    res.hypothesis.weights = weights;
    res.hypothesis.counts = counts;
    res.hypothesis.probs.reserve(g);
    for (std::size_t j = 0; j < g; ++j)
        res.hypothesis.probs.push_back(
            element_probs(covers[j].elements[combo[j]], counts[j]));
    res.certified = certified;
    return res;
}

WeightedPbd learn_weighted(const std::vector<double>& sample_values,
                           const std::vector<double>& weights,
                           const std::vector<std::int64_t>& counts, double epsilon,
                           Exec exec) {
    WeightedLearnConfig cfg;
    cfg.epsilon = epsilon;
    return learn_weighted(sample_values, weights, counts, cfg, exec).hypothesis;
}

HardInstance make_lower_bound_instance(std::int64_t k, std::uint64_t seed) {
    if (k % 2 != 0) throw std::invalid_argument("make_lower_bound_instance: k must be even");
    if (k < 100)
        throw std::invalid_argument(
            "make_lower_bound_instance: k must be >= 100 so 100/k is a probability");
    const std::int64_t s_size = std::max<std::int64_t>(1, (k + 50) / 100);

    std::vector<std::int64_t> pool;
    pool.reserve(static_cast<std::size_t>(k / 2));
    for (std::int64_t i = k / 2 + 1; i <= k; ++i) pool.push_back(i);

    Rng rng(substream_seed(seed, 0x68617264)); // "hard"
    for (std::int64_t i = 0; i < s_size; ++i) {
        const auto pick =
            i + static_cast<std::int64_t>(rng.next_below(pool.size() - static_cast<std::size_t>(i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick)]);
    }

    HardInstance h;
    h.k = k;
    h.support_set.assign(pool.begin(), pool.begin() + s_size);
    std::sort(h.support_set.begin(), h.support_set.end());
    h.prob_vector.assign(static_cast<std::size_t>(k), 0.0);
    const double p = 100.0 / static_cast<double>(k);
    for (std::int64_t j : h.support_set) h.prob_vector[static_cast<std::size_t>(j - 1)] = p;
    h.weight_fn.assign(static_cast<std::size_t>(k), 0);
    for (std::int64_t i = k / 2 + 1; i <= k; ++i)
        h.weight_fn[static_cast<std::size_t>(i - 1)] = i;
    return h;
}

WeightedPbd hard_instance_weighted(const HardInstance& h) {
    WeightedPbd w;
    const double p = 100.0 / static_cast<double>(h.k);
    for (std::int64_t j : h.support_set) {
        w.weights.push_back(static_cast<double>(j));
        w.counts.push_back(1);
        w.probs.push_back({p});
    }
    return w;
}

std::vector<double> sample_weighted(const WeightedPbd& w, std::int64_t k,
                                    std::uint64_t seed, std::uint64_t stream_offset) {
    validate(w);
    std::vector<std::vector<std::uint64_t>> thresholds(w.probs.size());
    for (std::size_t g = 0; g < w.probs.size(); ++g) {
        thresholds[g].reserve(w.probs[g].size());
        for (double p : w.probs[g]) thresholds[g].push_back(bernoulli_threshold(p));
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k));
    for (std::int64_t j = 0; j < k; ++j) {
        Rng rng(substream_seed(seed, stream_offset + static_cast<std::uint64_t>(j)));
        double v = 0.0;
        for (std::size_t g = 0; g < thresholds.size(); ++g) {
            std::int64_t s = 0;
            for (std::uint64_t t : thresholds[g])
                s += rng.next_bernoulli_threshold(t) ? 1 : 0;
            v += w.weights[g] * static_cast<double>(s);
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_weighted_sample_file(std::istream& in) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue; // blank
        if (line[b] == '#') continue;         // comment
        std::size_t e = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(b, e - b + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || !std::isfinite(v))
            throw std::runtime_error("samples:" + std::to_string(lineno)
                                     + ": not a decimal value: '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<double> load_weighted_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path);
    return parse_weighted_sample_file(in);
}

} // namespace pbdl
