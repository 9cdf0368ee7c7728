#include "pbdl/dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pbdl/rng.hpp"

namespace pbdl {

void validate(const ProbVector& p) {
    if (p.probs.empty())
        throw std::invalid_argument("ProbVector: need at least one probability");
    for (double v : p.probs)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("ProbVector: entry outside [0,1]");
}

void validate(const Pmf& f, double sum_tol) {
    if (f.mass.empty()) throw std::invalid_argument("Pmf: empty domain");
    double s = 0.0;
    for (double v : f.mass) {
        if (!(v >= 0.0)) throw std::invalid_argument("Pmf: negative mass");
        s += v;
    }
    if (std::fabs(s - 1.0) > sum_tol)
        throw std::invalid_argument("Pmf: mass sums to " + std::to_string(s));
}

Pmf pbd_pmf(const ProbVector& p) {
    validate(p);
    const std::size_t n = p.size();
    std::vector<double> f(n + 1, 0.0);
    f[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = p.probs[i];
        // fold in variable i; walk down so f[j-1] is still the old value
        for (std::size_t j = i + 1; j > 0; --j)
            f[j] = f[j] * (1.0 - q) + f[j - 1] * q;
        f[0] *= (1.0 - q);
    }
    return Pmf{std::move(f)};
}

Pmf brute_force_pbd_pmf(const ProbVector& p) {
    validate(p);
    const std::size_t n = p.size();
    if (n > 25)
        throw std::invalid_argument("brute_force_pbd_pmf: n > 25 is not tractable");
    std::vector<double> f(n + 1, 0.0);
    const std::uint64_t lim = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < lim; ++mask) {
        double w = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            w *= (mask >> i) & 1u ? p.probs[i] : 1.0 - p.probs[i];
        f[static_cast<std::size_t>(__builtin_popcountll(mask))] += w;
    }
    return Pmf{std::move(f)};
}

Pmf binomial_pmf(std::int64_t m, double q) {
    if (m < 0) throw std::invalid_argument("binomial_pmf: negative m");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("binomial_pmf: q outside [0,1]");
    std::vector<double> f(static_cast<std::size_t>(m) + 1, 0.0);
    if (q == 0.0) {
        f.front() = 1.0;
    } else if (q == 1.0) {
        f.back() = 1.0;
    } else {
        const double lq = std::log(q), l1q = std::log1p(-q);
        const double lgm = std::lgamma(static_cast<double>(m) + 1.0);
        for (std::int64_t j = 0; j <= m; ++j) {
            const double lg = lgm - std::lgamma(static_cast<double>(j) + 1.0)
                                  - std::lgamma(static_cast<double>(m - j) + 1.0);
            f[static_cast<std::size_t>(j)] =
                std::exp(lg + static_cast<double>(j) * lq + static_cast<double>(m - j) * l1q);
        }
    }
    return Pmf{std::move(f)};
}

double tv_distance(const Pmf& a, const Pmf& b) {
    const std::size_t n = std::max(a.mass.size(), b.mass.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i < a.mass.size() ? a.mass[i] : 0.0;
        const double y = i < b.mass.size() ? b.mass[i] : 0.0;
        s += std::fabs(x - y);
    }
    return 0.5 * s;
}

double kolmogorov_distance(const Pmf& a, const Pmf& b) {
    const std::size_t n = std::max(a.mass.size(), b.mass.size());
    double ca = 0.0, cb = 0.0, best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ca += i < a.mass.size() ? a.mass[i] : 0.0;
        cb += i < b.mass.size() ? b.mass[i] : 0.0;
        best = std::max(best, std::fabs(ca - cb));
    }
    return best;
}

Cdf pmf_to_cdf(const Pmf& f) {
    Cdf c;
    c.cum.resize(f.mass.size());
    double s = 0.0;
    for (std::size_t i = 0; i < f.mass.size(); ++i) {
        s += f.mass[i];
        c.cum[i] = s;
    }
    return c;
}

Pmf cdf_to_pmf(const Cdf& c) {
    if (c.cum.empty()) throw std::invalid_argument("cdf_to_pmf: empty");
    Pmf f;
    f.mass.resize(c.cum.size());
    f.mass[0] = c.cum[0];
    for (std::size_t i = 1; i < c.cum.size(); ++i)
        f.mass[i] = c.cum[i] - c.cum[i - 1];
    return f;
}

double kolmogorov_distance_cdf(const Cdf& a, const Cdf& b) {
    const std::size_t n = std::max(a.cum.size(), b.cum.size());
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i < a.cum.size() ? a.cum[i] : a.cum.back();
        const double y = i < b.cum.size() ? b.cum[i] : b.cum.back();
        best = std::max(best, std::fabs(x - y));
    }
    return best;
}

bool is_unimodal(const Pmf& f, double tol) {
    bool rising = true;
    for (std::size_t i = 0; i + 1 < f.mass.size(); ++i) {
        if (rising) {
            if (f.mass[i + 1] < f.mass[i] - tol) rising = false;
        } else {
            if (f.mass[i + 1] > f.mass[i] + tol) return false;
        }
    }
    return true;
}

std::int64_t sample_pbd_one(const ProbVector& p, std::uint64_t seed,
                            std::uint64_t stream_index) {
    Rng rng(substream_seed(seed, stream_index));
    std::int64_t s = 0;
    for (double q : p.probs) s += rng.next_bernoulli(q) ? 1 : 0;
    return s;
}

std::vector<std::int64_t> sample_pbd(const ProbVector& p, std::int64_t k,
                                     std::uint64_t seed, std::uint64_t stream_offset) {
    validate(p);
    if (k < 0) throw std::invalid_argument("sample_pbd: negative count");
    std::vector<std::int64_t> out(static_cast<std::size_t>(k));
    for (std::int64_t j = 0; j < k; ++j)
        out[static_cast<std::size_t>(j)] =
            sample_pbd_one(p, seed, stream_offset + static_cast<std::uint64_t>(j));
    return out;
}

std::vector<std::int64_t> sample_pbd_counts(const ProbVector& p, std::int64_t k,
                                            std::uint64_t seed,
                                            std::uint64_t stream_offset) {
    validate(p);
    if (k < 0) throw std::invalid_argument("sample_pbd_counts: negative count");
    std::vector<std::uint64_t> thresholds(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        thresholds[i] = bernoulli_threshold(p.probs[i]);
    std::vector<std::int64_t> counts(p.size() + 1, 0);
    for (std::int64_t j = 0; j < k; ++j) {
        Rng rng(substream_seed(seed, stream_offset + static_cast<std::uint64_t>(j)));
        std::int64_t s = 0;
        for (std::uint64_t t : thresholds)
            s += rng.next_bernoulli_threshold(t) ? 1 : 0;
        ++counts[static_cast<std::size_t>(s)];
    }
    return counts;
}

std::vector<std::int64_t> sample_pmf(const Pmf& f, std::int64_t k,
                                     std::uint64_t seed, std::uint64_t stream_offset) {
    validate(f);
    if (k < 0) throw std::invalid_argument("sample_pmf: negative count");
    Cdf c = pmf_to_cdf(f);
    std::vector<std::int64_t> out(static_cast<std::size_t>(k));
    for (std::int64_t j = 0; j < k; ++j) {
        Rng rng(substream_seed(seed, stream_offset + static_cast<std::uint64_t>(j)));
        const double u = rng.next_unit();
        auto it = std::lower_bound(c.cum.begin(), c.cum.end(), u);
        if (it == c.cum.end()) --it; // u beyond accumulated rounding dust
        out[static_cast<std::size_t>(j)] = it - c.cum.begin();
    }
    return out;
}

} // namespace pbdl
