#pragma once

#include <cstdint>
#include <vector>

// Core finite distributions on {0,...,n}: Poisson binomials (sums of
// independent, non-identical Bernoullis), binomials, and the distances
// between them.  All mass functions are dense vectors of doubles indexed by
// outcome; nothing here renormalizes silently.

namespace pbdl {

// Bernoulli success probabilities p_1..p_n, each in [0,1].
struct ProbVector {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
};

// Dense probability mass function on {0,...,mass.size()-1}.
struct Pmf {
    std::vector<double> mass;

    std::size_t domain_size() const { return mass.size(); }
};

// Cumulative distribution; values nondecreasing, last entry 1.
struct Cdf {
    std::vector<double> cum;
};

// throws std::invalid_argument on violated constraints
void validate(const ProbVector& p);
void validate(const Pmf& f, double sum_tol = 1e-9);

// PMF of sum of independent Bernoulli(p_i) by the one-variable-at-a-time
// convolution recurrence; O(n^2), exact up to double rounding.
Pmf pbd_pmf(const ProbVector& p);

// Independent oracle: enumerate all 2^n outcomes.  n <= 25 enforced.
Pmf brute_force_pbd_pmf(const ProbVector& p);

// Binomial(m, q) on {0,...,m}.  Computed termwise in log space (lgamma),
// deliberately not via pbd_pmf so the two act as cross-checks.
Pmf binomial_pmf(std::int64_t m, double q);

double tv_distance(const Pmf& a, const Pmf& b);        // half L1, domains padded
double kolmogorov_distance(const Pmf& a, const Pmf& b); // max CDF gap

Cdf pmf_to_cdf(const Pmf& f);
Pmf cdf_to_pmf(const Cdf& c);

// max_l |a(l) - b(l)| over the padded common domain (pads extend with 1)
double kolmogorov_distance_cdf(const Cdf& a, const Cdf& b);

// nondecreasing then nonincreasing, up to tol when comparing neighbors
bool is_unimodal(const Pmf& f, double tol = 1e-12);

// k i.i.d. draws of sum_i Bernoulli(p_i).  Draw j uses substream
// (seed, stream_offset + j) only, so any subset of draws is reproducible
// independently of evaluation order.
std::vector<std::int64_t> sample_pbd(const ProbVector& p, std::int64_t k,
                                     std::uint64_t seed,
                                     std::uint64_t stream_offset = 0);

// single draw on substream (seed, stream_index)
std::int64_t sample_pbd_one(const ProbVector& p, std::uint64_t seed,
                            std::uint64_t stream_index);

// Same draws as sample_pbd bucketed into per-value counts; the fast path for
// sample sizes where materializing values is pointless.
std::vector<std::int64_t> sample_pbd_counts(const ProbVector& p, std::int64_t k,
                                            std::uint64_t seed,
                                            std::uint64_t stream_offset = 0);

// Inverse-CDF draw from an arbitrary pmf, one substream per draw.  Used for
// non-PBD truths in experiments.
std::vector<std::int64_t> sample_pmf(const Pmf& f, std::int64_t k,
                                     std::uint64_t seed,
                                     std::uint64_t stream_offset = 0);

} // namespace pbdl
