#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pbdl/cover.hpp"
#include "pbdl/dist.hpp"
#include "pbdl/parallel.hpp"

// Weighted sums of Bernoullis with a small set of distinct weights: the sum
// sum_g w_g * (X_{g,1} + ... + X_{g,c_g}) where each group g contributes a
// Poisson binomial count.  Learning works per group and stitches the group
// covers into a product cover selected by tournament.

namespace pbdl {

struct WeightedPbd {
    std::vector<double> weights;            // distinct
    std::vector<std::int64_t> counts;       // per weight, >= 1
    std::vector<std::vector<double>> probs; // probs[g].size() == counts[g]
};

void validate(const WeightedPbd& w);

// Every value sum_g w_g * s_g, s_g in {0..counts[g]}, deduplicated and
// ascending.  Exact integer arithmetic when all weights are integers,
// otherwise values closer than 1e-9 merge.
struct WeightedRange {
    std::vector<double> values;
    bool integral = false;
    std::vector<std::int64_t> ivalues; // parallel to values when integral

    std::size_t size() const { return values.size(); }
    std::optional<std::size_t> try_index(double v) const;
    std::size_t index_of(double v) const; // throws std::out_of_range if absent
};

WeightedRange weighted_range(const std::vector<double>& weights,
                             const std::vector<std::int64_t>& counts);

struct WeightedPmf {
    WeightedRange range;
    std::vector<double> mass; // parallel to range.values
};

// Combine per-group count PMFs into a PMF over the range: iterate the free
// group-count tuples, walk the last group inline, and land each outcome via
// the range index.  Throws std::length_error when prod_g (counts[g]+1)
// exceeds tuple_cap.
std::vector<double> range_pmf_from_groups(const std::vector<double>& weights,
                                          const std::vector<Pmf>& group_pmfs,
                                          const WeightedRange& range,
                                          std::int64_t tuple_cap = 50000000);

WeightedPmf weighted_pmf(const WeightedPbd& w, std::int64_t tuple_cap = 50000000);

// k i.i.d. draws of the weighted sum; draw j touches substream
// (seed, stream_offset + j) only, mirroring sample_pbd.
std::vector<double> sample_weighted(const WeightedPbd& w, std::int64_t k,
                                    std::uint64_t seed,
                                    std::uint64_t stream_offset = 0);

// Newline-delimited decimal values (integers or reals), '#' comments, same
// shape as the integer sample format but for weighted-range observations.
std::vector<double> parse_weighted_sample_file(std::istream& in);
std::vector<double> load_weighted_sample_file(const std::string& path);

struct WeightedLearnConfig {
    double epsilon = 0.25;
    std::int64_t k_override = 0;            // per-group cover k
    std::int64_t sparse_ell_cap = -1;       // per-group caps, as in CoverConfig
    std::int64_t heavy_q_stride_cap = 1;
    std::int64_t per_group_element_cap = 2000000;
    std::int64_t product_cap = 200000; // max product-cover candidates
    std::int64_t tuple_cap = 50000000;
};

struct WeightedLearnResult {
    WeightedPbd hypothesis;
    std::size_t winner_index = 0;      // into the product cover, odometer order
    std::int64_t product_size = 0;
    std::int64_t required_samples = 0; // tournament_sample_size(epsilon, product_size)
    double delta = 0.0;                // tournament scale, = epsilon
    bool certified = true;
};

// samples are range values observed from the target.  Certification requires
// uncapped group covers and at least required_samples observations.  Throws
// TournamentFailure when no candidate survives.
WeightedLearnResult learn_weighted(const std::vector<double>& sample_values,
                                   const std::vector<double>& weights,
                                   const std::vector<std::int64_t>& counts,
                                   const WeightedLearnConfig& cfg,
                                   Exec exec = Exec::Parallel);

WeightedPbd learn_weighted(const std::vector<double>& sample_values,
                           const std::vector<double>& weights,
                           const std::vector<std::int64_t>& counts, double epsilon,
                           Exec exec = Exec::Parallel);

// The lower-bound family: variables {1..k}, a random support S inside
// {k/2+1..k} of size max(1, round-half-up(k/100)), p_i = 100/k on S and 0
// elsewhere, value function f(x) = sum_i weight_fn[i-1] * x_i with
// weight_fn[i-1] = i on {k/2+1..k} and 0 below.
struct HardInstance {
    std::int64_t k = 0;
    std::vector<std::int64_t> support_set;
    std::vector<double> prob_vector;      // length k, entry i-1 for variable i
    std::vector<std::int64_t> weight_fn;  // length k, entry i-1 for variable i
};

HardInstance make_lower_bound_instance(std::int64_t k, std::uint64_t seed);

// The same instance with the deterministic-zero variables dropped, which is
// the scale its PMF is computed at.
WeightedPbd hard_instance_weighted(const HardInstance& h);

} // namespace pbdl
