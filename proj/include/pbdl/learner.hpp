#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbdl/cover.hpp"
#include "pbdl/dist.hpp"
#include "pbdl/empirical.hpp"
#include "pbdl/parallel.hpp"
#include "pbdl/rng.hpp"

// Learners for Poisson binomial targets.
//
// learn_tv        proper learning in total variation: one DKW-sized sample,
//                 then a sparse-form Delta test and a heavy-form H test
//                 against an epsilon^beta cover, first accepting element wins.
// learn_kolmogorov  agnostic learning in Kolmogorov distance via empirical
//                 CDF comparison against the cover.
// learn_unimodal  Birge-style adaptive histogram for unimodal targets.

namespace pbdl {

struct TvThresholds {
    // Negative = derive from epsilon.  Setting any of these by hand is useful
    // for desk-scale experiments but voids certification.
    double delta_base = -1.0;        // default epsilon^beta
    double delta_per_support = -1.0; // default 2*epsilon^alpha, per support point
    double h = -1.0;                 // default 2*epsilon^beta + epsilon^alpha

    bool any_override() const {
        return delta_base >= 0.0 || delta_per_support >= 0.0 || h >= 0.0;
    }
};

struct TvLearnerConfig {
    double epsilon = 0.25;
    double tau = 1.0; // accuracy/sample trade-off knob from the analysis
    std::int64_t k_override = 0;
    std::int64_t sparse_ell_cap = -1;
    std::int64_t heavy_q_stride_cap = 1;
    std::int64_t element_cap = 2000000;
    TvThresholds thresholds;

    double beta() const { return 1.0 + tau / 12.0; }
    double alpha() const { return 4.0 + tau / 2.0; }
    double eps_beta() const;  // epsilon^beta, the cover accuracy
    double eps_alpha() const; // epsilon^alpha, the DKW accuracy
    CoverConfig cover_config(std::int64_t n) const;
};

struct TvHypothesis {
    CoverElement element;
    double statistic = 0.0; // the accepted test's measured value
    double threshold = 0.0; // the bound it was compared against
    bool accepted_sparse = true;
    bool certified = true; // false when caps, overrides, or condition (1) fail
};

// Raised when no cover element passes its test; carries the best statistics
// seen so the caller can report how close the run came.
struct NoAcceptingElement : std::runtime_error {
    NoAcceptingElement(double bd, double bh);
    double best_delta;
    double best_h;
};

// Delta_Y = (sum_{z in supp(Y)} |f_Y(z) - fhat(z)| + 1 - sum_{z in supp(Y)}
// fhat(z)) / 2, the TV surrogate computable from the sparse support alone.
double delta_statistic(const SparseForm& y, const EmpiricalCdf& e, std::int64_t n);

// Max CDF gap between the form and the empirical CDF.
double h_statistic(const HeavyBinomialForm& y, const EmpiricalCdf& e, std::int64_t n);

double delta_threshold(const TvLearnerConfig& cfg, std::int64_t ell);
double h_threshold(const TvLearnerConfig& cfg);

bool delta_test(const SparseForm& y, const EmpiricalCdf& e, std::int64_t n,
                const TvLearnerConfig& cfg);
bool h_test(const HeavyBinomialForm& y, const EmpiricalCdf& e, std::int64_t n,
            const TvLearnerConfig& cfg);

// Sample size for the DKW stage, dkw_sample_size(epsilon^alpha, 1/20).
std::int64_t tv_sample_size(const TvLearnerConfig& cfg);

TvHypothesis learn_tv(const SampleSet& samples, const TvLearnerConfig& cfg,
                      Exec exec = Exec::Parallel);

// Same learner fed pre-bucketed counts (counts[v] draws of value v, domain
// {0..counts.size()-1}); what the CLI and benchmarks use at DKW sizes.
TvHypothesis learn_tv_counts(const std::vector<std::int64_t>& counts,
                             const TvLearnerConfig& cfg, Exec exec = Exec::Parallel);

struct KolmogorovResult {
    CoverElement element;
    double statistic = 0.0; // empirical max CDF gap of the accepted element
    bool certified = true;
};

// ceil(max{9216, 18 ln(1/delta)} / epsilon^2)
std::int64_t kolmogorov_sample_size(double epsilon, double delta);

// Cover at accuracy epsilon/8 (k = ceil(8/epsilon) unless overridden), accept
// the first element whose empirical max CDF gap is <= epsilon/2.
KolmogorovResult learn_kolmogorov(const SampleSet& samples, double epsilon,
                                  std::int64_t k_override = 0,
                                  Exec exec = Exec::Parallel);

KolmogorovResult learn_kolmogorov_counts(const std::vector<std::int64_t>& counts,
                                         double epsilon, std::int64_t k_override = 0,
                                         Exec exec = Exec::Parallel);

// Adaptive histogram: boundaries[0] = 0 < ... < boundaries[m] = n+1 split
// {0..n} into m intervals; interval i carries counts[i] of the sample_count
// draws, spread uniformly over its points.
struct HistogramHypothesis {
    std::vector<std::int64_t> boundaries;
    std::vector<std::int64_t> counts;
    std::int64_t sample_count = 0;

    std::int64_t interval_count() const { return static_cast<std::int64_t>(counts.size()); }
    std::int64_t domain_max() const { return boundaries.back() - 1; }
    double mass(std::size_t i) const {
        return static_cast<double>(counts[i]) / static_cast<double>(sample_count);
    }
};

// ceil(50 * log2(n+1) / epsilon^3)
std::int64_t unimodal_sample_size(std::int64_t n, double epsilon);

HistogramHypothesis learn_unimodal(const SampleSet& samples, double epsilon);

// The flattened PMF the hypothesis denotes.
Pmf histogram_pmf(const HistogramHypothesis& h);

struct HistogramDraw {
    std::int64_t value = 0;
    std::int64_t bits_used = 0;
};

// One draw by exact integer inverse-CDF: an interval stage on a fixed-point
// grid, then a point inside the interval.  Never consumes more than
// ceil(log2 m) + ceil(log2 max_width) + 16 bits.
HistogramDraw histogram_sample(const HistogramHypothesis& h, BitStream& bits);
HistogramDraw histogram_sample(const HistogramHypothesis& h, std::uint64_t seed);
std::int64_t histogram_sample_bit_cap(const HistogramHypothesis& h);

struct GapReport {
    double d_tv = 0.0;
    double d_k = 0.0;
    double residual = 0.0; // d_tv - 2 * d_k, positive when the 2x bound fails
    bool half_bound_ok = true; // d_k / 2 <= d_tv
};

// Exact distances between two heavy forms sharing k, for the d_K vs d_TV
// sandwich (d_K/2 <= d_TV <= 2 d_K + O(1/k)).
GapReport kolmogorov_tv_gap_check(const HeavyBinomialForm& x,
                                  const HeavyBinomialForm& y, std::int64_t n);

} // namespace pbdl
