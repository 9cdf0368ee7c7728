#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pbdl/dist.hpp"

// Empirical CDF/PMF machinery and the DKW sample-size rules that say how many
// draws are needed for a wanted uniform CDF accuracy.

namespace pbdl {

struct SampleSet {
    std::vector<std::int64_t> values; // each in {0,...,domain_max}
    std::int64_t domain_max = 0;
};

void validate(const SampleSet& s);

// Empirical CDF kept as exact integer counts; cum(l) = cum_counts[l] / k.
struct EmpiricalCdf {
    std::vector<std::int64_t> cum_counts; // nondecreasing, last == sample_count
    std::int64_t sample_count = 0;
    double accuracy_budget = 0.0; // epsilon claimed by the DKW sizing rule

    std::int64_t domain_max() const { return static_cast<std::int64_t>(cum_counts.size()) - 1; }
    double cum(std::int64_t l) const { return static_cast<double>(cum_counts[static_cast<std::size_t>(l)]) / static_cast<double>(sample_count); }
    Cdf to_cdf() const;
};

// Samples sufficient for max_l |F_hat(l) - F(l)| <= epsilon with probability
// >= 1 - delta: ceil(max{576, (9/8) ln(1/delta)} / epsilon^2).
std::int64_t dkw_sample_size(double epsilon, double delta);

// Tighter classical constant (Massart): ceil(ln(2/delta) / (2 epsilon^2)).
std::int64_t classical_dkw_sample_size(double epsilon, double delta);

// Invert the sizing rule: accuracy claimed by k samples at failure prob delta.
double dkw_accuracy(std::int64_t sample_count, double delta);

// Bucket counts per value; the streaming-friendly core representation.
std::vector<std::int64_t> value_counts(const SampleSet& s);

EmpiricalCdf empirical_cdf(const SampleSet& s, double delta = 0.05);
EmpiricalCdf empirical_cdf_from_counts(const std::vector<std::int64_t>& counts,
                                       double delta = 0.05);

// f_hat(0) = F_hat(0), f_hat(z) = F_hat(z) - F_hat(z-1); exact rational
// counts underneath, so the masses sum to the sample count over k.
Pmf empirical_pmf(const EmpiricalCdf& e);

// Sample files: one unsigned decimal integer per line, '#' lines are
// comments, blank lines ignored.  Anything else is rejected with its line
// number, as are values above domain_max.
SampleSet parse_sample_file(std::istream& in, std::int64_t domain_max,
                            const std::string& name = "<stream>");
SampleSet load_sample_file(const std::string& path, std::int64_t domain_max);
void write_sample_file(const std::string& path,
                       const std::vector<std::int64_t>& values);

} // namespace pbdl
