#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "pbdl/dist.hpp"
#include "pbdl/parallel.hpp"

// The epsilon-cover of n-variable Poisson binomial distributions, built from
// two shapes of candidate:
//
//   sparse          ell <= k^3 Bernoullis with means on the grid {1/k^2,...,
//                   (k^2-1)/k^2}, every other variable deterministically 0 or
//                   1 (so a shift by `ones`);
//   heavy binomial  Binomial(ell, q) + ones with q on the grid {1/(kn),...,
//                   (kn-1)/(kn)}, subject to ell*q >= k^2 - 1/k and
//                   ell*q*(1-q) >= k^2 - k - 1 - 3/k.
//
// k = ceil(1/epsilon) unless overridden.  Enumeration order is deterministic:
// ell ascending, then grid values lexicographic (sparse) or q ascending
// (heavy), then ones ascending; sparse before heavy.  Note both moment
// constraints degenerate to always-true at k=1, so a k=1 cover legitimately
// contains every on-grid binomial, not just the point masses.

namespace pbdl {

struct SparseForm {
    std::int64_t k = 0;
    std::vector<std::int64_t> grid; // nondecreasing numerators j, p = j/k^2
    std::int64_t ones = 0;

    std::int64_t ell() const { return static_cast<std::int64_t>(grid.size()); }
    double prob(std::size_t i) const {
        return static_cast<double>(grid[i]) / static_cast<double>(k * k);
    }
};

struct HeavyBinomialForm {
    std::int64_t k = 0;
    std::int64_t ell = 0;
    std::int64_t q_num = 0; // q = q_num / q_den, q_den = k*n
    std::int64_t q_den = 1;
    std::int64_t ones = 0;

    double q() const { return static_cast<double>(q_num) / static_cast<double>(q_den); }
};

using CoverElement = std::variant<SparseForm, HeavyBinomialForm>;

struct CoverConfig {
    std::int64_t n = 0;               // number of Bernoulli variables
    double epsilon = 0.25;            // target cover accuracy
    std::int64_t k_override = 0;      // 0 = derive k = ceil(1/epsilon)
    std::int64_t sparse_ell_cap = -1; // -1 = no cap; capping voids certification
    std::int64_t heavy_q_stride_cap = 1; // >1 coarsens the q grid, voids certification
    std::int64_t element_cap = 2000000;  // hard memory budget, error when exceeded

    std::int64_t k() const;
};

struct CoverBuildResult {
    std::vector<CoverElement> elements; // deduplicated, deterministic order
    std::vector<Pmf> pmfs;              // parallel to elements, padded to n+1
    std::int64_t n = 0;
    std::int64_t k = 0;
    bool certified = true;       // false once any cap altered the enumeration
    std::int64_t sparse_enumerated = 0;
    std::int64_t heavy_enumerated = 0;
    std::int64_t duplicates_removed = 0;
};

// Raw enumerations (pre-dedup).  Throw std::length_error past cfg.element_cap.
std::vector<SparseForm> enumerate_sparse_forms(const CoverConfig& cfg);
std::vector<HeavyBinomialForm> enumerate_heavy_forms(const CoverConfig& cfg);

// PMF on {0,...,n}; throws if the form does not fit (ell + ones > n).
Pmf cover_element_pmf(const CoverElement& e, std::int64_t n);

std::int64_t element_ones(const CoverElement& e);
std::int64_t element_ell(const CoverElement& e);

// Enumerate both shapes, materialize PMFs, and drop duplicates by quantized
// fingerprint (masses rounded to 1e-12; first occurrence kept, sparse wins).
CoverBuildResult build_cover(const CoverConfig& cfg, Exec exec = Exec::Parallel);

// Exhaustive nearest element; returns index into pmfs and writes the distance.
// Deterministic: ties break toward the lower index, in serial and parallel.
std::size_t best_in_cover(const Pmf& target, const std::vector<Pmf>& pmfs,
                          double& best_tv, Exec exec = Exec::Parallel);

} // namespace pbdl
