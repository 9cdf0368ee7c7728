#pragma once

#include <cstdint>

#include "pbdl/dist.hpp"

// Shifted and translated Poisson distributions, truncated onto {0,...,n}.
// A translated Poisson TP(mu, sigma2) is floor(mu - sigma2) + Poisson(lambda)
// with lambda = sigma2 + frac(mu - sigma2), i.e. a Poisson slid so that mean
// and variance land near (mu, sigma2).

namespace pbdl {

struct TranslatedPoissonParams {
    double mu = 0.0;
    double sigma2 = 0.0; // > 0

    std::int64_t shift() const;  // floor(mu - sigma2)
    double lambda() const;       // sigma2 + frac(mu - sigma2)
};

// PMF on {0,...,domain_max} plus what fell off either end.
struct TruncatedPmf {
    Pmf pmf;
    double lost_mass = 0.0;       // total mass outside {0,...,domain_max}
    double below_zero_mass = 0.0; // part of lost_mass from negative support
};

// shift + Poisson(lambda) restricted to {0,...,domain_max}; throws
// std::domain_error if more than tail_tol mass is lost (default 1e-9).
TruncatedPmf shifted_poisson_pmf(std::int64_t shift, double lambda,
                                 std::int64_t domain_max,
                                 double tail_tol = 1e-9);

TruncatedPmf translated_poisson_pmf(const TranslatedPoissonParams& tp,
                                    std::int64_t domain_max,
                                    double tail_tol = 1e-9);

} // namespace pbdl
