#include "pbdl/poisson.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pbdl {

std::int64_t TranslatedPoissonParams::shift() const {
    return static_cast<std::int64_t>(std::floor(mu - sigma2));
}

double TranslatedPoissonParams::lambda() const {
    const double d = mu - sigma2;
    return sigma2 + (d - std::floor(d));
}

namespace {

double poisson_log_pmf(std::int64_t i, double lambda) {
    return -lambda + static_cast<double>(i) * std::log(lambda)
           - std::lgamma(static_cast<double>(i) + 1.0);
}

} // namespace

TruncatedPmf shifted_poisson_pmf(std::int64_t shift, double lambda,
                                 std::int64_t domain_max, double tail_tol) {
    if (lambda < 0.0) throw std::invalid_argument("shifted_poisson_pmf: lambda < 0");
    if (domain_max < 0) throw std::invalid_argument("shifted_poisson_pmf: domain_max < 0");

    TruncatedPmf out;
    out.pmf.mass.assign(static_cast<std::size_t>(domain_max) + 1, 0.0);

    if (lambda == 0.0) { // degenerate point mass at shift
        if (shift >= 0 && shift <= domain_max) {
            out.pmf.mass[static_cast<std::size_t>(shift)] = 1.0;
        } else {
            out.lost_mass = 1.0;
            if (shift < 0) out.below_zero_mass = 1.0;
        }
    } else {
        double inside = 0.0;
        for (std::int64_t z = std::max<std::int64_t>(0, shift); z <= domain_max; ++z) {
            const double m = std::exp(poisson_log_pmf(z - shift, lambda));
            out.pmf.mass[static_cast<std::size_t>(z)] = m;
            inside += m;
        }
        if (shift < 0) {
            double below = 0.0;
            for (std::int64_t i = 0; i < -shift; ++i)
                below += std::exp(poisson_log_pmf(i, lambda));
            out.below_zero_mass = below;
        }
        out.lost_mass = std::max(0.0, 1.0 - inside);
    }

    if (out.lost_mass > tail_tol)
        throw std::domain_error("shifted_poisson_pmf: truncated tail mass "
                                + std::to_string(out.lost_mass) + " exceeds "
                                + std::to_string(tail_tol));
    return out;
}

TruncatedPmf translated_poisson_pmf(const TranslatedPoissonParams& tp,
                                    std::int64_t domain_max, double tail_tol) {
    if (!(tp.sigma2 > 0.0))
        throw std::invalid_argument("translated_poisson_pmf: sigma2 must be positive");
    return shifted_poisson_pmf(tp.shift(), tp.lambda(), domain_max, tail_tol);
}

} // namespace pbdl
