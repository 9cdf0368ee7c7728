#include "pbdl/cover.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace pbdl {

std::int64_t CoverConfig::k() const {
    if (k_override > 0) return k_override;
    if (!(epsilon > 0.0)) throw std::invalid_argument("CoverConfig: epsilon must be positive");
    return static_cast<std::int64_t>(std::ceil(1.0 / epsilon));
}

namespace {

void check_cfg(const CoverConfig& cfg) {
    if (cfg.n < 0) throw std::invalid_argument("CoverConfig: negative n");
    if (cfg.heavy_q_stride_cap < 1) throw std::invalid_argument("CoverConfig: stride must be >= 1");
    if (cfg.element_cap <= 0) throw std::invalid_argument("CoverConfig: element_cap must be positive");
}

[[noreturn]] void cap_exceeded(const char* what, std::int64_t cap) {
    throw std::length_error(std::string(what) + ": element_cap of "
                            + std::to_string(cap) + " exceeded");
}

} // namespace

std::vector<SparseForm> enumerate_sparse_forms(const CoverConfig& cfg) {
    check_cfg(cfg);
    const std::int64_t k = cfg.k();
    const std::int64_t n = cfg.n;
    std::int64_t ell_max = std::min(k * k * k, n);
    if (cfg.sparse_ell_cap >= 0) ell_max = std::min(ell_max, cfg.sparse_ell_cap);
    const std::int64_t grid_max = k * k - 1; // numerators 1..k^2-1

    std::vector<SparseForm> out;
    std::vector<std::int64_t> multiset;
    // lexicographic nondecreasing multisets of fixed size ell
    auto emit = [&](auto&& self, std::int64_t remaining, std::int64_t lo) -> void {
        if (remaining == 0) {
            const std::int64_t ell = static_cast<std::int64_t>(multiset.size());
            for (std::int64_t ones = 0; ones + ell <= n; ++ones) {
                if (static_cast<std::int64_t>(out.size()) >= cfg.element_cap)
                    cap_exceeded("enumerate_sparse_forms", cfg.element_cap);
                out.push_back(SparseForm{k, multiset, ones});
            }
            return;
        }
        for (std::int64_t j = lo; j <= grid_max; ++j) {
            multiset.push_back(j);
            self(self, remaining - 1, j);
            multiset.pop_back();
        }
    };
    for (std::int64_t ell = 0; ell <= ell_max; ++ell) emit(emit, ell, 1);
    return out;
}

std::vector<HeavyBinomialForm> enumerate_heavy_forms(const CoverConfig& cfg) {
    check_cfg(cfg);
    const std::int64_t k = cfg.k();
    const std::int64_t n = cfg.n;
    const std::int64_t den = k * n;
    std::vector<HeavyBinomialForm> out;
    if (n == 0) return out;

    // Constraints evaluated in exact integer arithmetic.  With q = j/(kn):
    //   ell*q           >= k^2 - 1/k      <=>  ell*j        >= n*(k^3 - 1)
    //   ell*q*(1-q)     >= k^2 - k - 1 - 3/k
    //                                     <=>  k*ell*j*(kn-j) >= (kn)^2*(k^3 - k^2 - k - 3)
    const std::int64_t c1 = n * (k * k * k - 1);
    const std::int64_t c2 = den * den * (k * k * k - k * k - k - 3);

    for (std::int64_t ell = 0; ell <= n; ++ell) {
        for (std::int64_t j = 1; j < den; j += cfg.heavy_q_stride_cap) {
            if (ell * j < c1) continue;
            if (k * ell * j * (den - j) < c2) continue;
            for (std::int64_t ones = 0; ones + ell <= n; ++ones) {
                if (static_cast<std::int64_t>(out.size()) >= cfg.element_cap)
                    cap_exceeded("enumerate_heavy_forms", cfg.element_cap);
                out.push_back(HeavyBinomialForm{k, ell, j, den, ones});
            }
        }
    }
    return out;
}

std::int64_t element_ones(const CoverElement& e) {
    return std::visit([](const auto& f) { return f.ones; }, e);
}

std::int64_t element_ell(const CoverElement& e) {
    if (const auto* s = std::get_if<SparseForm>(&e)) return s->ell();
    return std::get<HeavyBinomialForm>(e).ell;
}

Pmf cover_element_pmf(const CoverElement& e, std::int64_t n) {
    const std::int64_t ell = element_ell(e);
    const std::int64_t ones = element_ones(e);
    if (ones < 0 || ell < 0 || ell + ones > n)
        throw std::invalid_argument("cover_element_pmf: element does not fit in n="
                                    + std::to_string(n));
    Pmf base;
    if (const auto* s = std::get_if<SparseForm>(&e)) {
        if (s->ell() == 0) {
            base.mass = {1.0};
        } else {
            ProbVector p;
            p.probs.reserve(s->grid.size());
            for (std::size_t i = 0; i < s->grid.size(); ++i) p.probs.push_back(s->prob(i));
            base = pbd_pmf(p);
        }
    } else {
        const auto& h = std::get<HeavyBinomialForm>(e);
        base = binomial_pmf(h.ell, h.q());
    }
    Pmf out;
    out.mass.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t i = 0; i < base.mass.size(); ++i)
        out.mass[static_cast<std::size_t>(ones) + i] = base.mass[i];
    return out;
}

namespace {

// fingerprint of the 1e-12-rounded mass vector; exact vector kept for
// collision resolution
struct Fingerprint {
    std::vector<std::int64_t> rounded;
    std::size_t hash = 0;
};

Fingerprint fingerprint(const Pmf& f) {
    Fingerprint fp;
    fp.rounded.resize(f.mass.size());
    std::size_t h = 1469598103934665603ULL; // FNV-1a
    for (std::size_t i = 0; i < f.mass.size(); ++i) {
        const std::int64_t r = std::llround(f.mass[i] * 1e12);
        fp.rounded[i] = r;
        std::uint64_t u = static_cast<std::uint64_t>(r);
        for (int b = 0; b < 8; ++b) {
            h ^= (u >> (8 * b)) & 0xffu;
            h *= 1099511628211ULL;
        }
    }
    fp.hash = h;
    return fp;
}

} // namespace

CoverBuildResult build_cover(const CoverConfig& cfg, Exec exec) {
    check_cfg(cfg);
    CoverBuildResult res;
    res.n = cfg.n;
    res.k = cfg.k();

    const std::vector<SparseForm> sparse = enumerate_sparse_forms(cfg);
    const std::vector<HeavyBinomialForm> heavy = enumerate_heavy_forms(cfg);
    res.sparse_enumerated = static_cast<std::int64_t>(sparse.size());
    res.heavy_enumerated = static_cast<std::int64_t>(heavy.size());
    if (res.sparse_enumerated + res.heavy_enumerated > cfg.element_cap)
        throw std::length_error("build_cover: element_cap of "
                                + std::to_string(cfg.element_cap) + " exceeded");

    const std::int64_t full_ell = std::min(res.k * res.k * res.k, cfg.n);
    res.certified = (cfg.sparse_ell_cap < 0 || cfg.sparse_ell_cap >= full_ell)
                    && cfg.heavy_q_stride_cap == 1;

    std::vector<CoverElement> all;
    all.reserve(sparse.size() + heavy.size());
    for (const auto& s : sparse) all.emplace_back(s);
    for (const auto& h : heavy) all.emplace_back(h);

    // materialization is the hot part; per-element, order-independent
    std::vector<Pmf> pmfs(all.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(all.size()); ++i)
            pmfs[static_cast<std::size_t>(i)] = cover_element_pmf(all[static_cast<std::size_t>(i)], cfg.n);
    } else {
        for (std::size_t i = 0; i < all.size(); ++i)
            pmfs[i] = cover_element_pmf(all[i], cfg.n);
    }

    // dedup scan stays serial and in enumeration order so the surviving set
    // is schedule-independent
    std::unordered_map<std::size_t, std::vector<std::size_t>> seen;
    seen.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        Fingerprint fp = fingerprint(pmfs[i]);
        auto& bucket = seen[fp.hash];
        bool dup = false;
        for (std::size_t kept : bucket) {
            const Pmf& other = res.pmfs[kept];
            if (other.mass.size() == fp.rounded.size()) {
                bool same = true;
                for (std::size_t z = 0; z < other.mass.size(); ++z)
                    if (std::llround(other.mass[z] * 1e12) != fp.rounded[z]) { same = false; break; }
                if (same) { dup = true; break; }
            }
        }
        if (dup) {
            ++res.duplicates_removed;
        } else {
            bucket.push_back(res.elements.size());
            res.elements.push_back(all[i]);
            res.pmfs.push_back(std::move(pmfs[i]));
        }
    }
    return res;
}

std::size_t best_in_cover(const Pmf& target, const std::vector<Pmf>& pmfs,
                          double& best_tv, Exec exec) {
    if (pmfs.empty()) throw std::invalid_argument("best_in_cover: empty cover");
    double best = 2.0;
    std::size_t best_i = 0;
    if (exec == Exec::Parallel) {
#pragma omp parallel
        {
            double loc = 2.0;
            std::size_t loc_i = 0;
#pragma omp for nowait schedule(static)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(pmfs.size()); ++i) {
                const double d = tv_distance(target, pmfs[static_cast<std::size_t>(i)]);
                if (d < loc || (d == loc && static_cast<std::size_t>(i) < loc_i)) {
                    loc = d;
                    loc_i = static_cast<std::size_t>(i);
                }
            }
#pragma omp critical
            {
                if (loc < best || (loc == best && loc_i < best_i)) {
                    best = loc;
                    best_i = loc_i;
                }
            }
        }
    } else {
        for (std::size_t i = 0; i < pmfs.size(); ++i) {
            const double d = tv_distance(target, pmfs[i]);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
    }
    best_tv = best;
    return best_i;
}

} // namespace pbdl
