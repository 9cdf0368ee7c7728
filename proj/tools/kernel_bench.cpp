// Timing harness for the OpenMP kernels against their serial reference
// paths.  Every kernel must produce bit-identical results in both modes;
// a mismatch fails the run, so this doubles as a determinism check.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "pbdl/cover.hpp"
#include "pbdl/dist.hpp"
#include "pbdl/empirical.hpp"
#include "pbdl/learner.hpp"
#include "pbdl/parallel.hpp"
#include "pbdl/rng.hpp"
#include "pbdl/selection.hpp"

using namespace pbdl;

namespace {

using clock_type = std::chrono::steady_clock;

int g_failures = 0;

template <typename F>
double time_ms(int repeats, F&& f) {
    const auto t0 = clock_type::now();
    for (int i = 0; i < repeats; ++i) f();
    const double total =
        std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
    return total / repeats;
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-22s %10.2f ms %10.2f ms %7.2fx   %s\n", kernel, serial_ms,
                parallel_ms, serial_ms / parallel_ms, match ? "match" : "MISMATCH");
    if (!match) ++g_failures;
}

bool same_pmfs(const std::vector<Pmf>& a, const std::vector<Pmf>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].mass != b[i].mass) return false;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    int repeats = 3;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--threads" && i + 1 < argc)
            apply_thread_count(std::atoi(argv[++i]));
        else if (arg == "--repeats" && i + 1 < argc)
            repeats = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--threads T] [--repeats R]\n", argv[0]);
            return 2;
        }
    }
    std::printf("threads: %d, repeats per kernel: %d\n", max_threads(), repeats);
    std::printf("%-22s %13s %13s %8s   %s\n", "kernel", "serial", "parallel",
                "speedup", "check");

    // cover construction at the acceptance scale
    CoverConfig cc;
    cc.n = 40;
    cc.k_override = 2;
    CoverBuildResult serial_cover, parallel_cover;
    const double c_ser = time_ms(repeats, [&] { serial_cover = build_cover(cc, Exec::Serial); });
    const double c_par = time_ms(repeats, [&] { parallel_cover = build_cover(cc, Exec::Parallel); });
    report("build_cover", c_ser, c_par, same_pmfs(serial_cover.pmfs, parallel_cover.pmfs));

    // exhaustive nearest-element scan
    Rng rng(17);
    ProbVector target;
    for (int i = 0; i < 40; ++i) target.probs.push_back(rng.next_unit());
    const Pmf target_pmf = pbd_pmf(target);
    std::size_t idx_ser = 0, idx_par = 0;
    double tv_ser = 0.0, tv_par = 0.0;
    const double b_ser = time_ms(repeats, [&] {
        idx_ser = best_in_cover(target_pmf, serial_cover.pmfs, tv_ser, Exec::Serial);
    });
    const double b_par = time_ms(repeats, [&] {
        idx_par = best_in_cover(target_pmf, serial_cover.pmfs, tv_par, Exec::Parallel);
    });
    report("best_in_cover", b_ser, b_par, idx_ser == idx_par && tv_ser == tv_par);

    // tournament over a candidate slice
    std::vector<Pmf> candidates(serial_cover.pmfs.begin(),
                                serial_cover.pmfs.begin() +
                                    std::min<std::size_t>(300, serial_cover.pmfs.size()));
    SampleSet samples;
    samples.domain_max = 40;
    samples.values = sample_pbd(target, 6081, 99);
    std::optional<std::size_t> w_ser, w_par;
    const double t_ser = time_ms(repeats, [&] {
        w_ser = tournament(candidates, samples, 0.1, Exec::Serial);
    });
    const double t_par = time_ms(repeats, [&] {
        w_par = tournament(candidates, samples, 0.1, Exec::Parallel);
    });
    report("tournament", t_ser, t_par, w_ser == w_par);

    // full TV learner scan (cover build + statistic sweep)
    TvLearnerConfig lc;
    lc.epsilon = 0.35;
    lc.k_override = 2;
    lc.thresholds.delta_base = 0.12;
    lc.thresholds.h = 0.12;
    const auto counts = sample_pbd_counts(target, 200000, 7);
    Pmf h_ser, h_par;
    const double l_ser = time_ms(repeats, [&] {
        h_ser = cover_element_pmf(learn_tv_counts(counts, lc, Exec::Serial).element, 40);
    });
    const double l_par = time_ms(repeats, [&] {
        h_par = cover_element_pmf(learn_tv_counts(counts, lc, Exec::Parallel).element, 40);
    });
    report("learn_tv", l_ser, l_par, h_ser.mass == h_par.mass);

    if (g_failures > 0) {
        std::printf("%d kernel(s) diverged between serial and parallel\n", g_failures);
        return 1;
    }
    return 0;
}
