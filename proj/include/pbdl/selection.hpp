#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pbdl/dist.hpp"
#include "pbdl/empirical.hpp"
#include "pbdl/parallel.hpp"

// Hypothesis selection by pairwise competition.  Given candidates within
// delta of some target in total variation, the tournament returns one within
// O(delta) using a shared sample.

namespace pbdl {

enum class Outcome { WinFirst, WinSecond, Draw };

// Every candidate lost at least one competition; thrown by callers that must
// surface a tournament with no winner.
struct TournamentFailure : std::runtime_error {
    TournamentFailure() : std::runtime_error("tournament failure: every candidate lost") {}
};

struct CompetitionResult {
    Outcome outcome = Outcome::Draw;
    double p1 = 0.0;     // first candidate's mass on W1 = {w : a(w) >= b(w)}
    double q1 = 0.0;     // second candidate's mass on W1
    double t_stat = 0.0; // empirical sample fraction landing in W1
};

// Pairwise test between two hypotheses over the same domain.  Draw when the
// candidates are statistically indistinguishable at scale delta, otherwise a
// winner.  Ties a(w) == b(w) go into W1 (exact float comparison).
CompetitionResult competition(const Pmf& a, const Pmf& b, const SampleSet& samples,
                              double delta);

// Same test fed with per-value sample counts (counts[v] over the domain).
CompetitionResult competition_counts(const Pmf& a, const Pmf& b,
                                     const std::vector<std::int64_t>& counts,
                                     std::int64_t total, double delta);

struct TournamentConfig {
    double delta = 0.1;
    std::int64_t sample_count = -1; // -1 = use every sample given
    std::uint64_t rng_seed = 0;     // subsampling stream when sample_count caps
};

// Winner = the lowest-index candidate that loses no competition.  nullopt
// when every candidate loses at least once (a Failure; callers surface it).
// Candidate order is meaningful and results never depend on Exec.
std::optional<std::size_t> tournament(const std::vector<Pmf>& candidates,
                                      const SampleSet& samples, double delta,
                                      Exec exec = Exec::Parallel);

std::optional<std::size_t> tournament(const std::vector<Pmf>& candidates,
                                      const SampleSet& samples,
                                      const TournamentConfig& config,
                                      Exec exec = Exec::Parallel);

// ceil((8/delta^2) * ln(40 * n_candidates))
std::int64_t tournament_sample_size(double delta, std::int64_t n_candidates);

// All probability vectors over n variables with every entry a multiple of
// delta/n.  Size is (floor(n/delta)+1)^n; throws std::length_error past cap.
std::vector<ProbVector> generic_grid_cover(std::int64_t n, double delta,
                                           std::int64_t element_cap = 2000000);

} // namespace pbdl
