#pragma once

#include <cstdint>

// Pinned acceptance constants.  Everything here was measured on the reference
// seeds and then frozen; bench/baselines.json carries the same numbers with
// the measurement context.  Change these only together with that file.

namespace pbdl::baselines {

// tv_learner scenario (criterion: error <= best-in-cover + slack in >= 90/100)
inline constexpr double kTvEpsilon = 0.35;
inline constexpr double kTvTau = 1.0;
inline constexpr std::int64_t kTvK = 2;
inline constexpr std::int64_t kTvN = 40;
// Desk-scale test thresholds (the defaults derived from epsilon are sized for
// asymptotic epsilon and accept far-off elements at epsilon this large, so
// the scenario pins tighter ones; certification is correctly reported false).
inline constexpr double kTvDeltaBase = 0.12;
inline constexpr double kTvHThreshold = 0.12;
// Measured max over trials of (returned error - best-in-cover error) was
// 0.278 on the reference seeds; pinned with a small rounding margin.
inline constexpr double kTvMeasuredSlack = 0.28;

// kolmogorov_learner scenario
inline constexpr double kKolEpsilon = 0.2;

// kolmogorov_tv_gap scenario: max over pairs of (d_TV - 2 d_K) * k.
inline constexpr double kGapResidualBound = 1.0; // re-pinned after calibration

} // namespace pbdl::baselines
