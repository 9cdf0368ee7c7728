#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "pbdl/cover.hpp"
#include "pbdl/dist.hpp"
#include "pbdl/learner.hpp"
#include "pbdl/weighted.hpp"

// JSON wire formats.  Distribution specs, PMF dumps, hypotheses, and cover
// files all round-trip through here; the CLI and the tests share these.

namespace pbdl {

struct DistSpec {
    enum class Kind { Pbd, Weighted };
    Kind kind = Kind::Pbd;
    ProbVector pbd;      // kind == Pbd
    WeightedPbd weighted; // kind == Weighted
};

// {"type":"pbd","probs":[...]} or
// {"type":"weighted","weights":[...],"counts":[...],"probs":[[...],...]}
DistSpec parse_dist_spec(const nlohmann::json& j);
nlohmann::json dist_spec_json(const DistSpec& s);
DistSpec load_dist_spec(const std::string& path);

// {"domain_max":n,"mass":[...]}
nlohmann::json pmf_json(const Pmf& p);
Pmf parse_pmf_json(const nlohmann::json& j);

// {"form":"sparse","ell":...,"probs":[...],"ones":...} or
// {"form":"heavy_binomial","ell":...,"q":...,"ones":...}; k rides along for
// reconstruction.
nlohmann::json element_json(const CoverElement& e);
CoverElement parse_element_json(const nlohmann::json& j, std::int64_t n);

nlohmann::json hypothesis_json(const TvHypothesis& h);
nlohmann::json hypothesis_json(const KolmogorovResult& r);
// {"form":"histogram","boundaries":[...],"masses":[...],...}
nlohmann::json hypothesis_json(const HistogramHypothesis& h);

nlohmann::json cover_json(const CoverBuildResult& c, double epsilon);

nlohmann::json weighted_json(const WeightedPbd& w);

// FNV-1a, used to fingerprint spec files in sample sidecars.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::string fnv1a64_hex(const std::string& bytes);

std::string read_file(const std::string& path); // throws std::runtime_error
void write_file(const std::string& path, const std::string& content);

} // namespace pbdl
