#include "pbdl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pbdl {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw std::runtime_error("bad input: " + what);
}

} // namespace

DistSpec parse_dist_spec(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        bad("distribution spec needs a \"type\" field");
    DistSpec s;
    const std::string type = j["type"].get<std::string>();
    if (type == "pbd") {
        if (!j.contains("probs") || !j["probs"].is_array())
            bad("pbd spec needs a \"probs\" array");
        s.kind = DistSpec::Kind::Pbd;
        s.pbd.probs = j["probs"].get<std::vector<double>>();
        validate(s.pbd);
        return s;
    }
    if (type == "weighted") {
        for (const char* key : {"weights", "counts", "probs"})
            if (!j.contains(key) || !j[key].is_array())
                bad(std::string("weighted spec needs a \"") + key + "\" array");
        s.kind = DistSpec::Kind::Weighted;
        s.weighted.weights = j["weights"].get<std::vector<double>>();
        s.weighted.counts = j["counts"].get<std::vector<std::int64_t>>();
        s.weighted.probs = j["probs"].get<std::vector<std::vector<double>>>();
        validate(s.weighted);
        return s;
    }
    bad("unknown distribution type \"" + type + "\"");
}

json dist_spec_json(const DistSpec& s) {
    if (s.kind == DistSpec::Kind::Pbd)
        return json{{"type", "pbd"}, {"probs", s.pbd.probs}};
    return weighted_json(s.weighted);
}

DistSpec load_dist_spec(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        bad(path + ": " + e.what());
    }
    return parse_dist_spec(j);
}

json pmf_json(const Pmf& p) {
    return json{{"domain_max", static_cast<std::int64_t>(p.mass.size()) - 1},
                {"mass", p.mass}};
}

Pmf parse_pmf_json(const json& j) {
    if (!j.is_object() || !j.contains("domain_max") || !j.contains("mass") ||
        !j["mass"].is_array())
        bad("pmf needs \"domain_max\" and \"mass\"");
    Pmf p;
    p.mass = j["mass"].get<std::vector<double>>();
    if (static_cast<std::int64_t>(p.mass.size()) != j["domain_max"].get<std::int64_t>() + 1)
        bad("pmf mass length disagrees with domain_max");
    validate(p);
    return p;
}

json element_json(const CoverElement& e) {
    if (std::holds_alternative<SparseForm>(e)) {
        const auto& s = std::get<SparseForm>(e);
        std::vector<double> probs(s.grid.size());
        for (std::size_t i = 0; i < s.grid.size(); ++i) probs[i] = s.prob(i);
        return json{{"form", "sparse"},
                    {"k", s.k},
                    {"ell", s.ell()},
                    {"probs", probs},
                    {"ones", s.ones}};
    }
    const auto& h = std::get<HeavyBinomialForm>(e);
    return json{{"form", "heavy_binomial"},
                {"k", h.k},
                {"ell", h.ell},
                {"q", h.q()},
                {"ones", h.ones}};
}

CoverElement parse_element_json(const json& j, std::int64_t n) {
    if (!j.is_object() || !j.contains("form") || !j["form"].is_string())
        bad("cover element needs a \"form\" field");
    const std::string form = j["form"].get<std::string>();
    const std::int64_t k = j.value("k", std::int64_t{0});
    if (k < 1) bad("cover element needs k >= 1");
    if (form == "sparse") {
        SparseForm s;
        s.k = k;
        s.ones = j.value("ones", std::int64_t{0});
        const auto probs = j.at("probs").get<std::vector<double>>();
        s.grid.reserve(probs.size());
        for (double p : probs) {
            const auto num = std::llround(p * static_cast<double>(k * k));
            if (std::abs(p - static_cast<double>(num) / static_cast<double>(k * k)) > 1e-9)
                bad("sparse prob off the 1/k^2 grid");
            s.grid.push_back(num);
        }
        return CoverElement{s};
    }
    if (form == "heavy_binomial") {
        HeavyBinomialForm h;
        h.k = k;
        h.ell = j.at("ell").get<std::int64_t>();
        h.ones = j.value("ones", std::int64_t{0});
        h.q_den = k * n;
        h.q_num = std::llround(j.at("q").get<double>() * static_cast<double>(h.q_den));
        return CoverElement{h};
    }
    bad("unknown form \"" + form + "\"");
}

json hypothesis_json(const TvHypothesis& h) {
    json j = element_json(h.element);
    j["certified"] = h.certified;
    j["statistic"] = h.statistic;
    j["threshold"] = h.threshold;
    j["test"] = h.accepted_sparse ? "delta" : "h";
    return j;
}

json hypothesis_json(const KolmogorovResult& r) {
    json j = element_json(r.element);
    j["certified"] = r.certified;
    j["statistic"] = r.statistic;
    return j;
}

json hypothesis_json(const HistogramHypothesis& h) {
    std::vector<double> masses(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) masses[i] = h.mass(i);
    return json{{"form", "histogram"},
                {"boundaries", h.boundaries},
                {"masses", masses},
                {"counts", h.counts},
                {"sample_count", h.sample_count}};
}

json cover_json(const CoverBuildResult& c, double epsilon) {
    json elements = json::array();
    for (const auto& e : c.elements) elements.push_back(element_json(e));
    return json{{"n", c.n},
                {"k", c.k},
                {"epsilon", epsilon},
                {"certified", c.certified},
                {"size", static_cast<std::int64_t>(c.elements.size())},
                {"sparse_enumerated", c.sparse_enumerated},
                {"heavy_enumerated", c.heavy_enumerated},
                {"duplicates_removed", c.duplicates_removed},
                {"elements", std::move(elements)}};
}

json weighted_json(const WeightedPbd& w) {
    return json{{"type", "weighted"},
                {"weights", w.weights},
                {"counts", w.counts},
                {"probs", w.probs}};
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + path);
}

} // namespace pbdl
