#include "pbdl/empirical.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace pbdl {

void validate(const SampleSet& s) {
    if (s.domain_max < 0) throw std::invalid_argument("SampleSet: negative domain_max");
    for (std::int64_t v : s.values)
        if (v < 0 || v > s.domain_max)
            throw std::invalid_argument("SampleSet: value outside {0,...,domain_max}");
}

Cdf EmpiricalCdf::to_cdf() const {
    Cdf c;
    c.cum.resize(cum_counts.size());
    for (std::size_t i = 0; i < cum_counts.size(); ++i)
        c.cum[i] = static_cast<double>(cum_counts[i]) / static_cast<double>(sample_count);
    return c;
}

std::int64_t dkw_sample_size(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("dkw_sample_size: epsilon outside (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("dkw_sample_size: delta outside (0,1)");
    const double c = std::max(576.0, 1.125 * std::log(1.0 / delta));
    return static_cast<std::int64_t>(std::ceil(c / (epsilon * epsilon)));
}

std::int64_t classical_dkw_sample_size(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("classical_dkw_sample_size: epsilon outside (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("classical_dkw_sample_size: delta outside (0,1)");
    return static_cast<std::int64_t>(std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon)));
}

double dkw_accuracy(std::int64_t sample_count, double delta) {
    if (sample_count <= 0) throw std::invalid_argument("dkw_accuracy: no samples");
    const double c = std::max(576.0, 1.125 * std::log(1.0 / delta));
    return std::sqrt(c / static_cast<double>(sample_count));
}

std::vector<std::int64_t> value_counts(const SampleSet& s) {
    validate(s);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(s.domain_max) + 1, 0);
    for (std::int64_t v : s.values) ++counts[static_cast<std::size_t>(v)];
    return counts;
}

EmpiricalCdf empirical_cdf_from_counts(const std::vector<std::int64_t>& counts,
                                       double delta) {
    if (counts.empty()) throw std::invalid_argument("empirical_cdf: empty domain");
    EmpiricalCdf e;
    e.cum_counts.resize(counts.size());
    std::int64_t running = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] < 0) throw std::invalid_argument("empirical_cdf: negative count");
        running += counts[i];
        e.cum_counts[i] = running;
    }
    if (running <= 0) throw std::invalid_argument("empirical_cdf: no samples");
    e.sample_count = running;
    e.accuracy_budget = dkw_accuracy(running, delta);
    return e;
}

EmpiricalCdf empirical_cdf(const SampleSet& s, double delta) {
    return empirical_cdf_from_counts(value_counts(s), delta);
}

Pmf empirical_pmf(const EmpiricalCdf& e) {
    Pmf f;
    f.mass.resize(e.cum_counts.size());
    std::int64_t prev = 0;
    for (std::size_t i = 0; i < e.cum_counts.size(); ++i) {
        f.mass[i] = static_cast<double>(e.cum_counts[i] - prev) / static_cast<double>(e.sample_count);
        prev = e.cum_counts[i];
    }
    return f;
}

SampleSet parse_sample_file(std::istream& in, std::int64_t domain_max,
                            const std::string& name) {
    SampleSet s;
    s.domain_max = domain_max;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue; // blank
        if (line[b] == '#') continue;         // comment
        std::size_t e = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(b, e - b + 1);
        std::int64_t v = 0;
        bool ok = !tok.empty();
        for (char ch : tok) {
            if (ch < '0' || ch > '9') { ok = false; break; }
            if (v > (INT64_MAX - (ch - '0')) / 10) { ok = false; break; }
            v = v * 10 + (ch - '0');
        }
        if (!ok)
            throw std::runtime_error(name + ":" + std::to_string(lineno)
                                     + ": not an unsigned decimal integer: '" + tok + "'");
        if (v > domain_max)
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": value "
                                     + std::to_string(v) + " exceeds domain_max "
                                     + std::to_string(domain_max));
        s.values.push_back(v);
    }
    return s;
}

SampleSet load_sample_file(const std::string& path, std::int64_t domain_max) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path);
    return parse_sample_file(in, domain_max, path);
}

void write_sample_file(const std::string& path,
                       const std::vector<std::int64_t>& values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write sample file: " + path);
    for (std::int64_t v : values) out << v << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace pbdl
