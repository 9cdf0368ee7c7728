// pbdl: sample generation, cover construction, learning, selection, and the
// seeded benchmark harness, all over the JSON/text formats in pbdl/io.hpp.
//
// Exit codes: 0 success, 2 usage error, 3 data/format error, 4 guarantee not
// certified (learner/tournament ran but could not certify or pick a winner).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbdl/bench.hpp"
#include "pbdl/cover.hpp"
#include "pbdl/dist.hpp"
#include "pbdl/empirical.hpp"
#include "pbdl/io.hpp"
#include "pbdl/learner.hpp"
#include "pbdl/parallel.hpp"
#include "pbdl/selection.hpp"
#include "pbdl/weighted.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNotCertified = 4;

struct SampleArgs {
    std::string spec;
    std::int64_t count = 0;
    std::uint64_t seed = 1;
    std::string out;
};

struct LearnArgs {
    std::string samples;
    std::int64_t n = 0;
    double epsilon = 0.25;
    double tau = 1.0;
    std::int64_t k = 0;
    double delta = 0.1; // confidence for the informational sample sizing
    double delta_base = -1.0;
    double delta_per_support = -1.0;
    double h_threshold = -1.0;
    bool classical = false; // report the classical DKW sizing as the bar
    std::string out;
};

struct CoverArgs {
    std::int64_t n = 0;
    double epsilon = 0.25;
    std::int64_t k = 0;
    std::int64_t cap_ell = -1;
    std::string out;
};

struct SelectArgs {
    std::string candidates;
    std::string samples;
    double delta = 0.1;
    std::string out;
};

struct WeightedLearnArgs {
    std::vector<double> weights;
    std::vector<std::int64_t> counts;
    std::string samples;
    double epsilon = 0.25;
    std::string out;
};

struct HardInstanceArgs {
    std::int64_t k = 200;
    std::uint64_t seed = 7;
    std::string out;
};

struct EvalArgs {
    std::string hypothesis;
    std::string truth;
    std::string out;
};

struct BenchArgs {
    std::string config;
    std::string scenario;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double epsilon = 0.0;
    double tau = 0.0;
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::string out;
};

void emit(const std::string& path, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-")
        std::cout << text;
    else
        pbdl::write_file(path, text);
}

// ---- sample -----------------------------------------------------------------

int cmd_sample(const SampleArgs& a) {
    const std::string spec_text = pbdl::read_file(a.spec);
    const pbdl::DistSpec spec = pbdl::parse_dist_spec(json::parse(spec_text));

    std::string payload;
    std::string format;
    if (spec.kind == pbdl::DistSpec::Kind::Pbd) {
        format = "integer";
        for (std::int64_t v : pbdl::sample_pbd(spec.pbd, a.count, a.seed)) {
            payload += std::to_string(v);
            payload += '\n';
        }
    } else {
        bool integral = true;
        for (double w : spec.weighted.weights)
            integral = integral && std::fabs(w) <= 4.5e15 && w == std::floor(w);
        format = integral ? "integer" : "real";
        char buf[64];
        for (double v : pbdl::sample_weighted(spec.weighted, a.count, a.seed)) {
            if (integral)
                payload += std::to_string(std::llround(v));
            else {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                payload += buf;
            }
            payload += '\n';
        }
    }
    pbdl::write_file(a.out, payload);

    const json meta = {
        {"spec", a.spec},
        {"spec_hash", pbdl::fnv1a64_hex(spec_text)},
        {"count", a.count},
        {"seed", a.seed},
        {"format", format},
    };
    pbdl::write_file(a.out + ".meta.json", meta.dump(2) + "\n");
    return 0;
}

// ---- learn ------------------------------------------------------------------

json sizing_block(std::int64_t paper, std::int64_t classical, bool use_classical,
                  std::int64_t have) {
    const std::int64_t bar = use_classical ? classical : paper;
    return json{{"paper", paper},
                {"classical", classical},
                {"rule", use_classical ? "classical" : "paper"},
                {"sufficient_samples", have >= bar}};
}

int cmd_learn_tv(const LearnArgs& a) {
    const pbdl::SampleSet s = pbdl::load_sample_file(a.samples, a.n);
    pbdl::TvLearnerConfig cfg;
    cfg.epsilon = a.epsilon;
    cfg.tau = a.tau;
    cfg.k_override = a.k;
    cfg.thresholds.delta_base = a.delta_base;
    cfg.thresholds.delta_per_support = a.delta_per_support;
    cfg.thresholds.h = a.h_threshold;

    const pbdl::TvHypothesis h = pbdl::learn_tv(s, cfg);
    json j = pbdl::hypothesis_json(h);
    j["sample_count"] = s.values.size();
    j["sizing"] = sizing_block(
        pbdl::tv_sample_size(cfg),
        pbdl::classical_dkw_sample_size(cfg.eps_alpha(), 0.05), a.classical,
        static_cast<std::int64_t>(s.values.size()));
    emit(a.out, j);
    if (!h.certified) {
        std::cerr << "learn tv: hypothesis written but not certified\n";
        return kExitNotCertified;
    }
    return 0;
}

int cmd_learn_kolmogorov(const LearnArgs& a) {
    const pbdl::SampleSet s = pbdl::load_sample_file(a.samples, a.n);
    const pbdl::KolmogorovResult r = pbdl::learn_kolmogorov(s, a.epsilon, a.k);
    json j = pbdl::hypothesis_json(r);
    j["sample_count"] = s.values.size();
    // Thm 4.2's sizing is the DKW rule at accuracy epsilon/4.
    j["sizing"] = sizing_block(
        pbdl::kolmogorov_sample_size(a.epsilon, a.delta),
        pbdl::classical_dkw_sample_size(a.epsilon / 4.0, a.delta), a.classical,
        static_cast<std::int64_t>(s.values.size()));
    emit(a.out, j);
    if (!r.certified) {
        std::cerr << "learn kolmogorov: hypothesis written but not certified\n";
        return kExitNotCertified;
    }
    return 0;
}

int cmd_learn_unimodal(const LearnArgs& a) {
    const pbdl::SampleSet s = pbdl::load_sample_file(a.samples, a.n);
    const pbdl::HistogramHypothesis h = pbdl::learn_unimodal(s, a.epsilon);
    const std::int64_t required = pbdl::unimodal_sample_size(a.n, a.epsilon);
    const bool enough = static_cast<std::int64_t>(s.values.size()) >= required;
    json j = pbdl::hypothesis_json(h);
    j["sizing"] = {{"required", required}, {"sufficient_samples", enough}};
    emit(a.out, j);
    if (!enough) {
        std::cerr << "learn unimodal: hypothesis written but sample count "
                  << s.values.size() << " is below the sizing rule " << required
                  << "\n";
        return kExitNotCertified;
    }
    return 0;
}

// ---- cover ------------------------------------------------------------------

pbdl::CoverBuildResult build_from_args(const CoverArgs& a) {
    pbdl::CoverConfig cfg;
    cfg.n = a.n;
    cfg.epsilon = a.epsilon;
    cfg.k_override = a.k;
    cfg.sparse_ell_cap = a.cap_ell;
    return pbdl::build_cover(cfg);
}

int cmd_cover_build(const CoverArgs& a) {
    const pbdl::CoverBuildResult c = build_from_args(a);
    emit(a.out, pbdl::cover_json(c, a.epsilon));
    if (!c.certified) {
        std::cerr << "cover build: cover written but caps voided certification\n";
        return kExitNotCertified;
    }
    return 0;
}

int cmd_cover_stats(const CoverArgs& a) {
    const pbdl::CoverBuildResult c = build_from_args(a);
    json j = pbdl::cover_json(c, a.epsilon);
    j.erase("elements");
    emit(a.out, j);
    return 0;
}

// ---- select -----------------------------------------------------------------

int cmd_select(const SelectArgs& a) {
    const json cj = json::parse(pbdl::read_file(a.candidates));
    const std::int64_t n = cj.at("n").get<std::int64_t>();
    std::vector<pbdl::Pmf> pmfs;
    std::vector<json> elements;
    for (const json& ej : cj.at("elements")) {
        const pbdl::CoverElement e = pbdl::parse_element_json(ej, n);
        pmfs.push_back(pbdl::cover_element_pmf(e, n));
        elements.push_back(ej);
    }
    if (pmfs.empty()) throw std::runtime_error("select: candidate list is empty");
    const pbdl::SampleSet s = pbdl::load_sample_file(a.samples, n);

    const auto winner = pbdl::tournament(pmfs, s, a.delta);
    if (!winner) {
        emit(a.out, json{{"failure", true},
                         {"delta", a.delta},
                         {"candidates", pmfs.size()},
                         {"sample_count", s.values.size()}});
        std::cerr << "select: failure, every candidate lost a competition\n";
        return kExitNotCertified;
    }
    emit(a.out, json{{"winner_index", *winner},
                     {"element", elements[*winner]},
                     {"delta", a.delta},
                     {"tv_guarantee", 6.0 * a.delta},
                     {"candidates", pmfs.size()},
                     {"sample_count", s.values.size()}});
    return 0;
}

// ---- weighted ---------------------------------------------------------------

int cmd_weighted_learn(const WeightedLearnArgs& a) {
    const std::vector<double> values = pbdl::load_weighted_sample_file(a.samples);
    pbdl::WeightedLearnConfig cfg;
    cfg.epsilon = a.epsilon;
    const pbdl::WeightedLearnResult r =
        pbdl::learn_weighted(values, a.weights, a.counts, cfg);
    emit(a.out, json{{"hypothesis", pbdl::weighted_json(r.hypothesis)},
                     {"winner_index", r.winner_index},
                     {"product_size", r.product_size},
                     {"required_samples", r.required_samples},
                     {"sample_count", values.size()},
                     {"delta", r.delta},
                     {"tv_guarantee", 6.0 * r.delta},
                     {"certified", r.certified}});
    if (!r.certified) {
        std::cerr << "weighted learn: hypothesis written but not certified\n";
        return kExitNotCertified;
    }
    return 0;
}

int cmd_weighted_hard(const HardInstanceArgs& a) {
    const pbdl::HardInstance h = pbdl::make_lower_bound_instance(a.k, a.seed);
    const double p = 100.0 / static_cast<double>(a.k);
    const auto s = static_cast<double>(h.support_set.size());
    emit(a.out, json{{"k", h.k},
                     {"seed", a.seed},
                     {"support_set", h.support_set},
                     {"support_prob", p},
                     {"prob_vector", h.prob_vector},
                     {"weight_fn", h.weight_fn},
                     {"mass_at_support", p * std::pow(1.0 - p, s - 1.0)},
                     {"mass_at_zero", std::pow(1.0 - p, s)}});
    return 0;
}

// ---- eval -------------------------------------------------------------------

pbdl::Pmf truth_pmf(const json& j) {
    if (j.contains("mass")) return pbdl::parse_pmf_json(j);
    const pbdl::DistSpec spec = pbdl::parse_dist_spec(j);
    if (spec.kind == pbdl::DistSpec::Kind::Pbd) return pbdl::pbd_pmf(spec.pbd);
    const pbdl::WeightedPmf w = pbdl::weighted_pmf(spec.weighted);
    if (!w.range.integral || w.range.ivalues.front() < 0)
        throw std::runtime_error(
            "eval: weighted truth has a non-integer or negative range; no "
            "common integer domain with the hypothesis");
    pbdl::Pmf p;
    p.mass.assign(static_cast<std::size_t>(w.range.ivalues.back()) + 1, 0.0);
    for (std::size_t i = 0; i < w.range.ivalues.size(); ++i)
        p.mass[static_cast<std::size_t>(w.range.ivalues[i])] = w.mass[i];
    return p;
}

pbdl::Pmf hypothesis_pmf(const json& j, std::int64_t n, bool& certified,
                         std::int64_t& sample_count) {
    certified = j.value("certified", true);
    if (j.contains("form") && j.at("form") == "histogram") {
        pbdl::HistogramHypothesis h;
        h.boundaries = j.at("boundaries").get<std::vector<std::int64_t>>();
        h.counts = j.at("counts").get<std::vector<std::int64_t>>();
        h.sample_count = j.at("sample_count").get<std::int64_t>();
        sample_count = h.sample_count;
        return pbdl::histogram_pmf(h);
    }
    if (j.contains("form"))
        return pbdl::cover_element_pmf(pbdl::parse_element_json(j, n), n);
    if (j.contains("mass")) return pbdl::parse_pmf_json(j);
    if (j.contains("type")) return truth_pmf(j);
    throw std::runtime_error("eval: unrecognized hypothesis format");
}

int cmd_eval(const EvalArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    const json tj = json::parse(pbdl::read_file(a.truth));
    const pbdl::Pmf truth = truth_pmf(tj);
    const json hj = json::parse(pbdl::read_file(a.hypothesis));
    bool certified = true;
    std::int64_t sample_count = hj.value("sample_count", std::int64_t{0});
    const pbdl::Pmf hyp = hypothesis_pmf(
        hj, static_cast<std::int64_t>(truth.mass.size()) - 1, certified,
        sample_count);

    const double d_tv = pbdl::tv_distance(truth, hyp);
    const double d_k = pbdl::kolmogorov_distance(truth, hyp);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(a.out, json{{"d_tv", d_tv},
                     {"d_k", d_k},
                     {"certified", certified},
                     {"sample_count", sample_count},
                     {"wall_time", wall},
                     {"records", json::array({json{{"d_tv", d_tv}, {"d_k", d_k}}})}});
    return 0;
}

// ---- bench ------------------------------------------------------------------

int cmd_bench(const BenchArgs& a) {
    pbdl::ScenarioParams p;
    std::string out = a.out;
    if (!a.config.empty()) {
        const json cj = json::parse(pbdl::read_file(a.config));
        p.name = cj.value("scenario", std::string{});
        if (cj.contains("trials")) {
            p.trials = cj.at("trials").get<std::int64_t>();
            if (p.trials < 1) throw std::runtime_error("bench: trials must be >= 1");
        }
        p.base_seed = cj.value("base_seed", p.base_seed);
        p.epsilon = cj.value("epsilon", p.epsilon);
        p.tau = cj.value("tau", p.tau);
        p.n = cj.value("n", p.n);
        p.k_override = cj.value("k_override", p.k_override);
        if (out.empty()) out = cj.value("output", std::string{});
    }
    if (!a.scenario.empty()) p.name = a.scenario;
    if (a.trials > 0) p.trials = a.trials;
    if (a.seed_set) p.base_seed = a.seed;
    if (a.epsilon > 0.0) p.epsilon = a.epsilon;
    if (a.tau > 0.0) p.tau = a.tau;
    if (a.n > 0) p.n = a.n;
    if (a.k > 0) p.k_override = a.k;

    const auto& names = pbdl::scenario_names();
    if (std::find(names.begin(), names.end(), p.name) == names.end()) {
        std::cerr << "bench: unknown scenario \"" << p.name << "\"; choose from:";
        for (const auto& s : names) std::cerr << ' ' << s;
        std::cerr << "\n";
        return kExitUsage;
    }

    const pbdl::ScenarioResult r = pbdl::run_scenario(p);
    if (out.empty() || out == "-") {
        pbdl::write_csv(std::cout, r);
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open output file: " + out);
        pbdl::write_csv(f, r);
        std::cout << "scenario " << r.name << ": " << (r.pass ? "pass" : "FAIL")
                  << " success=" << r.success_fraction << " (required "
                  << r.required_fraction << ") " << r.stat_label << "=" << r.stat
                  << " in " << r.total_seconds << "s\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson binomial distribution learning toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads (overrides the PBDL_THREADS environment "
                   "variable; 0 = default)");

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "draw samples from a spec JSON");
    sample->add_option("--spec", sa.spec, "distribution spec JSON")->required();
    sample->add_option("--count", sa.count, "number of draws")->required();
    sample->add_option("--seed", sa.seed, "base seed");
    sample->add_option("--out", sa.out, "output sample file")->required();

    auto* learn = app.add_subcommand("learn", "learn a hypothesis from samples");
    learn->require_subcommand(1);
    LearnArgs la;
    CLI::App* learns[3];
    learns[0] = learn->add_subcommand("tv", "total-variation cover learner");
    learns[1] = learn->add_subcommand("kolmogorov", "Kolmogorov-distance cover learner");
    learns[2] = learn->add_subcommand("unimodal", "adaptive-histogram unimodal learner");
    for (CLI::App* l : learns) {
        l->add_option("--samples", la.samples, "sample file")->required();
        l->add_option("--n", la.n, "domain bound (values in 0..n)")->required();
        l->add_option("--epsilon", la.epsilon, "target accuracy")->required();
        l->add_option("--out", la.out, "hypothesis JSON (default stdout)");
    }
    learns[0]->add_option("--tau", la.tau, "exponent trade-off knob");
    learns[0]->add_option("--k", la.k, "cover granularity override");
    learns[0]->add_option("--delta-base", la.delta_base,
                          "threshold override: constant term");
    learns[0]->add_option("--delta-per-support", la.delta_per_support,
                          "threshold override: per-support-point term");
    learns[0]->add_option("--h-threshold", la.h_threshold,
                          "threshold override: heavy-form CDF test");
    learns[1]->add_option("--k", la.k, "cover granularity override");
    learns[1]->add_option("--delta", la.delta, "confidence for the sizing report");
    for (int i : {0, 1})
        learns[i]->add_flag("--classical-dkw", la.classical,
                            "judge sample sufficiency by the classical DKW "
                            "constant instead of the paper's");

    CoverArgs ca;
    auto* cover = app.add_subcommand("cover", "enumerate the hypothesis cover");
    cover->require_subcommand(1);
    auto* cover_build = cover->add_subcommand("build", "write the full cover JSON");
    auto* cover_stats = cover->add_subcommand("stats", "print cover metadata only");
    for (CLI::App* c : {cover_build, cover_stats}) {
        c->add_option("--n", ca.n, "number of variables")->required();
        c->add_option("--epsilon", ca.epsilon, "cover accuracy");
        c->add_option("--k", ca.k, "granularity override (default ceil(1/epsilon))");
        c->add_option("--cap-ell", ca.cap_ell, "sparse size cap (voids certification)");
        c->add_option("--out", ca.out, "output JSON (default stdout)");
    }

    SelectArgs se;
    auto* select = app.add_subcommand("select", "tournament over candidate PMFs");
    select->add_option("--candidates", se.candidates, "cover JSON")->required();
    select->add_option("--samples", se.samples, "sample file")->required();
    select->add_option("--delta", se.delta, "competition scale")->required();
    select->add_option("--out", se.out, "winner JSON (default stdout)");

    auto* weighted = app.add_subcommand("weighted", "weighted-sum learners");
    weighted->require_subcommand(1);
    WeightedLearnArgs wl;
    auto* wlearn = weighted->add_subcommand("learn", "product-cover tournament learner");
    wlearn->add_option("--weights", wl.weights, "distinct weights")
        ->required()
        ->delimiter(',');
    wlearn->add_option("--counts", wl.counts, "variables per weight")
        ->required()
        ->delimiter(',');
    wlearn->add_option("--samples", wl.samples, "weighted-range sample file")->required();
    wlearn->add_option("--epsilon", wl.epsilon, "accuracy, also the tournament delta");
    wlearn->add_option("--out", wl.out, "result JSON (default stdout)");
    HardInstanceArgs hi;
    auto* whard = weighted->add_subcommand("hard-instance",
                                           "lower-bound instance generator");
    whard->add_option("--k", hi.k, "number of variables (even, >= 100)");
    whard->add_option("--seed", hi.seed, "support-set seed");
    whard->add_option("--out", hi.out, "instance JSON (default stdout)");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "distances between hypothesis and truth");
    eval->add_option("--hypothesis", ea.hypothesis, "hypothesis JSON")->required();
    eval->add_option("--truth", ea.truth, "truth spec or PMF JSON")->required();
    eval->add_option("--out", ea.out, "report JSON (default stdout)");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "seeded acceptance scenarios");
    bench->add_option("--config", ba.config, "experiment config JSON");
    bench->add_option("--scenario", ba.scenario, "scenario name");
    bench->add_option("--trials", ba.trials, "trial count override");
    auto* seed_opt = bench->add_option("--seed", ba.seed, "base seed override");
    bench->add_option("--epsilon", ba.epsilon, "epsilon override");
    bench->add_option("--tau", ba.tau, "tau override");
    bench->add_option("--n", ba.n, "n override");
    bench->add_option("--k", ba.k, "cover granularity override");
    bench->add_option("--out", ba.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    ba.seed_set = seed_opt->count() > 0;
    pbdl::apply_thread_count(threads);

    try {
        if (*sample) return cmd_sample(sa);
        if (*learns[0]) return cmd_learn_tv(la);
        if (*learns[1]) return cmd_learn_kolmogorov(la);
        if (*learns[2]) return cmd_learn_unimodal(la);
        if (*cover_build) return cmd_cover_build(ca);
        if (*cover_stats) return cmd_cover_stats(ca);
        if (*select) return cmd_select(se);
        if (*wlearn) return cmd_weighted_learn(wl);
        if (*whard) return cmd_weighted_hard(hi);
        if (*eval) return cmd_eval(ea);
        if (*bench) return cmd_bench(ba);
    } catch (const pbdl::TournamentFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotCertified;
    } catch (const pbdl::NoAcceptingElement& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotCertified;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
