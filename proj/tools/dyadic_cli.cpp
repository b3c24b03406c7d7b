// Batch front end: every subcommand emits one JSON document with a config
// header, a separate timestamp field, and a deterministic result payload.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyadic/chains.hpp"
#include "dyadic/counting.hpp"
#include "dyadic/coupling.hpp"
#include "dyadic/enumeration.hpp"
#include "dyadic/mixing.hpp"
#include "dyadic/spectral.hpp"
#include "dyadic/verification.hpp"

namespace {

using dyadic::Rational;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct GlobalOptions {
    std::string out_path;
    int threads = 2;
    std::uint64_t seed = 0;
};

json rational_json(const Rational& r) {
    return json{{"exact", r.to_string()}, {"value", static_cast<double>(r.to_long_double())}};
}

json bigint_json(const dyadic::BigInt& v) { return json(v.to_decimal()); }

json spectral_json(const dyadic::SpectralReport& r) {
    return json{{"k", r.k},
                {"chain", dyadic::chain_kind_name(r.chain)},
                {"lambda2", r.lambda2},
                {"gap", r.gap},
                {"relaxation_time", r.relaxation_time},
                {"residual", r.residual},
                {"iterations", r.iterations},
                {"converged", r.converged}};
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json make_header(const std::string& subcommand, const GlobalOptions& global, json config) {
    config["threads"] = global.threads;
    return json{
        {"tool", "dyadic"},
        {"version", kVersion},
        {"subcommand", subcommand},
        {"config", std::move(config)},
        {"rng",
         json{{"generator", "splitmix64"},
              {"seed", global.seed},
              {"draw_order", "edge: rectangle then side; block: half tiling then direction"},
              {"stream_rule", "state = seed xor (stream+1)*0x9e3779b97f4a7c15, advanced once"}}},
    };
}

void emit(const GlobalOptions& global, const std::string& subcommand, json config, json result) {
    json doc{{"header", make_header(subcommand, global, std::move(config))},
             {"meta", json{{"timestamp", timestamp_utc()}}},
             {"result", std::move(result)}};
    std::string path = global.out_path;
    if (!path.empty()) {
        const char* dir = std::getenv("DYADIC_OUT_DIR");
        std::filesystem::path p(path);
        if (dir != nullptr && p.is_relative()) p = std::filesystem::path(dir) / p;
        std::ofstream out(p);
        if (!out) throw std::runtime_error("cannot open output file " + p.string());
        out << doc.dump(2) << '\n';
    } else {
        std::cout << doc.dump(2) << '\n';
    }
}

dyadic::Tiling parse_start(const std::string& spec, int k) {
    if (spec.empty() || spec == "vertical") return dyadic::vertical_strip_tiling(k);
    if (spec == "horizontal") return dyadic::horizontal_strip_tiling(k);
    return dyadic::canonical_decode(spec);
}

// ---- subcommand bodies --------------------------------------------------

int run_count(const GlobalOptions& global, int k, int cap) {
    json result{{"k", k}, {"tiling_count", bigint_json(dyadic::tiling_count(k, cap))}};
    if (k >= 1) result["growth_estimate"] = static_cast<double>(dyadic::growth_constant_estimate(k, cap));
    if (k >= 2) {
        const dyadic::SubsetCounts subsets = dyadic::subset_counts(k, cap);
        result["half_bisector_fraction"] = rational_json(dyadic::half_bisector_fraction(k, cap));
        result["subset_counts"] = json{{"vertical", bigint_json(subsets.vertical)},
                                       {"horizontal", bigint_json(subsets.horizontal)},
                                       {"both", bigint_json(subsets.both)}};
        result["plus_ratio"] = rational_json(dyadic::plus_ratio(k, cap));
        result["upsilon_count"] = bigint_json(dyadic::upsilon_count(k, cap));
        result["boundary_count"] = bigint_json(dyadic::boundary_count(k, cap));
        result["indicator_variance"] = rational_json(dyadic::vertical_indicator_variance(k, cap));
        result["indicator_dirichlet"] = rational_json(dyadic::vertical_indicator_dirichlet(k, cap));
    }
    emit(global, "count", json{{"k", k}, {"cap", cap}}, std::move(result));
    return 0;
}

int run_enumerate(const GlobalOptions& global, int k, const std::string& set_name,
                  const std::string& dump_path, const std::string& graph_path, bool count_only,
                  bool want_diameter) {
    json config{{"k", k}, {"set", set_name}, {"count_only", count_only}};
    if (count_only) {
        emit(global, "enumerate", std::move(config),
             json{{"k", k}, {"count", bigint_json(dyadic::streaming_tiling_count(k))}, {"streaming", true}});
        return 0;
    }
    const dyadic::TilingIndex index = dyadic::TilingIndex::enumerate(k);
    json result{{"k", k}};
    std::vector<std::string> encodings;
    if (set_name == "all") {
        result["count"] = json(std::to_string(index.size()));
        for (std::size_t i = 0; i < index.size(); ++i) encodings.push_back(index.encoding(i));
    } else if (set_name == "boundary") {
        for (std::size_t i : dyadic::boundary_set(index)) encodings.push_back(index.encoding(i));
        result["count"] = json(std::to_string(encodings.size()));
    } else if (set_name == "upsilon") {
        for (const dyadic::Tiling& t : dyadic::upsilon_set(k)) {
            encodings.push_back(dyadic::canonical_encode(t));
        }
        std::sort(encodings.begin(), encodings.end());
        result["count"] = json(std::to_string(encodings.size()));
    } else {
        throw dyadic::TilingError(dyadic::TilingErrorKind::SizeGuard, "unknown set " + set_name);
    }
    if (!dump_path.empty()) {
        std::ofstream out(dump_path);
        for (const std::string& enc : encodings) out << enc << '\n';
        result["dump_path"] = dump_path;
    }
    if (!graph_path.empty() || want_diameter) {
        const dyadic::FlipGraph graph = dyadic::flip_graph(index);
        json gstats{{"vertices", graph.size()},
                    {"edges", graph.edge_count()},
                    {"connected", dyadic::is_connected(graph)}};
        if (want_diameter) gstats["diameter"] = dyadic::diameter(graph);
        if (!graph_path.empty()) {
            std::ofstream out(graph_path);
            graph.dump_edges(out);
            gstats["path"] = graph_path;
        }
        result["flip_graph"] = std::move(gstats);
    }
    emit(global, "enumerate", std::move(config), std::move(result));
    return 0;
}

int run_gap(const GlobalOptions& global, int k, const std::string& chain, double tol, bool dense_check,
            bool recursion, bool lower_bound, const std::string& matrix_path) {
    dyadic::Workspace ws(global.threads);
    dyadic::SpectralOptions opt;
    opt.threads = global.threads;
    opt.residual_tol = tol;
    const bool edge = chain == "edge";
    const dyadic::TransitionMatrix& matrix = edge ? ws.edge_matrix(k) : ws.block_matrix(k);
    dyadic::SpectralReport report = dyadic::spectral_gap(matrix, opt);
    json result{{"report", spectral_json(report)}};
    if (dense_check) {
        const double dense = dyadic::dense_lambda2(matrix);
        result["dense_lambda2"] = dense;
        result["dense_abs_diff"] = std::fabs(dense - report.lambda2);
    }
    if (recursion) {
        const dyadic::GapRecursionReport rec =
            dyadic::verify_gap_recursion(ws.edge_gap(k), ws.edge_gap(k - 1), ws.block_gap(k));
        result["recursion"] = json{{"k", rec.k},
                                   {"gap_k", rec.gap_k},
                                   {"gap_previous", rec.gap_previous},
                                   {"gap_block", rec.gap_block},
                                   {"ratio", rec.ratio},
                                   {"holds", rec.holds}};
    }
    if (lower_bound) {
        const dyadic::LowerBoundReport lb = dyadic::lower_bound_check(k, edge ? report.gap : ws.edge_gap(k).gap);
        result["lower_bound"] = json{{"k", lb.k},
                                     {"gamma", lb.gamma},
                                     {"dirichlet", rational_json(lb.dirichlet_exact)},
                                     {"variance", rational_json(lb.variance_exact)},
                                     {"rayleigh", lb.rayleigh},
                                     {"holds", lb.holds}};
    }
    if (!matrix_path.empty()) {
        std::ofstream out(matrix_path);
        matrix.write_triplets(out);
        result["matrix_path"] = matrix_path;
    }
    emit(global, "gap",
         json{{"k", k}, {"chain", chain}, {"tol", tol}, {"dense_check", dense_check},
              {"recursion", recursion}, {"lower_bound", lower_bound}},
         std::move(result));
    return 0;
}

int run_mix(const GlobalOptions& global, int k, const std::string& chain, double eps, int t_max,
            const std::string& start_spec, const std::string& curve_path, bool sandwich, bool scaling,
            int stat_t, int stat_stride, std::uint64_t stat_samples) {
    dyadic::Workspace ws(global.threads);
    json result{{"k", k}, {"chain", chain}, {"epsilon", eps}};
    json config{{"k", k}, {"chain", chain}, {"eps", eps}, {"tmax", t_max}, {"start", start_spec},
                {"sandwich", sandwich}, {"scaling", scaling}, {"stat_t", stat_t},
                {"stat_stride", stat_stride}, {"stat_samples", stat_samples}};
    if (stat_t >= 0) {
        if (!curve_path.empty()) {
            const int stride = stat_stride > 0 ? stat_stride : std::max(1, stat_t / 25);
            const dyadic::StatisticTVCurve curve =
                dyadic::statistic_tv_curve(k, stat_t, stride, stat_samples, global.seed, global.threads);
            std::ofstream out(curve_path);
            out << "t,tv,ci\n";
            for (const dyadic::StatisticTVEstimate& p : curve.points) {
                out << p.t << ',' << p.estimate << ',' << p.ci_halfwidth << '\n';
            }
            result["statistic_curve"] = json{{"path", curve_path},
                                             {"points", curve.points.size()},
                                             {"stride", stride},
                                             {"stationary_mass", curve.points.front().stationary_mass}};
            emit(global, "mix", std::move(config), std::move(result));
            return 0;
        }
        const dyadic::StatisticTVEstimate est =
            dyadic::statistic_tv_lower_bound(k, stat_t, stat_samples, global.seed, global.threads);
        result["statistic_tv"] = json{{"t", est.t},
                                      {"samples", est.samples},
                                      {"stationary_mass", est.stationary_mass},
                                      {"estimate", est.estimate},
                                      {"ci_halfwidth", est.ci_halfwidth}};
        emit(global, "mix", std::move(config), std::move(result));
        return 0;
    }
    const dyadic::TilingIndex& index = ws.index(k);
    const dyadic::TransitionMatrix& matrix =
        chain == "edge" ? ws.edge_matrix(k) : ws.block_matrix(k);
    if (!curve_path.empty()) {
        const std::size_t start = start_spec.empty()
                                      ? index.index_of(dyadic::vertical_strip_tiling(k))
                                      : index.index_of(parse_start(start_spec, k));
        const dyadic::TVCurve curve = dyadic::exact_tv_curve(matrix, index, start, t_max);
        std::ofstream out(curve_path);
        out << "t,tv\n";
        for (const dyadic::TVPoint& p : curve.points) out << p.t << ',' << p.tv << '\n';
        result["curve"] = json{{"path", curve_path},
                               {"start", curve.start_encoding},
                               {"points", curve.points.size()},
                               {"final_tv", curve.points.back().tv}};
    }
    std::vector<std::size_t> starts;
    if (k >= 4) starts = dyadic::mixing_start_set(index, global.seed);
    result["mixing_time"] = dyadic::mixing_time(matrix, eps, starts, global.threads);
    result["start_count"] = starts.empty() ? index.size() : starts.size();
    if (sandwich) {
        const dyadic::SandwichReport rep = dyadic::mixing_sandwich(k, eps, global.threads);
        result["sandwich"] = json{{"t_mix", rep.t_mix},
                                  {"t_rel", rep.t_rel},
                                  {"lower_natural", rep.lower_natural},
                                  {"upper_natural", rep.upper_natural},
                                  {"holds_natural", rep.holds_natural},
                                  {"lower_log2", rep.lower_log2},
                                  {"upper_log2", rep.upper_log2},
                                  {"holds_log2", rep.holds_log2},
                                  {"pi_min_power_bound", rep.pi_min_power_bound}};
    }
    if (scaling) {
        std::vector<dyadic::SpectralReport> gaps;
        for (int kk = 1; kk <= k; ++kk) gaps.push_back(ws.edge_gap(kk));
        const dyadic::ScalingReport rep = dyadic::scaling_report(gaps);
        json points = json::array();
        for (const dyadic::ScalingPoint& p : rep.points) {
            points.push_back(json{{"k", p.k}, {"gap", p.gap}, {"t_rel", p.t_rel}});
        }
        result["scaling"] = json{{"points", std::move(points)},
                                 {"slope", rep.slope},
                                 {"lower_exponent", rep.lower_exponent},
                                 {"upper_exponent", rep.upper_exponent},
                                 {"bracketed", rep.bracketed}};
    }
    emit(global, "mix", std::move(config), std::move(result));
    return 0;
}

int run_couple(const GlobalOptions& global, int k, std::int64_t b, bool exhaustive, std::uint64_t samples,
               bool formula_table) {
    const dyadic::DistanceParams params{b};
    const dyadic::ContractionSurvey survey =
        dyadic::contraction_survey(k, params, exhaustive ? 0 : samples, global.seed);
    json cases;
    for (const auto& [label, stats] : survey.cases) {
        cases[dyadic::case_label_name(label)] =
            json{{"pairs", stats.pairs},
                 {"max_ratio", rational_json(stats.max_ratio)},
                 {"worst_bound_ratio", rational_json(stats.worst_bound_ratio)},
                 {"bound_holds", stats.bound_holds},
                 {"identity_holds", stats.identity_holds},
                 {"structure_ok", stats.structure_ok}};
    }
    json result{{"k", survey.k},
                {"b", survey.b},
                {"seed", survey.seed},
                {"exhaustive", survey.exhaustive},
                {"pairs_examined", survey.pairs_examined},
                {"case1a_forced_samples", survey.case1a_forced_samples},
                {"half_fraction", rational_json(survey.half_fraction)},
                {"cases", std::move(cases)},
                {"global_max_ratio", rational_json(survey.global_max_ratio)},
                {"contraction_target", survey.contraction_target},
                {"formulas_imply_contraction", survey.formulas_imply_contraction},
                {"all_bounds_hold", survey.all_bounds_hold},
                {"distance_zero_iff_equal", survey.distance_zero_iff_equal}};
    if (formula_table) {
        json rows = json::array();
        for (const dyadic::FormulaRow& row : dyadic::contraction_formula_table(2, 12, params)) {
            rows.push_back(json{{"k", row.k},
                                {"half_fraction", row.half_fraction},
                                {"worst_case_ratio", row.worst_case_ratio},
                                {"implies_contraction", row.implies_contraction},
                                {"asymptotic_worst_ratio", row.asymptotic_worst_ratio},
                                {"implies_contraction_asymptotic", row.implies_contraction_asymptotic}});
        }
        result["formula_table"] = std::move(rows);
    }
    emit(global, "couple",
         json{{"k", k}, {"b", b}, {"exhaustive", exhaustive}, {"samples", samples},
              {"seed", global.seed}},
         std::move(result));
    return 0;
}

int run_sample(const GlobalOptions& global, int k, const std::string& chain, std::int64_t steps,
               const std::string& start_spec, const std::string& trace_path) {
    const dyadic::Tiling start = parse_start(start_spec, k);
    dyadic::ChainConfig config;
    config.k = k;
    config.kind = chain == "edge" ? dyadic::ChainKind::EdgeFlip : dyadic::ChainKind::Block;
    config.seed = global.seed;
    const bool want_trace = !trace_path.empty();
    const dyadic::TrajectoryResult traj = dyadic::run_trajectory(
        config, start, steps, want_trace ? dyadic::vertical_bisector_indicator : nullptr);
    json result{{"k", k},
                {"chain", chain},
                {"steps", steps},
                {"start", dyadic::canonical_encode(start)},
                {"final", dyadic::canonical_encode(traj.final)}};
    if (want_trace) {
        std::ofstream out(trace_path);
        out << "step,statistic\n";
        for (std::size_t i = 0; i < traj.trace.size(); ++i) out << i << ',' << traj.trace[i] << '\n';
        result["trace_path"] = trace_path;
        result["trace_mean"] =
            traj.trace.empty()
                ? 0.0
                : std::accumulate(traj.trace.begin(), traj.trace.end(), 0.0) / traj.trace.size();
    }
    emit(global, "sample",
         json{{"k", k}, {"chain", chain}, {"steps", steps}, {"start", start_spec},
              {"seed", global.seed}},
         std::move(result));
    return 0;
}

int run_verify_all(const GlobalOptions& global, const std::string& self_path) {
    dyadic::Workspace ws(global.threads);
    dyadic::AcceptanceOptions options;
    options.cli_path = self_path;
    options.threads = global.threads;
    const int failures = dyadic::run_acceptance_with_output(ws, options);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic tilings: exact combinatorics, chains, spectra, coupling"};
    app.require_subcommand(0, 1);
    GlobalOptions global;
    app.add_option("--out", global.out_path, "write the JSON document here instead of stdout");
    app.add_option("--threads", global.threads, "worker threads (results are thread-count independent)");
    app.add_option("--seed", global.seed, "master seed for every random draw");
    bool verify_all = false;
    app.add_flag("--verify-all", verify_all, "run the full verification suite and exit");

    auto* count = app.add_subcommand("count", "exact counting sequences and ratios");
    count->fallthrough();
    int count_k = 4, count_cap = dyadic::kDefaultCountCap;
    count->add_option("--k", count_k, "size exponent")->required();
    count->add_option("--cap", count_cap, "recurrence depth cap");

    auto* enumerate = app.add_subcommand("enumerate", "materialize state spaces and structured subsets");
    enumerate->fallthrough();
    int enum_k = 2;
    std::string enum_set = "all", enum_dump, enum_graph;
    bool enum_count_only = false, enum_diameter = false;
    enumerate->add_option("--k", enum_k, "size exponent")->required();
    enumerate->add_option("--set", enum_set, "all | boundary | upsilon");
    enumerate->add_option("--dump", enum_dump, "write newline-delimited canonical encodings here");
    enumerate->add_option("--flip-graph", enum_graph, "write 'i j multiplicity' edge list here");
    enumerate->add_flag("--count-only", enum_count_only, "streaming count only (required for k = 5)");
    enumerate->add_flag("--diameter", enum_diameter, "include the BFS diameter");

    auto* gap = app.add_subcommand("gap", "spectral gaps, recursion and lower-bound checks");
    gap->fallthrough();
    int gap_k = 2;
    std::string gap_chain = "edge", gap_matrix;
    double gap_tol = 1e-10;
    bool gap_dense = false, gap_recursion = false, gap_lower = false;
    gap->add_option("--k", gap_k, "size exponent")->required();
    gap->add_option("--chain", gap_chain, "edge | block");
    gap->add_option("--tol", gap_tol, "power-iteration residual tolerance");
    gap->add_flag("--dense-check", gap_dense, "compare against the dense eigensolver");
    gap->add_flag("--recursion", gap_recursion, "check gap(k) >= gap_block(k) gap(k-1)");
    gap->add_flag("--lower-bound", gap_lower, "check the distinguishing-statistic bound");
    gap->add_option("--dump-matrix", gap_matrix, "write exact triplets 'i j p/q' here");

    auto* mix = app.add_subcommand("mix", "total-variation curves, mixing times, scaling");
    mix->fallthrough();
    int mix_k = 2, mix_tmax = 64, mix_stat_t = -1, mix_stat_stride = 0;
    double mix_eps = 0.25;
    std::string mix_chain = "edge", mix_start, mix_curve;
    bool mix_sandwich = false, mix_scaling = false;
    std::uint64_t mix_samples = 1'000'000;
    mix->add_option("--k", mix_k, "size exponent")->required();
    mix->add_option("--chain", mix_chain, "edge | block");
    mix->add_option("--eps", mix_eps, "total-variation threshold");
    mix->add_option("--tmax", mix_tmax, "curve horizon");
    mix->add_option("--start", mix_start, "canonical encoding, or vertical | horizontal");
    mix->add_option("--curve", mix_curve, "write the exact TV curve CSV here");
    mix->add_flag("--sandwich", mix_sandwich, "relaxation/mixing sandwich (k = 2..3)");
    mix->add_flag("--scaling", mix_scaling, "log-log relaxation-time diagnostic up to k");
    mix->add_option("--stat-t", mix_stat_t, "Monte-Carlo statistic TV at this t (skips exact work)");
    mix->add_option("--stat-stride", mix_stat_stride, "row spacing for the statistic curve");
    mix->add_option("--samples", mix_samples, "Monte-Carlo sample count");

    auto* couple = app.add_subcommand("couple", "block-coupling contraction survey");
    couple->fallthrough();
    int couple_k = 3;
    std::int64_t couple_b = 64;
    bool couple_exhaustive = false, couple_table = false;
    std::uint64_t couple_samples = 4000;
    couple->add_option("--k", couple_k, "size exponent")->required();
    couple->add_option("--b", couple_b, "half-bisector weight in the metric");
    couple->add_flag("--exhaustive", couple_exhaustive, "every unordered pair (k <= 3)");
    couple->add_option("--samples", couple_samples, "sampled pairs when not exhaustive");
    couple->add_flag("--formula-table", couple_table, "include the per-k bound table");

    auto* sample = app.add_subcommand("sample", "seeded trajectories");
    sample->fallthrough();
    int sample_k = 2;
    std::int64_t sample_steps = 1000;
    std::string sample_chain = "edge", sample_start = "vertical", sample_trace;
    sample->add_option("--k", sample_k, "size exponent")->required();
    sample->add_option("--chain", sample_chain, "edge | block");
    sample->add_option("--steps", sample_steps, "number of steps")->required();
    sample->add_option("--start", sample_start, "canonical encoding, or vertical | horizontal");
    sample->add_option("--trace", sample_trace, "write 'step,statistic' CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (verify_all) return run_verify_all(global, argv[0]);
        if (count->parsed()) return run_count(global, count_k, count_cap);
        if (enumerate->parsed()) {
            return run_enumerate(global, enum_k, enum_set, enum_dump, enum_graph, enum_count_only,
                                 enum_diameter);
        }
        if (gap->parsed()) {
            return run_gap(global, gap_k, gap_chain, gap_tol, gap_dense, gap_recursion, gap_lower,
                           gap_matrix);
        }
        if (mix->parsed()) {
            return run_mix(global, mix_k, mix_chain, mix_eps, mix_tmax, mix_start, mix_curve,
                           mix_sandwich, mix_scaling, mix_stat_t, mix_stat_stride, mix_samples);
        }
        if (couple->parsed()) {
            return run_couple(global, couple_k, couple_b, couple_exhaustive, couple_samples,
                              couple_table);
        }
        if (sample->parsed()) {
            return run_sample(global, sample_k, sample_chain, sample_steps, sample_start, sample_trace);
        }
        std::cerr << app.help();
        return 2;
    } catch (const dyadic::TilingError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
