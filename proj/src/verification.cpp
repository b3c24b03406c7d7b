#include "dyadic/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dyadic/counting.hpp"

namespace dyadic {

const TilingIndex& Workspace::index(int k) {
    auto it = indices_.find(k);
    if (it == indices_.end()) it = indices_.emplace(k, TilingIndex::enumerate(k)).first;
    return it->second;
}

const BlockStructure& Workspace::blocks(int k) {
    auto it = blocks_.find(k);
    if (it == blocks_.end()) it = blocks_.emplace(k, BlockStructure::build(index(k), index(k - 1))).first;
    return it->second;
}

const TransitionMatrix& Workspace::edge_matrix(int k) {
    auto it = edge_.find(k);
    if (it == edge_.end()) it = edge_.emplace(k, TransitionMatrix::edge(index(k))).first;
    return it->second;
}

const TransitionMatrix& Workspace::block_matrix(int k) {
    auto it = block_.find(k);
    if (it == block_.end()) it = block_.emplace(k, TransitionMatrix::block(blocks(k))).first;
    return it->second;
}

const SpectralReport& Workspace::edge_gap(int k) {
    auto it = edge_gap_.find(k);
    if (it == edge_gap_.end()) {
        SpectralOptions opt;
        opt.threads = threads_;
        it = edge_gap_.emplace(k, spectral_gap(edge_matrix(k), opt)).first;
    }
    return it->second;
}

const SpectralReport& Workspace::block_gap(int k) {
    auto it = block_gap_.find(k);
    if (it == block_gap_.end()) {
        SpectralOptions opt;
        opt.threads = threads_;
        it = block_gap_.emplace(k, spectral_gap(block_matrix(k), opt)).first;
    }
    return it->second;
}

namespace {

using nlohmann::json;

constexpr long double kInverseGolden = 0.61803398874989484820458683436563811772L;  // 1/phi

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---- criterion bodies -------------------------------------------------

CriterionResult check_enumeration_counts(Workspace& ws) {
    CriterionResult r{1, "enumeration counts match the exact recurrence, k = 0..4", true, "", 0};
    std::string detail;
    for (int k = 0; k <= 4; ++k) {
        const BigInt counted(static_cast<std::int64_t>(ws.index(k).size()));
        const BigInt expected = tiling_count(k);
        if (counted != expected) r.pass = false;
        detail += (k ? " " : "") + counted.to_decimal();
    }
    r.details = "|states| = " + detail;
    return r;
}

CriterionResult check_subset_counts(Workspace& ws) {
    CriterionResult r{2, "bisector subset scans equal the closed forms, k = 2..4", true, "", 0};
    for (int k = 2; k <= 4; ++k) {
        const TilingIndex& idx = ws.index(k);
        std::int64_t vertical = 0, horizontal = 0, both = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const HalfBisectors h = half_bisectors(idx.tiling(i));
            vertical += h.vertical_bisector();
            horizontal += h.horizontal_bisector();
            both += h.vertical_bisector() && h.horizontal_bisector();
        }
        const SubsetCounts expected = subset_counts(k);
        const bool ok = BigInt(vertical) == expected.vertical && BigInt(horizontal) == expected.horizontal &&
                        BigInt(both) == expected.both &&
                        expected.vertical + expected.horizontal - expected.both == tiling_count(k);
        if (!ok) r.pass = false;
        r.details += "k=" + std::to_string(k) + ":(" + std::to_string(vertical) + "," +
                     std::to_string(horizontal) + "," + std::to_string(both) + ") ";
    }
    return r;
}

CriterionResult check_half_fraction(Workspace&) {
    CriterionResult r{3, "half-bisector fraction: dual definitions, monotone, limit", true, "", 0};
    Rational prev = half_bisector_fraction(2);
    for (int k = 3; k <= 12; ++k) {
        const Rational direct = half_bisector_fraction(k);
        const Rational recurrence = Rational(1) / (Rational(2) - prev * prev);
        if (direct != recurrence) r.pass = false;
        if (!(prev < direct)) r.pass = false;
        prev = direct;
    }
    for (int k = 2; k <= 12; ++k) {
        // f < (sqrt(5)-1)/2 exactly: (2p+q)^2 < 5 q^2
        const Rational f = half_bisector_fraction(k);
        const BigInt lhs = (BigInt(2) * f.numerator() + f.denominator()).pow(2);
        const BigInt rhs = BigInt(5) * f.denominator().pow(2);
        if (!(lhs < rhs)) r.pass = false;
    }
    const long double f12 = half_bisector_fraction(12).to_long_double();
    const long double limit_gap = std::fabs(static_cast<double>(f12 - kInverseGolden));
    if (limit_gap > 1e-3) r.pass = false;
    r.details = "f_12 = " + fmt(static_cast<double>(f12)) + ", |f_12 - 1/phi| = " + fmt(limit_gap);
    return r;
}

CriterionResult check_plus_ratio(Workspace&) {
    CriterionResult r{4, "whole/double-bisector ratio identity and golden limit", true, "", 0};
    for (int k = 2; k <= 12; ++k) {
        const Rational ratio = plus_ratio(k);
        const Rational f = half_bisector_fraction(k);
        if (ratio != Rational(2) / (f * f) - Rational(1)) r.pass = false;
        const long double value = ratio.to_long_double();
        if (value < 2.0L * kGoldenRatio + 1.0L - 1e-12L) r.pass = false;
    }
    const long double at12 = plus_ratio(12).to_long_double();
    const long double target = 2.0L * kGoldenRatio + 1.0L;
    if (std::fabs(static_cast<double>(at12 - target)) > 1e-3) r.pass = false;
    r.details = "ratio_12 = " + fmt(static_cast<double>(at12)) + ", 2phi+1 = " + fmt(static_cast<double>(target));
    return r;
}

CriterionResult check_boundary(Workspace& ws) {
    CriterionResult r{5, "boundary scan sizes, unique pivotal flips, pivotal edge shape", true, "", 0};
    for (int k = 2; k <= 4; ++k) {
        const TilingIndex& idx = ws.index(k);
        const std::vector<std::size_t> boundary = boundary_set(idx);
        if (BigInt(static_cast<std::int64_t>(boundary.size())) != boundary_count(k)) r.pass = false;
        for (std::size_t i : boundary) {
            const Tiling& x = idx.tiling(i);
            if (!has_bisector(x, Axis::Horizontal)) r.pass = false;
            int flips_in = 0;
            for (const FlipMove& mv : edge_flip_moves(x)) {
                if (!has_bisector(mv.result, Axis::Vertical)) continue;
                ++flips_in;
                // pivotal pair: two stacked full-width cells flipping to a
                // vertical edge of length 2/n
                std::vector<Rect> removed, added;
                std::set_difference(x.rects().begin(), x.rects().end(), mv.result.rects().begin(),
                                    mv.result.rects().end(), std::back_inserter(removed));
                std::set_difference(mv.result.rects().begin(), mv.result.rects().end(),
                                    x.rects().begin(), x.rects().end(), std::back_inserter(added));
                const std::int64_t n = x.grid();
                const bool shape_ok = removed.size() == 2 && added.size() == 2 &&
                                      removed[0].width() == n && removed[1].width() == n &&
                                      added[0].height() == 2 && added[1].height() == 2 &&
                                      added[0].x1 == added[1].x0;
                if (!shape_ok) r.pass = false;
            }
            if (flips_in != 1) r.pass = false;
        }
        r.details += "k=" + std::to_string(k) + ":" + std::to_string(boundary.size()) + " ";
    }
    return r;
}

CriterionResult check_upsilon(Workspace&) {
    CriterionResult r{6, "nested double-bisector family: size, inclusion, golden bound", true, "", 0};
    for (int k = 2; k <= 4; ++k) {
        const std::vector<Tiling> family = upsilon_set(k);
        if (BigInt(static_cast<std::int64_t>(family.size())) != upsilon_count(k)) r.pass = false;
        std::set<std::string> dedup;
        for (const Tiling& t : family) {
            const HalfBisectors h = half_bisectors(t);
            if (!(h.vertical_bisector() && h.horizontal_bisector())) r.pass = false;
            dedup.insert(canonical_encode(t));
        }
        if (dedup.size() != family.size()) r.pass = false;
        const long double ratio = Rational(upsilon_count(k), tiling_count(k)).to_long_double();
        const long double bound = std::pow(kGoldenRatio, static_cast<long double>(-2 * k + 2));
        if (ratio > bound * (1.0L + 1e-12L)) r.pass = false;
        r.details += "k=" + std::to_string(k) + ":" + std::to_string(family.size()) + " ";
    }
    return r;
}

CriterionResult check_spectral_oracle(Workspace& ws) {
    CriterionResult r{7, "solver hits the 2-state gap and the dense oracle, k <= 3", true, "", 0};
    const SpectralReport g1 = ws.edge_gap(1);
    if (std::fabs(g1.gap - 0.5) > 1e-9) r.pass = false;
    r.details = "gap(edge,1) = " + fmt(g1.gap);
    for (int k = 1; k <= 3; ++k) {
        const double sparse = ws.edge_gap(k).lambda2;
        const double dense = dense_lambda2(ws.edge_matrix(k));
        if (std::fabs(sparse - dense) > 1e-8) r.pass = false;
    }
    for (int k = 2; k <= 3; ++k) {
        const double sparse = ws.block_gap(k).lambda2;
        const double dense = dense_lambda2(ws.block_matrix(k));
        if (std::fabs(sparse - dense) > 1e-8) r.pass = false;
    }
    return r;
}

CriterionResult check_gap_recursion(Workspace& ws) {
    CriterionResult r{8, "spectral-gap recursion gap(k) >= gap_block(k) gap(k-1), k = 3..4", true, "", 0};
    for (int k = 3; k <= 4; ++k) {
        const GapRecursionReport rep =
            verify_gap_recursion(ws.edge_gap(k), ws.edge_gap(k - 1), ws.block_gap(k), 1e-8);
        if (!rep.holds) r.pass = false;
        r.details += "k=" + std::to_string(k) + ": ratio=" + fmt(rep.ratio) + " ";
    }
    return r;
}

CriterionResult check_lower_bound(Workspace& ws) {
    CriterionResult r{9, "distinguishing statistic dominates the gap with exact forms, k = 2..4", true,
                      "", 0};
    for (int k = 2; k <= 4; ++k) {
        const LowerBoundReport rep = lower_bound_check(k, ws.edge_gap(k).gap);
        if (!rep.holds) r.pass = false;
        // enumeration oracle for both exact forms
        const TilingIndex& idx = ws.index(k);
        std::int64_t vertical = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            vertical += has_bisector(idx.tiling(i), Axis::Vertical) ? 1 : 0;
        }
        const BigInt states(static_cast<std::int64_t>(idx.size()));
        const Rational p(BigInt(vertical), states);
        if (rep.variance_exact != p * (Rational(1) - p)) r.pass = false;
        const auto boundary = boundary_set(idx);
        const Rational oracle_dirichlet(BigInt(static_cast<std::int64_t>(boundary.size())),
                                        BigInt(2) * BigInt(idx.tiling(0).grid()) * states);
        if (rep.dirichlet_exact != oracle_dirichlet) r.pass = false;
        r.details += "k=" + std::to_string(k) + ": gap=" + fmt(rep.gamma) +
                     " rayleigh=" + fmt(rep.rayleigh) + " ";
    }
    return r;
}

CriterionResult check_sandwich(Workspace& ws) {
    CriterionResult r{10, "relaxation/mixing sandwich with exact mixing times, k = 2..3", true, "", 0};
    for (int k = 2; k <= 3; ++k) {
        const SandwichReport rep = mixing_sandwich(k, 0.25, ws.threads());
        if (!rep.holds_natural || !rep.pi_min_power_bound) r.pass = false;
        r.details += "k=" + std::to_string(k) + ": " + fmt(rep.lower_natural) + " <= " +
                     std::to_string(rep.t_mix) + " <= " + fmt(rep.upper_natural) + " ";
    }
    return r;
}

CriterionResult check_coupling(Workspace&, std::uint64_t seed) {
    CriterionResult r{11, "coupling case bounds and the case-1a identity, k = 3 exhaustive, k = 4 sampled",
                      true, "", 0};
    const DistanceParams params{64};
    const ContractionSurvey s3 = contraction_survey(3, params, 0, seed);
    const ContractionSurvey s4 = contraction_survey(4, params, 4000, seed);
    for (const ContractionSurvey* s : {&s3, &s4}) {
        if (!s->all_bounds_hold || !s->distance_zero_iff_equal) r.pass = false;
        auto it = s->cases.find(CaseLabel::Case1a);
        if (it == s->cases.end() || !it->second.identity_holds) r.pass = false;
        r.details += "k=" + std::to_string(s->k) + ": pairs=" + std::to_string(s->pairs_examined) +
                     " maxE/d=" + fmt(static_cast<double>(s->global_max_ratio.to_long_double())) + " ";
    }
    if (s4.case1a_forced_samples < 1000) r.pass = false;
    return r;
}

// one-step multinomial agreement within 3 sigma per target state
bool one_step_matches(const TransitionMatrix& matrix, const TilingIndex& idx, std::size_t start,
                      std::uint64_t samples, ChainKind kind, std::uint64_t seed, std::string& note) {
    std::vector<std::uint64_t> counts(matrix.dimension(), 0);
    SplitMix64 rng(seed);
    std::optional<TilingIndex> half;
    if (kind == ChainKind::Block) half = TilingIndex::enumerate(idx.size_exponent() - 1);
    const Tiling& origin = idx.tiling(start);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Tiling next =
            kind == ChainKind::EdgeFlip ? edge_flip_step(origin, rng) : block_step(origin, *half, rng);
        ++counts[idx.index_of(next)];
    }
    double worst = 0;
    for (std::size_t y = 0; y < matrix.dimension(); ++y) {
        const double p = static_cast<double>(matrix.entry(start, y).to_long_double());
        const double expected = p * static_cast<double>(samples);
        const double sigma = std::sqrt(static_cast<double>(samples) * p * (1.0 - p));
        const double dev = std::fabs(static_cast<double>(counts[y]) - expected);
        if (p > 0 && sigma > 0) worst = std::max(worst, dev / sigma);
        if (p == 0.0 && counts[y] != 0) return false;
        if (p > 0 && dev > 3.0 * sigma) return false;
    }
    note += " worst=" + fmt(worst) + "sigma";
    return true;
}

CriterionResult check_faithfulness(Workspace& ws, std::uint64_t seed) {
    CriterionResult r{12, "single-step frequencies match rows; long-run occupancy uniform (k = 2)", true,
                      "", 0};
    const TilingIndex& idx = ws.index(2);
    const std::size_t both_bisector = idx.index_of(canonical_decode("V(H(.,.),H(.,.))"));
    std::string note;
    if (!one_step_matches(ws.edge_matrix(2), idx, 0, 1'000'000, ChainKind::EdgeFlip, seed, note)) {
        r.pass = false;
    }
    if (!one_step_matches(ws.edge_matrix(2), idx, both_bisector, 1'000'000, ChainKind::EdgeFlip, seed + 1,
                          note)) {
        r.pass = false;
    }
    if (!one_step_matches(ws.block_matrix(2), idx, 0, 1'000'000, ChainKind::Block, seed + 2, note)) {
        r.pass = false;
    }
    if (!one_step_matches(ws.block_matrix(2), idx, both_bisector, 1'000'000, ChainKind::Block, seed + 3,
                          note)) {
        r.pass = false;
    }

    // occupancy over one long trajectory; the asymptotic variance of an
    // indicator under a reversible chain is at most var * (1+lam2)/(1-lam2)
    const std::uint64_t steps = 10'000'000;
    std::vector<std::uint64_t> visits(idx.size(), 0);
    SplitMix64 rng(seed + 4);
    Tiling state = idx.tiling(0);
    for (std::uint64_t s = 0; s < steps; ++s) {
        state = edge_flip_step(state, rng);
        ++visits[idx.index_of(state)];
    }
    const double lambda2 = dense_lambda2(ws.edge_matrix(2));
    const double p = 1.0 / static_cast<double>(idx.size());
    const double sigma =
        std::sqrt(p * (1.0 - p) * (1.0 + lambda2) / (1.0 - lambda2) / static_cast<double>(steps));
    double worst = 0;
    for (std::uint64_t v : visits) {
        const double dev = std::fabs(static_cast<double>(v) / static_cast<double>(steps) - p);
        worst = std::max(worst, dev / sigma);
        if (dev > 3.0 * sigma) r.pass = false;
    }
    r.details = "one-step" + note + "; occupancy worst=" + fmt(worst) + "sigma";
    return r;
}

json load_json_without_timestamp(const std::filesystem::path& path) {
    std::ifstream in(path);
    json doc = json::parse(in);
    if (doc.contains("meta")) doc["meta"].erase("timestamp");
    return doc;
}

CriterionResult check_determinism(const AcceptanceOptions& options) {
    CriterionResult r{13, "identical seeds give byte-identical JSON across runs and thread counts", true,
                      "", 0};
    if (options.cli_path.empty()) {
        r.pass = false;
        r.details = "no CLI path supplied";
        return r;
    }
    namespace fs = std::filesystem;
    fs::create_directories(options.scratch_dir);
    struct Variant {
        const char* name;
        std::string args;
    };
    const std::vector<Variant> runs = {
        {"count", "count --k 12"},
        {"gap", "gap --k 2 --chain edge"},
        {"couple", "couple --k 3 --b 64 --seed 7 --exhaustive"},
        {"sample", "sample --k 3 --chain block --steps 500 --seed 11"},
        {"mix", "mix --k 3 --sandwich --seed 3"},
        {"mixstat", "mix --k 3 --stat-t 5 --samples 20000 --seed 3"},
    };
    for (const Variant& v : runs) {
        std::vector<json> docs;
        for (int variant = 0; variant < 3; ++variant) {
            const int threads = variant == 2 ? 1 : 2;
            const fs::path out =
                fs::path(options.scratch_dir) / (std::string(v.name) + "_" + std::to_string(variant) + ".json");
            std::ostringstream cmd;
            cmd << options.cli_path << ' ' << v.args << " --threads " << threads << " --out " << out.string();
            if (std::system(cmd.str().c_str()) != 0) {
                r.pass = false;
                r.details += std::string(v.name) + ":run-failed ";
                break;
            }
            docs.push_back(load_json_without_timestamp(out));
        }
        if (docs.size() == 3) {
            // header records the thread flag; results must still agree
            const bool same_doc = docs[0].dump() == docs[1].dump();
            const bool same_result = docs[0]["result"].dump() == docs[2]["result"].dump();
            if (!same_doc || !same_result) {
                r.pass = false;
                r.details += std::string(v.name) + ":mismatch ";
            }
        }
    }
    if (r.pass) r.details = "count/gap/couple/sample/mix stable across reruns and threads 2 vs 1";
    return r;
}

CriterionResult check_scaling_diagnostics(Workspace& ws) {
    CriterionResult r{14, "asymptotic exponents and k0 reported as diagnostics only", true, "", 0};
    std::vector<SpectralReport> gaps;
    for (int k = 1; k <= 4; ++k) gaps.push_back(ws.edge_gap(k));
    const ScalingReport rep = scaling_report(gaps);
    const auto table = contraction_formula_table(2, 12, DistanceParams{64});
    int first_implied = 0;
    for (const FormulaRow& row : table) {
        if (row.implies_contraction_asymptotic) {
            first_implied = row.k;
            break;
        }
    }
    r.details = "t_rel slope = " + fmt(rep.slope) + " vs [" + fmt(rep.lower_exponent) + ", " +
                fmt(rep.upper_exponent) + "]; case formulas (b free) imply the 1/17 contraction from k = " +
                std::to_string(first_implied);
    // nothing asserted beyond the reports existing: these limits are out of
    // desk-scale reach by design
    r.pass = !rep.points.empty() && first_implied > 0;
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(Workspace& ws, const AcceptanceOptions& options) {
    using clock = std::chrono::steady_clock;
    std::vector<CriterionResult> results;
    auto timed = [&](auto&& fn) {
        const auto t0 = clock::now();
        CriterionResult r = fn();
        r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        results.push_back(std::move(r));
    };
    timed([&] { return check_enumeration_counts(ws); });
    timed([&] { return check_subset_counts(ws); });
    timed([&] { return check_half_fraction(ws); });
    timed([&] { return check_plus_ratio(ws); });
    timed([&] { return check_boundary(ws); });
    timed([&] { return check_upsilon(ws); });
    timed([&] { return check_spectral_oracle(ws); });
    timed([&] { return check_gap_recursion(ws); });
    timed([&] { return check_lower_bound(ws); });
    timed([&] { return check_sandwich(ws); });
    timed([&] { return check_coupling(ws, options.seed); });
    timed([&] { return check_faithfulness(ws, options.seed); });
    timed([&] { return check_determinism(options); });
    timed([&] { return check_scaling_diagnostics(ws); });
    return results;
}

int run_acceptance_with_output(Workspace& ws, const AcceptanceOptions& options) {
    const std::vector<CriterionResult> results = run_acceptance(ws, options);
    int failures = 0;
    for (const CriterionResult& r : results) {
        failures += r.pass ? 0 : 1;
        std::printf("[%s] criterion %2d (%6.1fs): %s -- %s\n", r.pass ? "pass" : "FAIL", r.id, r.seconds,
                    r.name.c_str(), r.details.c_str());
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failures);
    return failures;
}

}  // namespace dyadic
