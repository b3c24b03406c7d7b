#include "dyadic/coupling.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "dyadic/counting.hpp"

namespace dyadic {

CoupledPair CoupledPair::make(Tiling x_in, Tiling y_in) {
    if (x_in.size_exponent() != y_in.size_exponent() || x_in.size_exponent() < 2) {
        throw TilingError(TilingErrorKind::MismatchedSizes, "coupled pair needs equal sizes, k >= 2");
    }
    CoupledPair out{std::move(x_in), std::move(y_in), {}, {}, {}};
    out.half_x = half_bisectors(out.x);
    out.half_y = half_bisectors(out.y);
    for (Quadrant q : kAllQuadrants) {
        out.quadrant_matches[static_cast<int>(q)] = quadrant_equal(out.x, out.y, q);
    }
    return out;
}

int l1(const CoupledPair& pair) {
    return std::popcount(pair.half_x.bits() ^ pair.half_y.bits());
}

int l2(const CoupledPair& pair) {
    int unequal = 0;
    for (bool match : pair.quadrant_matches) unequal += match ? 0 : 1;
    return unequal;
}

std::int64_t distance(const CoupledPair& pair, const DistanceParams& params) {
    return params.b * l1(pair) + l2(pair);
}

CoupledPair coupled_step(const CoupledPair& pair, const TilingIndex& half_index, SplitMix64& rng) {
    const Tiling& rho = half_index.tiling(static_cast<std::size_t>(rng.uniform(half_index.size())));
    const Side direction = static_cast<Side>(rng.uniform(4));
    return CoupledPair::make(apply_block_move(pair.x, direction, rho),
                             apply_block_move(pair.y, direction, rho));
}

Rational expected_distance_after_step(const CoupledPair& pair, const TilingIndex& half_index,
                                      const DistanceParams& params) {
    std::int64_t sum = 0;
    for (Side direction : {Side::Left, Side::Right, Side::Top, Side::Bottom}) {
        for (std::size_t r = 0; r < half_index.size(); ++r) {
            const CoupledPair moved = CoupledPair::make(
                apply_block_move(pair.x, direction, half_index.tiling(r)),
                apply_block_move(pair.y, direction, half_index.tiling(r)));
            sum += distance(moved, params);
        }
    }
    return Rational(sum, 4 * static_cast<std::int64_t>(half_index.size()));
}

const char* case_label_name(CaseLabel label) {
    switch (label) {
        case CaseLabel::Case1a: return "1a";
        case CaseLabel::Case1b: return "1b";
        case CaseLabel::Case1c: return "1c";
        case CaseLabel::Case2: return "2";
        case CaseLabel::Case3a: return "3a";
        case CaseLabel::Case3b: return "3b";
        case CaseLabel::Case3c: return "3c";
    }
    return "?";
}

namespace {

constexpr unsigned kHorizontalPair = 0b0011;  // left | right
constexpr unsigned kVerticalPair = 0b1100;    // top | bottom

CaseInfo classify_bits(unsigned hx, unsigned hy, int equal_quadrants) {
    const bool x_both = hx == 0b1111, y_both = hy == 0b1111;
    CaseInfo info{CaseLabel::Case2, 0, equal_quadrants};
    if (x_both || y_both) {
        if (x_both && y_both) {
            info.label = CaseLabel::Case3c;
        } else {
            const unsigned single = x_both ? hy : hx;
            info.label = std::popcount(single) == 3 ? CaseLabel::Case3b : CaseLabel::Case3a;
        }
        return info;
    }
    const bool share_vertical = (hx & kVerticalPair) == kVerticalPair && (hy & kVerticalPair) == kVerticalPair;
    const bool share_horizontal =
        (hx & kHorizontalPair) == kHorizontalPair && (hy & kHorizontalPair) == kHorizontalPair;
    if (share_vertical || share_horizontal) {
        info.label = CaseLabel::Case2;
        return info;
    }
    info.common_half_bisectors = std::popcount(hx & hy);
    switch (info.common_half_bisectors) {
        case 0: info.label = CaseLabel::Case1a; break;
        case 1: info.label = CaseLabel::Case1b; break;
        default: info.label = CaseLabel::Case1c; break;
    }
    return info;
}

}  // namespace

CaseInfo classify_case(const CoupledPair& pair) {
    if (pair.x == pair.y) throw std::invalid_argument("classification needs unequal tilings");
    int equal = 0;
    for (bool match : pair.quadrant_matches) equal += match ? 1 : 0;
    return classify_bits(pair.half_x.bits(), pair.half_y.bits(), equal);
}

namespace {

// Per-case expected-distance bound of the coupling analysis, with the exact
// half-bisector fraction substituted. d and i are the pair's metric data.
Rational case_bound(CaseLabel label, const Rational& f, std::int64_t b, std::int64_t d, int i) {
    const Rational db(d);
    const Rational bb(b);
    const Rational one(1);
    switch (label) {
        case CaseLabel::Case1a:
            return db - f * bb;
        case CaseLabel::Case1b:
            return db - Rational(3) * f * bb / Rational(4) + (one - f) * bb / Rational(4);
        case CaseLabel::Case1c:
            return db - f * bb / Rational(2) + (one - f) * bb / Rational(2) + Rational(i, 2);
        case CaseLabel::Case2:
            return db * Rational(3, 4);
        case CaseLabel::Case3a:
            return db - Rational(b + 2, 2) + (one - f) * bb / Rational(2);
        case CaseLabel::Case3b:
            return db - Rational(b + 4 - i, 4) + (one - f) * bb / Rational(2) + Rational(1, 2);
        case CaseLabel::Case3c:
            return db / Rational(2);
    }
    return db;
}

bool case_structure_ok(const CaseInfo& info, int l1_value, int l2_value) {
    switch (info.label) {
        case CaseLabel::Case1a: return l1_value == 4 && l2_value == 4;
        case CaseLabel::Case1b: return l1_value == 3 && l2_value == 4;
        case CaseLabel::Case1c: return l1_value == 2 && l2_value >= 3;
        case CaseLabel::Case2: return l1_value <= 2 && l2_value >= 1;
        case CaseLabel::Case3a: return l1_value == 2 && l2_value == 4;
        case CaseLabel::Case3b: return l1_value == 1 && l2_value >= 2;
        case CaseLabel::Case3c: return l1_value == 0 && l2_value >= 1;
    }
    return false;
}

// Index-level machinery: half decompositions, join tables, metric caches.
struct SurveyEngine {
    TilingIndex index;
    TilingIndex half;
    BlockStructure blocks;
    std::vector<std::uint8_t> bits;
    std::vector<std::array<std::uint32_t, 4>> quads;

    explicit SurveyEngine(int k)
        : index(TilingIndex::enumerate(k)), half(TilingIndex::enumerate(k - 1)) {
        blocks = BlockStructure::build(index, half);
        bits.resize(index.size());
        quads.resize(index.size());
        std::unordered_map<std::string, std::uint32_t> intern;
        for (std::size_t i = 0; i < index.size(); ++i) {
            bits[i] = static_cast<std::uint8_t>(half_bisectors(index.tiling(i)).bits());
            for (Quadrant q : kAllQuadrants) {
                std::string key;
                for (const Rect& r : rects_meeting(index.tiling(i), q)) {
                    key += std::to_string(r.x0) + ',' + std::to_string(r.y0) + ',' +
                           std::to_string(r.x1) + ',' + std::to_string(r.y1) + ';';
                }
                auto [it, inserted] =
                    intern.emplace(std::move(key), static_cast<std::uint32_t>(intern.size()));
                quads[i][static_cast<int>(q)] = it->second;
            }
        }
    }

    std::int64_t pair_distance(std::uint32_t a, std::uint32_t b, std::int64_t weight) const {
        const int ones = std::popcount(static_cast<unsigned>(bits[a] ^ bits[b]));
        int unequal = 0;
        for (int q = 0; q < 4; ++q) unequal += quads[a][q] != quads[b][q] ? 1 : 0;
        return weight * ones + unequal;
    }

    int pair_equal_quadrants(std::uint32_t a, std::uint32_t b) const {
        int equal = 0;
        for (int q = 0; q < 4; ++q) equal += quads[a][q] == quads[b][q] ? 1 : 0;
        return equal;
    }

    Rational pair_expectation(std::uint32_t a, std::uint32_t b, std::int64_t weight) const {
        std::int64_t sum = 0;
        const std::uint32_t h = static_cast<std::uint32_t>(half.size());
        for (Side direction : {Side::Left, Side::Right, Side::Top, Side::Bottom}) {
            for (std::uint32_t rho = 0; rho < h; ++rho) {
                sum += pair_distance(blocks.apply(a, direction, rho), blocks.apply(b, direction, rho),
                                     weight);
            }
        }
        return Rational(sum, 4 * static_cast<std::int64_t>(h));
    }
};

}  // namespace

ContractionSurvey contraction_survey(int k, const DistanceParams& params, std::uint64_t sample_size,
                                     std::uint64_t seed) {
    if (k < 2 || k > kMaxEnumerationExponent) {
        throw TilingError(TilingErrorKind::SizeGuard, "contraction survey supports 2 <= k <= 4");
    }
    SurveyEngine engine(k);
    const Rational f = half_bisector_fraction(k);

    ContractionSurvey survey;
    survey.k = k;
    survey.b = params.b;
    survey.seed = seed;
    survey.exhaustive = k <= 3;
    survey.half_fraction = f;

    auto process_pair = [&](std::uint32_t a, std::uint32_t b) {
        const std::int64_t d = engine.pair_distance(a, b, params.b);
        const int equal = engine.pair_equal_quadrants(a, b);
        const CaseInfo info = classify_bits(engine.bits[a], engine.bits[b], equal);
        const Rational expectation = engine.pair_expectation(a, b, params.b);
        const Rational bound = case_bound(info.label, f, params.b, d, info.equal_quadrants);
        const Rational d_rational(d);
        CaseStats& stats = survey.cases[info.label];
        ++stats.pairs;
        ++survey.pairs_examined;
        const Rational ratio = expectation / d_rational;
        if (stats.pairs == 1 || ratio > stats.max_ratio) stats.max_ratio = ratio;
        if (ratio > survey.global_max_ratio) survey.global_max_ratio = ratio;
        const Rational bound_ratio = bound / d_rational;
        if (stats.pairs == 1 || bound_ratio > stats.worst_bound_ratio) stats.worst_bound_ratio = bound_ratio;
        stats.bound_holds = stats.bound_holds && expectation <= bound;
        if (info.label == CaseLabel::Case1a) {
            stats.identity_holds = stats.identity_holds && expectation == bound;
        }
        const int ones = std::popcount(static_cast<unsigned>(engine.bits[a] ^ engine.bits[b]));
        stats.structure_ok = stats.structure_ok && case_structure_ok(info, ones, 4 - equal);
    };

    const std::uint32_t n = static_cast<std::uint32_t>(engine.index.size());
    if (survey.exhaustive) {
        for (std::uint32_t a = 0; a < n; ++a) {
            if (engine.pair_distance(a, a, params.b) != 0) survey.distance_zero_iff_equal = false;
            for (std::uint32_t b = a + 1; b < n; ++b) {
                if (engine.pair_distance(a, b, params.b) == 0) survey.distance_zero_iff_equal = false;
                process_pair(a, b);
            }
        }
    } else {
        SplitMix64 rng(seed);
        for (std::uint64_t s = 0; s < sample_size; ++s) {
            const std::uint32_t a = static_cast<std::uint32_t>(rng.uniform(n));
            const std::uint32_t b = static_cast<std::uint32_t>(rng.uniform(n));
            if (a == b) continue;
            process_pair(a, b);
        }
        // the case-1a identity is an acceptance target: force a sample
        std::vector<std::uint32_t> vertical_plain, horizontal_plain;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (engine.bits[i] == kVerticalPair) vertical_plain.push_back(i);
            if (engine.bits[i] == kHorizontalPair) horizontal_plain.push_back(i);
        }
        const std::uint64_t forced = 1000;
        for (std::uint64_t s = 0; s < forced; ++s) {
            const std::uint32_t a =
                vertical_plain[static_cast<std::size_t>(rng.uniform(vertical_plain.size()))];
            const std::uint32_t b =
                horizontal_plain[static_cast<std::size_t>(rng.uniform(horizontal_plain.size()))];
            process_pair(a, b);
            ++survey.case1a_forced_samples;
        }
    }

    survey.all_bounds_hold = true;
    for (const auto& [label, stats] : survey.cases) {
        survey.all_bounds_hold =
            survey.all_bounds_hold && stats.bound_holds && stats.identity_holds && stats.structure_ok;
    }
    const auto table = contraction_formula_table(k, k, params);
    survey.formulas_imply_contraction = !table.empty() && table.front().implies_contraction;
    return survey;
}

std::vector<FormulaRow> contraction_formula_table(int k_min, int k_max, const DistanceParams& params) {
    std::vector<FormulaRow> out;
    const double b = static_cast<double>(params.b);
    const double target = 16.0 / 17.0;
    for (int k = std::max(2, k_min); k <= k_max; ++k) {
        const double f = static_cast<double>(half_bisector_fraction(k).to_long_double());
        double worst = 0;
        auto consider = [&](double ratio) { worst = std::max(worst, ratio); };
        consider(1.0 - f * b / (4 * b + 4));                                  // case 1a
        consider(1.0 - (3 * f * b / 4 - (1 - f) * b / 4) / (3 * b + 4));      // case 1b
        for (int i = 0; i <= 1; ++i) {                                        // case 1c
            const double d = 2 * b + 4 - i;
            consider((d - f * b / 2 + (1 - f) * b / 2 + i / 2.0) / d);
        }
        consider(0.75);                                                       // case 2
        consider(((2 * b + 4) - (b + 2) / 2 + (1 - f) * b / 2) / (2 * b + 4));  // case 3a
        for (int i = 0; i <= 2; ++i) {                                        // case 3b
            const double d = b + 4 - i;
            consider((d - d / 4 + (1 - f) * b / 2 + 0.5) / d);
        }
        consider(0.5);                                                        // case 3c
        // with b free the additive constants vanish and the shared 1c/3b
        // coefficient (5 - 2f)/4 is the binding one
        const double asymptotic = std::max({1.0 - f / 4, (13 - 4 * f) / 12, (5 - 2 * f) / 4, 0.75});
        out.push_back(
            FormulaRow{k, f, worst, worst <= target, asymptotic, asymptotic <= target});
    }
    return out;
}

}  // namespace dyadic
