#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dyadic/counting.hpp"
#include "dyadic/coupling.hpp"

using namespace dyadic;

namespace {

Tiling quad_tiling(const Tiling& tl, const Tiling& bl, const Tiling& tr, const Tiling& br) {
    return join(join(bl, tl, Axis::Horizontal), join(br, tr, Axis::Horizontal), Axis::Vertical);
}

}  // namespace

TEST_CASE("metric ingredients on hand-built pairs") {
    const DistanceParams params{64};

    const CoupledPair same = CoupledPair::make(vertical_strip_tiling(2), vertical_strip_tiling(2));
    CHECK(l1(same) == 0);
    CHECK(l2(same) == 0);
    CHECK(distance(same, params) == 0);

    // no shared bisector, no shared half-bisector: the d = 4b+4 configuration
    const CoupledPair opposite = CoupledPair::make(vertical_strip_tiling(2), horizontal_strip_tiling(2));
    CHECK(l1(opposite) == 4);
    CHECK(l2(opposite) == 4);
    CHECK(distance(opposite, params) == 4 * 64 + 4);

    // one extra half-bisector against a double-bisector tiling: d = b + 3 shape
    const Tiling v1 = vertical_strip_tiling(1);
    const Tiling h1 = horizontal_strip_tiling(1);
    const CoupledPair near = CoupledPair::make(
        quad_tiling(h1, v1, v1, v1), quad_tiling(v1, v1, v1, v1));
    CHECK(l1(near) == 0);  // both still have all four half-bisectors
    CHECK(l2(near) == 1);

    const CoupledPair b_plus_3 = CoupledPair::make(
        join(vertical_strip_tiling(1), horizontal_strip_tiling(1), Axis::Vertical),
        canonical_decode("V(H(.,.),H(.,.))"));
    // x = {top,bottom,right}, y = all four: symmetric difference is {left}
    CHECK(l1(b_plus_3) == 1);
    CHECK(l2(b_plus_3) == 2);  // the two left quadrants differ
    CHECK(distance(b_plus_3, params) == 64 + 2);
}

TEST_CASE("distance is symmetric and zero only on equal pairs (exhaustive k = 2)") {
    const TilingIndex idx = TilingIndex::enumerate(2);
    const DistanceParams params{5};
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const CoupledPair ij = CoupledPair::make(idx.tiling(i), idx.tiling(j));
            const CoupledPair ji = CoupledPair::make(idx.tiling(j), idx.tiling(i));
            CHECK(distance(ij, params) == distance(ji, params));
            CHECK((distance(ij, params) == 0) == (i == j));
        }
    }
}

TEST_CASE("classification covers the constructed archetypes") {
    const Tiling v1 = vertical_strip_tiling(1);
    const Tiling h1 = horizontal_strip_tiling(1);
    const Tiling both2 = canonical_decode("V(H(.,.),H(.,.))");

    const CaseInfo c1a =
        classify_case(CoupledPair::make(vertical_strip_tiling(2), horizontal_strip_tiling(2)));
    CHECK(c1a.label == CaseLabel::Case1a);
    CHECK(c1a.common_half_bisectors == 0);

    // vertical-only with an extra right half vs horizontal-only with extra top
    const Tiling x1b = join(v1, h1, Axis::Vertical);        // {top,bottom,right}
    const Tiling y1b = join(h1, v1, Axis::Horizontal);      // {left,right,top}
    const CaseInfo c1b = classify_case(CoupledPair::make(join(v1, v1, Axis::Vertical), y1b));
    CHECK(c1b.label == CaseLabel::Case1b);
    const CaseInfo c1c = classify_case(CoupledPair::make(x1b, y1b));
    CHECK(c1c.label == CaseLabel::Case1c);
    CHECK(c1c.common_half_bisectors == 2);

    const CaseInfo c2 = classify_case(
        CoupledPair::make(join(v1, v1, Axis::Vertical), join(h1, v1, Axis::Vertical)));
    CHECK(c2.label == CaseLabel::Case2);

    const CaseInfo c3a = classify_case(CoupledPair::make(join(v1, v1, Axis::Vertical), both2));
    CHECK(c3a.label == CaseLabel::Case3a);
    const CaseInfo c3b = classify_case(CoupledPair::make(join(h1, v1, Axis::Vertical), both2));
    CHECK(c3b.label == CaseLabel::Case3b);

    const Tiling both3_a = quad_tiling(v1, v1, v1, v1);
    const Tiling both3_b = quad_tiling(h1, v1, v1, v1);
    const CaseInfo c3c = classify_case(CoupledPair::make(both3_a, both3_b));
    CHECK(c3c.label == CaseLabel::Case3c);
    CHECK(c3c.equal_quadrants == 3);
}

TEST_CASE("coalesced pairs stay coalesced under the coupling") {
    const TilingIndex half = TilingIndex::enumerate(1);
    SplitMix64 rng(55);
    CoupledPair pair = CoupledPair::make(vertical_strip_tiling(2), vertical_strip_tiling(2));
    for (int step = 0; step < 200; ++step) {
        pair = coupled_step(pair, half, rng);
        REQUIRE(pair.x == pair.y);
    }
}

TEST_CASE("case 1a identity is exact at k = 2 by direct averaging") {
    const TilingIndex half = TilingIndex::enumerate(1);
    const DistanceParams params{64};
    const CoupledPair pair =
        CoupledPair::make(vertical_strip_tiling(2), horizontal_strip_tiling(2));
    const Rational expected =
        Rational(distance(pair, params)) - half_bisector_fraction(2) * Rational(params.b);
    CHECK(expected_distance_after_step(pair, half, params) == expected);
}

TEST_CASE("case 2 pair at k = 2 contracts by exactly 1/4") {
    const Tiling v1 = vertical_strip_tiling(1);
    const Tiling h1 = horizontal_strip_tiling(1);
    const TilingIndex half = TilingIndex::enumerate(1);
    const DistanceParams params{64};
    const CoupledPair pair =
        CoupledPair::make(join(v1, v1, Axis::Vertical), join(h1, v1, Axis::Vertical));
    const Rational expectation = expected_distance_after_step(pair, half, params);
    CHECK(expectation == Rational(3 * distance(pair, params), 4));
}

TEST_CASE("case 3c pair halves its distance exactly") {
    const Tiling v1 = vertical_strip_tiling(1);
    const Tiling h1 = horizontal_strip_tiling(1);
    const TilingIndex half = TilingIndex::enumerate(2);
    const DistanceParams params{64};
    const CoupledPair pair =
        CoupledPair::make(quad_tiling(v1, v1, v1, v1), quad_tiling(h1, h1, v1, v1));
    const Rational expectation = expected_distance_after_step(pair, half, params);
    CHECK(expectation == Rational(distance(pair, params), 2));
}

TEST_CASE("equal pairs have zero expected distance") {
    const TilingIndex half = TilingIndex::enumerate(1);
    const CoupledPair pair = CoupledPair::make(vertical_strip_tiling(2), vertical_strip_tiling(2));
    CHECK(expected_distance_after_step(pair, half, DistanceParams{64}).is_zero());
}

TEST_CASE("exhaustive survey at k = 2 and k = 3: every case bound dominates") {
    for (int k = 2; k <= 3; ++k) {
        const ContractionSurvey survey = contraction_survey(k, DistanceParams{64}, 0, 1);
        CHECK(survey.exhaustive);
        CHECK(survey.all_bounds_hold);
        CHECK(survey.distance_zero_iff_equal);
        const std::uint64_t n = k == 2 ? 7 : 82;
        CHECK(survey.pairs_examined == n * (n - 1) / 2);
        const auto case1a = survey.cases.find(CaseLabel::Case1a);
        REQUIRE(case1a != survey.cases.end());
        CHECK(case1a->second.identity_holds);
        CHECK(case1a->second.structure_ok);
        for (const auto& [label, stats] : survey.cases) {
            CHECK(stats.bound_holds);
            CHECK(stats.structure_ok);
        }
    }
    // there is a size-4 pair the coupling does not contract at all, while at
    // size 8 every pair already contracts strictly (though not yet at 1/17)
    const ContractionSurvey two = contraction_survey(2, DistanceParams{64}, 0, 1);
    CHECK(two.global_max_ratio == Rational(1));
    const ContractionSurvey three = contraction_survey(3, DistanceParams{64}, 0, 1);
    CHECK(three.global_max_ratio == Rational(1773, 1834));
    CHECK(three.cases.at(CaseLabel::Case1a).pairs == 81);
    CHECK(three.cases.at(CaseLabel::Case2).pairs == 1056);
    CHECK(three.cases.at(CaseLabel::Case3c).pairs == 120);
    // the case-2 quarter decrease and case-3c halving are attained exactly
    CHECK(three.cases.at(CaseLabel::Case2).max_ratio == Rational(3, 4));
    CHECK(three.cases.at(CaseLabel::Case3c).max_ratio == Rational(1, 2));
}

TEST_CASE("sampled survey at k = 4 forces a case-1a population") {
    const ContractionSurvey survey = contraction_survey(4, DistanceParams{64}, 500, 99);
    CHECK_FALSE(survey.exhaustive);
    CHECK(survey.case1a_forced_samples == 1000);
    CHECK(survey.all_bounds_hold);
    const auto case1a = survey.cases.find(CaseLabel::Case1a);
    REQUIRE(case1a != survey.cases.end());
    CHECK(case1a->second.pairs >= 1000);
    CHECK(case1a->second.identity_holds);
}

TEST_CASE("coupled marginals are faithful to the block chain (chi-squared)") {
    const TilingIndex idx = TilingIndex::enumerate(2);
    const TilingIndex half = TilingIndex::enumerate(1);
    const TransitionMatrix block = TransitionMatrix::block(BlockStructure::build(idx, half));
    const std::size_t x0 = idx.index_of(vertical_strip_tiling(2));
    const std::size_t y0 = idx.index_of(horizontal_strip_tiling(2));
    const CoupledPair start = CoupledPair::make(idx.tiling(x0), idx.tiling(y0));
    SplitMix64 rng(314159);
    const std::uint64_t samples = 1'000'000;
    std::vector<std::uint64_t> x_counts(idx.size(), 0), y_counts(idx.size(), 0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const CoupledPair moved = coupled_step(start, half, rng);
        ++x_counts[idx.index_of(moved.x)];
        ++y_counts[idx.index_of(moved.y)];
    }
    for (std::size_t target = 0; target < idx.size(); ++target) {
        for (const auto* counts : {&x_counts, &y_counts}) {
            const std::size_t origin = counts == &x_counts ? x0 : y0;
            const double p = static_cast<double>(block.entry(origin, target).to_long_double());
            const double expected = p * static_cast<double>(samples);
            if (p == 0.0) {
                CHECK((*counts)[target] == 0);
                continue;
            }
            const double sigma = std::sqrt(static_cast<double>(samples) * p * (1 - p));
            CHECK(std::fabs(static_cast<double>((*counts)[target]) - expected) <= 3.0 * sigma);
        }
    }
}

TEST_CASE("survey join tables reproduce direct tiling-level averaging (k = 2, all pairs)") {
    const TilingIndex idx = TilingIndex::enumerate(2);
    const TilingIndex half = TilingIndex::enumerate(1);
    const DistanceParams params{64};
    Rational max_ratio(0);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const CoupledPair pair = CoupledPair::make(idx.tiling(a), idx.tiling(b));
            const Rational ratio = expected_distance_after_step(pair, half, params) /
                                   Rational(distance(pair, params));
            if (ratio > max_ratio) max_ratio = ratio;
        }
    }
    const ContractionSurvey survey = contraction_survey(2, params, 0, 1);
    CHECK(survey.global_max_ratio == max_ratio);
}

TEST_CASE("formula table: the asymptotic case bounds certify 1/17 from k = 10") {
    const auto table = contraction_formula_table(2, 12, DistanceParams{64});
    REQUIRE(table.size() == 11);
    int first_asymptotic = 0;
    for (const FormulaRow& row : table) {
        if (row.implies_contraction_asymptotic && first_asymptotic == 0) first_asymptotic = row.k;
        // the additive constants at b = 64 keep the finite-b bounds above the
        // target at every desk-scale k
        CHECK_FALSE(row.implies_contraction);
        CHECK(row.worst_case_ratio > 0.9);
        CHECK(row.worst_case_ratio < 1.01);
        CHECK(row.asymptotic_worst_ratio <= 1.0);
        CHECK(row.worst_case_ratio > row.asymptotic_worst_ratio - 1e-12);
    }
    CHECK(first_asymptotic == 10);
}
