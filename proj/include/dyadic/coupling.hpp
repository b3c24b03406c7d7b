#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "dyadic/bigint.hpp"
#include "dyadic/chains.hpp"

namespace dyadic {

struct DistanceParams {
    std::int64_t b = 64;  // weight of the half-bisector term; only "large enough" matters
};

/// Two same-size tilings under the common-draw block coupling, with the metric
/// ingredients cached.
struct CoupledPair {
    Tiling x;
    Tiling y;
    HalfBisectors half_x;
    HalfBisectors half_y;
    std::array<bool, 4> quadrant_matches;  // indexed by Quadrant

    static CoupledPair make(Tiling x, Tiling y);  // throws MismatchedSizes
    int size_exponent() const { return x.size_exponent(); }
};

/// Half-bisectors present in exactly one of the two tilings.
int l1(const CoupledPair& pair);
/// Quadrants whose meeting rectangles differ.
int l2(const CoupledPair& pair);
/// d = b * l1 + l2; zero exactly on equal tilings.
std::int64_t distance(const CoupledPair& pair, const DistanceParams& params);

/// One coupled move: a single (rho, direction) draw applied to both copies;
/// each copy retiles only when its own bisector exists.
CoupledPair coupled_step(const CoupledPair& pair, const TilingIndex& half_index, SplitMix64& rng);

/// Exact average of d(x', y') over all 4|half| equally likely moves.
Rational expected_distance_after_step(const CoupledPair& pair, const TilingIndex& half_index,
                                      const DistanceParams& params);

enum class CaseLabel { Case1a, Case1b, Case1c, Case2, Case3a, Case3b, Case3c };
const char* case_label_name(CaseLabel label);

struct CaseInfo {
    CaseLabel label;
    int common_half_bisectors;  // case 1 refinement
    int equal_quadrants;        // the i of the case analysis, = 4 - l2
};

/// Total classification of unequal pairs into the three coupling cases:
/// either copy with both bisectors lands in case 3 (ordered so y is the
/// double-bisected one), a shared single bisector is case 2, no shared
/// bisector is case 1 split by common half-bisector count.
CaseInfo classify_case(const CoupledPair& pair);  // requires x != y

struct CaseStats {
    std::uint64_t pairs = 0;
    Rational max_ratio{0};          // max E[d'] / d over pairs
    Rational worst_bound_ratio{0};  // max case-bound / d over pairs
    bool bound_holds = true;        // case bound dominates the exact expectation
    bool identity_holds = true;     // case 1a: E[d'] = d - f b exactly
    bool structure_ok = true;       // l1/l2 shapes match the case figures
};

struct ContractionSurvey {
    int k = 0;
    std::int64_t b = 0;
    std::uint64_t seed = 0;
    bool exhaustive = false;
    std::uint64_t pairs_examined = 0;
    std::uint64_t case1a_forced_samples = 0;  // extra targeted case-1a pairs (k = 4)
    Rational half_fraction{0};                // f_k used in every bound
    std::map<CaseLabel, CaseStats> cases;
    Rational global_max_ratio{0};
    double contraction_target = 16.0 / 17.0;
    bool formulas_imply_contraction = false;  // per-case bounds at this (f_k, b)
    bool all_bounds_hold = false;
    bool distance_zero_iff_equal = true;  // exhaustive runs only
};

/// Exhaustive over unordered pairs for k <= 3; seeded uniform pair sample plus
/// a forced case-1a sample for k = 4. Expectations are exact per pair either way.
ContractionSurvey contraction_survey(int k, const DistanceParams& params, std::uint64_t sample_size,
                                     std::uint64_t seed);

/// Formula-only diagnostic: worst contraction ratio each case can certify at
/// (f_k, b), independent of any pair enumeration. The asymptotic columns send
/// b to infinity, where the binding coefficient is (5 - 2 f_k)/4.
struct FormulaRow {
    int k = 0;
    double half_fraction = 0;
    double worst_case_ratio = 0;  // max over the seven case bounds at this b
    bool implies_contraction = false;
    double asymptotic_worst_ratio = 0;  // same max with b -> infinity
    bool implies_contraction_asymptotic = false;
};
std::vector<FormulaRow> contraction_formula_table(int k_min, int k_max, const DistanceParams& params);

}  // namespace dyadic
