#pragma once

#include "dyadic/bigint.hpp"

namespace dyadic {

/// Golden ratio (1+sqrt(5))/2; comparison target for limits, never ground truth.
inline constexpr long double kGoldenRatio = 1.61803398874989484820458683436563811772L;

/// Asymptotic growth constant of the tiling counts: counts grow like
/// phi^-1 * omega^(2^k). Known only numerically; convergence target.
inline constexpr long double kGrowthConstant = 1.84454757L;

/// Default cap on the recurrence depth; counts near the cap run to ~57k bits.
inline constexpr int kDefaultCountCap = 16;

/// Number of dyadic tilings of size 2^k: 1, 2, then 2*a(k-1)^2 - a(k-2)^4.
BigInt tiling_count(int k, int cap = kDefaultCountCap);

/// Fraction of half tilings carrying the matching half-bisector,
/// a(k-2)^2 / a(k-1); equals 1/(2 - f(k-1)^2) exactly. Requires k >= 2.
Rational half_bisector_fraction(int k, int cap = kDefaultCountCap);

struct SubsetCounts {
    BigInt vertical;    // tilings with a vertical bisector: a(k-1)^2
    BigInt horizontal;  // a(k-1)^2
    BigInt both;        // both bisectors: a(k-2)^4
};
SubsetCounts subset_counts(int k, int cap = kDefaultCountCap);  // requires k >= 2

/// |all| / |both bisectors| = 2/f_k^2 - 1; decreases to 2*phi + 1.
Rational plus_ratio(int k, int cap = kDefaultCountCap);  // requires k >= 2

/// Size of the nested double-bisector family: product of a(i)^2, i <= k-2.
BigInt upsilon_count(int k, int cap = kDefaultCountCap);  // requires k >= 2

/// Tilings one flip short of a vertical bisector: 2^(k-1) * product of a(i)^2.
BigInt boundary_count(int k, int cap = kDefaultCountCap);  // requires k >= 2

/// Variance of the vertical-bisector indicator under the uniform law:
/// (1/4) (1 - (both/all)^2); converges to sqrt(5) - 2.
Rational vertical_indicator_variance(int k, int cap = kDefaultCountCap);

/// Dirichlet form of the same indicator for the edge-flip chain:
/// boundary / (2n * all) = product of a(i)^2 / (4 * all).
Rational vertical_indicator_dirichlet(int k, int cap = kDefaultCountCap);

/// (phi * a(k))^(2^-k), converging to the growth constant.
long double growth_constant_estimate(int k, int cap = kDefaultCountCap);

}  // namespace dyadic
