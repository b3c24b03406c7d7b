#include "dyadic/counting.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dyadic/tiling.hpp"

namespace dyadic {

namespace {

std::vector<BigInt> count_table(int k, int cap) {
    if (k < 0) throw TilingError(TilingErrorKind::SizeGuard, "negative size exponent");
    if (k > cap) throw TilingError(TilingErrorKind::SizeGuard, "size exponent above recurrence cap");
    std::vector<BigInt> a;
    a.reserve(static_cast<std::size_t>(k) + 1);
    a.emplace_back(1);
    if (k >= 1) a.emplace_back(2);
    for (int i = 2; i <= k; ++i) {
        a.push_back(BigInt(2) * a[i - 1].pow(2) - a[i - 2].pow(4));
    }
    return a;
}

void require_at_least_two(int k) {
    if (k < 2) throw TilingError(TilingErrorKind::SizeGuard, "defined for size exponent >= 2");
}

}  // namespace

BigInt tiling_count(int k, int cap) { return count_table(k, cap).back(); }

Rational half_bisector_fraction(int k, int cap) {
    require_at_least_two(k);
    const auto a = count_table(k - 1, cap);
    return Rational(a[k - 2].pow(2), a[k - 1]);
}

SubsetCounts subset_counts(int k, int cap) {
    require_at_least_two(k);
    const auto a = count_table(k - 1, cap);
    return SubsetCounts{a[k - 1].pow(2), a[k - 1].pow(2), a[k - 2].pow(4)};
}

Rational plus_ratio(int k, int cap) {
    require_at_least_two(k);
    const auto a = count_table(k, cap);
    return Rational(a[k], a[k - 2].pow(4));
}

BigInt upsilon_count(int k, int cap) {
    require_at_least_two(k);
    const auto a = count_table(k - 2, cap);
    BigInt prod(1);
    for (int i = 0; i <= k - 2; ++i) prod *= a[i].pow(2);
    return prod;
}

BigInt boundary_count(int k, int cap) {
    require_at_least_two(k);
    return pow2(static_cast<unsigned>(k - 1)) * upsilon_count(k, cap);
}

Rational vertical_indicator_variance(int k, int cap) {
    require_at_least_two(k);
    const Rational both_over_all = Rational(1) / plus_ratio(k, cap);
    return Rational(1, 4) * (Rational(1) - both_over_all * both_over_all);
}

Rational vertical_indicator_dirichlet(int k, int cap) {
    require_at_least_two(k);
    return Rational(upsilon_count(k, cap), BigInt(4) * tiling_count(k, cap));
}

long double growth_constant_estimate(int k, int cap) {
    if (k < 1) throw TilingError(TilingErrorKind::SizeGuard, "growth estimate needs k >= 1");
    const BigInt a = tiling_count(k, cap);
    const long double log2_value = std::log2(kGoldenRatio) + a.log2();
    return std::exp2(log2_value / std::exp2(static_cast<long double>(k)));
}

}  // namespace dyadic
