#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dyadic/counting.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/spectral.hpp"

using namespace dyadic;

namespace {

TransitionMatrix edge_matrix(int k) { return TransitionMatrix::edge(TilingIndex::enumerate(k)); }

TransitionMatrix block_matrix(int k) {
    const TilingIndex idx = TilingIndex::enumerate(k);
    const TilingIndex half = TilingIndex::enumerate(k - 1);
    return TransitionMatrix::block(BlockStructure::build(idx, half));
}

std::vector<double> random_function(std::size_t n, SplitMix64& rng) {
    std::vector<double> f(n);
    for (double& x : f) x = static_cast<double>(rng.next() >> 11) * 0x1p-53;
    return f;
}

}  // namespace

TEST_CASE("two-state edge chain has gap exactly 1/2") {
    const SpectralReport report = spectral_gap(edge_matrix(1));
    CHECK(report.converged);
    CHECK(std::fabs(report.gap - 0.5) < 1e-9);
    CHECK(report.relaxation_time == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("sparse solver matches the dense oracle on every small matrix") {
    for (int k = 1; k <= 3; ++k) {
        const TransitionMatrix m = edge_matrix(k);
        CHECK(std::fabs(spectral_gap(m).lambda2 - dense_lambda2(m)) < 1e-8);
    }
    for (int k = 2; k <= 3; ++k) {
        const TransitionMatrix m = block_matrix(k);
        CHECK(std::fabs(spectral_gap(m).lambda2 - dense_lambda2(m)) < 1e-8);
    }
}

TEST_CASE("lazying a chain halves its gap") {
    const TransitionMatrix m = block_matrix(2);
    const double gap = spectral_gap(m).gap;
    const double lazy_gap = spectral_gap(m.lazied()).gap;
    CHECK(lazy_gap == doctest::Approx(gap / 2).epsilon(1e-8));
}

TEST_CASE("solver is deterministic across thread counts") {
    const TransitionMatrix m = edge_matrix(3);
    SpectralOptions one;
    one.threads = 1;
    SpectralOptions four;
    four.threads = 4;
    const SpectralReport a = spectral_gap(m, one);
    const SpectralReport b = spectral_gap(m, four);
    CHECK(a.lambda2 == b.lambda2);  // bitwise: per-row sums and serial dots
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("variance forms agree and match the known indicator values") {
    const TilingIndex idx = TilingIndex::enumerate(2);
    std::vector<double> constant(idx.size(), 3.25);
    CHECK(variance_uniform(constant) == doctest::Approx(0.0));

    std::vector<double> indicator(idx.size(), 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        indicator[i] = has_bisector(idx.tiling(i), Axis::Vertical) ? 1.0 : 0.0;
    }
    CHECK(variance_uniform(indicator) ==
          doctest::Approx(static_cast<double>(Rational(12, 49).to_long_double())).epsilon(1e-12));

    std::vector<double> point(idx.size(), 0.0);
    point[3] = 1.0;
    CHECK(variance_uniform(point) == doctest::Approx((1.0 / 7) * (6.0 / 7)).epsilon(1e-12));

    SplitMix64 rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> f = random_function(idx.size(), rng);
        CHECK(std::fabs(variance_uniform(f) - variance_uniform_pairwise(f)) < 1e-12);
    }
}

TEST_CASE("dirichlet form of the vertical indicator matches the exact ratio") {
    const TilingIndex idx = TilingIndex::enumerate(2);
    const TransitionMatrix m = TransitionMatrix::edge(idx);
    std::vector<double> indicator(idx.size(), 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        indicator[i] = has_bisector(idx.tiling(i), Axis::Vertical) ? 1.0 : 0.0;
    }
    CHECK(dirichlet_form(m, indicator) ==
          doctest::Approx(static_cast<double>(Rational(1, 28).to_long_double())).epsilon(1e-12));
    std::vector<double> constant(idx.size(), -2.0);
    CHECK(dirichlet_form(m, constant) == doctest::Approx(0.0));
}

TEST_CASE("variational characterization: random Rayleigh quotients dominate the gap") {
    SplitMix64 rng(2718);
    for (int k = 2; k <= 3; ++k) {
        const TransitionMatrix m = edge_matrix(k);
        const double gap = 1.0 - dense_lambda2(m);
        for (int trial = 0; trial < 100; ++trial) {
            const std::vector<double> f = random_function(m.dimension(), rng);
            const double var = variance_uniform(f);
            REQUIRE(var > 0);
            CHECK(dirichlet_form(m, f) / var >= gap - 1e-8);
        }
    }
}

TEST_CASE("gap recursion holds at k = 3") {
    const SpectralReport g3 = spectral_gap(edge_matrix(3));
    const SpectralReport g2 = spectral_gap(edge_matrix(2));
    const SpectralReport b3 = spectral_gap(block_matrix(3));
    const GapRecursionReport rep = verify_gap_recursion(g3, g2, b3);
    CHECK(rep.holds);
    CHECK(rep.ratio >= 1.0);
}

TEST_CASE("distinguishing-statistic upper bound at k = 2..3") {
    for (int k = 2; k <= 3; ++k) {
        const double gap = spectral_gap(edge_matrix(k)).gap;
        const LowerBoundReport rep = lower_bound_check(k, gap);
        CHECK(rep.holds);
        CHECK(rep.rayleigh ==
              doctest::Approx(static_cast<double>(
                                  (vertical_indicator_dirichlet(k) / vertical_indicator_variance(k))
                                      .to_long_double()))
                  .epsilon(1e-12));
    }
}
