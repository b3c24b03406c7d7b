#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dyadic/bigint.hpp"
#include "dyadic/chains.hpp"

namespace dyadic {

struct SpectralOptions {
    double residual_tol = 1e-10;
    double plateau_relative_change = 1e-12;  // over plateau_window iterations
    int plateau_window = 100;
    std::int64_t max_iterations = 1'000'000;
    std::uint64_t seed = 0x5eedd1ad1cull;
    int threads = 2;
};

struct SpectralReport {
    int k = 0;
    ChainKind chain = ChainKind::EdgeFlip;
    double lambda2 = 0;
    double gap = 0;              // 1 - lambda2
    double relaxation_time = 0;  // 1 / gap
    double residual = 0;
    std::int64_t iterations = 0;
    bool converged = false;
};

/// Second-largest eigenvalue by deflated power iteration on (P+I)/2. The shift
/// moves the spectrum into [0,1], so after projecting out the constant
/// eigenvector the dominant direction is the algebraically second eigenvalue;
/// block dynamics is not lazy, so the unshifted modulus ordering would lie.
/// Throws on a disconnected chain or iteration-cap overrun.
SpectralReport spectral_gap(const TransitionMatrix& matrix, const SpectralOptions& options = {});

/// Dense symmetric eigensolver oracle for cross-checking the sparse path.
double dense_lambda2(const TransitionMatrix& matrix);

/// Variance under the uniform law, single-pass moment form.
double variance_uniform(std::span<const double> f);

/// The equivalent pairwise form (1/2) sum pi(x) pi(y) (f(x)-f(y))^2.
double variance_uniform_pairwise(std::span<const double> f);

/// Dirichlet form (1/2) sum (f(x)-f(y))^2 pi(x) P(x,y) over the off-diagonal
/// support.
double dirichlet_form(const TransitionMatrix& matrix, std::span<const double> f);

struct GapRecursionReport {
    int k = 0;
    double gap_k = 0;
    double gap_previous = 0;
    double gap_block = 0;
    double ratio = 0;  // gap_k / (gap_block * gap_previous)
    double slack_tol = 0;
    bool holds = false;
};

/// Checks gap(k) >= gap_block(k) * gap(k-1) with slack tolerance.
GapRecursionReport verify_gap_recursion(const SpectralReport& gap_k, const SpectralReport& gap_previous,
                                        const SpectralReport& gap_block, double slack_tol = 1e-8);

struct LowerBoundReport {
    int k = 0;
    double gamma = 0;
    Rational dirichlet_exact;  // boundary / (2n * count)
    Rational variance_exact;   // (1/4)(1 - (both/count)^2)
    double rayleigh = 0;
    double slack_tol = 0;
    bool holds = false;
};

/// The distinguishing-statistic bound: the numeric gap never exceeds the exact
/// Rayleigh quotient of the vertical-bisector indicator.
LowerBoundReport lower_bound_check(int k, double gamma_k, double slack_tol = 1e-8);

}  // namespace dyadic
