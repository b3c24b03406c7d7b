#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dyadic/chains.hpp"
#include "dyadic/spectral.hpp"

namespace dyadic {

struct TVPoint {
    int t = 0;
    double tv = 0;
};

struct TVCurve {
    int k = 0;
    ChainKind chain = ChainKind::EdgeFlip;
    std::string start_encoding;
    std::vector<TVPoint> points;
};

/// Total variation against uniform along the exact distribution evolution from
/// a point mass, for t = 0..t_max.
TVCurve exact_tv_curve(const TransitionMatrix& matrix, const TilingIndex& index, std::size_t start,
                       int t_max);

/// Worst-start mixing time min{t : TV(t') <= eps for all t' >= t}. Evolution
/// stops once the l2 certificate (1/2)sqrt(chi^2) <= eps, which only shrinks
/// afterwards, so the reported time is exact. Empty `starts` means every state.
int mixing_time(const TransitionMatrix& matrix, double epsilon, std::span<const std::size_t> starts,
                int threads = 2, int max_steps = 1'000'000);

/// Documented start surrogate for k = 4: every boundary tiling, every
/// double-bisector tiling, plus seeded uniform draws.
std::vector<std::size_t> mixing_start_set(const TilingIndex& index, std::uint64_t seed,
                                          std::size_t random_count = 100);

/// Exact TV of the vertical-bisector statistic under the evolved law; a
/// data-processing lower bound on the full TV at the same t.
double exact_statistic_tv(const TransitionMatrix& matrix, const TilingIndex& index, std::size_t start,
                          int t);

struct StatisticTVEstimate {
    int k = 0;
    int t = 0;
    std::uint64_t samples = 0;
    double stationary_mass = 0;  // exact P[vertical bisector] from the counts
    double estimate = 0;         // |empirical mass - stationary mass|
    double ci_halfwidth = 0;     // 1.96 sigma normal approximation, reported only
};

/// Monte-Carlo statistic TV for the edge chain from the vertical-strip start;
/// works beyond exact reach because only the counts enter the reference law.
StatisticTVEstimate statistic_tv_lower_bound(int k, int t, std::uint64_t samples, std::uint64_t seed,
                                             int threads = 2);

struct StatisticTVCurve {
    int k = 0;
    std::vector<StatisticTVEstimate> points;
};

/// Sampled statistic-TV curve on t = 0, stride, 2*stride, ..., t_max; each row
/// draws fresh trajectories under its own derived stream.
StatisticTVCurve statistic_tv_curve(int k, int t_max, int stride, std::uint64_t samples,
                                    std::uint64_t seed, int threads = 2);

struct SandwichReport {
    int k = 0;
    double epsilon = 0;
    int t_mix = 0;
    double t_rel = 0;  // dense-oracle relaxation time
    double lower_natural = 0, upper_natural = 0;
    bool holds_natural = false;
    double lower_log2 = 0, upper_log2 = 0;
    bool holds_log2 = false;  // reported only; the cited bound uses natural logs
    bool pi_min_power_bound = false;  // state count < 2^n
};

/// Relaxation/mixing sandwich for the edge chain at k = 2..3 with exact t_mix
/// from full-start evolution and t_rel from the dense eigensolver.
SandwichReport mixing_sandwich(int k, double epsilon, int threads = 2);

struct ScalingPoint {
    int k = 0;
    double gap = 0;
    double t_rel = 0;
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    double slope = 0;           // log-log fit of t_rel against n
    double lower_exponent = 0;  // 2 log2 phi
    double upper_exponent = 0;  // log2 17
    bool bracketed = false;     // diagnostic only, never asserted
};

/// Log-log slope of the measured relaxation times; callers supply the solved
/// gaps so expensive eigen-solves can be shared.
ScalingReport scaling_report(std::span<const SpectralReport> gaps);

}  // namespace dyadic
