#include "dyadic/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dyadic/counting.hpp"
#include "dyadic/parallel.hpp"

namespace dyadic {

namespace {

struct Evolution {
    const TransitionMatrix& m;
    std::vector<double> mu;
    std::vector<double> next;
    double uniform;

    Evolution(const TransitionMatrix& matrix, std::size_t start)
        : m(matrix),
          mu(matrix.dimension(), 0.0),
          next(matrix.dimension(), 0.0),
          uniform(1.0 / static_cast<double>(matrix.dimension())) {
        mu[start] = 1.0;
    }

    double tv() const {
        double acc = 0;
        for (double p : mu) acc += std::abs(p - uniform);
        return 0.5 * acc;
    }

    // (1/2) sqrt(chi^2): an upper bound on TV that contracts monotonically
    double l2_certificate() const {
        double acc = 0;
        for (double p : mu) {
            const double d = p - uniform;
            acc += d * d;
        }
        return 0.5 * std::sqrt(static_cast<double>(mu.size()) * acc);
    }

    void step() {
        const double den = static_cast<double>(m.denominator());
        for (std::size_t i = 0; i < mu.size(); ++i) {
            double acc = static_cast<double>(m.denominator() - m.offdiagonal_numerator_sum(i)) / den * mu[i];
            for (std::size_t s = m.row_begin(i); s < m.row_end(i); ++s) {
                acc += m.numer(s) / den * mu[m.col(s)];
            }
            next[i] = acc;
        }
        mu.swap(next);
    }
};

}  // namespace

TVCurve exact_tv_curve(const TransitionMatrix& matrix, const TilingIndex& index, std::size_t start,
                       int t_max) {
    TVCurve curve;
    curve.k = matrix.size_exponent();
    curve.chain = matrix.kind();
    curve.start_encoding = index.encoding(start);
    Evolution evo(matrix, start);
    curve.points.reserve(static_cast<std::size_t>(t_max) + 1);
    for (int t = 0; t <= t_max; ++t) {
        curve.points.push_back(TVPoint{t, evo.tv()});
        if (t < t_max) evo.step();
    }
    return curve;
}

namespace {

int mixing_time_from(const TransitionMatrix& matrix, double epsilon, std::size_t start, int max_steps) {
    Evolution evo(matrix, start);
    int last_above = -1;
    for (int t = 0; t <= max_steps; ++t) {
        if (evo.tv() > epsilon) last_above = t;
        if (evo.l2_certificate() <= epsilon) return last_above + 1;
        evo.step();
    }
    throw TilingError(TilingErrorKind::NonConvergence, "TV evolution did not certify within the step cap");
}

}  // namespace

int mixing_time(const TransitionMatrix& matrix, double epsilon, std::span<const std::size_t> starts,
                int threads, int max_steps) {
    std::vector<std::size_t> all;
    if (starts.empty()) {
        all.resize(matrix.dimension());
        std::iota(all.begin(), all.end(), 0);
        starts = all;
    }
    std::vector<int> times(starts.size(), 0);
    parallel_for(0, starts.size(), threads, [&](std::size_t i) {
        times[i] = mixing_time_from(matrix, epsilon, starts[i], max_steps);
    });
    return *std::max_element(times.begin(), times.end());
}

std::vector<std::size_t> mixing_start_set(const TilingIndex& index, std::uint64_t seed,
                                          std::size_t random_count) {
    std::vector<char> member(index.size(), 0);
    for (std::size_t i : boundary_set(index)) member[i] = 1;
    for (std::size_t i = 0; i < index.size(); ++i) {
        const HalfBisectors h = half_bisectors(index.tiling(i));
        if (h.vertical_bisector() && h.horizontal_bisector()) member[i] = 1;
    }
    SplitMix64 rng(seed);
    for (std::size_t s = 0; s < random_count; ++s) {
        member[static_cast<std::size_t>(rng.uniform(index.size()))] = 1;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (member[i]) out.push_back(i);
    }
    return out;
}

double exact_statistic_tv(const TransitionMatrix& matrix, const TilingIndex& index, std::size_t start,
                          int t) {
    Evolution evo(matrix, start);
    for (int s = 0; s < t; ++s) evo.step();
    double mass = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (has_bisector(index.tiling(i), Axis::Vertical)) mass += evo.mu[i];
    }
    const double stationary =
        static_cast<double>((Rational(subset_counts(matrix.size_exponent()).vertical,
                                      tiling_count(matrix.size_exponent())))
                                .to_long_double());
    return std::abs(mass - stationary);
}

StatisticTVEstimate statistic_tv_lower_bound(int k, int t, std::uint64_t samples, std::uint64_t seed,
                                             int threads) {
    if (k < 2) throw TilingError(TilingErrorKind::SizeGuard, "statistic TV needs k >= 2");
    StatisticTVEstimate out;
    out.k = k;
    out.t = t;
    out.samples = samples;
    out.stationary_mass =
        static_cast<double>(Rational(subset_counts(k).vertical, tiling_count(k)).to_long_double());
    const Tiling start = vertical_strip_tiling(k);
    std::vector<std::uint64_t> hits_per_chunk;
    const std::size_t chunks = std::max<std::size_t>(1, static_cast<std::size_t>(threads) * 4);
    hits_per_chunk.assign(chunks, 0);
    const std::uint64_t per_chunk = samples / chunks;
    const std::uint64_t remainder = samples % chunks;
    parallel_for(0, chunks, threads, [&](std::size_t c) {
        const std::uint64_t count = per_chunk + (c < remainder ? 1 : 0);
        const std::uint64_t first_stream = c * per_chunk + std::min<std::uint64_t>(c, remainder);
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < count; ++s) {
            SplitMix64 rng = chain_stream(seed, first_stream + s);
            Tiling state = start;
            for (int step = 0; step < t; ++step) state = edge_flip_step(state, rng);
            if (has_bisector(state, Axis::Vertical)) ++hits;
        }
        hits_per_chunk[c] = hits;
    });
    std::uint64_t hits = 0;
    for (std::uint64_t h : hits_per_chunk) hits += h;
    const double p_hat = samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples);
    out.estimate = std::abs(p_hat - out.stationary_mass);
    out.ci_halfwidth =
        samples == 0 ? 0.0 : 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(samples));
    return out;
}

StatisticTVCurve statistic_tv_curve(int k, int t_max, int stride, std::uint64_t samples,
                                    std::uint64_t seed, int threads) {
    if (stride < 1) stride = 1;
    StatisticTVCurve curve;
    curve.k = k;
    for (int t = 0; t <= t_max; t += stride) {
        curve.points.push_back(statistic_tv_lower_bound(
            k, t, samples, chain_stream(seed, static_cast<std::uint64_t>(t)).state, threads));
    }
    return curve;
}

SandwichReport mixing_sandwich(int k, double epsilon, int threads) {
    if (k < 2 || k > 3) {
        throw TilingError(TilingErrorKind::SizeGuard, "sandwich check runs exhaustively at k = 2..3");
    }
    const TilingIndex index = TilingIndex::enumerate(k);
    const TransitionMatrix matrix = TransitionMatrix::edge(index);
    SandwichReport out;
    out.k = k;
    out.epsilon = epsilon;
    out.t_mix = mixing_time(matrix, epsilon, {}, threads);
    out.t_rel = 1.0 / (1.0 - dense_lambda2(matrix));
    const double n_states = static_cast<double>(index.size());
    out.lower_natural = (out.t_rel - 1.0) * std::log(1.0 / (2.0 * epsilon));
    out.upper_natural = std::log(n_states / epsilon) * out.t_rel;
    out.holds_natural = out.lower_natural <= out.t_mix && out.t_mix <= out.upper_natural;
    out.lower_log2 = (out.t_rel - 1.0) * std::log2(1.0 / (2.0 * epsilon));
    out.upper_log2 = std::log2(n_states / epsilon) * out.t_rel;
    out.holds_log2 = out.lower_log2 <= out.t_mix && out.t_mix <= out.upper_log2;
    out.pi_min_power_bound = tiling_count(k) < pow2(1u << k);
    return out;
}

ScalingReport scaling_report(std::span<const SpectralReport> gaps) {
    ScalingReport out;
    out.lower_exponent = 2.0 * std::log2(static_cast<double>(kGoldenRatio));
    out.upper_exponent = std::log2(17.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const SpectralReport& g : gaps) {
        out.points.push_back(ScalingPoint{g.k, g.gap, g.relaxation_time});
        const double x = static_cast<double>(g.k) * std::log(2.0);  // log n
        const double y = std::log(g.relaxation_time);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(out.points.size());
    out.slope = n < 2 ? 0.0 : (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.bracketed = out.slope >= out.lower_exponent && out.slope <= out.upper_exponent;
    return out;
}

}  // namespace dyadic
