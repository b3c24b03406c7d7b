#include "dyadic/chains.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "dyadic/parallel.hpp"

namespace dyadic {

const char* chain_kind_name(ChainKind kind) {
    return kind == ChainKind::EdgeFlip ? "edge" : "block";
}

Tiling edge_flip_step(const Tiling& t, SplitMix64& rng) {
    const std::size_t rect = static_cast<std::size_t>(rng.uniform(t.rectangle_count()));
    const Side side = static_cast<Side>(rng.uniform(4));
    auto flipped = try_edge_flip(t, rect, side);
    return flipped ? std::move(*flipped) : t;
}

Tiling apply_block_move(const Tiling& t, Side direction, const Tiling& rho) {
    if (t.size_exponent() < 2 || rho.size_exponent() != t.size_exponent() - 1) {
        throw TilingError(TilingErrorKind::MismatchedSizes, "block move needs a half-size tiling");
    }
    const Axis axis =
        (direction == Side::Left || direction == Side::Right) ? Axis::Vertical : Axis::Horizontal;
    if (!has_bisector(t, axis)) return t;
    auto [low, high] = split(t, axis);
    switch (direction) {
        case Side::Left:
            return join(rho, high, Axis::Vertical);
        case Side::Right:
            return join(low, rho, Axis::Vertical);
        case Side::Top:
            return join(low, rho, Axis::Horizontal);
        case Side::Bottom:
            return join(rho, high, Axis::Horizontal);
    }
    return t;
}

Tiling block_step(const Tiling& t, const TilingIndex& half_index, SplitMix64& rng) {
    if (t.size_exponent() < 2 || half_index.size_exponent() != t.size_exponent() - 1) {
        throw TilingError(TilingErrorKind::MismatchedSizes, "block step needs the half-size index");
    }
    const Tiling& rho = half_index.tiling(static_cast<std::size_t>(rng.uniform(half_index.size())));
    const Side direction = static_cast<Side>(rng.uniform(4));
    return apply_block_move(t, direction, rho);
}

BlockStructure BlockStructure::build(const TilingIndex& full_index, const TilingIndex& half_index) {
    if (full_index.size_exponent() < 2 || half_index.size_exponent() != full_index.size_exponent() - 1) {
        throw TilingError(TilingErrorKind::MismatchedSizes, "block structure needs indices one level apart");
    }
    BlockStructure out;
    out.full = &full_index;
    out.half = &half_index;
    const std::size_t n = full_index.size();
    out.left.assign(n, -1);
    out.right.assign(n, -1);
    out.bottom.assign(n, -1);
    out.top.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const Tiling& t = full_index.tiling(i);
        if (has_bisector(t, Axis::Vertical)) {
            auto [l, r] = split(t, Axis::Vertical);
            out.left[i] = static_cast<std::int32_t>(half_index.index_of(l));
            out.right[i] = static_cast<std::int32_t>(half_index.index_of(r));
        }
        if (has_bisector(t, Axis::Horizontal)) {
            auto [b, tp] = split(t, Axis::Horizontal);
            out.bottom[i] = static_cast<std::int32_t>(half_index.index_of(b));
            out.top[i] = static_cast<std::int32_t>(half_index.index_of(tp));
        }
    }
    const std::size_t h = half_index.size();
    out.join_vertical.resize(h * h);
    out.join_horizontal.resize(h * h);
    for (std::size_t a = 0; a < h; ++a) {
        for (std::size_t b = 0; b < h; ++b) {
            out.join_vertical[a * h + b] = static_cast<std::uint32_t>(
                full_index.index_of(join(half_index.tiling(a), half_index.tiling(b), Axis::Vertical)));
            out.join_horizontal[a * h + b] = static_cast<std::uint32_t>(
                full_index.index_of(join(half_index.tiling(a), half_index.tiling(b), Axis::Horizontal)));
        }
    }
    return out;
}

std::uint32_t BlockStructure::apply(std::uint32_t state, Side direction, std::uint32_t rho) const {
    const std::size_t h = half->size();
    switch (direction) {
        case Side::Left:
            return left[state] < 0 ? state : join_vertical[rho * h + static_cast<std::uint32_t>(right[state])];
        case Side::Right:
            return left[state] < 0 ? state : join_vertical[static_cast<std::uint32_t>(left[state]) * h + rho];
        case Side::Top:
            return bottom[state] < 0 ? state
                                     : join_horizontal[static_cast<std::uint32_t>(bottom[state]) * h + rho];
        case Side::Bottom:
            return bottom[state] < 0 ? state : join_horizontal[rho * h + static_cast<std::uint32_t>(top[state])];
    }
    return state;
}

TransitionMatrix TransitionMatrix::edge(const TilingIndex& index) {
    const int k = index.size_exponent();
    if (k < 1 || k > kMaxEnumerationExponent) {
        throw TilingError(TilingErrorKind::SizeGuard, "edge matrix supports 1 <= k <= 4");
    }
    TransitionMatrix out;
    out.k_ = k;
    out.kind_ = ChainKind::EdgeFlip;
    out.den_ = std::uint64_t{4} << k;  // 4n selections of (rectangle, side)
    const std::size_t n = index.size();
    std::vector<std::vector<std::uint32_t>> targets(n);
    parallel_for(0, n, 2, [&](std::size_t i) {
        for (const FlipMove& mv : edge_flip_moves(index.tiling(i))) {
            targets[i].push_back(static_cast<std::uint32_t>(index.index_of(mv.result)));
        }
        std::sort(targets[i].begin(), targets[i].end());
    });
    out.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) out.row_ptr_[i + 1] = out.row_ptr_[i] + targets[i].size();
    out.col_.reserve(out.row_ptr_[n]);
    out.numer_.reserve(out.row_ptr_[n]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t j : targets[i]) {
            out.col_.push_back(j);
            out.numer_.push_back(2);  // two (rectangle, side) selections per move
        }
    }
    return out;
}

TransitionMatrix TransitionMatrix::block(const BlockStructure& blocks) {
    const TilingIndex& index = *blocks.full;
    TransitionMatrix out;
    out.k_ = index.size_exponent();
    out.kind_ = ChainKind::Block;
    const std::size_t h = blocks.half_count();
    out.den_ = 4 * static_cast<std::uint64_t>(h);
    const std::size_t n = index.size();
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows(n);
    parallel_for(0, n, 2, [&](std::size_t i) {
        std::vector<std::uint32_t> hits;
        hits.reserve(4 * h);
        for (Side direction : {Side::Left, Side::Right, Side::Top, Side::Bottom}) {
            for (std::uint32_t rho = 0; rho < h; ++rho) {
                const std::uint32_t target = blocks.apply(static_cast<std::uint32_t>(i), direction, rho);
                if (target != i) hits.push_back(target);
            }
        }
        std::sort(hits.begin(), hits.end());
        auto& row = rows[i];
        for (std::size_t p = 0; p < hits.size();) {
            std::size_t q = p;
            while (q < hits.size() && hits[q] == hits[p]) ++q;
            row.emplace_back(hits[p], static_cast<std::uint32_t>(q - p));
            p = q;
        }
    });
    out.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) out.row_ptr_[i + 1] = out.row_ptr_[i] + rows[i].size();
    out.col_.reserve(out.row_ptr_[n]);
    out.numer_.reserve(out.row_ptr_[n]);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto [j, m] : rows[i]) {
            out.col_.push_back(j);
            out.numer_.push_back(m);
        }
    }
    return out;
}

std::uint64_t TransitionMatrix::offdiagonal_numerator_sum(std::size_t i) const {
    std::uint64_t sum = 0;
    for (std::size_t s = row_begin(i); s < row_end(i); ++s) sum += numer_[s];
    return sum;
}

Rational TransitionMatrix::diagonal(std::size_t i) const {
    return Rational(static_cast<std::int64_t>(den_ - offdiagonal_numerator_sum(i)),
                    static_cast<std::int64_t>(den_));
}

Rational TransitionMatrix::entry(std::size_t i, std::size_t j) const {
    if (i == j) return diagonal(i);
    for (std::size_t s = row_begin(i); s < row_end(i); ++s) {
        if (col_[s] == j) return Rational(numer_[s], static_cast<std::int64_t>(den_));
    }
    return Rational(0);
}

double TransitionMatrix::min_diagonal() const {
    std::uint64_t max_offdiag = 0;
    for (std::size_t i = 0; i < dimension(); ++i) {
        max_offdiag = std::max(max_offdiag, offdiagonal_numerator_sum(i));
    }
    return static_cast<double>(den_ - max_offdiag) / static_cast<double>(den_);
}

bool TransitionMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < dimension(); ++i) {
        for (std::size_t s = row_begin(i); s < row_end(i); ++s) {
            const std::size_t j = col_[s];
            bool found = false;
            for (std::size_t r = row_begin(j); r < row_end(j); ++r) {
                if (col_[r] == i) {
                    found = numer_[r] == numer_[s];
                    break;
                }
            }
            if (!found) return false;
        }
    }
    return true;
}

TransitionMatrix TransitionMatrix::lazied() const {
    TransitionMatrix out = *this;
    out.den_ *= 2;
    return out;
}

Eigen::SparseMatrix<double> TransitionMatrix::to_sparse() const {
    const std::size_t n = dimension();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(col_.size() + n);
    const double den = static_cast<double>(den_);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = row_begin(i); s < row_end(i); ++s) {
            trip.emplace_back(static_cast<int>(i), static_cast<int>(col_[s]), numer_[s] / den);
        }
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i),
                          static_cast<double>(den_ - offdiagonal_numerator_sum(i)) / den);
    }
    Eigen::SparseMatrix<double> out(static_cast<int>(n), static_cast<int>(n));
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

void TransitionMatrix::write_triplets(std::ostream& os) const {
    auto emit = [&](std::size_t i, std::size_t j, std::uint64_t numer) {
        const std::uint64_t g = std::gcd(numer, den_);
        os << i << ' ' << j << ' ' << numer / g << '/' << den_ / g << '\n';
    };
    for (std::size_t i = 0; i < dimension(); ++i) {
        emit(i, i, den_ - offdiagonal_numerator_sum(i));
        for (std::size_t s = row_begin(i); s < row_end(i); ++s) emit(i, col_[s], numer_[s]);
    }
}

double vertical_bisector_indicator(const Tiling& t) {
    return has_bisector(t, Axis::Vertical) ? 1.0 : 0.0;
}

TrajectoryResult run_trajectory(const ChainConfig& config, const Tiling& start, std::int64_t steps,
                                const std::function<double(const Tiling&)>& statistic) {
    if (start.size_exponent() != config.k) {
        throw TilingError(TilingErrorKind::MismatchedSizes, "start tiling has the wrong size");
    }
    SplitMix64 rng(config.seed);
    std::optional<TilingIndex> half;
    if (config.kind == ChainKind::Block) {
        if (config.k < 2) throw TilingError(TilingErrorKind::SizeGuard, "block chain needs k >= 2");
        half = TilingIndex::enumerate(config.k - 1);
    }
    TrajectoryResult out{start, {}};
    if (statistic) {
        out.trace.reserve(static_cast<std::size_t>(steps) + 1);
        out.trace.push_back(statistic(out.final));
    }
    for (std::int64_t i = 0; i < steps; ++i) {
        out.final = config.kind == ChainKind::EdgeFlip ? edge_flip_step(out.final, rng)
                                                       : block_step(out.final, *half, rng);
        if (statistic) out.trace.push_back(statistic(out.final));
    }
    return out;
}

}  // namespace dyadic
