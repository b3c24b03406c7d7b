#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "dyadic/bigint.hpp"
#include "dyadic/enumeration.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/tiling.hpp"

namespace dyadic {

enum class ChainKind { EdgeFlip, Block };

const char* chain_kind_name(ChainKind kind);

struct ChainConfig {
    int k = 1;
    ChainKind kind = ChainKind::EdgeFlip;
    std::uint64_t seed = 0;
};

/// One step of the edge-flip chain: uniform rectangle, uniform side, flip when
/// the side bisects a rectangle of twice the cell area and the result stays
/// dyadic; otherwise hold. Consumes two draws regardless.
Tiling edge_flip_step(const Tiling& t, SplitMix64& rng);

/// Retiles one half of t with rho when the needed bisector exists; otherwise
/// returns t unchanged. rho must have size exponent k-1.
Tiling apply_block_move(const Tiling& t, Side direction, const Tiling& rho);

/// One step of the block dynamics: uniform tiling of half size (by index into
/// the deterministic enumeration order), uniform direction; retile that half
/// when the needed bisector exists, else hold. k >= 2.
Tiling block_step(const Tiling& t, const TilingIndex& half_index, SplitMix64& rng);

/// Half decomposition of every state plus join lookup tables; the engine
/// behind exact block-transition rows and exact coupling expectations.
struct BlockStructure {
    const TilingIndex* full = nullptr;
    const TilingIndex* half = nullptr;
    std::vector<std::int32_t> left, right, bottom, top;  // half indices, -1 without the bisector
    std::vector<std::uint32_t> join_vertical;            // [l * half_count + r] -> full index
    std::vector<std::uint32_t> join_horizontal;          // [b * half_count + t] -> full index

    static BlockStructure build(const TilingIndex& full_index, const TilingIndex& half_index);

    std::size_t half_count() const { return half->size(); }

    /// State after retiling `direction` of `state` with half tiling `rho`.
    std::uint32_t apply(std::uint32_t state, Side direction, std::uint32_t rho) const;
};

/// Symmetric stochastic transition matrix with exact entries numer/denominator
/// and implicit diagonal 1 - row sum. Uniform stationary law throughout.
class TransitionMatrix {
  public:
    /// Off-diagonals 2/(4n) on flip-adjacent pairs. 1 <= k <= 4.
    static TransitionMatrix edge(const TilingIndex& index);

    /// Off-diagonals m(x,y)/(4 |half|) where m counts generating
    /// (direction, rho) pairs. 2 <= k <= 4.
    static TransitionMatrix block(const BlockStructure& blocks);

    std::size_t dimension() const { return row_ptr_.size() - 1; }
    std::uint64_t denominator() const { return den_; }
    int size_exponent() const { return k_; }
    ChainKind kind() const { return kind_; }

    std::size_t row_begin(std::size_t i) const { return row_ptr_[i]; }
    std::size_t row_end(std::size_t i) const { return row_ptr_[i + 1]; }
    std::uint32_t col(std::size_t slot) const { return col_[slot]; }
    std::uint32_t numer(std::size_t slot) const { return numer_[slot]; }

    std::uint64_t offdiagonal_numerator_sum(std::size_t i) const;
    Rational diagonal(std::size_t i) const;
    Rational entry(std::size_t i, std::size_t j) const;
    double min_diagonal() const;
    bool is_symmetric() const;

    /// (P + I)/2: same off-diagonal numerators over a doubled denominator.
    TransitionMatrix lazied() const;

    Eigen::SparseMatrix<double> to_sparse() const;  // diagonal included
    void write_triplets(std::ostream& os) const;    // "i j p/q", reduced, diagonal included

  private:
    TransitionMatrix() = default;
    int k_ = 0;
    ChainKind kind_ = ChainKind::EdgeFlip;
    std::uint64_t den_ = 1;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> col_;
    std::vector<std::uint32_t> numer_;
};

double vertical_bisector_indicator(const Tiling& t);

struct TrajectoryResult {
    Tiling final;
    std::vector<double> trace;  // statistic at steps 0..n when requested
};

/// Deterministic given (config, start, steps). Block chains enumerate their
/// own half index.
TrajectoryResult run_trajectory(const ChainConfig& config, const Tiling& start, std::int64_t steps,
                                const std::function<double(const Tiling&)>& statistic = {});

}  // namespace dyadic
