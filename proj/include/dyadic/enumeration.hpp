#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "dyadic/bigint.hpp"
#include "dyadic/tiling.hpp"

namespace dyadic {

/// Materialized enumeration guard: 2^4 states is 11047 tilings, 2^5 would be
/// ~2*10^8 and is supported in streaming-count form only.
inline constexpr int kMaxEnumerationExponent = 4;
inline constexpr int kMaxStreamingExponent = 5;

/// Bijection between the tilings of one size and dense indices, ordered
/// lexicographically by canonical encoding so every run and thread count
/// produces the same index.
class TilingIndex {
  public:
    static TilingIndex enumerate(int k);  // throws SizeGuard outside 0..4

    int size_exponent() const { return k_; }
    std::size_t size() const { return tilings_.size(); }
    const Tiling& tiling(std::size_t i) const { return tilings_[i]; }
    const std::string& encoding(std::size_t i) const { return encodings_[i]; }

    std::optional<std::size_t> find(const std::string& encoding) const;
    std::size_t index_of(const Tiling& t) const;  // throws if absent

    void dump(std::ostream& os) const;  // newline-delimited canonical strings

  private:
    TilingIndex() = default;
    int k_ = 0;
    std::vector<Tiling> tilings_;
    std::vector<std::string> encodings_;
    std::unordered_map<std::string, std::size_t> by_encoding_;
};

/// Count of tilings of size 2^k measured from the materialized level below:
/// distinct vertical joins + distinct horizontal joins - double-bisector
/// overlap, every term counted by direct structure scans. Supports k = 5.
BigInt streaming_tiling_count(int k);

/// All tilings reachable from t by a single edge flip, with the number of
/// (rectangle, side) selections realizing each move (always 2).
std::vector<FlipMove> neighbors(const Tiling& t);

/// Undirected flip adjacency over a TilingIndex. multiplicity counts the
/// (rectangle, side) selections realizing the move.
struct FlipGraph {
    int k = 0;
    struct Edge {
        std::uint32_t target;
        std::uint32_t multiplicity;
    };
    std::vector<std::vector<Edge>> adjacency;

    std::size_t size() const { return adjacency.size(); }
    std::size_t edge_count() const;
    void dump_edges(std::ostream& os) const;  // "i j multiplicity", i < j
};

FlipGraph flip_graph(const TilingIndex& index);
bool is_connected(const FlipGraph& g);
int diameter(const FlipGraph& g);  // throws Disconnected

/// Indices of tilings without a vertical bisector that are one flip away from
/// one; every member has exactly one such flip (checked).
std::vector<std::size_t> boundary_set(const TilingIndex& index);

/// The nested double-bisector family: left quadrants free, top-right quadrant
/// vertically bisected one level deeper, bottom-right recursively refined,
/// with a lone horizontal bisector once a full four-way split would drop below
/// cell area. Requires 2 <= k <= 4.
std::vector<Tiling> upsilon_set(int k);

}  // namespace dyadic
