#include "dyadic/enumeration.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "dyadic/parallel.hpp"

namespace dyadic {

TilingIndex TilingIndex::enumerate(int k) {
    if (k < 0 || k > kMaxEnumerationExponent) {
        throw TilingError(TilingErrorKind::SizeGuard, "materialized enumeration supports 0 <= k <= 4");
    }
    TilingIndex out;
    out.k_ = k;
    if (k == 0) {
        out.tilings_.push_back(Tiling::unit_square());
        out.encodings_.push_back(".");
        out.by_encoding_.emplace(".", 0);
        return out;
    }
    const TilingIndex prev = enumerate(k - 1);
    // vertical joins, then horizontal joins; the double-bisector overlap is
    // dropped by encoding dedup, mirroring the inclusion-exclusion count
    std::unordered_map<std::string, Tiling> seen;
    for (std::size_t a = 0; a < prev.size(); ++a) {
        for (std::size_t b = 0; b < prev.size(); ++b) {
            for (Axis axis : {Axis::Vertical, Axis::Horizontal}) {
                Tiling t = join(prev.tiling(a), prev.tiling(b), axis);
                std::string enc = canonical_encode(t);
                seen.emplace(std::move(enc), std::move(t));
            }
        }
    }
    out.encodings_.reserve(seen.size());
    for (const auto& [enc, t] : seen) out.encodings_.push_back(enc);
    std::sort(out.encodings_.begin(), out.encodings_.end());
    out.tilings_.reserve(seen.size());
    out.by_encoding_.reserve(seen.size());
    for (std::size_t i = 0; i < out.encodings_.size(); ++i) {
        auto node = seen.extract(out.encodings_[i]);
        out.tilings_.push_back(std::move(node.mapped()));
        out.by_encoding_.emplace(out.encodings_[i], i);
    }
    return out;
}

std::optional<std::size_t> TilingIndex::find(const std::string& encoding) const {
    auto it = by_encoding_.find(encoding);
    if (it == by_encoding_.end()) return std::nullopt;
    return it->second;
}

std::size_t TilingIndex::index_of(const Tiling& t) const {
    auto found = find(canonical_encode(t));
    if (!found) throw std::out_of_range("tiling not present in index");
    return *found;
}

void TilingIndex::dump(std::ostream& os) const {
    for (const std::string& enc : encodings_) os << enc << '\n';
}

BigInt streaming_tiling_count(int k) {
    if (k < 0 || k > kMaxStreamingExponent) {
        throw TilingError(TilingErrorKind::SizeGuard, "streaming count supports 0 <= k <= 5");
    }
    if (k <= kMaxEnumerationExponent) return BigInt(static_cast<std::int64_t>(TilingIndex::enumerate(k).size()));
    const TilingIndex prev = TilingIndex::enumerate(k - 1);
    std::int64_t with_horizontal = 0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        if (has_bisector(prev.tiling(i), Axis::Horizontal)) ++with_horizontal;
    }
    const BigInt half(static_cast<std::int64_t>(prev.size()));
    // distinct vertical joins + distinct horizontal joins - both-bisector joins
    return BigInt(2) * half * half - BigInt(with_horizontal) * BigInt(with_horizontal);
}

std::vector<FlipMove> neighbors(const Tiling& t) { return edge_flip_moves(t); }

std::size_t FlipGraph::edge_count() const {
    std::size_t deg = 0;
    for (const auto& adj : adjacency) deg += adj.size();
    return deg / 2;
}

void FlipGraph::dump_edges(std::ostream& os) const {
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        for (const Edge& e : adjacency[i]) {
            if (i < e.target) os << i << ' ' << e.target << ' ' << e.multiplicity << '\n';
        }
    }
}

FlipGraph flip_graph(const TilingIndex& index) {
    if (index.size_exponent() < 1) {
        throw TilingError(TilingErrorKind::SizeGuard, "flip graph needs k >= 1");
    }
    FlipGraph g;
    g.k = index.size_exponent();
    g.adjacency.resize(index.size());
    parallel_for(0, index.size(), 2, [&](std::size_t i) {
        auto moves = edge_flip_moves(index.tiling(i));
        auto& adj = g.adjacency[i];
        adj.reserve(moves.size());
        for (const FlipMove& mv : moves) {
            adj.push_back(FlipGraph::Edge{static_cast<std::uint32_t>(index.index_of(mv.result)),
                                          static_cast<std::uint32_t>(mv.realizations)});
        }
        std::sort(adj.begin(), adj.end(),
                  [](const FlipGraph::Edge& a, const FlipGraph::Edge& b) { return a.target < b.target; });
    });
    return g;
}

namespace {

// eccentricity of source by BFS; -1 when the graph is disconnected
int eccentricity(const FlipGraph& g, std::size_t source) {
    std::vector<int> dist(g.size(), -1);
    std::deque<std::uint32_t> queue;
    dist[source] = 0;
    queue.push_back(static_cast<std::uint32_t>(source));
    std::size_t visited = 1;
    int ecc = 0;
    while (!queue.empty()) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        for (const FlipGraph::Edge& e : g.adjacency[u]) {
            if (dist[e.target] < 0) {
                dist[e.target] = dist[u] + 1;
                ecc = std::max(ecc, dist[e.target]);
                ++visited;
                queue.push_back(e.target);
            }
        }
    }
    return visited == g.size() ? ecc : -1;
}

}  // namespace

bool is_connected(const FlipGraph& g) { return g.size() == 0 || eccentricity(g, 0) >= 0; }

int diameter(const FlipGraph& g) {
    if (g.size() == 0) return 0;
    std::vector<int> ecc(g.size(), 0);
    parallel_for(0, g.size(), 2, [&](std::size_t s) { ecc[s] = eccentricity(g, s); });
    int diam = 0;
    for (int e : ecc) {
        if (e < 0) throw TilingError(TilingErrorKind::Disconnected, "flip graph is disconnected");
        diam = std::max(diam, e);
    }
    return diam;
}

std::vector<std::size_t> boundary_set(const TilingIndex& index) {
    const int k = index.size_exponent();
    if (k < 2 || k > kMaxEnumerationExponent) {
        throw TilingError(TilingErrorKind::SizeGuard, "boundary scan supports 2 <= k <= 4");
    }
    std::vector<std::uint8_t> flips_in(index.size(), 0);
    parallel_for(0, index.size(), 2, [&](std::size_t i) {
        if (has_bisector(index.tiling(i), Axis::Vertical)) return;
        int count = 0;
        for (const FlipMove& mv : edge_flip_moves(index.tiling(i))) {
            if (has_bisector(mv.result, Axis::Vertical)) ++count;
        }
        flips_in[i] = static_cast<std::uint8_t>(count);
    });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (flips_in[i] == 0) continue;
        if (flips_in[i] != 1) {
            throw std::logic_error("boundary tiling with more than one flip into the bisected set");
        }
        out.push_back(i);
    }
    return out;
}

namespace {

void embed(const Tiling& t, std::int64_t x0, std::int64_t y0, std::int64_t w, std::int64_t h,
           std::vector<Rect>& out) {
    const std::int64_t sx = w / t.grid();
    const std::int64_t sy = h / t.grid();
    for (const Rect& r : t.rects()) {
        out.push_back(Rect{x0 + r.x0 * sx, y0 + r.y0 * sy, x0 + r.x1 * sx, y0 + r.y1 * sy});
    }
}

// All fillings of the square [x0,x0+s]^2 under the nested double-bisector
// construction with m halving levels left.
std::vector<std::vector<Rect>> build_upsilon(std::int64_t x0, std::int64_t y0, std::int64_t s, int m) {
    const std::int64_t half = s / 2;
    if (m == 2) {
        return {{Rect{x0, y0, x0 + half, y0 + half}, Rect{x0 + half, y0, x0 + s, y0 + half},
                 Rect{x0, y0 + half, x0 + half, y0 + s}, Rect{x0 + half, y0 + half, x0 + s, y0 + s}}};
    }
    const TilingIndex quads = TilingIndex::enumerate(m - 2);
    const TilingIndex strips = TilingIndex::enumerate(m - 3);
    std::vector<std::vector<Rect>> bottom_right;
    if (m == 3) {
        // a four-way split would drop below cell area: lone horizontal bisector
        std::vector<Rect> forced;
        embed(horizontal_strip_tiling(1), x0 + half, y0, half, half, forced);
        bottom_right.push_back(std::move(forced));
    } else {
        bottom_right = build_upsilon(x0 + half, y0, half, m - 2);
    }
    std::vector<std::vector<Rect>> out;
    for (std::size_t tl = 0; tl < quads.size(); ++tl) {
        for (std::size_t bl = 0; bl < quads.size(); ++bl) {
            for (std::size_t tr_left = 0; tr_left < strips.size(); ++tr_left) {
                for (std::size_t tr_right = 0; tr_right < strips.size(); ++tr_right) {
                    for (const auto& br : bottom_right) {
                        std::vector<Rect> rects;
                        embed(quads.tiling(tl), x0, y0 + half, half, half, rects);
                        embed(quads.tiling(bl), x0, y0, half, half, rects);
                        embed(strips.tiling(tr_left), x0 + half, y0 + half, half / 2, half, rects);
                        embed(strips.tiling(tr_right), x0 + half + half / 2, y0 + half, half / 2, half,
                              rects);
                        rects.insert(rects.end(), br.begin(), br.end());
                        out.push_back(std::move(rects));
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<Tiling> upsilon_set(int k) {
    if (k < 2 || k > kMaxEnumerationExponent) {
        throw TilingError(TilingErrorKind::SizeGuard, "upsilon construction supports 2 <= k <= 4");
    }
    const std::int64_t n = std::int64_t{1} << k;
    std::vector<Tiling> out;
    for (auto& rects : build_upsilon(0, 0, n, k)) {
        out.push_back(Tiling::unchecked(k, std::move(rects)));
    }
    return out;
}

}  // namespace dyadic
