#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <set>
#include <sstream>

#include "dyadic/counting.hpp"
#include "dyadic/enumeration.hpp"

using namespace dyadic;

namespace {

// independent generation oracle: close the flip relation from one state
std::set<std::string> bfs_closure(int k) {
    std::set<std::string> seen;
    std::deque<Tiling> queue;
    queue.push_back(vertical_strip_tiling(k));
    seen.insert(canonical_encode(queue.front()));
    while (!queue.empty()) {
        const Tiling t = std::move(queue.front());
        queue.pop_front();
        for (const FlipMove& mv : edge_flip_moves(t)) {
            if (seen.insert(canonical_encode(mv.result)).second) queue.push_back(mv.result);
        }
    }
    return seen;
}

}  // namespace

TEST_CASE("enumeration sizes match the recurrence, k = 0..4") {
    for (int k = 0; k <= 4; ++k) {
        CHECK(BigInt(static_cast<std::int64_t>(TilingIndex::enumerate(k).size())) == tiling_count(k));
    }
    CHECK_THROWS_AS((void)TilingIndex::enumerate(5), TilingError);
    CHECK_THROWS_AS((void)TilingIndex::enumerate(-1), TilingError);
}

TEST_CASE("the seven size-4 tilings in canonical order") {
    const TilingIndex idx = TilingIndex::enumerate(2);
    const char* expected[] = {
        "H(H(.,.),H(.,.))", "H(H(.,.),V(.,.))", "H(V(.,.),H(.,.))", "V(H(.,.),H(.,.))",
        "V(H(.,.),V(.,.))", "V(V(.,.),H(.,.))", "V(V(.,.),V(.,.))",
    };
    REQUIRE(idx.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(idx.encoding(i) == expected[i]);
    CHECK(idx.find("V(H(.,.),H(.,.))").value() == 3);
    CHECK_FALSE(idx.find("V(.,.)").has_value());
}

TEST_CASE("every enumerated tiling validates; encodings are unique") {
    for (int k = 0; k <= 4; ++k) {
        const TilingIndex idx = TilingIndex::enumerate(k);
        std::set<std::string> seen;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            CHECK(seen.insert(idx.encoding(i)).second);
            if (k <= 3 || i % 37 == 0) {
                const Tiling checked = Tiling::validate(std::vector<Rect>(idx.tiling(i).rects()), k);
                CHECK(checked == idx.tiling(i));
            }
        }
        if (k >= 1) CHECK(idx.encoding(0) < idx.encoding(idx.size() - 1));
    }
}

TEST_CASE("flip closure reaches every enumerated state (irreducibility oracle)") {
    for (int k = 1; k <= 4; ++k) {
        const TilingIndex idx = TilingIndex::enumerate(k);
        const std::set<std::string> closure = bfs_closure(k);
        CHECK(closure.size() == idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) CHECK(closure.count(idx.encoding(i)) == 1);
    }
}

TEST_CASE("streaming count extends one level past materialization") {
    CHECK(streaming_tiling_count(5) == tiling_count(5));
    CHECK(streaming_tiling_count(5).to_decimal() == "198860242");
    CHECK(streaming_tiling_count(3) == tiling_count(3));
    CHECK_THROWS_AS((void)streaming_tiling_count(6), TilingError);
}

TEST_CASE("flip graph shape: edge counts, symmetry, degree bound, diameter") {
    const std::size_t expected_edges[] = {0, 1, 8, 192, 52000};
    const int expected_diameter[] = {0, 1, 4, 12, 32};
    for (int k = 1; k <= 4; ++k) {
        const TilingIndex idx = TilingIndex::enumerate(k);
        const FlipGraph g = flip_graph(idx);
        CHECK(g.edge_count() == expected_edges[k]);
        CHECK(is_connected(g));
        CHECK(diameter(g) == expected_diameter[k]);
        const std::size_t n = std::size_t{1} << k;
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(g.adjacency[i].size() <= 2 * n);
            for (const FlipGraph::Edge& e : g.adjacency[i]) {
                CHECK(e.multiplicity == 2);
                bool mirrored = false;
                for (const FlipGraph::Edge& back : g.adjacency[e.target]) {
                    if (back.target == i) mirrored = back.multiplicity == e.multiplicity;
                }
                CHECK(mirrored);
            }
        }
    }
}

TEST_CASE("edge list dump format") {
    const TilingIndex idx = TilingIndex::enumerate(1);
    const FlipGraph g = flip_graph(idx);
    std::ostringstream out;
    g.dump_edges(out);
    CHECK(out.str() == "0 1 2\n");
}

TEST_CASE("boundary scan matches the closed form and keeps a horizontal bisector") {
    const std::int64_t expected[] = {0, 0, 2, 16, 1568};
    for (int k = 2; k <= 4; ++k) {
        const TilingIndex idx = TilingIndex::enumerate(k);
        const auto boundary = boundary_set(idx);
        CHECK(static_cast<std::int64_t>(boundary.size()) == expected[k]);
        CHECK(BigInt(static_cast<std::int64_t>(boundary.size())) == boundary_count(k));
        for (std::size_t i : boundary) {
            const Tiling& t = idx.tiling(i);
            CHECK_FALSE(has_bisector(t, Axis::Vertical));
            CHECK(has_bisector(t, Axis::Horizontal));
        }
    }
}

TEST_CASE("upsilon family: counts, double bisectors, no duplicates") {
    for (int k = 2; k <= 4; ++k) {
        const std::vector<Tiling> family = upsilon_set(k);
        CHECK(BigInt(static_cast<std::int64_t>(family.size())) == upsilon_count(k));
        std::set<std::string> dedup;
        for (const Tiling& t : family) {
            const Tiling checked = Tiling::validate(std::vector<Rect>(t.rects()), k);
            CHECK(checked == t);
            const HalfBisectors h = half_bisectors(t);
            CHECK(h.vertical_bisector());
            CHECK(h.horizontal_bisector());
            dedup.insert(canonical_encode(t));
        }
        CHECK(dedup.size() == family.size());
    }
    // the single size-4 member is the unique double-bisector tiling there
    const std::vector<Tiling> smallest = upsilon_set(2);
    REQUIRE(smallest.size() == 1);
    CHECK(canonical_encode(smallest[0]) == "V(H(.,.),H(.,.))");
}

TEST_CASE("split/join round trip across every size-8 state") {
    for (int k = 1; k <= 3; ++k) {
        const TilingIndex idx = TilingIndex::enumerate(k);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const Tiling& t = idx.tiling(i);
            for (Axis axis : {Axis::Vertical, Axis::Horizontal}) {
                if (!has_bisector(t, axis)) continue;
                const auto [low, high] = split(t, axis);
                CHECK(join(low, high, axis) == t);
            }
        }
    }
}

TEST_CASE("encodings are injective against raw rectangle sets, k <= 4") {
    for (int k = 2; k <= 4; ++k) {
        const TilingIndex idx = TilingIndex::enumerate(k);
        std::set<std::vector<Rect>> rect_sets;
        for (std::size_t i = 0; i < idx.size(); ++i) rect_sets.insert(idx.tiling(i).rects());
        CHECK(rect_sets.size() == idx.size());
    }
}

TEST_CASE("bisector flags match the geometric predicate; every state has a bisector") {
    for (int k = 1; k <= 4; ++k) {
        const TilingIndex idx = TilingIndex::enumerate(k);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const Tiling& t = idx.tiling(i);
            const HalfBisectors h = half_bisectors(t);
            CHECK(h.vertical_bisector() == has_bisector(t, Axis::Vertical));
            CHECK(h.horizontal_bisector() == has_bisector(t, Axis::Horizontal));
            CHECK((h.vertical_bisector() || h.horizontal_bisector()));
        }
    }
}

TEST_CASE("index dump is newline-delimited canonical strings") {
    const TilingIndex idx = TilingIndex::enumerate(1);
    std::ostringstream out;
    idx.dump(out);
    CHECK(out.str() == "H(.,.)\nV(.,.)\n");
}
