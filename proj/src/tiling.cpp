#include "dyadic/tiling.hpp"

#include <algorithm>
#include <bit>

namespace dyadic {

namespace {

bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

// [a, b] within [0, n] is a dyadic interval iff its length is a power of two
// dividing its offset.
bool is_dyadic_span(std::int64_t a, std::int64_t b, std::int64_t n) {
    const std::int64_t w = b - a;
    return a >= 0 && b <= n && is_pow2(w) && a % w == 0;
}

bool interiors_overlap(const Rect& a, const Rect& b) {
    return std::max(a.x0, b.x0) < std::min(a.x1, b.x1) && std::max(a.y0, b.y0) < std::min(a.y1, b.y1);
}

}  // namespace

DyadicInterval x_interval(const Rect& r, int size_exponent) {
    const std::int64_t w = r.width();
    return DyadicInterval{r.x0 / w, size_exponent - std::countr_zero(static_cast<std::uint64_t>(w))};
}

DyadicInterval y_interval(const Rect& r, int size_exponent) {
    const std::int64_t h = r.height();
    return DyadicInterval{r.y0 / h, size_exponent - std::countr_zero(static_cast<std::uint64_t>(h))};
}

Tiling Tiling::unchecked(int size_exponent, std::vector<Rect> rects) {
    std::sort(rects.begin(), rects.end());
    return Tiling(size_exponent, std::move(rects));
}

Tiling Tiling::validate(std::vector<Rect> rects, int size_exponent) {
    if (size_exponent < 0 || size_exponent > 62) {
        throw TilingError(TilingErrorKind::SizeGuard, "size exponent out of range");
    }
    const std::int64_t n = std::int64_t{1} << size_exponent;
    std::sort(rects.begin(), rects.end());
    if (std::adjacent_find(rects.begin(), rects.end()) != rects.end() ||
        static_cast<std::int64_t>(rects.size()) != n) {
        throw TilingError(TilingErrorKind::WrongCount, "expected exactly 2^k distinct rectangles");
    }
    for (const Rect& r : rects) {
        if (!is_dyadic_span(r.x0, r.x1, n) || !is_dyadic_span(r.y0, r.y1, n)) {
            throw TilingError(TilingErrorKind::NonDyadicInterval, "rectangle sides are not dyadic intervals");
        }
        if (r.width() * r.height() != n) {
            throw TilingError(TilingErrorKind::WrongArea, "rectangle area is not 2^-k");
        }
    }
    for (std::size_t i = 0; i < rects.size(); ++i) {
        for (std::size_t j = i + 1; j < rects.size(); ++j) {
            if (rects[j].x0 >= rects[i].x1) break;  // sorted by x0
            if (interiors_overlap(rects[i], rects[j])) {
                throw TilingError(TilingErrorKind::Overlap, "rectangle interiors overlap");
            }
        }
    }
    Tiling t(size_exponent, std::move(rects));
    canonical_encode(t);  // throws CoverageGap if the set does not decompose
    return t;
}

HalfBisectors half_bisectors(const Tiling& t) {
    const std::int64_t m = t.grid() / 2;
    HalfBisectors h{true, true, true, true};
    for (const Rect& r : t.rects()) {
        if (r.y0 < m && m < r.y1) {  // crosses the horizontal midline
            if (r.x0 < m) h.left = false;
            if (r.x1 > m) h.right = false;
        }
        if (r.x0 < m && m < r.x1) {  // crosses the vertical midline
            if (r.y1 > m) h.top = false;
            if (r.y0 < m) h.bottom = false;
        }
    }
    return h;
}

bool has_bisector(const Tiling& t, Axis axis) {
    const std::int64_t m = t.grid() / 2;
    for (const Rect& r : t.rects()) {
        if (axis == Axis::Vertical && r.x0 < m && m < r.x1) return false;
        if (axis == Axis::Horizontal && r.y0 < m && m < r.y1) return false;
    }
    return true;
}

std::pair<Tiling, Tiling> split(const Tiling& t, Axis axis) {
    if (t.size_exponent() < 1 || !has_bisector(t, axis)) {
        throw TilingError(TilingErrorKind::NoSuchBisector, "tiling has no such bisector");
    }
    const std::int64_t m = t.grid() / 2;
    std::vector<Rect> low, high;
    low.reserve(t.rectangle_count() / 2);
    high.reserve(t.rectangle_count() / 2);
    for (const Rect& r : t.rects()) {
        if (axis == Axis::Vertical) {
            if (r.x1 <= m) {
                low.push_back(Rect{r.x0, r.y0 / 2, r.x1, r.y1 / 2});
            } else {
                high.push_back(Rect{r.x0 - m, r.y0 / 2, r.x1 - m, r.y1 / 2});
            }
        } else {
            if (r.y1 <= m) {
                low.push_back(Rect{r.x0 / 2, r.y0, r.x1 / 2, r.y1});
            } else {
                high.push_back(Rect{r.x0 / 2, r.y0 - m, r.x1 / 2, r.y1 - m});
            }
        }
    }
    const int k = t.size_exponent() - 1;
    return {Tiling::unchecked(k, std::move(low)), Tiling::unchecked(k, std::move(high))};
}

Tiling join(const Tiling& low, const Tiling& high, Axis axis) {
    if (low.size_exponent() != high.size_exponent()) {
        throw TilingError(TilingErrorKind::MismatchedSizes, "joined halves must have equal size");
    }
    const std::int64_t m = low.grid();
    std::vector<Rect> out;
    out.reserve(2 * low.rectangle_count());
    if (axis == Axis::Vertical) {
        for (const Rect& r : low.rects()) out.push_back(Rect{r.x0, 2 * r.y0, r.x1, 2 * r.y1});
        for (const Rect& r : high.rects()) out.push_back(Rect{r.x0 + m, 2 * r.y0, r.x1 + m, 2 * r.y1});
    } else {
        std::vector<Rect> bottom, top;
        bottom.reserve(low.rectangle_count());
        top.reserve(high.rectangle_count());
        for (const Rect& r : low.rects()) bottom.push_back(Rect{2 * r.x0, r.y0, 2 * r.x1, r.y1});
        for (const Rect& r : high.rects()) top.push_back(Rect{2 * r.x0, r.y0 + m, 2 * r.x1, r.y1 + m});
        std::merge(bottom.begin(), bottom.end(), top.begin(), top.end(), std::back_inserter(out));
    }
    return Tiling::unchecked(low.size_exponent() + 1, std::move(out));
}

std::vector<Rect> rects_meeting(const Tiling& t, Quadrant q) {
    const std::int64_t m = t.grid() / 2;
    const bool right_half = q == Quadrant::BottomRight || q == Quadrant::TopRight;
    const bool top_half = q == Quadrant::TopLeft || q == Quadrant::TopRight;
    const std::int64_t qx0 = right_half ? m : 0, qx1 = right_half ? t.grid() : m;
    const std::int64_t qy0 = top_half ? m : 0, qy1 = top_half ? t.grid() : m;
    std::vector<Rect> out;
    for (const Rect& r : t.rects()) {
        if (std::max(r.x0, qx0) < std::min(r.x1, qx1) && std::max(r.y0, qy0) < std::min(r.y1, qy1)) {
            out.push_back(r);
        }
    }
    return out;
}

bool quadrant_equal(const Tiling& a, const Tiling& b, Quadrant q) {
    return rects_meeting(a, q) == rects_meeting(b, q);
}

namespace {

// Sub-tiling encoder over absolute region bounds; rects is the exact rect set
// of the region.
void encode_region(const std::vector<Rect>& rects, std::int64_t x0, std::int64_t y0, std::int64_t x1,
                   std::int64_t y1, std::string& out) {
    if (rects.size() == 1) {
        out.push_back('.');
        return;
    }
    const std::int64_t xm = (x0 + x1) / 2;
    const std::int64_t ym = (y0 + y1) / 2;
    bool vertical = true;
    for (const Rect& r : rects) {
        if (r.x0 < xm && xm < r.x1) {
            vertical = false;
            break;
        }
    }
    std::vector<Rect> low, high;
    low.reserve(rects.size() / 2);
    high.reserve(rects.size() / 2);
    if (vertical) {
        for (const Rect& r : rects) (r.x1 <= xm ? low : high).push_back(r);
        out.append("V(");
        encode_region(low, x0, y0, xm, y1, out);
        out.push_back(',');
        encode_region(high, xm, y0, x1, y1, out);
        out.push_back(')');
        return;
    }
    for (const Rect& r : rects) {
        if (r.y0 < ym && ym < r.y1) {
            throw TilingError(TilingErrorKind::CoverageGap, "region admits no bisector");
        }
    }
    for (const Rect& r : rects) (r.y1 <= ym ? low : high).push_back(r);
    out.append("H(");
    encode_region(low, x0, y0, x1, ym, out);
    out.push_back(',');
    encode_region(high, x0, ym, x1, y1, out);
    out.push_back(')');
}

}  // namespace

std::string canonical_encode(const Tiling& t) {
    std::string out;
    out.reserve(5 * t.rectangle_count());
    encode_region(t.rects(), 0, 0, t.grid(), t.grid(), out);
    return out;
}

namespace {

struct SplitNode {
    char kind = '.';  // '.', 'V', 'H'
    int low = -1;
    int high = -1;
};

struct TreeParser {
    std::string_view text;
    std::size_t pos = 0;
    std::vector<SplitNode> nodes;

    [[noreturn]] void fail(const char* why) {
        throw TilingError(TilingErrorKind::MalformedEncoding, std::string("bad encoding: ") + why);
    }

    void expect(char c) {
        if (pos >= text.size() || text[pos] != c) fail("unexpected character");
        ++pos;
    }

    int parse_node(int depth) {
        if (depth > 62) fail("tree too deep");
        if (pos >= text.size()) fail("truncated");
        const char c = text[pos];
        if (c == '.') {
            ++pos;
            nodes.push_back(SplitNode{});
            return static_cast<int>(nodes.size()) - 1;
        }
        if (c != 'V' && c != 'H') fail("expected '.', 'V' or 'H'");
        ++pos;
        expect('(');
        const int low = parse_node(depth + 1);
        expect(',');
        const int high = parse_node(depth + 1);
        expect(')');
        nodes.push_back(SplitNode{c, low, high});
        return static_cast<int>(nodes.size()) - 1;
    }
};

int leaf_depth(const std::vector<SplitNode>& nodes, int id, int depth) {
    const SplitNode& n = nodes[id];
    if (n.kind == '.') return depth;
    const int a = leaf_depth(nodes, n.low, depth + 1);
    const int b = leaf_depth(nodes, n.high, depth + 1);
    if (a != b || a < 0) return -1;
    return a;
}

void materialize(const std::vector<SplitNode>& nodes, int id, std::int64_t x0, std::int64_t y0,
                 std::int64_t x1, std::int64_t y1, std::vector<Rect>& out) {
    const SplitNode& n = nodes[id];
    if (n.kind == '.') {
        out.push_back(Rect{x0, y0, x1, y1});
        return;
    }
    if (n.kind == 'V') {
        const std::int64_t xm = (x0 + x1) / 2;
        materialize(nodes, n.low, x0, y0, xm, y1, out);
        materialize(nodes, n.high, xm, y0, x1, y1, out);
    } else {
        const std::int64_t ym = (y0 + y1) / 2;
        materialize(nodes, n.low, x0, y0, x1, ym, out);
        materialize(nodes, n.high, x0, ym, x1, y1, out);
    }
}

}  // namespace

Tiling canonical_decode(std::string_view text) {
    TreeParser parser{.text = text, .pos = 0, .nodes = {}};
    const int root = parser.parse_node(0);
    if (parser.pos != text.size()) parser.fail("trailing characters");
    const int k = leaf_depth(parser.nodes, root, 0);
    if (k < 0) {
        throw TilingError(TilingErrorKind::MalformedEncoding, "bad encoding: leaves at unequal depths");
    }
    const std::int64_t n = std::int64_t{1} << k;
    std::vector<Rect> rects;
    rects.reserve(static_cast<std::size_t>(n));
    materialize(parser.nodes, root, 0, 0, n, n, rects);
    return Tiling::unchecked(k, std::move(rects));
}

namespace {

const Rect* find_rect(const std::vector<Rect>& rects, std::int64_t x0, std::int64_t y0) {
    auto it = std::lower_bound(rects.begin(), rects.end(), std::pair{x0, y0},
                               [](const Rect& r, const std::pair<std::int64_t, std::int64_t>& key) {
                                   return std::pair{r.x0, r.y0} < key;
                               });
    if (it == rects.end() || it->x0 != x0 || it->y0 != y0) return nullptr;
    return &*it;
}

// Replaces rectangles a and b of t (present, sorted) with n1 < n2.
Tiling replace_pair(const Tiling& t, const Rect& a, const Rect& b, Rect n1, Rect n2) {
    if (n2 < n1) std::swap(n1, n2);
    std::vector<Rect> out;
    out.reserve(t.rectangle_count());
    bool put1 = false, put2 = false;
    for (const Rect& r : t.rects()) {
        if (r == a || r == b) continue;
        if (!put1 && n1 < r) {
            out.push_back(n1);
            put1 = true;
        }
        if (!put2 && n2 < r) {
            out.push_back(n2);
            put2 = true;
        }
        out.push_back(r);
    }
    if (!put1) out.push_back(n1);
    if (!put2) out.push_back(n2);
    return Tiling::unchecked(t.size_exponent(), std::move(out));
}

// Flip of the congruent horizontal pair {left rect at (x0,y0), its right
// neighbor}: requires a dyadic union; yields the perpendicular (stacked) split.
std::optional<Tiling> flip_horizontal_pair(const Tiling& t, const Rect& r) {
    const std::int64_t w = r.width();
    if (r.x0 % (2 * w) != 0 || r.x1 + w > t.grid()) return std::nullopt;
    const Rect* other = find_rect(t.rects(), r.x1, r.y0);
    if (other == nullptr || other->x1 != r.x1 + w || other->y1 != r.y1) return std::nullopt;
    const std::int64_t ym = (r.y0 + r.y1) / 2;
    return replace_pair(t, r, *other, Rect{r.x0, r.y0, r.x1 + w, ym}, Rect{r.x0, ym, r.x1 + w, r.y1});
}

// Same for the vertical pair {bottom rect, the rect above it}.
std::optional<Tiling> flip_vertical_pair(const Tiling& t, const Rect& r) {
    const std::int64_t h = r.height();
    if (r.y0 % (2 * h) != 0 || r.y1 + h > t.grid()) return std::nullopt;
    const Rect* other = find_rect(t.rects(), r.x0, r.y1);
    if (other == nullptr || other->x1 != r.x1 || other->y1 != r.y1 + h) return std::nullopt;
    const std::int64_t xm = (r.x0 + r.x1) / 2;
    return replace_pair(t, r, *other, Rect{r.x0, r.y0, xm, r.y1 + h}, Rect{xm, r.y0, r.x1, r.y1 + h});
}

}  // namespace

std::optional<Tiling> try_edge_flip(const Tiling& t, std::size_t rect_index, Side side) {
    const Rect& r = t.rects()[rect_index];
    switch (side) {
        case Side::Right:
            return flip_horizontal_pair(t, r);
        case Side::Left: {
            const std::int64_t w = r.width();
            if (r.x0 - w < 0) return std::nullopt;
            const Rect* other = find_rect(t.rects(), r.x0 - w, r.y0);
            if (other == nullptr || other->x1 != r.x0 || other->y1 != r.y1) return std::nullopt;
            return flip_horizontal_pair(t, *other);
        }
        case Side::Top:
            return flip_vertical_pair(t, r);
        case Side::Bottom: {
            const std::int64_t h = r.height();
            if (r.y0 - h < 0) return std::nullopt;
            const Rect* other = find_rect(t.rects(), r.x0, r.y0 - h);
            if (other == nullptr || other->x1 != r.x1 || other->y1 != r.y0) return std::nullopt;
            return flip_vertical_pair(t, *other);
        }
    }
    return std::nullopt;
}

std::vector<FlipMove> edge_flip_moves(const Tiling& t) {
    std::vector<FlipMove> out;
    for (const Rect& r : t.rects()) {
        if (auto flipped = flip_horizontal_pair(t, r)) {
            out.push_back(FlipMove{std::move(*flipped), 2});
        }
        if (auto flipped = flip_vertical_pair(t, r)) {
            out.push_back(FlipMove{std::move(*flipped), 2});
        }
    }
    return out;
}

Tiling vertical_strip_tiling(int k) {
    const std::int64_t n = std::int64_t{1} << k;
    std::vector<Rect> rects;
    rects.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) rects.push_back(Rect{i, 0, i + 1, n});
    return Tiling::unchecked(k, std::move(rects));
}

Tiling horizontal_strip_tiling(int k) {
    const std::int64_t n = std::int64_t{1} << k;
    std::vector<Rect> rects;
    rects.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) rects.push_back(Rect{0, i, n, i + 1});
    return Tiling::unchecked(k, std::move(rects));
}

}  // namespace dyadic
