#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dyadic {

/// [position * 2^-scale, (position + 1) * 2^-scale] with 0 <= position < 2^scale.
struct DyadicInterval {
    std::int64_t position = 0;
    int scale = 0;
    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Closed axis-aligned rectangle with corners on the 2^-k grid, stored as
/// integer coordinates scaled by 2^k. Ordered by lower-left corner, which is
/// unique within a tiling.
struct Rect {
    std::int64_t x0 = 0;
    std::int64_t y0 = 0;
    std::int64_t x1 = 0;
    std::int64_t y1 = 0;

    std::int64_t width() const { return x1 - x0; }
    std::int64_t height() const { return y1 - y0; }
    friend auto operator<=>(const Rect&, const Rect&) = default;
};

/// The (position, scale) form of a rectangle side within a size-2^k tiling.
DyadicInterval x_interval(const Rect& r, int size_exponent);
DyadicInterval y_interval(const Rect& r, int size_exponent);

enum class Axis { Vertical, Horizontal };
enum class Quadrant { BottomLeft = 0, BottomRight = 1, TopLeft = 2, TopRight = 3 };
inline constexpr Quadrant kAllQuadrants[4] = {Quadrant::BottomLeft, Quadrant::BottomRight,
                                              Quadrant::TopLeft, Quadrant::TopRight};

/// Presence flags for the four half-bisector segments. Left/right are the
/// halves of the line y = 1/2, top/bottom the halves of x = 1/2.
struct HalfBisectors {
    bool left = false;
    bool right = false;
    bool top = false;
    bool bottom = false;

    bool vertical_bisector() const { return top && bottom; }
    bool horizontal_bisector() const { return left && right; }
    unsigned bits() const {
        return (left ? 1u : 0u) | (right ? 2u : 0u) | (top ? 4u : 0u) | (bottom ? 8u : 0u);
    }
    int count() const { return int(left) + int(right) + int(top) + int(bottom); }
    friend bool operator==(const HalfBisectors&, const HalfBisectors&) = default;
};

enum class TilingErrorKind {
    WrongCount,
    WrongArea,
    Overlap,
    CoverageGap,
    NonDyadicInterval,
    NoSuchBisector,
    MismatchedSizes,
    MalformedEncoding,
    SizeGuard,
    Disconnected,
    NonConvergence,
};

class TilingError : public std::runtime_error {
  public:
    TilingError(TilingErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    TilingErrorKind kind() const { return kind_; }

  private:
    TilingErrorKind kind_;
};

/// A dyadic tiling of the unit square by 2^k rectangles of area 2^-k.
/// Immutable value; rectangles kept sorted by lower-left corner.
class Tiling {
  public:
    /// Full structural validation of raw rectangles; throws TilingError.
    static Tiling validate(std::vector<Rect> rects, int size_exponent);

    /// Trusts the caller: rects must form a valid tiling (sorted or not).
    static Tiling unchecked(int size_exponent, std::vector<Rect> rects);

    static Tiling unit_square() { return unchecked(0, {Rect{0, 0, 1, 1}}); }

    int size_exponent() const { return k_; }
    std::int64_t grid() const { return std::int64_t{1} << k_; }
    std::size_t rectangle_count() const { return rects_.size(); }
    const std::vector<Rect>& rects() const { return rects_; }

    friend bool operator==(const Tiling& a, const Tiling& b) {
        return a.k_ == b.k_ && a.rects_ == b.rects_;
    }
    friend auto operator<=>(const Tiling& a, const Tiling& b) = default;

  private:
    Tiling(int k, std::vector<Rect> rects) : k_(k), rects_(std::move(rects)) {}
    int k_ = 0;
    std::vector<Rect> rects_;
};

HalfBisectors half_bisectors(const Tiling& t);  // requires k >= 1
bool has_bisector(const Tiling& t, Axis axis);

/// Halves of a bisected tiling, rescaled to size 2^(k-1); throws NoSuchBisector.
/// Vertical axis returns (left, right), horizontal returns (bottom, top).
std::pair<Tiling, Tiling> split(const Tiling& t, Axis axis);

/// Inverse of split: assemble a size-2^(k+1) tiling; throws MismatchedSizes.
Tiling join(const Tiling& low, const Tiling& high, Axis axis);

/// Rectangles whose interior meets the open quadrant.
std::vector<Rect> rects_meeting(const Tiling& t, Quadrant q);
bool quadrant_equal(const Tiling& a, const Tiling& b, Quadrant q);

/// Canonical tree serialization, grammar T ::= "." | "V(" T "," T ")" | "H(" T "," T ")".
/// When both bisectors exist the vertical split is emitted, at every level, so
/// equal tilings always produce identical strings.
std::string canonical_encode(const Tiling& t);

/// Parses any well-formed split tree (not only canonical spellings) and
/// rebuilds the tiling. Throws MalformedEncoding.
Tiling canonical_decode(std::string_view text);

enum class Side { Left = 0, Right = 1, Top = 2, Bottom = 3 };

/// One attempted edge flip: rectangle `rect_index` (in sorted order) and one of
/// its sides. Returns the flipped tiling when the side bisects a rectangle of
/// twice the cell area and the flip stays dyadic; nullopt otherwise.
std::optional<Tiling> try_edge_flip(const Tiling& t, std::size_t rect_index, Side side);

/// All tilings one edge flip away. Each move is realized by exactly two
/// (rectangle, side) selections.
struct FlipMove {
    Tiling result;
    int realizations;  // always 2
};
std::vector<FlipMove> edge_flip_moves(const Tiling& t);

Tiling vertical_strip_tiling(int k);    // k recursive vertical splits
Tiling horizontal_strip_tiling(int k);  // k recursive horizontal splits

}  // namespace dyadic
