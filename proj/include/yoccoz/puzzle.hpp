#pragma once

#include "yoccoz/lamination.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace yoccoz {

/// A test point: a rational angle or the critical point. The critical point is
/// carried by the leaf endpoint theta_v/2, which lies in every critical piece.
struct Point {
    Angle angle;
    bool critical = false;

    static Point at(const Angle& a) { return {a, false}; }
    static Point critical_point(const Lamination& lam) { return {lam.critical_leaf()[0], true}; }
};

/// Counterclockwise boundary arc of a gap.
struct Arc {
    Angle start, end;
    bool operator==(const Arc&) const = default;
};

/// Gap of the depth-`level` lamination, identified by any interior point.
struct PieceRef {
    std::size_t level = 0;
    Point anchor;
};

/// Memoized piece relations along the forward orbit of one point.
///
/// contains_value(a, l) answers whether theta_v lies in P_l(2^a x). The
/// recursion only compares level-0 sectors and sides of the critical leaf, so a
/// query costs O(1) amortized once the orbit data up to the horizon is cached.
class PieceTracker {
public:
    PieceTracker(const Lamination& lam, const Point& x, std::size_t horizon);

    std::size_t horizon() const { return horizon_; }
    /// 2^a x lies on the alpha cycle.
    bool on_alpha(std::size_t a) const { return xsector_.at(a) < 0; }
    int sector(std::size_t a) const { return xsector_.at(a); }
    int side(std::size_t a) const { return xside_.at(a); }
    bool contains_value(std::size_t a, std::size_t level);
    /// P_level(2^a x) is the critical piece of its level.
    bool critical(std::size_t a, std::size_t level);

private:
    bool same(std::size_t level, std::size_t a, std::size_t b);

    const Lamination& lam_;
    std::size_t horizon_;
    std::vector<int> xside_, xsector_, vside_, vsector_;
    int leaf_sector_;
    std::vector<std::int8_t> memo_;
};

/// P_level(theta). Throws on-boundary if theta is a vertex of depth <= level.
PieceRef piece_of(const Lamination& lam, std::size_t level, const Angle& theta);
PieceRef critical_piece(const Lamination& lam, std::size_t level);
PieceRef map_forward(const Lamination& lam, const PieceRef& piece);

bool same_piece(const Lamination& lam, const PieceRef& a, const PieceRef& b);
/// Same test with a caller-owned tracker for the first point (horizon >= level).
bool same_piece(const Lamination& lam, PieceTracker& x, std::size_t level, const Angle& y);
bool is_critical(const Lamination& lam, const PieceRef& piece);
/// theta inside the open gap (false on its boundary).
bool piece_contains(const Lamination& lam, const PieceRef& piece, const Angle& theta);

/// Boundary arcs sorted by start. Throws piece-too-complex past max_arcs.
std::vector<Arc> boundary(const Lamination& lam, const PieceRef& piece, std::size_t max_arcs = 1u << 16);
/// Level+1 pieces inside `piece`.
std::vector<PieceRef> children(const Lamination& lam, const PieceRef& piece);

/// tau(n, x) for n = 0..n_max; throws orbit-hits-alpha if x becomes a vertex.
std::vector<int> tau_sequence(const Lamination& lam, const Point& x, std::size_t n_max);
int tau(const Lamination& lam, std::size_t n, const Point& x);

bool annulus_degenerate(const Lamination& lam, std::size_t n);
std::size_t first_nondegenerate(const Lamination& lam);

struct DescendantInfo {
    bool is_descendant = false;
    std::size_t degree = 0;
};
/// Whether A_m(0) covers A_n(0) without ramification under f^(m-n); m > n.
DescendantInfo descendant_check(const Lamination& lam, std::size_t m, std::size_t n);
/// Level of the child of A_n(0) given by the first return into P_{n+1}(0).
std::optional<std::size_t> first_child(const Lamination& lam, std::size_t n, std::size_t budget);
/// Two descendants of A_n(0), neither a descendant of the other.
std::pair<std::size_t, std::size_t> fraternal_descendants(const Lamination& lam, std::size_t n,
                                                          std::size_t budget);

struct Rise {
    long m = 0;
    std::size_t time = 0;  // a[time] = m, a[time+1] = m+1
    bool operator==(const Rise&) const = default;
};

struct RadReport {
    std::vector<Rise> rises;
    std::optional<std::pair<long, long>> repeated_drop;  // (r, s), s <= r
    std::vector<std::size_t> drop_times;
    std::vector<Rise> witnesses;  // for s <= m < r, between consecutive repeats
};

/// Throws not-rise-and-drop when some a[n+1] > a[n] + 1.
RadReport rad_analyze(const std::vector<long>& seq);
/// A time t in [k, l) where seq rises past (m, m+1), when seq[k] <= m < m+1 <= seq[l]:
/// the last index at or below m, which the step bound forces to be followed by m + 1.
std::optional<std::size_t> ivt_witness(const std::vector<long>& seq, std::size_t k, std::size_t l, long m);

}  // namespace yoccoz
