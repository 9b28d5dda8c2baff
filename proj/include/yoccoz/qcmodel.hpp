#pragma once

#include "yoccoz/angle.hpp"
#include "yoccoz/geometry.hpp"
#include "yoccoz/lamination.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace yoccoz {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

// ---------------------------------------------------------------------------
// Exact model domains

struct RatRect {
    Rational x0, y0, x1, y1;
};

/// S = (0,1) x (-1/2,1/2) with the notch squares h_w(Q0), |w| <= depth, where
/// Q0 = [1/3,2/3] x [-1/6,1/6], h_l(z) = z/3 and h_r(z) = (z-1)/3 + 1.
struct NotchedSquare {
    std::size_t depth = 0;
    std::vector<RatRect> squares;  // breadth-first: level 0, then 1, ...
};
NotchedSquare build_notched(std::size_t depth);

/// Closed intervals of [0,1] left on the real axis once the notches are removed,
/// ascending.
std::vector<std::pair<Rational, Rational>> midline_intervals(const NotchedSquare& s);

/// V_alpha = {alpha} x [-h, h] with h = (3/5) 2^-level, alpha dyadic in (-1,1).
struct Slit {
    Rational x;
    Rational half_height;
    std::size_t level = 0;
};
/// S' = (-1,1)^2 with all slits of level <= depth, sorted by x.
struct SlittedSquare {
    std::size_t depth = 0;
    std::vector<Slit> slits;
};
SlittedSquare build_slitted(std::size_t depth);

/// |y / (1 + x)| <= 3/5 and |y / (1 - x)| <= 3/5 at both slit ends, exactly.
bool slit_angle_ok(const Slit& s);

// ---------------------------------------------------------------------------
// Piecewise linear maps

struct PLCell {
    std::array<Vec2, 3> src, dst;  // both counterclockwise
    // dst = M src + t with M = [[a, b], [c, d]]
    double a = 0, b = 0, c = 0, d = 0, tx = 0, ty = 0;
    double dilatation = 1.0;

    Vec2 apply(Vec2 p) const { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }
};

/// Triangulated PL homeomorphism between planar regions.
class PLAtlas {
public:
    explicit PLAtlas(std::string domain = {}) : domain_(std::move(domain)) {}

    const std::string& domain() const { return domain_; }
    const std::vector<PLCell>& cells() const { return cells_; }

    /// Adds the affine cell src -> dst. Throws invalid-geometry when either
    /// triangle is degenerate or clockwise.
    void add(const std::array<Vec2, 3>& src, const std::array<Vec2, 3>& dst);
    void append(const PLAtlas& other);
    /// Adds a copy of `local` conjugated by similarities: p -> so + ss p on
    /// the source side, q -> dor + ds q on the target side, optionally
    /// composed with y -> -y on both. The linear part is exactly (ds/ss) M,
    /// so dilatation is unaffected by the placement.
    void add_similar(const PLCell& local, Vec2 so, double ss, Vec2 dor, double ds, bool mirror = false);

    /// Builds the search trees and per-cell dilatations (batched through the
    /// active kernel table). Call after the last add.
    void finalize();

    /// Some cell whose closed source (target) triangle contains p.
    std::optional<std::size_t> locate(Vec2 p, double tol = 1e-12) const;
    std::optional<std::size_t> locate_image(Vec2 p, double tol = 1e-12) const;
    /// All such cells; used for shared-edge continuity checks.
    std::vector<std::size_t> locate_all(Vec2 p, double tol = 1e-12) const;

    /// Throws outside-domain when no cell contains p.
    Vec2 map(Vec2 p) const;
    Vec2 inverse(Vec2 p) const;

    double max_dilatation() const;
    /// Distinct per-cell values after rounding to `digits` significant digits.
    std::vector<double> distinct_dilatations(int digits = 12) const;

private:
    struct Node {
        double x0, y0, x1, y1;
        std::size_t lo, hi;  // leaf range in order_ when left < 0
        long left = -1, right = -1;
    };
    struct Tree {
        std::vector<Node> nodes;
        std::vector<std::size_t> order;
    };
    void build_tree(Tree& t, bool target);
    void query(const Tree& t, bool target, Vec2 p, double tol, std::vector<std::size_t>& out, bool first) const;

    std::string domain_;
    std::vector<PLCell> cells_;
    Tree src_tree_, dst_tree_;
    bool finalized_ = false;
};

bool point_in_triangle(const std::array<Vec2, 3>& t, Vec2 p, double tol = 1e-12);

/// Rectangle with a marked interval [mark_lo, mark_hi] on its bottom side
/// (abscissae relative to the left edge).
struct MarkedRect {
    Vec2 origin;
    double width = 0, height = 0;
    double mark_lo = 0, mark_hi = 0;
};
/// Rectangle with a vertical slit from (slit_x, 0) up to (slit_x, slit_height).
struct SlittedRect {
    Vec2 origin;
    double width = 0, height = 0;
    double slit_x = 0, slit_height = 0;
};

/// Nine-triangle PL map from the marked rectangle minus its interval onto the
/// slitted rectangle minus its slit: the interval opens onto both slit sides,
/// its midpoint going to the tip. Throws invalid-geometry.
PLAtlas block_map(const MarkedRect& m, const SlittedRect& s);

/// Square smashing map phi from S minus the notches onto S' minus the slits,
/// to the given depth.
class PhiMap {
public:
    explicit PhiMap(std::size_t depth);

    std::size_t depth() const { return depth_; }
    const PLAtlas& atlas() const { return atlas_; }
    const NotchedSquare& notched() const { return notched_; }
    const SlittedSquare& slitted() const { return slitted_; }

    /// Throws outside-domain in the closed notches or outside the closed
    /// square, beyond-depth in the band |y| < 3^-(depth+1)/2 not yet covered.
    Vec2 operator()(Vec2 p) const;
    double dilatation_at(Vec2 p) const;

    /// Limit of phi along the real axis: the Cantor function, as an abscissa
    /// of S' (in [-1,1]).
    static double boundary_value(double x, std::size_t digits = 60);

private:
    void check_domain(Vec2 p) const;

    std::size_t depth_;
    NotchedSquare notched_;
    SlittedSquare slitted_;
    PLAtlas atlas_;
};

/// Self-similar PL extension S -> S' agreeing with phi on the boundary of S:
/// nested layers around (0,0) and (1,0), scaled by 1/3 in the source and 1/2
/// in the target, closed off by one affine box at the given depth.
PLAtlas psi_extension(std::size_t depth);

/// PL map of the square [-1,1]^2 onto the diamond |x| + |y| <= 1 that is the
/// identity on the convex hull of the slits.
PLAtlas square_to_diamond();

Vec2 rho_minus(Vec2 p);
Vec2 rho_plus(Vec2 p);
/// rho_- on x <= 0 and rho_+ on x > 0; throws outside-domain off the diamond.
Vec2 diamond_to_strip(Vec2 p);
/// Pointwise dilatation of diamond_to_strip.
double diamond_dilatation(Vec2 p);

struct DiamondGridReport {
    std::size_t samples = 0;
    double max = 0.0;
    Vec2 argmax;
    std::size_t above_three = 0;  // samples with K > 3 + 1e-9
};
/// K over an n x n grid of the diamond in (x, s) coordinates, s = y / (1 -+ x)
/// running over [-1, 1]; the extreme columns x = -1, 1 are excluded.
DiamondGridReport diamond_dilatation_grid(std::size_t n);

struct StripSlit {
    std::size_t level = 0;
    double x = 0.0;         // real part of the image segment
    double im_lo = 0.0, im_hi = 0.0;
    double x_spread = 0.0;  // max deviation from x over interior samples
};
struct StripModel {
    std::size_t depth = 0;
    std::vector<StripSlit> slits;
};

/// Composite S - N -> {0 < Im z < pi}: phi, square_to_diamond, rho_-+, then
/// w -> (pi/2)(w + i). Slit images are checked against the band
/// [pi/5, 4pi/5]; a violation throws model-violation.
StripModel strip_model(std::size_t depth, std::size_t samples_per_slit = 16);
Vec2 strip_map(const PhiMap& phi, const PLAtlas& diamond, Vec2 p);

// ---------------------------------------------------------------------------
// Slice embedding

struct CantorSample {
    Rational x;       // Cantor coordinate
    Angle q1, q2;     // the ray pair of the word
};

struct SliceEmbeddingOptions {
    std::size_t mesh = 16;      // cells per side of the sampled square
    double potential_top = 0.0; // 0: 2pi (B - A), the similar rectangle
    CurveOptions curve;
};

struct SliceEmbeddingReport {
    std::size_t depth = 0;
    std::vector<CantorSample> cantor;  // ascending x
    bool q1_monotone = false, q2_monotone = false;
    // Square extension Q of the normalized q1: dilatation of its PL
    // interpolant on the mesh and on the refined mesh.
    double q_dilatation = 0.0, q_dilatation_refined = 0.0;
    bool q_orientation_ok = false;
    // Embedding of the upper half into the plane: largest pointwise
    // dilatation (central differences) at cell centres of both meshes, rows
    // at potential 0 excluded.
    double xi_dilatation = 0.0, xi_dilatation_refined = 0.0;
    // The same pointwise measure for Q on the first mesh; equal to
    // xi_dilatation up to differencing error because the lift is conformal.
    double q_pointwise = 0.0;
    double min_green_off_cantor = 0.0;
    std::array<Complex, 4> corners{};  // images of (0,1/2), (1,1/2), (0,0+), (1,0+)
    std::array<double, 4> corner_error{};  // distance to the traced rays A, B
};

/// Cantor samples of all words of length <= depth, deduplicated by x.
std::vector<CantorSample> cantor_samples(const SliceData& s, std::size_t depth);

/// PL interpolation of the normalized q1 through the Cantor samples, as a self
/// map of [0,1].
double normalized_q(const std::vector<CantorSample>& samples, const SliceData& s, double x);

/// Homeomorphism of the unit square with boundary values
/// Q(x,0) = (q(x),0), Q(0,y) = (0,q(y)), Q(x,1) = (1-q(1-x),1),
/// Q(1,y) = (1,1-q(1-y)). It commutes with the reflections in both diagonals;
/// on the triangle below both diagonals it keeps heights and blends q into the
/// identity linearly towards the centre.
Vec2 square_extension(const std::vector<CantorSample>& samples, const SliceData& s, Vec2 p);

SliceEmbeddingReport slice_embedding(const SliceData& slice, const Lamination& lam, Complex c, std::size_t depth,
                                     const SliceEmbeddingOptions& opt = {});

}  // namespace yoccoz
