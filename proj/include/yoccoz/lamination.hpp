#pragma once

#include "yoccoz/angle.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace yoccoz {

/// Set of angles whose rays share a landing point; vertices sorted ascending.
struct Polygon {
    std::vector<Angle> vertices;
    std::size_t depth = 0;
};

/// The rotation-p/q cycle of doubling, sorted ascending; denominators 2^q - 1.
std::vector<Angle> alpha_cycle(unsigned p, unsigned q);

/// Pullback of the alpha polygon under doubling, split by the critical leaf.
class Lamination {
public:
    /// Combinatorics valid to `depth`; explicit polygons are kept for depths
    /// 0..store_depth (defaults to `depth`). Throws case1-degenerate when the
    /// orbit of theta_v reaches the alpha cycle within `depth` doublings.
    static Lamination build(unsigned p, unsigned q, const Angle& theta_v, std::size_t depth,
                            std::optional<std::size_t> store_depth = std::nullopt);

    unsigned p() const { return p_; }
    unsigned q() const { return q_; }
    const Angle& theta_v() const { return theta_v_; }
    std::size_t depth() const { return depth_; }
    std::size_t stored_depth() const { return polygons_.size() - 1; }

    /// Alpha cycle, sorted ascending.
    const std::vector<Angle>& alpha() const { return alpha_; }
    /// Alpha angles bounding the critical-value sector (A, D), counterclockwise.
    const Angle& A() const { return A_; }
    const Angle& D() const { return D_; }
    /// Critical leaf endpoints theta_v/2 and theta_v/2 + 1/2.
    const std::array<Angle, 2>& critical_leaf() const { return leaf_; }

    const std::vector<Polygon>& polygons(std::size_t depth) const { return polygons_.at(depth); }

    /// Index of the level-0 sector containing x, or -1 when x is an alpha angle.
    int sector(const Angle& x) const;
    /// 0 inside the open arc (leaf[0], leaf[1]), 1 inside the other, 2 on the leaf.
    int side(const Angle& x) const;
    /// True when 2^level * x lies on the alpha cycle.
    bool is_vertex(const Angle& x, std::size_t level) const;
    /// Least j with 2^j x on the alpha cycle, if any within max_level.
    std::optional<std::size_t> vertex_depth(const Angle& x, std::size_t max_level) const;
    /// Whether two angles that are both vertices at depth d lie in one polygon.
    bool same_polygon(const Angle& a, const Angle& b, std::size_t d) const;

private:
    unsigned p_ = 0, q_ = 0;
    Angle theta_v_;
    std::size_t depth_ = 0;
    std::vector<Angle> alpha_;
    Angle A_, D_;
    std::array<Angle, 2> leaf_;
    std::vector<std::vector<Polygon>> polygons_;
};

enum class Equiv { Equivalent, NotEquivalentToDepth, Unknown };
const char* to_string(Equiv e);

/// Ray-pair relation restricted to vertices of depth <= lam.depth().
Equiv ray_pair_equiv(const Lamination& lam, const Angle& t1, const Angle& t2);

struct SliceData {
    Angle A, B, C, D, E, F, Bk, Ck;
    std::size_t n = 0, m = 0, k = 0, q = 0;
};

/// Nested slices around the critical value. Throws needs-deeper-lamination
/// when no alpha-touching piece within lam.depth() excludes theta_v.
SliceData slice_data(const Lamination& lam, std::size_t max_k = 64);

using Word = std::vector<int>;  // letters 1 and 2

/// l_{w1} o ... o l_{wj} applied to (A, D).
std::pair<Angle, Angle> cantor_ray_pair(const SliceData& s, const Word& w);

/// e_{w1} o ... o e_{wj}(0) with e1(x) = x/3, e2(x) = 1 - x/3.
Rational cantor_coordinates(const Word& w);

/// Normalized gap-ratio triples over all words of length <= depth, in order of
/// increasing Cantor coordinate. `distinct` collects the different triples.
struct GeometryReport {
    std::vector<std::pair<Word, std::array<Rational, 3>>> ratios;
    std::vector<std::array<Rational, 3>> distinct;
};
GeometryReport bounded_geometry_report(const SliceData& s, std::size_t depth);

}  // namespace yoccoz
