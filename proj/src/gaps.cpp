#include "yoccoz/gaps.hpp"

#include "yoccoz/error.hpp"

#include <algorithm>
#include <map>

namespace yoccoz {

std::vector<std::vector<Arc>> lamination_gaps(const std::vector<Polygon>& polygons) {
    struct Owner {
        std::size_t poly;
        std::size_t index;
    };
    std::map<Angle, Owner> owner;
    for (std::size_t p = 0; p < polygons.size(); ++p)
        for (std::size_t i = 0; i < polygons[p].vertices.size(); ++i)
            owner.emplace(polygons[p].vertices[i], Owner{p, i});
    std::vector<Angle> verts;
    for (const auto& [a, o] : owner) verts.push_back(a);
    const std::size_t n = verts.size();
    if (n < 2) throw Error("invalid-lamination", "need at least two vertices");
    std::map<Angle, std::size_t> arc_from;
    for (std::size_t i = 0; i < n; ++i) arc_from[verts[i]] = i;

    std::vector<bool> seen(n, false);
    std::vector<std::vector<Arc>> gaps;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::vector<Arc> gap;
        std::size_t cur = i;
        while (!seen[cur]) {
            seen[cur] = true;
            const Angle& end = verts[(cur + 1) % n];
            gap.push_back(Arc{verts[cur], end});
            const Owner& o = owner.at(end);
            const auto& vs = polygons[o.poly].vertices;
            cur = arc_from.at(vs[(o.index + vs.size() - 1) % vs.size()]);
        }
        std::sort(gap.begin(), gap.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
        gaps.push_back(std::move(gap));
    }
    return gaps;
}

std::vector<Polygon> level_one_polygons(const Lamination& lam) {
    Polygon sides[2];
    for (const auto& v : lam.alpha()) {
        auto [a, b] = v.halves();
        sides[lam.side(a)].vertices.push_back(a);
        sides[lam.side(b)].vertices.push_back(b);
    }
    for (auto& s : sides) {
        std::sort(s.vertices.begin(), s.vertices.end());
        s.depth = 1;
    }
    return {sides[0], sides[1]};
}

Angle arc_midpoint(const Arc& arc) {
    return Angle::from_rational(arc.start.value() + ccw_length(arc.start, arc.end) / 2);
}

}  // namespace yoccoz
