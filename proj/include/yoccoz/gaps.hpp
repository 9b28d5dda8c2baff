#pragma once

#include "yoccoz/puzzle.hpp"

#include <vector>

namespace yoccoz {

/// Complementary gaps of a finite unlinked family of polygons, each gap given
/// by its boundary arcs. Walking a gap counterclockwise, an arc ending at a
/// vertex v continues at the arc starting from the polygon predecessor of v.
std::vector<std::vector<Arc>> lamination_gaps(const std::vector<Polygon>& polygons);

/// The alpha polygon and its sibling preimage.
std::vector<Polygon> level_one_polygons(const Lamination& lam);

Angle arc_midpoint(const Arc& arc);

}  // namespace yoccoz
