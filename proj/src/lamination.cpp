#include "yoccoz/lamination.hpp"

#include "yoccoz/error.hpp"

#include <algorithm>
#include <numeric>

namespace yoccoz {

std::vector<Angle> alpha_cycle(unsigned p, unsigned q) {
    if (q < 2 || q > 40 || p == 0 || p >= q || std::gcd(p, q) != 1)
        throw Error("invalid-rotation", "rotation number must be p/q in lowest terms with 0<p<q");
    const std::uint64_t den = (std::uint64_t{1} << q) - 1;
    std::vector<std::uint64_t> cycle(q);
    for (std::uint64_t x = 1; x < den; ++x) {
        // Doubling mod 2^q - 1 is a q-bit rotation; start from each cycle's minimum only.
        cycle[0] = x;
        bool minimal = true, exact_period = true;
        for (unsigned i = 1; i < q; ++i) {
            cycle[i] = (cycle[i - 1] * 2) % den;
            if (cycle[i] < x) { minimal = false; break; }
            if (cycle[i] == x) { exact_period = false; break; }
        }
        if (!minimal || !exact_period) continue;
        std::vector<std::uint64_t> sorted = cycle;
        std::sort(sorted.begin(), sorted.end());
        bool rotation = true;
        for (unsigned i = 0; i < q && rotation; ++i) {
            std::uint64_t img = (sorted[i] * 2) % den;
            rotation = sorted[(i + p) % q] == img;
        }
        if (!rotation) continue;
        std::vector<Angle> out;
        for (auto v : sorted) out.push_back(Angle::normalize(v, den));
        return out;
    }
    throw Error("internal-error", "no rotation cycle found");
}

Lamination Lamination::build(unsigned p, unsigned q, const Angle& theta_v, std::size_t depth,
                             std::optional<std::size_t> store_depth) {
    Lamination lam;
    lam.p_ = p;
    lam.q_ = q;
    lam.theta_v_ = theta_v;
    lam.depth_ = depth;
    lam.alpha_ = alpha_cycle(p, q);

    if (auto j = lam.vertex_depth(theta_v, depth))
        throw Error("case1-degenerate", "theta_v reaches the alpha cycle after " +
                                            std::to_string(*j) + " doublings");

    // Critical-value sector: the shortest arc between adjacent alpha angles.
    std::size_t best = 0;
    Rational best_len = 2;
    for (std::size_t i = 0; i < q; ++i) {
        Rational len = ccw_length(lam.alpha_[i], lam.alpha_[(i + 1) % q]);
        if (len < best_len) { best_len = len; best = i; }
    }
    lam.A_ = lam.alpha_[best];
    lam.D_ = lam.alpha_[(best + 1) % q];
    if (in_arc(theta_v, lam.A_, lam.D_) != ArcPos::Inside)
        throw Error("invalid-critical-value", "theta_v must lie in the critical-value sector (" +
                                                  lam.A_.str() + ", " + lam.D_.str() + ")");
    auto h = theta_v.halves();
    lam.leaf_ = {h.first, h.second};

    std::size_t stored = store_depth.value_or(depth);
    if (stored > depth) stored = depth;
    if (stored > 24) throw Error("depth-too-large", "explicit polygons limited to depth 24");
    lam.polygons_.resize(stored + 1);
    lam.polygons_[0].push_back(Polygon{lam.alpha_, 0});
    for (std::size_t j = 0; j < stored; ++j) {
        auto& next = lam.polygons_[j + 1];
        next.reserve(lam.polygons_[j].size() * 2);
        for (const auto& poly : lam.polygons_[j]) {
            Polygon sides[2];
            for (const auto& v : poly.vertices) {
                auto [a, b] = v.halves();
                for (const auto& pre : {a, b}) {
                    int s = lam.side(pre);
                    if (s == 2) throw Error("case1-degenerate", "preimage " + pre.str() + " lies on the critical leaf");
                    sides[s].vertices.push_back(pre);
                }
            }
            for (auto& s : sides) {
                std::sort(s.vertices.begin(), s.vertices.end());
                s.depth = j + 1;
                next.push_back(std::move(s));
            }
        }
    }
    return lam;
}

int Lamination::sector(const Angle& x) const {
    auto it = std::lower_bound(alpha_.begin(), alpha_.end(), x);
    if (it != alpha_.end() && *it == x) return -1;
    std::size_t idx = static_cast<std::size_t>(it - alpha_.begin());
    // Sector i is (alpha[i], alpha[i+1]); below alpha[0] wraps into the last sector.
    return idx == 0 ? static_cast<int>(alpha_.size()) - 1 : static_cast<int>(idx) - 1;
}

int Lamination::side(const Angle& x) const {
    switch (in_arc(x, leaf_[0], leaf_[1])) {
        case ArcPos::Inside: return 0;
        case ArcPos::Outside: return 1;
        default: return 2;
    }
}

bool Lamination::is_vertex(const Angle& x, std::size_t level) const {
    return sector(x.doubled(level)) < 0;
}

std::optional<std::size_t> Lamination::vertex_depth(const Angle& x, std::size_t max_level) const {
    // Vertices have denominators dividing 2^j (2^q - 1); anything else never lands.
    BigInt odd = x.den();
    std::size_t twos = 0;
    while ((odd & 1) == 0) { odd >>= 1; ++twos; }
    BigInt cyc = (BigInt(1) << q_) - 1;
    if (cyc % odd != 0) return std::nullopt;
    Angle y = x.doubled(std::min(twos, max_level + 1));
    for (std::size_t j = twos; j <= max_level; ++j) {
        if (sector(y) < 0) return j;
        y = y.doubled();
    }
    return std::nullopt;
}

bool Lamination::same_polygon(const Angle& a, const Angle& b, std::size_t d) const {
    if (a == b) return true;
    Angle x = a, y = b;
    for (std::size_t j = 0; j < d; ++j) {
        if (side(x) != side(y)) return false;
        x = x.doubled();
        y = y.doubled();
    }
    return sector(x) < 0 && sector(y) < 0;
}

const char* to_string(Equiv e) {
    switch (e) {
        case Equiv::Equivalent: return "equivalent";
        case Equiv::NotEquivalentToDepth: return "not-equivalent-to-depth";
        case Equiv::Unknown: return "unknown";
    }
    return "?";
}

Equiv ray_pair_equiv(const Lamination& lam, const Angle& t1, const Angle& t2) {
    auto d1 = lam.vertex_depth(t1, lam.depth());
    auto d2 = lam.vertex_depth(t2, lam.depth());
    if (!d1 || !d2) return Equiv::Unknown;
    if (*d1 != *d2) return Equiv::NotEquivalentToDepth;
    return lam.same_polygon(t1, t2, *d1) ? Equiv::Equivalent : Equiv::NotEquivalentToDepth;
}

}  // namespace yoccoz
