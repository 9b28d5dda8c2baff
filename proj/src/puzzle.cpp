#include "yoccoz/puzzle.hpp"

#include "yoccoz/error.hpp"
#include "yoccoz/gaps.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace yoccoz {

namespace {

void require_level(const Lamination& lam, std::size_t level) {
    if (level > lam.depth())
        throw Error("needs-deeper-lamination", "level " + std::to_string(level) +
                                                   " exceeds lamination depth " + std::to_string(lam.depth()));
}

}  // namespace

PieceTracker::PieceTracker(const Lamination& lam, const Point& x, std::size_t horizon)
    : lam_(lam), horizon_(horizon) {
    require_level(lam, horizon);
    Angle xa = x.angle;
    Angle vb = lam.theta_v();
    for (std::size_t i = 0; i <= horizon; ++i) {
        xside_.push_back(lam.side(xa));
        xsector_.push_back(lam.sector(xa));
        vside_.push_back(lam.side(vb));
        vsector_.push_back(lam.sector(vb));
        xa = xa.doubled();
        vb = vb.doubled();
    }
    leaf_sector_ = lam.sector(lam.critical_leaf()[0]);
    const std::size_t n = horizon + 1;
    memo_.assign(n * n * n, -1);
}

bool PieceTracker::same(std::size_t level, std::size_t a, std::size_t b) {
    const std::size_t n = horizon_ + 1;
    std::int8_t& slot = memo_[(level * n + a) * n + b];
    if (slot >= 0) return slot != 0;
    bool r;
    if (level == 0) {
        r = xsector_[a] >= 0 && xsector_[a] == vsector_[b];
    } else {
        // Images must agree one level up; the preimage splits along the critical
        // leaf unless that image piece holds the critical value.
        r = same(level - 1, a + 1, b + 1) &&
            (same(level - 1, a + 1, 0) || xside_[a] == vside_[b]);
    }
    slot = r ? 1 : 0;
    return r;
}

bool PieceTracker::contains_value(std::size_t a, std::size_t level) {
    if (a + level > horizon_) throw Error("needs-deeper-lamination", "query beyond tracker horizon");
    return same(level, a, 0);
}

bool PieceTracker::critical(std::size_t a, std::size_t level) {
    if (level == 0) return xsector_.at(a) == leaf_sector_;
    return contains_value(a + 1, level - 1);
}

PieceRef piece_of(const Lamination& lam, std::size_t level, const Angle& theta) {
    require_level(lam, level);
    if (lam.is_vertex(theta, level))
        throw Error("on-boundary", theta.str() + " lies on a polygon of depth <= " + std::to_string(level));
    return PieceRef{level, Point::at(theta)};
}

PieceRef critical_piece(const Lamination& lam, std::size_t level) {
    require_level(lam, level);
    return PieceRef{level, Point::critical_point(lam)};
}

PieceRef map_forward(const Lamination& lam, const PieceRef& piece) {
    if (piece.level == 0) throw Error("invalid-level", "level-0 pieces have no puzzle image");
    if (piece.anchor.critical) return PieceRef{piece.level - 1, Point::at(lam.theta_v())};
    return PieceRef{piece.level - 1, Point::at(piece.anchor.angle.doubled())};
}

bool same_piece(const Lamination& lam, PieceTracker& tx, std::size_t l, const Angle& y0) {
    std::vector<int> ys;
    Angle y = y0;
    for (std::size_t i = 0; i < l; ++i) {
        ys.push_back(lam.side(y));
        y = y.doubled();
    }
    if (tx.on_alpha(l) || lam.sector(y) < 0 || tx.sector(l) != lam.sector(y)) return false;
    for (std::size_t i = l; i-- > 0;) {
        if (!tx.contains_value(i + 1, l - i - 1) && tx.side(i) != ys[i]) return false;
    }
    return true;
}

bool same_piece(const Lamination& lam, const PieceRef& a, const PieceRef& b) {
    if (a.level != b.level) return false;
    PieceTracker tx(lam, a.anchor, a.level);
    return same_piece(lam, tx, a.level, b.anchor.angle);
}

bool is_critical(const Lamination& lam, const PieceRef& piece) {
    if (piece.anchor.critical) return true;
    PieceTracker t(lam, piece.anchor, piece.level);
    return t.critical(0, piece.level);
}

bool piece_contains(const Lamination& lam, const PieceRef& piece, const Angle& theta) {
    if (lam.is_vertex(theta, piece.level)) return false;
    return same_piece(lam, piece, PieceRef{piece.level, Point::at(theta)});
}

std::vector<Arc> boundary(const Lamination& lam, const PieceRef& piece, std::size_t max_arcs) {
    require_level(lam, piece.level);
    // Walk the anchor orbit down to level 0, then pull the sector back up,
    // keeping both preimages exactly when the image gap holds theta_v.
    std::vector<Angle> orbit{piece.anchor.angle};
    for (std::size_t i = 0; i < piece.level; ++i) orbit.push_back(orbit.back().doubled());
    int s0 = lam.sector(orbit.back());
    if (s0 < 0) throw Error("on-boundary", "anchor lies on the lamination");
    const auto& al = lam.alpha();
    std::vector<Arc> arcs{Arc{al[s0], al[(s0 + 1) % al.size()]}};
    for (std::size_t i = piece.level; i-- > 0;) {
        bool holds_value = false;
        for (const auto& arc : arcs)
            if (in_arc(lam.theta_v(), arc.start, arc.end) == ArcPos::Inside) { holds_value = true; break; }
        int want = lam.side(orbit[i]);
        std::vector<Arc> next;
        for (const auto& arc : arcs) {
            Rational half_len = ccw_length(arc.start, arc.end) / 2;
            Angle s1 = arc.start.halves().first;
            for (int k = 0; k < 2; ++k) {
                Angle s = k == 0 ? s1 : s1 + Angle::normalize(1, 2);
                Arc pre{s, Angle::from_rational(s.value() + half_len)};
                if (!holds_value) {
                    Angle mid = Angle::from_rational(s.value() + half_len / 2);
                    if (lam.side(mid) != want) continue;
                }
                next.push_back(std::move(pre));
            }
        }
        if (next.size() > max_arcs) throw Error("piece-too-complex", "boundary exceeds arc budget");
        arcs = std::move(next);
    }
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
    return arcs;
}

std::vector<PieceRef> children(const Lamination& lam, const PieceRef& piece) {
    require_level(lam, piece.level + 1);
    if (piece.level == 0) {
        // Level-1 gaps come straight from the two level-1 polygons.
        std::vector<PieceRef> out;
        int s = lam.sector(piece.anchor.critical ? lam.critical_leaf()[0] : piece.anchor.angle);
        for (const auto& gap : lamination_gaps(level_one_polygons(lam))) {
            PieceRef child{1, Point::at(arc_midpoint(gap.front()))};
            if (lam.sector(child.anchor.angle) != s) continue;
            if (is_critical(lam, child)) child.anchor = Point::critical_point(lam);
            out.push_back(std::move(child));
        }
        return out;
    }
    PieceRef image = map_forward(lam, piece);
    std::vector<PieceRef> image_children = children(lam, image);
    std::vector<PieceRef> out;
    const Angle half = Angle::normalize(1, 2);
    if (!is_critical(lam, piece)) {
        int want = lam.side(piece.anchor.angle);
        for (const auto& h : image_children) {
            Angle a = h.anchor.angle.halves().first;
            if (lam.side(a) != want) a = a + half;
            out.push_back(PieceRef{piece.level + 1, Point::at(a)});
        }
        return out;
    }
    for (const auto& h : image_children) {
        PieceTracker t(lam, h.anchor, h.level);
        if (t.contains_value(0, h.level)) {
            out.push_back(critical_piece(lam, piece.level + 1));
            continue;
        }
        auto [a, b] = h.anchor.angle.halves();
        out.push_back(PieceRef{piece.level + 1, Point::at(a)});
        out.push_back(PieceRef{piece.level + 1, Point::at(b)});
    }
    return out;
}

std::vector<int> tau_sequence(const Lamination& lam, const Point& x, std::size_t n_max) {
    PieceTracker t(lam, x, n_max);
    std::vector<int> out;
    out.reserve(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (t.on_alpha(n))
            throw Error("orbit-hits-alpha", x.angle.str() + " reaches the alpha cycle by level " + std::to_string(n));
        int value = -1;
        for (std::size_t j = 0; j <= n; ++j) {
            if (t.critical(j, n - j)) { value = static_cast<int>(n - j); break; }
        }
        out.push_back(value);
    }
    return out;
}

int tau(const Lamination& lam, std::size_t n, const Point& x) { return tau_sequence(lam, x, n).back(); }

bool annulus_degenerate(const Lamination& lam, std::size_t n) {
    auto outer = boundary(lam, critical_piece(lam, n));
    auto inner = boundary(lam, critical_piece(lam, n + 1));
    std::set<Angle> ends;
    for (const auto& a : outer) { ends.insert(a.start); ends.insert(a.end); }
    for (const auto& a : inner)
        if (ends.count(a.start) || ends.count(a.end)) return true;
    return false;
}

std::size_t first_nondegenerate(const Lamination& lam) {
    for (std::size_t n = 0; n + 1 <= lam.depth(); ++n)
        if (!annulus_degenerate(lam, n)) return n;
    throw Error("needs-deeper-lamination", "every critical annulus up to the lamination depth is degenerate");
}

DescendantInfo descendant_check(const Lamination& lam, std::size_t m, std::size_t n) {
    if (m <= n) throw Error("invalid-level", "descendant check needs m > n");
    PieceTracker t(lam, Point::critical_point(lam), m + 1);
    std::size_t passes = 0;
    for (std::size_t j = 0; j < m - n; ++j) {
        if (!t.critical(j, m - j)) continue;
        // Ramified unless the inner piece follows the critical point too.
        if (!t.critical(j, m + 1 - j)) return {};
        ++passes;
    }
    if (!t.critical(m - n, n) || !t.critical(m - n, n + 1)) return {};
    return {true, std::size_t{1} << passes};
}

std::optional<std::size_t> first_child(const Lamination& lam, std::size_t n, std::size_t budget) {
    std::size_t top = std::min(budget, lam.depth());
    if (n + 2 > top) return std::nullopt;
    PieceTracker t(lam, Point::critical_point(lam), top);
    for (std::size_t m = 1; n + 1 + m <= top; ++m)
        if (t.critical(m, n + 1)) return n + m;
    return std::nullopt;
}

std::pair<std::size_t, std::size_t> fraternal_descendants(const Lamination& lam, std::size_t n,
                                                          std::size_t budget) {
    std::size_t top = std::min(budget, lam.depth() - 1);
    std::vector<std::size_t> found;
    for (std::size_t m = n + 1; m <= top; ++m) {
        if (!descendant_check(lam, m, n).is_descendant) continue;
        for (auto earlier : found)
            if (!descendant_check(lam, m, earlier).is_descendant) return {earlier, m};
        found.push_back(m);
    }
    throw Error("not-found-within-budget", "no fraternal pair of descendants of A_" + std::to_string(n) +
                                               " up to level " + std::to_string(top));
}

std::optional<std::size_t> ivt_witness(const std::vector<long>& seq, std::size_t k, std::size_t l, long m) {
    if (k > l || l >= seq.size() || seq[k] > m || seq[l] < m + 1) return std::nullopt;
    // Last index in [k, l] at or below m; the next value is forced to m + 1.
    std::size_t s = k;
    for (std::size_t i = k; i <= l; ++i)
        if (seq[i] <= m) s = i;
    if (s + 1 <= l && seq[s] == m && seq[s + 1] == m + 1) return s;
    return std::nullopt;
}

RadReport rad_analyze(const std::vector<long>& seq) {
    RadReport rep;
    std::map<std::pair<long, long>, std::vector<std::size_t>> drops;
    for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
        if (seq[t + 1] > seq[t] + 1)
            throw Error("not-rise-and-drop", "a[" + std::to_string(t + 1) + "] exceeds a[" + std::to_string(t) + "] + 1");
        if (seq[t + 1] == seq[t] + 1) rep.rises.push_back({seq[t], t});
        else drops[{seq[t], seq[t + 1]}].push_back(t);
    }
    const std::vector<std::size_t>* best = nullptr;
    for (const auto& [pair, times] : drops) {
        if (!best || times.size() > best->size() ||
            (times.size() == best->size() && pair.first - pair.second > rep.repeated_drop->first - rep.repeated_drop->second)) {
            best = &times;
            rep.repeated_drop = pair;
        }
    }
    if (!best) return rep;
    rep.drop_times = *best;
    auto [r, s] = *rep.repeated_drop;
    for (std::size_t i = 0; i + 1 < best->size(); ++i) {
        for (long m = s; m < r; ++m) {
            if (auto t = ivt_witness(seq, (*best)[i] + 1, (*best)[i + 1], m)) rep.witnesses.push_back({m, *t});
        }
    }
    return rep;
}

}  // namespace yoccoz
