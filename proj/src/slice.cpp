#include "yoccoz/error.hpp"
#include "yoccoz/lamination.hpp"
#include "yoccoz/puzzle.hpp"

#include <algorithm>

namespace yoccoz {

namespace {

Rational pow2(std::size_t e) { return Rational(BigInt(1) << e); }

Angle shift(const Angle& a, const Rational& d) { return Angle::from_rational(a.value() + d); }

}  // namespace

SliceData slice_data(const Lamination& lam, std::size_t max_k) {
    SliceData s;
    s.q = lam.q();
    s.A = lam.A();
    s.D = lam.D();
    const Angle& tv = lam.theta_v();
    const BigInt cyc = (BigInt(1) << lam.q()) - 1;

    bool found = false;
    for (std::size_t n = 1; n <= lam.depth() && !found; ++n) {
        // A point just counterclockwise of A, closer than any level-n vertex.
        Angle near_a = shift(s.A, Rational(BigInt(1), cyc << (n + 1)));
        auto arcs = boundary(lam, piece_of(lam, n, near_a));
        bool touches = false;
        for (const auto& arc : arcs)
            if (in_arc(tv, arc.start, arc.end) != ArcPos::Outside) touches = true;
        if (touches) continue;
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const Arc& cur = arcs[i];
            const Arc& nxt = arcs[(i + 1) % arcs.size()];
            if (in_arc(tv, cur.end, nxt.start) == ArcPos::Inside) {
                s.B = cur.end;
                s.C = nxt.start;
            }
        }
        s.n = n;
        found = true;
    }
    if (!found)
        throw Error("needs-deeper-lamination", "no alpha-touching piece up to depth " +
                                                   std::to_string(lam.depth()) + " excludes theta_v");

    const Rational span = ccw_length(s.A, s.D);
    const Rational off_b = ccw_length(s.A, s.B), off_c = ccw_length(s.A, s.C);
    if (!(0 < off_b && off_b < ccw_length(s.A, tv) && ccw_length(s.A, tv) < off_c && off_c < span))
        throw Error("internal-error", "separating pair does not sit between A and D");

    bool have_m = false;
    for (std::size_t m = s.n; m < s.n + s.q; ++m) {
        if (s.B.doubled(m) == s.D && s.C.doubled(m) == s.A) {
            s.m = m;
            have_m = true;
            break;
        }
    }
    if (!have_m) throw Error("internal-error", "no return time m in [n, n+q)");

    const Rational ba = off_b, dc = ccw_length(s.C, s.D);
    for (std::size_t k = 1; k <= max_k; ++k) {
        const Rational shrink = pow2(k * s.q);
        Rational bk_a = ba / shrink, d_ck = dc / shrink;
        Rational b_e = d_ck / pow2(s.m), f_c = bk_a / pow2(s.m);
        if (!(b_e + bk_a < ba && f_c + d_ck < dc)) continue;
        s.k = k;
        s.Bk = shift(s.A, bk_a);
        s.Ck = shift(s.D, -d_ck);
        s.E = shift(s.B, -b_e);
        s.F = shift(s.C, f_c);
        std::vector<Rational> offs;
        for (const Angle* a : {&s.Bk, &s.E, &s.B, &s.C, &s.F, &s.Ck}) offs.push_back(ccw_length(s.A, *a));
        offs.push_back(span);
        if (!(offs.front() > 0 && std::is_sorted(offs.begin(), offs.end()) &&
              std::adjacent_find(offs.begin(), offs.end()) == offs.end()))
            throw Error("internal-error", "slice angles out of cyclic order");
        return s;
    }
    throw Error("needs-deeper-lamination", "no contraction exponent k up to " + std::to_string(max_k));
}

std::pair<Angle, Angle> cantor_ray_pair(const SliceData& s, const Word& w) {
    Angle a = s.A, b = s.D;
    const Rational g = pow2(s.k * s.q);
    const Rational h = pow2(s.m + s.k * s.q);
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        Rational x = ccw_length(s.A, a), y = ccw_length(b, s.D);
        if (*it == 1) {
            a = shift(s.A, x / g);
            b = shift(s.D, -y / g);
        } else if (*it == 2) {
            a = shift(s.B, -y / h);
            b = shift(s.C, x / h);
        } else {
            throw Error("invalid-word", "letters must be 1 or 2");
        }
    }
    return {a, b};
}

Rational cantor_coordinates(const Word& w) {
    Rational x = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (*it == 1) x = x / 3;
        else if (*it == 2) x = 1 - x / 3;
        else throw Error("invalid-word", "letters must be 1 or 2");
    }
    return x;
}

GeometryReport bounded_geometry_report(const SliceData& s, std::size_t depth) {
    GeometryReport rep;
    for (std::size_t len = 0; len <= depth; ++len) {
        for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
            Word w;
            for (std::size_t i = 0; i < len; ++i) w.push_back((bits >> (len - 1 - i)) & 1 ? 2 : 1);
            // The four scale points of word w: addresses 0, 1/3, 2/3, 1 under e_w.
            std::vector<std::pair<Rational, Rational>> pts;
            for (const Word& tail : {Word{}, Word{1, 2}, Word{2, 2}, Word{2}}) {
                Word full = w;
                full.insert(full.end(), tail.begin(), tail.end());
                pts.emplace_back(cantor_coordinates(full), ccw_length(s.A, cantor_ray_pair(s, full).first));
            }
            std::sort(pts.begin(), pts.end());
            std::array<Rational, 3> gaps;
            Rational total = 0;
            for (int i = 0; i < 3; ++i) {
                gaps[i] = abs(pts[i + 1].second - pts[i].second);
                total += gaps[i];
            }
            for (auto& g : gaps) g /= total;
            if (std::find(rep.distinct.begin(), rep.distinct.end(), gaps) == rep.distinct.end())
                rep.distinct.push_back(gaps);
            rep.ratios.emplace_back(std::move(w), gaps);
        }
    }
    return rep;
}

}  // namespace yoccoz
