#include "yoccoz/qcmodel.hpp"

#include "yoccoz/error.hpp"
#include "yoccoz/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>

namespace yoccoz {

namespace {

constexpr double kPi = std::numbers::pi;

Rational pow2(std::size_t n) { return Rational(BigInt(1) << n); }

double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

std::array<Vec2, 3> mirror_y(const std::array<Vec2, 3>& t) {
    // Reflection reverses orientation; swapping two vertices restores it.
    return {Vec2{t[0].x, -t[0].y}, Vec2{t[2].x, -t[2].y}, Vec2{t[1].x, -t[1].y}};
}

std::array<Vec2, 3> mirror_x(const std::array<Vec2, 3>& t, double axis) {
    auto f = [axis](Vec2 p) { return Vec2{2 * axis - p.x, p.y}; };
    return {f(t[0]), f(t[2]), f(t[1])};
}

}  // namespace

// ---------------------------------------------------------------------------

NotchedSquare build_notched(std::size_t depth) {
    NotchedSquare s;
    s.depth = depth;
    std::vector<RatRect> level{{Rational(1, 3), Rational(-1, 6), Rational(2, 3), Rational(1, 6)}};
    for (std::size_t n = 0; n <= depth; ++n) {
        s.squares.insert(s.squares.end(), level.begin(), level.end());
        std::vector<RatRect> next;
        for (const auto& r : level) {
            next.push_back({r.x0 / 3, r.y0 / 3, r.x1 / 3, r.y1 / 3});
        }
        for (const auto& r : level) {
            next.push_back({r.x0 / 3 + Rational(2, 3), r.y0 / 3, r.x1 / 3 + Rational(2, 3), r.y1 / 3});
        }
        level = std::move(next);
    }
    return s;
}

std::vector<std::pair<Rational, Rational>> midline_intervals(const NotchedSquare& s) {
    std::vector<std::pair<Rational, Rational>> gaps;
    for (const auto& r : s.squares) gaps.emplace_back(r.x0, r.x1);
    std::sort(gaps.begin(), gaps.end());
    std::vector<std::pair<Rational, Rational>> out;
    Rational left = 0;
    for (const auto& [a, b] : gaps) {
        out.emplace_back(left, a);
        left = b;
    }
    out.emplace_back(left, Rational(1));
    return out;
}

SlittedSquare build_slitted(std::size_t depth) {
    SlittedSquare s;
    s.depth = depth;
    for (std::size_t v = 0; v <= depth; ++v) {
        Rational h = Rational(3, 5) / pow2(v);
        if (v == 0) {
            s.slits.push_back({Rational(0), h, 0});
            continue;
        }
        BigInt den = BigInt(1) << v;
        for (BigInt k = -den + 1; k < den; k += 2) s.slits.push_back({Rational(k, den), h, v});
    }
    std::sort(s.slits.begin(), s.slits.end(), [](const Slit& a, const Slit& b) { return a.x < b.x; });
    return s;
}

bool slit_angle_ok(const Slit& s) {
    const Rational bound(3, 5);
    return s.half_height <= bound * (1 + s.x) && s.half_height <= bound * (1 - s.x);
}

// ---------------------------------------------------------------------------

bool point_in_triangle(const std::array<Vec2, 3>& t, Vec2 p, double tol) {
    double area = cross(t[0], t[1], t[2]);
    double l0 = cross(p, t[1], t[2]) / area;
    double l1 = cross(t[0], p, t[2]) / area;
    double l2 = cross(t[0], t[1], p) / area;
    return l0 >= -tol && l1 >= -tol && l2 >= -tol;
}

void PLAtlas::add(const std::array<Vec2, 3>& src, const std::array<Vec2, 3>& dst) {
    auto ok = [](const std::array<Vec2, 3>& t) {
        double scale = 0;
        for (int i = 0; i < 3; ++i) {
            const Vec2 &p = t[i], &q = t[(i + 1) % 3];
            scale = std::max(scale, (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y));
        }
        return std::isfinite(scale) && scale > 0 && cross(t[0], t[1], t[2]) > 1e-12 * scale;
    };
    if (!ok(src) || !ok(dst)) throw Error("invalid-geometry", "degenerate or clockwise triangle");
    PLCell c;
    c.src = src;
    c.dst = dst;
    // M = D S^-1 with S, D the edge matrices.
    double s11 = src[1].x - src[0].x, s12 = src[2].x - src[0].x;
    double s21 = src[1].y - src[0].y, s22 = src[2].y - src[0].y;
    double d11 = dst[1].x - dst[0].x, d12 = dst[2].x - dst[0].x;
    double d21 = dst[1].y - dst[0].y, d22 = dst[2].y - dst[0].y;
    double det = s11 * s22 - s12 * s21;
    double i11 = s22 / det, i12 = -s12 / det, i21 = -s21 / det, i22 = s11 / det;
    c.a = d11 * i11 + d12 * i21;
    c.b = d11 * i12 + d12 * i22;
    c.c = d21 * i11 + d22 * i21;
    c.d = d21 * i12 + d22 * i22;
    c.tx = dst[0].x - (c.a * src[0].x + c.b * src[0].y);
    c.ty = dst[0].y - (c.c * src[0].x + c.d * src[0].y);
    cells_.push_back(c);
    finalized_ = false;
}

void PLAtlas::add_similar(const PLCell& local, Vec2 so, double ss, Vec2 dor, double ds, bool mirror) {
    PLCell c;
    const double r = ds / ss;
    for (int i = 0; i < 3; ++i) {
        c.src[i] = {so.x + ss * local.src[i].x, so.y + ss * local.src[i].y};
        c.dst[i] = {dor.x + ds * local.dst[i].x, dor.y + ds * local.dst[i].y};
    }
    c.a = r * local.a;
    c.b = r * local.b;
    c.c = r * local.c;
    c.d = r * local.d;
    c.tx = dor.x + ds * local.tx - (c.a * so.x + c.b * so.y);
    c.ty = dor.y + ds * local.ty - (c.c * so.x + c.d * so.y);
    if (mirror) {
        c.src = mirror_y(c.src);
        c.dst = mirror_y(c.dst);
        c.b = -c.b;
        c.c = -c.c;
        c.ty = -c.ty;
    }
    cells_.push_back(c);
    finalized_ = false;
}

void PLAtlas::append(const PLAtlas& other) {
    cells_.insert(cells_.end(), other.cells_.begin(), other.cells_.end());
    finalized_ = false;
}

void PLAtlas::finalize() {
    const std::size_t n = cells_.size();
    std::vector<double> a(n), b(n), c(n), d(n), k(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = cells_[i].a;
        b[i] = cells_[i].b;
        c[i] = cells_[i].c;
        d[i] = cells_[i].d;
    }
    kernels::active().dilatation(a.data(), b.data(), c.data(), d.data(), k.data(), n);
    for (std::size_t i = 0; i < n; ++i) cells_[i].dilatation = k[i];
    build_tree(src_tree_, false);
    build_tree(dst_tree_, true);
    finalized_ = true;
}

void PLAtlas::build_tree(Tree& t, bool target) {
    const std::size_t n = cells_.size();
    t.nodes.clear();
    t.order.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.order[i] = i;
    auto tri = [&](std::size_t i) -> const std::array<Vec2, 3>& { return target ? cells_[i].dst : cells_[i].src; };
    auto centre = [&](std::size_t i, int axis) {
        const auto& v = tri(i);
        return axis == 0 ? v[0].x + v[1].x + v[2].x : v[0].y + v[1].y + v[2].y;
    };
    std::function<long(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) -> long {
        Node node{1e300, 1e300, -1e300, -1e300, lo, hi};
        for (std::size_t i = lo; i < hi; ++i) {
            for (const auto& p : tri(t.order[i])) {
                node.x0 = std::min(node.x0, p.x);
                node.y0 = std::min(node.y0, p.y);
                node.x1 = std::max(node.x1, p.x);
                node.y1 = std::max(node.y1, p.y);
            }
        }
        long id = long(t.nodes.size());
        t.nodes.push_back(node);
        if (hi - lo > 8) {
            int axis = (node.x1 - node.x0) >= (node.y1 - node.y0) ? 0 : 1;
            std::size_t mid = (lo + hi) / 2;
            std::nth_element(t.order.begin() + long(lo), t.order.begin() + long(mid), t.order.begin() + long(hi),
                             [&](std::size_t u, std::size_t v) { return centre(u, axis) < centre(v, axis); });
            long l = build(lo, mid);
            long r = build(mid, hi);
            t.nodes[std::size_t(id)].left = l;
            t.nodes[std::size_t(id)].right = r;
        }
        return id;
    };
    if (n) build(0, n);
}

void PLAtlas::query(const Tree& t, bool target, Vec2 p, double tol, std::vector<std::size_t>& out,
                    bool first) const {
    if (t.nodes.empty()) return;
    std::vector<long> stack{0};
    while (!stack.empty()) {
        const Node& nd = t.nodes[std::size_t(stack.back())];
        stack.pop_back();
        double mx = tol * (nd.x1 - nd.x0) + 1e-300, my = tol * (nd.y1 - nd.y0) + 1e-300;
        if (p.x < nd.x0 - mx || p.x > nd.x1 + mx || p.y < nd.y0 - my || p.y > nd.y1 + my) continue;
        if (nd.left < 0) {
            for (std::size_t i = nd.lo; i < nd.hi; ++i) {
                std::size_t ci = t.order[i];
                if (point_in_triangle(target ? cells_[ci].dst : cells_[ci].src, p, tol)) {
                    out.push_back(ci);
                    if (first) return;
                }
            }
            continue;
        }
        stack.push_back(nd.right);
        stack.push_back(nd.left);
    }
}

std::optional<std::size_t> PLAtlas::locate(Vec2 p, double tol) const {
    if (!finalized_) throw Error("invalid-argument", "atlas not finalized");
    std::vector<std::size_t> out;
    query(src_tree_, false, p, tol, out, true);
    if (out.empty()) return std::nullopt;
    return out.front();
}

std::optional<std::size_t> PLAtlas::locate_image(Vec2 p, double tol) const {
    if (!finalized_) throw Error("invalid-argument", "atlas not finalized");
    std::vector<std::size_t> out;
    query(dst_tree_, true, p, tol, out, true);
    if (out.empty()) return std::nullopt;
    return out.front();
}

std::vector<std::size_t> PLAtlas::locate_all(Vec2 p, double tol) const {
    if (!finalized_) throw Error("invalid-argument", "atlas not finalized");
    std::vector<std::size_t> out;
    query(src_tree_, false, p, tol, out, false);
    return out;
}

Vec2 PLAtlas::map(Vec2 p) const {
    auto c = locate(p);
    if (!c) throw Error("outside-domain", "point outside the atlas domain");
    return cells_[*c].apply(p);
}

Vec2 PLAtlas::inverse(Vec2 p) const {
    auto ci = locate_image(p);
    if (!ci) throw Error("outside-domain", "point outside the atlas image");
    const PLCell& c = cells_[*ci];
    double det = c.a * c.d - c.b * c.c;
    double x = p.x - c.tx, y = p.y - c.ty;
    return {(c.d * x - c.b * y) / det, (-c.c * x + c.a * y) / det};
}

double PLAtlas::max_dilatation() const {
    double m = 0;
    for (const auto& c : cells_) m = std::max(m, c.dilatation);
    return m;
}

std::vector<double> PLAtlas::distinct_dilatations(int digits) const {
    std::set<double> s;
    for (const auto& c : cells_) {
        double e = std::floor(std::log10(c.dilatation));
        double scale = std::pow(10.0, digits - 1 - e);
        s.insert(std::round(c.dilatation * scale) / scale);
    }
    return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------

PLAtlas block_map(const MarkedRect& m, const SlittedRect& s) {
    if (!(m.width > 0 && m.height > 0 && s.width > 0 && s.height > 0))
        throw Error("invalid-geometry", "degenerate rectangle");
    if (!(0 < m.mark_lo && m.mark_lo < m.mark_hi && m.mark_hi < m.width))
        throw Error("invalid-geometry", "marked interval must lie inside the bottom side");
    if (!(0 < s.slit_x && s.slit_x < s.width && 0 < s.slit_height && s.slit_height < s.height / 2))
        throw Error("invalid-geometry", "slit must rise from the bottom side below mid-height");

    // Cells are built relative to the rectangle corners and then placed, so
    // the linear parts do not depend on the position.
    auto P = [](double x, double y) { return Vec2{x, y}; };
    auto Q = P;
    const double W = m.width, H = m.height, a0 = m.mark_lo, a1 = m.mark_hi, am = (a0 + a1) / 2;
    const double Wt = s.width, Ht = s.height, sx = s.slit_x, sh = s.slit_height;
    const double spread = 0.35 * std::min(sx, Wt - sx);

    Vec2 p00 = P(0, 0), pa0 = P(a0, 0), pam = P(am, 0), pa1 = P(a1, 0), pW0 = P(W, 0), pWH = P(W, H), p0H = P(0, H);
    Vec2 p1 = P(a0, H / 2), p2 = P(a1, H / 2);
    Vec2 q00 = Q(0, 0), qs = Q(sx, 0), qtip = Q(sx, sh), qW0 = Q(Wt, 0), qWH = Q(Wt, Ht), q0H = Q(0, Ht);
    Vec2 q1 = Q(sx - spread, Ht / 2), q2 = Q(sx + spread, Ht / 2);

    PLAtlas local("block");
    local.add({p00, pa0, p1}, {q00, qs, q1});
    local.add({pa0, pam, p1}, {qs, qtip, q1});
    local.add({pam, p2, p1}, {qtip, q2, q1});
    local.add({pam, pa1, p2}, {qtip, qs, q2});
    local.add({pa1, pW0, p2}, {qs, qW0, q2});
    local.add({pW0, pWH, p2}, {qW0, qWH, q2});
    local.add({p2, pWH, p0H}, {q2, qWH, q0H});
    local.add({p1, p2, p0H}, {q1, q2, q0H});
    local.add({p00, p1, p0H}, {q00, q1, q0H});
    PLAtlas out("block");
    for (const auto& c : local.cells()) out.add_similar(c, m.origin, 1.0, s.origin, 1.0);
    out.finalize();
    return out;
}

// ---------------------------------------------------------------------------

PhiMap::PhiMap(std::size_t depth)
    : depth_(depth), notched_(build_notched(depth)), slitted_(build_slitted(depth)), atlas_("phi") {
    if (depth < 1) throw Error("invalid-argument", "phi needs depth >= 1");
    // Normalized block [0,3] x [0,1] -> [0,4] x [0,1], placed by similarities.
    const PLAtlas unit = block_map({{0, 0}, 3, 1, 1, 2}, {{0, 0}, 4, 1, 2, 0.2});
    for (std::size_t n = 0; n <= depth; ++n) {
        const double h = std::pow(3.0, -double(n) - 1), ht = std::ldexp(1.0, -int(n) - 1);
        for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
            double x = 0, xt = -1;
            for (std::size_t i = 1; i <= n; ++i) {
                if ((code >> (n - i)) & 1) {
                    x += 2 * std::pow(3.0, -double(i));
                    xt += std::ldexp(1.0, 1 - int(i));
                }
            }
            for (const auto& c : unit.cells()) {
                atlas_.add_similar(c, {x, h / 2}, h, {xt, ht}, ht);
                atlas_.add_similar(c, {x, h / 2}, h, {xt, ht}, ht, true);
            }
        }
    }
    atlas_.finalize();
}

void PhiMap::check_domain(Vec2 p) const {
    const double eps = 1e-15;
    if (p.x < -eps || p.x > 1 + eps || std::abs(p.y) > 0.5 + eps)
        throw Error("outside-domain", "point outside the closed square");
    double xs = p.x, ys = std::abs(p.y);
    for (std::size_t n = 0; n <= depth_; ++n) {
        if (xs >= 1.0 / 3 && xs <= 2.0 / 3) {
            if (ys <= 1.0 / 6) throw Error("outside-domain", "point inside a closed notch");
            break;
        }
        xs = xs < 1.0 / 3 ? 3 * xs : 3 * xs - 2;
        ys *= 3;
    }
    if (std::abs(p.y) < 0.5 * std::pow(3.0, -double(depth_) - 1))
        throw Error("beyond-depth", "point below the deepest strip");
}

Vec2 PhiMap::operator()(Vec2 p) const {
    check_domain(p);
    return atlas_.map(p);
}

double PhiMap::dilatation_at(Vec2 p) const {
    check_domain(p);
    auto c = atlas_.locate(p);
    if (!c) throw Error("outside-domain", "point outside the atlas domain");
    return atlas_.cells()[*c].dilatation;
}

double PhiMap::boundary_value(double x, std::size_t digits) {
    if (x < 0 || x > 1) throw Error("outside-domain", "Cantor function needs x in [0,1]");
    double c = 0, weight = 0.5;
    for (std::size_t i = 0; i < digits; ++i) {
        x *= 3;
        int d = std::min(2, int(std::floor(x)));
        x -= d;
        if (d == 1) {
            c += weight;
            break;
        }
        c += weight * (d / 2);
        weight /= 2;
    }
    return -1 + 2 * c;
}

// ---------------------------------------------------------------------------

PLAtlas psi_extension(std::size_t depth) {
    PLAtlas left("psi");
    const Vec2 O1{0, 0.5}, O2{0.5, 0.5}, O3{0.5, -0.5}, O4{0, -0.5};
    const Vec2 I1{0, 1.0 / 6}, I2{1.0 / 6, 1.0 / 6}, I3{1.0 / 6, -1.0 / 6}, I4{0, -1.0 / 6};
    const Vec2 T1{0, 1}, T2{1, 1}, T3{1, -1}, T4{0, -1};
    const Vec2 J1{0, 0.5}, J2{0.5, 0.5}, J3{0.5, -0.5}, J4{0, -0.5};
    const std::array<std::pair<std::array<Vec2, 3>, std::array<Vec2, 3>>, 6> layer{{
        {{I1, I2, O2}, {J1, J2, T2}},
        {{I1, O2, O1}, {J1, T2, T1}},
        {{I3, O3, O2}, {J3, T3, T2}},
        {{I3, O2, I2}, {J3, T2, J2}},
        {{O4, O3, I3}, {T4, T3, J3}},
        {{O4, I3, I4}, {T4, J3, J4}},
    }};
    auto place = [](const std::array<Vec2, 3>& t, double s, double shift) {
        std::array<Vec2, 3> out;
        for (int i = 0; i < 3; ++i) out[i] = {t[i].x * s + shift, t[i].y * s};
        return out;
    };
    for (std::size_t n = 0; n <= depth; ++n) {
        const double s = std::pow(3.0, -double(n)), st = std::ldexp(1.0, -int(n));
        for (const auto& [src, dst] : layer) left.add(place(src, s, 0), place(dst, st, -1));
    }
    const double s = std::pow(3.0, -double(depth) - 1), st = std::ldexp(1.0, -int(depth) - 1);
    left.add(place({I4, I3, I2}, 3 * s, 0), place({J4, J3, J2}, 2 * st, -1));
    left.add(place({I4, I2, I1}, 3 * s, 0), place({J4, J2, J1}, 2 * st, -1));

    PLAtlas out("psi");
    out.append(left);
    for (const auto& c : left.cells()) {
        // Mirror x -> 1 - x in the source and x' -> -x' in the target.
        out.add(mirror_x(c.src, 0.5), mirror_x(c.dst, 0.0));
    }
    out.finalize();
    return out;
}

PLAtlas square_to_diamond() {
    const Vec2 a{-1, 0}, o{0, 0}, b{0, 1}, c{-1, 1}, d{0, 0.6}, cp{-0.5, 0.5};
    std::vector<std::pair<std::array<Vec2, 3>, std::array<Vec2, 3>>> quadrant{
        {{a, o, d}, {a, o, d}},
        {{a, d, c}, {a, d, cp}},
        {{b, c, d}, {b, cp, d}},
    };
    PLAtlas out("square-to-diamond");
    for (const auto& [s, t] : quadrant) {
        out.add(s, t);
        out.add(mirror_x(s, 0), mirror_x(t, 0));
        out.add(mirror_y(s), mirror_y(t));
        out.add(mirror_y(mirror_x(s, 0)), mirror_y(mirror_x(t, 0)));
    }
    out.finalize();
    return out;
}

Vec2 rho_minus(Vec2 p) { return {std::log1p(p.x), p.y / (1 + p.x)}; }
Vec2 rho_plus(Vec2 p) { return {-std::log1p(-p.x), p.y / (1 - p.x)}; }

namespace {
void check_diamond(Vec2 p) {
    if (std::abs(p.x) + std::abs(p.y) > 1 + 1e-12 || std::abs(p.x) >= 1)
        throw Error("outside-domain", "point outside the open diamond");
}
double shear_dilatation(double s) { return (2 + s * s + std::abs(s) * std::sqrt(s * s + 4)) / 2; }
}  // namespace

Vec2 diamond_to_strip(Vec2 p) {
    check_diamond(p);
    return p.x <= 0 ? rho_minus(p) : rho_plus(p);
}

double diamond_dilatation(Vec2 p) {
    check_diamond(p);
    return shear_dilatation(p.x <= 0 ? p.y / (1 + p.x) : p.y / (1 - p.x));
}

DiamondGridReport diamond_dilatation_grid(std::size_t n) {
    if (n < 2) throw Error("invalid-argument", "grid needs n >= 2");
    const std::size_t total = n * n;
    std::vector<double> a(total), b(total, 0.0), c(total), d(total), k(total);
    std::vector<Vec2> pts(total);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -1 + 2 * (double(i) + 0.5) / double(n);
        const double r = x <= 0 ? 1 + x : 1 - x;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = -1 + 2 * double(j) / double(n - 1);
            const double y = s * r;
            const std::size_t idx = i * n + j;
            pts[idx] = {x, y};
            // Jacobians of rho_- and rho_+: both are (1/r) [[1, 0], [-+s, 1]].
            a[idx] = 1 / r;
            c[idx] = (x <= 0 ? -y : y) / (r * r);
            d[idx] = 1 / r;
        }
    }
    kernels::active().dilatation(a.data(), b.data(), c.data(), d.data(), k.data(), total);
    DiamondGridReport rep;
    rep.samples = total;
    for (std::size_t i = 0; i < total; ++i) {
        if (k[i] > rep.max) {
            rep.max = k[i];
            rep.argmax = pts[i];
        }
        if (!(k[i] <= 3 + 1e-9)) ++rep.above_three;
    }
    return rep;
}

Vec2 strip_map(const PhiMap& phi, const PLAtlas& diamond, Vec2 p) {
    Vec2 w = diamond_to_strip(diamond.map(phi(p)));
    return {kPi / 2 * w.x, kPi / 2 * (w.y + 1)};
}

StripModel strip_model(std::size_t depth, std::size_t samples_per_slit) {
    if (depth < 1) throw Error("invalid-argument", "strip model needs depth >= 1");
    if (samples_per_slit < 2) samples_per_slit = 2;
    PhiMap phi(depth);
    PLAtlas diamond = square_to_diamond();
    StripModel out;
    out.depth = depth;
    const double lo = kPi / 5 - 1e-9, hi = 4 * kPi / 5 + 1e-9;
    for (const Slit& s : phi.slitted().slits) {
        const double x = s.x.convert_to<double>(), h = s.half_height.convert_to<double>();
        auto image = [&](double y) {
            Vec2 w = diamond_to_strip(diamond.map({x, y}));
            return Vec2{kPi / 2 * w.x, kPi / 2 * (w.y + 1)};
        };
        StripSlit ss;
        ss.level = s.level;
        Vec2 bottom = image(-h), top = image(h);
        ss.x = bottom.x;
        ss.im_lo = bottom.y;
        ss.im_hi = top.y;
        for (std::size_t k = 0; k <= samples_per_slit; ++k) {
            Vec2 p = image(-h + 2 * h * double(k) / double(samples_per_slit));
            ss.x_spread = std::max(ss.x_spread, std::abs(p.x - ss.x));
        }
        if (ss.im_lo < lo || ss.im_hi > hi)
            throw Error("model-violation", "slit image leaves the band [pi/5, 4pi/5]");
        out.slits.push_back(ss);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<CantorSample> cantor_samples(const SliceData& s, std::size_t depth) {
    std::map<Rational, CantorSample> by_x;
    for (std::size_t len = 0; len <= depth; ++len) {
        for (std::size_t code = 0; code < (std::size_t{1} << len); ++code) {
            Word w;
            for (std::size_t i = 0; i < len; ++i) w.push_back((code >> i) & 1 ? 2 : 1);
            Rational x = cantor_coordinates(w);
            if (by_x.count(x)) continue;
            auto [q1, q2] = cantor_ray_pair(s, w);
            by_x.emplace(x, CantorSample{x, q1, q2});
        }
    }
    std::vector<CantorSample> out;
    for (auto& [x, c] : by_x) out.push_back(std::move(c));
    return out;
}

double normalized_q(const std::vector<CantorSample>& samples, const SliceData& s, double x) {
    if (samples.size() < 2) throw Error("invalid-argument", "need at least two Cantor samples");
    x = std::clamp(x, 0.0, 1.0);
    const double span = ccw_length(s.A, s.B).convert_to<double>();
    auto it = std::upper_bound(samples.begin(), samples.end(), x,
                               [](double v, const CantorSample& c) { return v < c.x.convert_to<double>(); });
    if (it == samples.begin()) ++it;
    if (it == samples.end()) --it;
    const CantorSample &r = *it, &l = *(it - 1);
    double x0 = l.x.convert_to<double>(), x1 = r.x.convert_to<double>();
    double y0 = ccw_length(s.A, l.q1).convert_to<double>() / span;
    double y1 = ccw_length(s.A, r.q1).convert_to<double>() / span;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

Vec2 square_extension(const std::vector<CantorSample>& samples, const SliceData& s, Vec2 p) {
    if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1) throw Error("outside-domain", "point outside the unit square");
    // Fold into the triangle below both diagonals: g is one of identity,
    // (x,y) -> (y,x), (1-y,1-x), (1-x,1-y), each its own inverse.
    const bool swap = p.y > p.x, flip = p.x + p.y > 1;
    auto g = [&](Vec2 v) {
        if (swap) v = {v.y, v.x};
        if (flip) v = {1 - v.y, 1 - v.x};
        return v;
    };
    auto g_inv = [&](Vec2 v) {
        if (flip) v = {1 - v.y, 1 - v.x};
        if (swap) v = {v.y, v.x};
        return v;
    };
    Vec2 t = g_inv(p);
    if (t.y >= 0.5) return g({0.5, 0.5});
    const double len = 1 - 2 * t.y;
    const double r = std::clamp((t.x - t.y) / len, 0.0, 1.0);
    const double r2 = len * normalized_q(samples, s, r) + 2 * t.y * r;
    return g({t.y + len * r2, t.y});
}

namespace {

struct MeshStats {
    double max = 0.0;
    bool positive = true;
};

// Dilatation of the PL interpolation of f on the n x n mesh of the unit square.
template <class F>
MeshStats mesh_dilatation(std::size_t n, F f) {
    std::vector<Vec2> img((n + 1) * (n + 1));
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t i = 0; i <= n; ++i) img[j * (n + 1) + i] = f(double(i) / double(n), double(j) / double(n));
    std::vector<double> a, b, c, d;
    std::vector<double> signs;
    const double h = 1.0 / double(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 p00 = img[j * (n + 1) + i], p10 = img[j * (n + 1) + i + 1];
            Vec2 p01 = img[(j + 1) * (n + 1) + i], p11 = img[(j + 1) * (n + 1) + i + 1];
            // Lower-right and upper-left triangles; derivative from the legs.
            for (int t = 0; t < 2; ++t) {
                Vec2 dx = t == 0 ? Vec2{p10.x - p00.x, p10.y - p00.y} : Vec2{p11.x - p01.x, p11.y - p01.y};
                Vec2 dy = t == 0 ? Vec2{p11.x - p10.x, p11.y - p10.y} : Vec2{p01.x - p00.x, p01.y - p00.y};
                a.push_back(dx.x / h);
                c.push_back(dx.y / h);
                b.push_back(dy.x / h);
                d.push_back(dy.y / h);
                signs.push_back(dx.x * dy.y - dx.y * dy.x);
            }
        }
    }
    std::vector<double> k(a.size());
    kernels::active().dilatation(a.data(), b.data(), c.data(), d.data(), k.data(), k.size());
    MeshStats st;
    for (std::size_t i = 0; i < k.size(); ++i) {
        st.max = std::max(st.max, k[i]);
        if (!(signs[i] > 0)) st.positive = false;
    }
    return st;
}

}  // namespace

SliceEmbeddingReport slice_embedding(const SliceData& slice, const Lamination& lam, Complex c, std::size_t depth,
                                     const SliceEmbeddingOptions& opt) {
    if (slice.A != lam.A() || slice.D != lam.D())
        throw Error("invalid-argument", "slice data does not belong to this lamination");
    if (depth < 1) throw Error("invalid-argument", "slice embedding needs depth >= 1");
    if (opt.mesh < 2) throw Error("invalid-argument", "mesh needs at least two cells per side");
    SliceEmbeddingReport rep;
    rep.depth = depth;
    rep.cantor = cantor_samples(slice, depth);
    rep.q1_monotone = rep.q2_monotone = true;
    for (std::size_t i = 1; i < rep.cantor.size(); ++i) {
        const auto &p = rep.cantor[i - 1], &q = rep.cantor[i];
        if (!(ccw_length(slice.A, p.q1) < ccw_length(slice.A, q.q1))) rep.q1_monotone = false;
        if (!(ccw_length(p.q2, slice.D) < ccw_length(q.q2, slice.D))) rep.q2_monotone = false;
    }

    auto Q = [&](double x, double y) { return square_extension(rep.cantor, slice, {x, y}); };
    MeshStats q1 = mesh_dilatation(opt.mesh, Q);
    MeshStats q2 = mesh_dilatation(2 * opt.mesh, Q);
    rep.q_dilatation = q1.max;
    rep.q_dilatation_refined = q2.max;
    rep.q_orientation_ok = q1.positive && q2.positive;

    // Upper half of S, (x, y) in [0,1] x [0,1/2], lands in the rectangle
    // [A, B] x [0, (B - A)/2] of the (angle, potential / 2pi) plane.
    const double A = slice.A.to_double();
    const double span = ccw_length(slice.A, slice.B).convert_to<double>();
    const double top = opt.potential_top > 0 ? opt.potential_top : kPi * span;
    auto xi_complex = [&](double x, double v) {
        Vec2 u = Q(x, v);
        return boettcher_inverse(c, A + u.x * span, top * u.y, opt.curve.trace);
    };
    // Pointwise dilatation by central differences at cell centres, which all
    // sit at positive potential; the source is (x, v/2), so the v-derivative
    // is doubled.
    auto pointwise = [&](std::size_t n, auto f) {
        const double h = 1.0 / double(n), e = 1e-3 * h;
        std::vector<double> a, b, cc, d;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                const double x = (double(i) + 0.5) * h, v = (double(j) + 0.5) * h;
                Vec2 fx0 = f(x - e, v), fx1 = f(x + e, v), fv0 = f(x, v - e), fv1 = f(x, v + e);
                a.push_back((fx1.x - fx0.x) / (2 * e));
                cc.push_back((fx1.y - fx0.y) / (2 * e));
                b.push_back((fv1.x - fv0.x) / e);
                d.push_back((fv1.y - fv0.y) / e);
            }
        }
        std::vector<double> k(a.size());
        kernels::active().dilatation(a.data(), b.data(), cc.data(), d.data(), k.data(), k.size());
        return *std::max_element(k.begin(), k.end());
    };
    auto xi = [&](double x, double v) {
        Complex z = xi_complex(x, v);
        return Vec2{z.real(), z.imag()};
    };
    // Q seen from the same (x, v/2) source, for the conformality cross-check.
    auto q_half = [&](double x, double v) {
        Vec2 u = Q(x, v);
        return Vec2{u.x, u.y / 2};
    };
    rep.xi_dilatation = pointwise(opt.mesh, xi);
    rep.xi_dilatation_refined = pointwise(2 * opt.mesh, xi);
    rep.q_pointwise = pointwise(opt.mesh, q_half);

    rep.min_green_off_cantor = 1e300;
    for (std::size_t j = 1; j <= opt.mesh; ++j) {
        for (std::size_t i = 0; i <= opt.mesh; ++i) {
            Complex z = xi_complex(double(i) / double(opt.mesh), double(j) / double(opt.mesh));
            rep.min_green_off_cantor = std::min(rep.min_green_off_cantor, green(c, z));
        }
    }

    // Corners against independently traced rays A and B.
    const double low = top * normalized_q(rep.cantor, slice, 1.0 / double(opt.mesh));
    auto ray_a = trace_ray(c, slice.A, top, low, opt.curve.steps_per_halving, opt.curve.trace);
    auto ray_b = trace_ray(c, slice.B, top, top * (1 - normalized_q(rep.cantor, slice, 1 - 1.0 / double(opt.mesh))),
                           opt.curve.steps_per_halving, opt.curve.trace);
    const double v0 = 1.0 / double(opt.mesh);
    rep.corners = {xi_complex(0, 1), xi_complex(1, 1), xi_complex(0, v0), xi_complex(1, v0)};
    rep.corner_error = {std::abs(rep.corners[0] - ray_a.points.front().z),
                              std::abs(rep.corners[1] - ray_b.points.front().z),
                              std::abs(rep.corners[2] - ray_a.points.back().z),
                              std::abs(rep.corners[3] - ray_b.points.back().z)};
    return rep;
}

}  // namespace yoccoz
