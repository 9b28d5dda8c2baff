#include "yoccoz/geometry.hpp"

#include "yoccoz/error.hpp"
#include "yoccoz/gaps.hpp"
#include "yoccoz/laplace.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace yoccoz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FixedKind classify(Complex mult) {
    double a = std::abs(mult);
    if (a > 1.0 + 1e-12) return FixedKind::Repelling;
    if (a < 1.0 - 1e-12) return FixedKind::Attracting;
    return FixedKind::Indifferent;
}

// Smallest m with 2^m t >= log(start_radius): past that level the
// Boettcher coordinate is replaced by the identity.
unsigned depth_for(double t, const TraceConfig& cfg) {
    const double L = std::log(cfg.start_radius);
    unsigned m = 0;
    while (std::ldexp(t, int(m)) < L) ++m;
    return m;
}

Complex target(double t, unsigned m, double frac) {
    return std::polar(std::exp(std::ldexp(t, int(m))), kTwoPi * frac);
}

Complex iterate(Complex c, unsigned m, Complex z, Complex* deriv) {
    Complex d = 1.0;
    for (unsigned k = 0; k < m; ++k) {
        d = 2.0 * z * d;
        z = z * z + c;
    }
    if (deriv) *deriv = d;
    return z;
}

// Newton for f^m(z) = w from the guess z. Leaves z untouched on failure.
bool newton(Complex c, unsigned m, Complex w, Complex& z, const TraceConfig& cfg) {
    Complex x = z;
    for (unsigned it = 0; it < cfg.newton_cap; ++it) {
        Complex d;
        Complex f = iterate(c, m, x, &d) - w;
        if (!std::isfinite(f.real()) || !std::isfinite(f.imag()) || d == Complex(0.0)) return false;
        Complex step = f / d;
        x -= step;
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
        if (std::abs(step) <= cfg.newton_tol * std::max(1.0, std::abs(x))) {
            z = x;
            return true;
        }
    }
    return false;
}

double frac(double x) { return x - std::floor(x); }

// Advance the point of argument phase(m) from potential t0 to t1, splitting
// the step when Newton fails.
template <class Phase>
void advance(Complex c, Phase phase, double t0, double t1, Complex& z, unsigned depth, const TraceConfig& cfg) {
    unsigned m = depth_for(t1, cfg);
    Complex guess = z;
    if (newton(c, m, target(t1, m, phase(m)), guess, cfg)) {
        z = guess;
        return;
    }
    if (depth >= cfg.max_subdivisions) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "Newton diverged at potential %.6g", t1);
        throw Error("trace-failed", buf);
    }
    double mid = std::sqrt(t0 * t1);
    advance(c, phase, t0, mid, z, depth + 1, cfg);
    advance(c, phase, mid, t1, z, depth + 1, cfg);
}

template <class Phase>
std::vector<RayPoint> trace_generic(Complex c, Phase phase, double pot_hi, double pot_lo, unsigned steps,
                                    const TraceConfig& cfg) {
    if (!(pot_hi > pot_lo) || !(pot_lo > 0.0) || steps == 0)
        throw Error("invalid-argument", "need pot_hi > pot_lo > 0 and steps_per_halving >= 1");
    if (!critical_orbit_bounded(c, cfg)) throw Error("not-connected", "critical orbit escapes");
    const double L = std::log(cfg.start_radius);
    const double t_start = std::max(pot_hi, L);

    std::vector<double> schedule;
    for (unsigned k = 0;; ++k) {
        double t = t_start * std::exp2(-double(k) / steps);
        if (t <= pot_lo * (1 + 1e-12)) break;
        schedule.push_back(t);
    }
    if (pot_hi < t_start) schedule.push_back(pot_hi);
    schedule.push_back(pot_lo);
    std::sort(schedule.begin(), schedule.end(), std::greater<>());
    schedule.erase(std::unique(schedule.begin(), schedule.end(),
                               [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::abs(a); }),
                   schedule.end());

    std::vector<RayPoint> pts;
    Complex z = target(t_start, 0, phase(0));
    double tprev = t_start;
    for (double t : schedule) {
        if (t != tprev) advance(c, phase, tprev, t, z, 0, cfg);
        tprev = t;
        if (t <= pot_hi * (1 + 1e-12)) pts.push_back({z, t});
    }
    return pts;
}

}  // namespace

const char* to_string(FixedKind k) {
    switch (k) {
        case FixedKind::Repelling: return "repelling";
        case FixedKind::Indifferent: return "indifferent";
        case FixedKind::Attracting: return "attracting";
    }
    return "?";
}

FixedPoints fixed_points(Complex c) {
    Complex disc = 1.0 - 4.0 * c;
    if (std::abs(disc) < 1e-14) throw Error("degenerate-fixed-points", "alpha = beta at c = 1/4");
    Complex s = std::sqrt(disc);  // principal branch, Re s >= 0
    FixedPoints fp;
    fp.beta = (1.0 + s) / 2.0;
    fp.alpha = (1.0 - s) / 2.0;
    fp.mult_alpha = 2.0 * fp.alpha;
    fp.mult_beta = 2.0 * fp.beta;
    fp.kind_alpha = classify(fp.mult_alpha);
    fp.kind_beta = classify(fp.mult_beta);
    return fp;
}

double green(Complex c, Complex z, unsigned max_iter) {
    for (unsigned n = 0; n < max_iter; ++n) {
        double r = std::abs(z);
        if (r > 1e10) return std::log(r) / std::exp2(double(n));
        z = z * z + c;
    }
    return 0.0;
}

bool critical_orbit_bounded(Complex c, const TraceConfig& cfg) {
    Complex z = 0.0;
    for (unsigned n = 0; n < cfg.orbit_check; ++n) {
        z = z * z + c;
        if (std::norm(z) > 4.0) return false;
    }
    return true;
}

RayPolyline trace_ray(Complex c, const Angle& theta, double pot_hi, double pot_lo, unsigned steps,
                      const TraceConfig& cfg) {
    std::map<unsigned, double> phases;
    auto phase = [&](unsigned m) {
        auto it = phases.find(m);
        if (it != phases.end()) return it->second;
        return phases[m] = theta.doubled(m).to_double();
    };
    RayPolyline out;
    out.c = c;
    out.theta = theta;
    out.points = trace_generic(c, phase, pot_hi, pot_lo, steps, cfg);
    return out;
}

Complex boettcher_inverse(Complex c, double phi, double t, const TraceConfig& cfg) {
    auto phase = [&](unsigned m) { return frac(std::ldexp(frac(phi), int(m))); };
    const double L = std::log(cfg.start_radius);
    if (t >= L) {
        auto pts = trace_generic(c, phase, t * 2.0, t, 1, cfg);
        return pts.back().z;
    }
    return trace_generic(c, phase, t, t * 0.5, 4, cfg).front().z;
}

double ray_residual(Complex c, double phi, double t, Complex z, const TraceConfig& cfg) {
    unsigned m = depth_for(t, cfg);
    Complex w = target(t, m, frac(std::ldexp(frac(phi), int(m))));
    Complex d;
    Complex f = iterate(c, m, z, &d) - w;
    return std::abs(f / d);
}

std::vector<Complex> equipotential_arc(Complex c, const Angle& a, const Angle& b, double t, Complex start,
                                       const TraceConfig& cfg) {
    double len = (a == b) ? 1.0 : static_cast<double>(ccw_length(a, b));
    unsigned m = depth_for(t, cfg);
    double base = a.doubled(m).to_double();
    double span = std::ldexp(len, int(m));  // phase travelled by f^m, in turns
    std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(span / cfg.arc_step)));
    std::vector<Complex> pts{start};
    Complex z = start;
    std::function<void(double, double, unsigned)> go = [&](double s0, double s1, unsigned depth) {
        Complex guess = z;
        if (newton(c, m, target(t, m, frac(base + span * s1)), guess, cfg)) {
            z = guess;
            return;
        }
        if (depth >= cfg.max_subdivisions) throw Error("trace-failed", "equipotential continuation diverged");
        double mid = 0.5 * (s0 + s1);
        go(s0, mid, depth + 1);
        go(mid, s1, depth + 1);
    };
    for (std::size_t k = 1; k <= n; ++k) {
        go(double(k - 1) / n, double(k) / n, 0);
        pts.push_back(z);
    }
    return pts;
}

namespace {

std::vector<Complex> curve_from_arcs(Complex c, const std::vector<Arc>& arcs, double potential,
                                     const CurveOptions& opt) {
    std::map<Angle, RayPolyline> rays;
    auto ray = [&](const Angle& a) -> const RayPolyline& {
        auto it = rays.find(a);
        if (it == rays.end())
            it = rays.emplace(a, trace_ray(c, a, potential, opt.pot_lo, opt.steps_per_halving, opt.trace)).first;
        return it->second;
    };
    std::vector<Complex> curve;
    for (const auto& arc : arcs) {
        const auto& up = ray(arc.start).points;
        for (auto it = up.rbegin(); it != up.rend(); ++it) curve.push_back(it->z);
        auto eq = equipotential_arc(c, arc.start, arc.end, potential, up.front().z, opt.trace);
        curve.insert(curve.end(), eq.begin() + 1, eq.end() - 1);
        for (const auto& p : ray(arc.end).points) curve.push_back(p.z);
    }
    return curve;
}

}  // namespace

std::vector<Complex> piece_curve(Complex c, const Lamination& lam, const PieceRef& piece, double potential,
                                 const CurveOptions& opt) {
    auto arcs = boundary(lam, piece);
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
    return curve_from_arcs(c, arcs, potential, opt);
}

double winding_number(const std::vector<Complex>& curve, Complex z) {
    double total = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        Complex a = curve[i] - z, b = curve[(i + 1) % curve.size()] - z;
        total += std::arg(b / a);
    }
    return total / kTwoPi;
}

double signed_area(const std::vector<Complex>& curve) {
    double s = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        Complex a = curve[i], b = curve[(i + 1) % curve.size()];
        s += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * s;
}

double diameter(const std::vector<Complex>& pts) {
    // Convex hull (monotone chain), then all hull pairs.
    std::vector<Complex> p(pts);
    std::sort(p.begin(), p.end(), [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    auto cross = [](Complex o, Complex a, Complex b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<Complex> hull;
    for (int pass = 0; pass < 2; ++pass) {
        std::size_t base = hull.size();
        for (const auto& q : p) {
            while (hull.size() >= base + 2 && cross(hull[hull.size() - 2], hull.back(), q) <= 0) hull.pop_back();
            hull.push_back(q);
        }
        hull.pop_back();
        std::reverse(p.begin(), p.end());
    }
    double d = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j) d = std::max(d, std::abs(hull[i] - hull[j]));
    return d;
}

DiameterStats piece_diameters(Complex c, const Lamination& lam, std::size_t level, double potential0,
                              const CurveOptions& opt) {
    if (level > lam.stored_depth())
        throw Error("empty-level", "no pieces recorded at level " + std::to_string(level));
    auto gaps = lamination_gaps(lam.polygons(level));
    if (gaps.empty()) throw Error("empty-level", "no pieces at level " + std::to_string(level));
    double t = std::ldexp(potential0, -int(level));
    std::vector<double> d;
    for (const auto& g : gaps) d.push_back(diameter(curve_from_arcs(c, g, t, opt)));
    std::sort(d.begin(), d.end());
    DiameterStats s;
    s.level = level;
    s.pieces = d.size();
    s.max = d.back();
    s.median = d.size() % 2 ? d[d.size() / 2] : 0.5 * (d[d.size() / 2 - 1] + d[d.size() / 2]);
    return s;
}

GridMask round_annulus_mask(double r, double R, double h) {
    if (!(r > 0 && R > r && h > 0)) throw Error("invalid-region", "need 0 < r < R and h > 0");
    return make_annulus_mask(
        R + 2 * h, h, [r](Complex z) { return std::abs(z) <= r; }, [R](Complex z) { return std::abs(z) >= R; });
}

double modulus_estimate(const GridMask& m) {
    const std::size_t n = m.nx * m.ny;
    if (m.nx < 3 || m.ny < 3 || m.label.size() != n) throw Error("invalid-region", "grid dimensions do not match");
    std::size_t inner = 0, outer = 0, region = 0;
    LaplaceProblem p(m.nx, m.ny);
    for (std::size_t j = 0; j < m.ny; ++j) {
        for (std::size_t i = 0; i < m.nx; ++i) {
            std::size_t k = j * m.nx + i;
            std::uint8_t l = m.label[k];
            bool border = i == 0 || j == 0 || i + 1 == m.nx || j + 1 == m.ny;
            if (l == GridMask::Region && border) throw Error("invalid-region", "region touches the grid border");
            if (l == GridMask::Inner) ++inner, p.type[k] = NodeType::Fixed, p.u[k] = 0.0;
            else if (l == GridMask::Outer) ++outer, p.type[k] = NodeType::Fixed, p.u[k] = 1.0;
            else if (l == GridMask::Region) ++region, p.type[k] = NodeType::Free, p.u[k] = 0.5;
            else if (l != GridMask::Outside) throw Error("invalid-region", "unknown label");
            if (l == GridMask::Inner) {
                // Boundaries that touch leave no annulus between them.
                if ((i + 1 < m.nx && m.label[k + 1] == GridMask::Outer) || (i > 0 && m.label[k - 1] == GridMask::Outer) ||
                    (j + 1 < m.ny && m.label[k + m.nx] == GridMask::Outer) ||
                    (j > 0 && m.label[k - m.nx] == GridMask::Outer))
                    throw Error("invalid-region", "inner and outer boundaries touch");
            }
        }
    }
    if (inner == 0 || outer == 0 || region == 0)
        throw Error("invalid-region", "annulus needs a region and both boundary sets");
    solve_laplace(p, 1e-10, 400);
    double e = network_energy(p);
    if (!(e > 0.0)) throw Error("invalid-region", "region does not connect the two boundaries");
    return 1.0 / e;
}

namespace {

std::string svg_path(const std::vector<Complex>& pts, const std::function<Complex(Complex)>& map, bool close) {
    std::ostringstream s;
    s.precision(6);
    s << std::fixed;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Complex q = map(pts[i]);
        s << (i ? " L" : "M") << q.real() << "," << q.imag();
    }
    if (close) s << " Z";
    return s.str();
}

}  // namespace

std::string render_svg(Complex c, const Lamination& lam, std::size_t level, const RenderOptions& opt) {
    if (level > lam.stored_depth()) throw Error("empty-level", "no pieces recorded at this level");
    const double t = std::ldexp(opt.potential0, -int(level));
    auto gaps = lamination_gaps(lam.polygons(level));
    std::vector<std::vector<Complex>> pieces;
    for (const auto& g : gaps) pieces.push_back(curve_from_arcs(c, g, t, opt.curve));

    std::vector<std::vector<Complex>> rays;
    std::vector<Angle> angles;
    for (const auto& poly : lam.polygons(level))
        for (const auto& v : poly.vertices) angles.push_back(v);
    for (const auto& a : angles) {
        std::vector<Complex> r;
        for (const auto& p : trace_ray(c, a, opt.potential0, opt.curve.pot_lo, opt.curve.steps_per_halving,
                                       opt.curve.trace)
                                 .points)
            r.push_back(p.z);
        rays.push_back(std::move(r));
    }
    std::vector<std::vector<Complex>> equis;
    for (double pot : {opt.potential0, t}) {
        Complex start = trace_ray(c, Angle(), pot, pot / 2, 1, opt.curve.trace).points.front().z;
        equis.push_back(equipotential_arc(c, Angle(), Angle(), pot, start, opt.curve.trace));
    }
    std::vector<std::vector<Complex>> annulus;
    if (level >= 1) {
        annulus.push_back(piece_curve(c, lam, critical_piece(lam, level - 1), 2 * t, opt.curve));
        annulus.push_back(piece_curve(c, lam, critical_piece(lam, level), t, opt.curve));
    }

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& e : equis)
        for (auto z : e) {
            xmin = std::min(xmin, z.real()), xmax = std::max(xmax, z.real());
            ymin = std::min(ymin, z.imag()), ymax = std::max(ymax, z.imag());
        }
    const double px = double(opt.pixels);
    const double scale = px / std::max(xmax - xmin, ymax - ymin);
    auto map = [&](Complex z) { return Complex((z.real() - xmin) * scale, (ymax - z.imag()) * scale); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.pixels << "\" height=\"" << opt.pixels
      << "\" viewBox=\"0 0 " << opt.pixels << " " << opt.pixels << "\">\n";
    s << "<g id=\"pieces\" stroke=\"none\">\n";
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        int hue = int((i * 137) % 360);
        s << "<path fill=\"hsl(" << hue << ",55%,80%)\" d=\"" << svg_path(pieces[i], map, true) << "\"/>\n";
    }
    s << "</g>\n<g id=\"annuli\" fill=\"#d33\" fill-opacity=\"0.45\" fill-rule=\"evenodd\" stroke=\"none\">\n";
    if (!annulus.empty())
        s << "<path d=\"" << svg_path(annulus[0], map, true) << " " << svg_path(annulus[1], map, true) << "\"/>\n";
    s << "</g>\n<g id=\"equipotentials\" fill=\"none\" stroke=\"#333\" stroke-width=\"0.8\">\n";
    for (const auto& e : equis) s << "<path d=\"" << svg_path(e, map, true) << "\"/>\n";
    s << "</g>\n<g id=\"rays\" fill=\"none\" stroke=\"#124\" stroke-width=\"0.6\">\n";
    for (std::size_t i = 0; i < rays.size(); ++i)
        s << "<path data-angle=\"" << angles[i].str() << "\" d=\"" << svg_path(rays[i], map, false) << "\"/>\n";
    s << "</g>\n</svg>\n";
    return s.str();
}

std::string polyline_json(const RayPolyline& ray) {
    nlohmann::json j;
    j["c"] = {ray.c.real(), ray.c.imag()};
    j["theta"] = ray.theta.str();
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : ray.points) pts.push_back({p.z.real(), p.z.imag(), p.potential});
    j["points"] = std::move(pts);
    return j.dump();
}

RayCache::RayCache(std::optional<std::string> dir) {
    if (dir) dir_ = *dir;
    else if (const char* env = std::getenv("YOCCOZ_CACHE_DIR")) dir_ = env;
}

RayPolyline RayCache::get(Complex c, const Angle& theta, double pot_hi, double pot_lo, unsigned steps,
                          const TraceConfig& cfg) {
    if (dir_.empty()) return trace_ray(c, theta, pot_hi, pot_lo, steps, cfg);
    char key[512];
    std::snprintf(key, sizeof key, "c=%.17g,%.17g|theta=%s|hi=%.17g|lo=%.17g|steps=%u|R=%.17g|cap=%u|tol=%.17g",
                  c.real(), c.imag(), theta.str().c_str(), pot_hi, pot_lo, steps, cfg.start_radius, cfg.newton_cap,
                  cfg.newton_tol);
    // FNV-1a: stable across runs and platforms, unlike std::hash.
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = key; *p; ++p) h = (h ^ static_cast<unsigned char>(*p)) * 1099511628211ull;
    char name[32];
    std::snprintf(name, sizeof name, "ray-%016llx.json", static_cast<unsigned long long>(h));
    std::filesystem::path path = std::filesystem::path(dir_) / name;
    if (std::ifstream in{path}) {
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (!j.is_discarded() && j.value("key", "") == key) {
            RayPolyline r;
            r.c = c;
            r.theta = theta;
            for (const auto& p : j["points"]) r.points.push_back({Complex(p[0], p[1]), p[2]});
            ++hits_;
            return r;
        }
    }
    RayPolyline r = trace_ray(c, theta, pot_hi, pot_lo, steps, cfg);
    std::filesystem::create_directories(dir_);
    nlohmann::json j = nlohmann::json::parse(polyline_json(r));
    j["key"] = key;
    std::ofstream(path) << j.dump() << "\n";
    return r;
}

}  // namespace yoccoz
