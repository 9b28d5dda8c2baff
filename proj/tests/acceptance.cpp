// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include "fixtures.hpp"
#include "oracles.hpp"
#include "yoccoz/error.hpp"
#include "yoccoz/geometry.hpp"
#include "yoccoz/qcmodel.hpp"
#include "yoccoz/renorm.hpp"
#include "yoccoz/sobolev.hpp"
#include "yoccoz/tiling.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

using namespace yoccoz;

namespace {

constexpr double kPi = std::numbers::pi;

Angle A(long p, long q) { return Angle::normalize(p, q); }

struct Check {
    bool ok = true;
    std::ostringstream note;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) note << "first failure: " << what << "; ";
        ok = ok && cond;
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const Error& e) {
        c.ok = false;
        c.note << "error " << e.code() << ": " << e.what() << "; ";
    } catch (const std::exception& e) {
        c.ok = false;
        c.note << "exception: " << e.what() << "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.ok) ++failures;
    std::printf("%s %2d %s | %s%.1fs\n", c.ok ? "PASS" : "FAIL", id, title, c.note.str().c_str(), secs);
    std::fflush(stdout);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Angle> sample_piece(const Lamination& lam, const PieceRef& piece, std::size_t count,
                                std::mt19937_64& rng) {
    auto arcs = boundary(lam, piece);
    std::vector<Angle> out;
    std::uniform_int_distribution<std::size_t> pick(0, arcs.size() - 1);
    std::uniform_int_distribution<long> u(1, (1L << 30) - 1);
    while (out.size() < count) {
        const Arc& a = arcs[pick(rng)];
        out.push_back(Angle::from_rational(a.start.value() + ccw_length(a.start, a.end) * Rational(u(rng), 1L << 30)));
    }
    return out;
}

}  // namespace

int main() {
    criterion(1, "alpha cycle equals the exhaustive enumeration, q <= 10", [](Check& c) {
        const auto t0 = std::chrono::steady_clock::now();
        int cases = 0;
        for (unsigned q = 2; q <= 10; ++q)
            for (unsigned p = 1; p < q; ++p) {
                if (std::gcd(p, q) != 1) continue;
                auto all = oracles::rotation_cycles(p, q);
                c.require(all.size() == 1 && alpha_cycle(p, q) == all[0], "p/q = " + std::to_string(p) + "/" + std::to_string(q));
                ++cases;
            }
        const double t = elapsed(t0);
        c.require(t < 5.0, "time budget 5 s");
        c.note << cases << " rotation numbers; ";
    });

    criterion(2, "lamination invariants on 10 random parameters at depth 10", [](Check& c) {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(2024);
        const std::pair<unsigned, unsigned> rots[] = {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {2, 5}};
        const std::size_t depth = 10;
        int built = 0;
        for (int trial = 0; built < 10 && trial < 500; ++trial) {
            auto [p, q] = rots[trial % 6];
            auto al = alpha_cycle(p, q);
            // A random angle in the critical-value sector: the shortest arc between alpha angles.
            Angle lo = al[0];
            Rational best = ccw_length(al[0], al[1]);
            for (std::size_t i = 0; i < al.size(); ++i) {
                Rational len = ccw_length(al[i], al[(i + 1) % al.size()]);
                if (len < best) best = len, lo = al[i];
            }
            Angle t = Angle::from_rational(lo.value() + best * Rational(std::uniform_int_distribution<long>(1, 65535)(rng), 65536));
            std::optional<Lamination> lam;
            try {
                lam = Lamination::build(p, q, t, depth);
            } catch (const Error& e) {
                c.require(e.code() == "case1-degenerate", "unexpected build error " + e.code());
                continue;
            }
            ++built;
            std::map<std::vector<Angle>, std::size_t> distinct;
            for (std::size_t j = 0; j <= depth; ++j) {
                const auto& ps = lam->polygons(j);
                c.require(ps.size() == (std::size_t{1} << j), "polygon count at depth " + std::to_string(j));
                for (const auto& poly : ps) distinct.emplace(poly.vertices, distinct.size());
                if (j == 0) continue;
                std::map<std::vector<Angle>, int> parents;
                for (const auto& par : lam->polygons(j - 1)) ++parents[par.vertices];
                for (const auto& poly : ps) {
                    std::set<Angle> img;
                    for (const auto& v : poly.vertices) img.insert(v.doubled());
                    auto it = parents.find(std::vector<Angle>(img.begin(), img.end()));
                    c.require(it != parents.end() && it->second == 1, "forward image at depth " + std::to_string(j));
                }
            }
            c.require(oracles::non_crossing(distinct), "polygons unlinked for theta_v = " + t.str());
        }
        c.require(built == 10, "ten valid parameters");
        c.require(elapsed(t0) < 30.0, "time budget 30 s");
        c.note << built << " laminations; ";
    });

    criterion(3, "tau equals the direct scan on 200 angles to depth 40; step bound", [](Check& c) {
        const std::size_t depth = 40;
        auto lam = Lamination::build(1, 2, Angle::parse(fixtures::fibonacci96), depth, 0);
        std::vector<std::vector<Arc>> crit;
        for (std::size_t l = 0; l <= depth; ++l) crit.push_back(boundary(lam, critical_piece(lam, l)));
        std::mt19937_64 rng(3);
        const BigInt den = BigInt(5) << 40;
        std::uniform_int_distribution<unsigned long long> d(1, (5ull << 40) - 1);
        std::size_t mismatches = 0, violations = 0;
        for (int i = 0; i < 200; ++i) {
            Angle x = Angle::from_rational(Rational(BigInt(d(rng)), den));
            auto fast = tau_sequence(lam, Point::at(x), depth);
            mismatches += fast != oracles::tau_direct(crit, x, depth);
            for (std::size_t n = 0; n < depth; ++n) violations += fast[n + 1] > fast[n] + 1;
        }
        c.require(mismatches == 0, "incremental tau equals the direct scan");
        c.require(violations == 0, "tau(n+1) <= tau(n) + 1");
        c.note << mismatches << " mismatches, " << violations << " step violations; ";
    });

    criterion(4, "rise-and-drop: IVT witnesses and the repeated-drop extraction", [](Check& c) {
        std::mt19937_64 rng(4);
        std::size_t ivt_queries = 0, ivt_failures = 0, scan_mismatches = 0;
        for (int trial = 0; trial < 10000; ++trial) {
            std::vector<long> seq{std::uniform_int_distribution<long>(0, 6)(rng)};
            const std::size_t len = std::uniform_int_distribution<std::size_t>(2, 200)(rng);
            while (seq.size() < len) seq.push_back(std::uniform_int_distribution<long>(0, seq.back() + 1)(rng));
            for (int k = 0; k < 20; ++k) {
                std::size_t a = std::uniform_int_distribution<std::size_t>(0, len - 1)(rng);
                std::size_t b = std::uniform_int_distribution<std::size_t>(0, len - 1)(rng);
                if (a > b) std::swap(a, b);
                for (long m = seq[a]; m + 1 <= seq[b]; ++m) {
                    ++ivt_queries;
                    auto t = ivt_witness(seq, a, b, m);
                    const bool good = t && *t >= a && *t < b && seq[*t] == m && seq[*t + 1] == m + 1;
                    ivt_failures += !good;
                }
            }
            auto got = rad_analyze(seq);
            auto ref = oracles::rad_scan(seq);
            bool same = got.rises == ref.rises && got.repeated_drop == ref.drop && got.drop_times == ref.drop_times;
            if (same && ref.drop) {
                auto [r, s] = *ref.drop;
                std::vector<Rise> expect;
                for (std::size_t i = 0; i + 1 < ref.drop_times.size(); ++i)
                    for (long m = s; m < r; ++m)
                        if (oracles::rises_between(seq, ref.drop_times[i] + 1, ref.drop_times[i + 1], m))
                            expect.push_back({m, 0});
                same = got.witnesses.size() == expect.size();
                for (std::size_t i = 0; same && i < expect.size(); ++i) {
                    const auto& w = got.witnesses[i];
                    same = w.m == expect[i].m && seq[w.time] == w.m && seq[w.time + 1] == w.m + 1;
                }
            }
            scan_mismatches += !same;
        }
        c.require(ivt_failures == 0, "IVT witness search");
        c.require(scan_mismatches == 0, "bounded-case extraction equals the brute-force scan");
        c.note << ivt_queries << " IVT queries, " << ivt_failures << " failures, " << scan_mismatches
               << " scan mismatches; ";
    });

    criterion(5, "tiling trichotomy: trivial case 1, disjoint maximal tiles, no fourth outcome", [](Check& c) {
        auto info = classify_case(1, 2, A(1, 6), 30, 30);
        c.require(info.tag == CaseTag::TrivialCase1, "case-1 fixture classified trivial");
        auto triv = tile_trivial(PieceRef{8, Point{A(1, 12), true}}, *info.alpha_time);
        c.require(triv.tiles.size() == 1 && triv.residual_empty, "trivial decomposition");

        const std::size_t depth = 30;
        std::size_t tiles = 0, other = 0, sampled = 0;
        for (const char* fx : {fixtures::fibonacci56, fixtures::fibonacci96}) {
            auto lam = Lamination::build(1, 2, Angle::parse(fx), depth, 0);
            TileOptions opt;
            opt.max_tile_level = depth;
            auto t = tile(lam, 24, opt);
            c.require(t.tag == CaseTag::Recurrent, "case-3 fixture is recurrent");
            tiles += t.tiles.size();
            for (std::size_t i = 0; i < t.tiles.size(); ++i) {
                const auto& a = t.tiles[i];
                c.require(maps_univalently_to(lam, a.piece, t.L), "tile maps univalently");
                c.require(!maps_univalently_to(lam, PieceRef{a.level - 1, a.piece.anchor}, t.L), "tile is maximal");
                for (std::size_t j = i + 1; j < t.tiles.size(); ++j) {
                    const auto& b = t.tiles[j];
                    const auto& shallow = a.level <= b.level ? a : b;
                    const auto& deep = a.level <= b.level ? b : a;
                    c.require(!piece_contains(lam, shallow.piece, deep.piece.anchor.angle), "tiles disjoint");
                }
            }
            std::mt19937_64 rng(5);
            for (const auto& x : sample_piece(lam, critical_piece(lam, 24), 300, rng)) {
                bool in_tile = false;
                for (const auto& tl : t.tiles) in_tile = in_tile || piece_contains(lam, tl.piece, x);
                const bool bdry = lam.is_vertex(x, depth);
                const bool res =
                    !bdry && residual_member(lam, x, t.residual_p, t.residual_L, depth) == Residual::InRToDepth;
                c.require(!(in_tile && res), "tiled and residual at once");
                other += !(in_tile || bdry || res);
                ++sampled;
            }
        }
        c.require(other == 0, "every sample tiled, boundary or residual");
        c.note << tiles << " tiles, " << sampled << " samples, " << other << " unclassified; ";
    });

    criterion(6, "certificates: sound, corruption caught, annulus counts grow 20 -> 40", [](Check& c) {
        const std::size_t depth = 40;
        auto lam = Lamination::build(1, 2, Angle::parse(fixtures::fibonacci96), depth, 0);
        TileOptions opt;
        opt.max_tile_level = 30;
        opt.budget = 96;
        auto t = tile(lam, 24, opt);
        std::vector<Angle> rs;
        for (const char* r : fixtures::residual) rs.push_back(Angle::parse(r));
        auto cert = build_certificate(lam, t, rs, depth);
        auto rep = verify_certificate(lam, cert);
        c.require(rep.pass && !rep.vacuous, "generated certificate verifies");

        auto dup = cert;
        dup.entries[0].annuli.push_back(dup.entries[0].annuli.front());
        auto bad = verify_certificate(lam, dup);
        c.require(!bad.pass && !bad.failures.empty(), "duplicate annulus rejected with a witness");

        // Nested: an annulus of another point that overlaps without coinciding.
        auto nested = cert;
        const Angle z = cert.entries[0].theta;
        const std::size_t n = cert.entries[0].annuli.front().n;
        std::mt19937_64 rng(6);
        bool injected = false;
        for (const auto& x : sample_piece(lam, piece_of(lam, n, z), 200, rng)) {
            if (piece_contains(lam, piece_of(lam, n + 1, z), x) || lam.is_vertex(x, n + 1)) continue;
            auto wt = tau_sequence(lam, Point::at(x), n + 1);
            nested.entries.push_back({x, {{n, wt[n], wt[n]}}});
            injected = true;
            break;
        }
        c.require(injected, "overlapping annulus found");
        auto nb = verify_certificate(lam, nested);
        c.require(!nb.pass && !nb.failures.empty(), "overlapping annulus rejected with a witness");

        std::size_t grew = 0;
        for (const auto& z : rs) {
            auto a20 = surrounding_annuli(lam, z, t.N, 0, 20), a40 = surrounding_annuli(lam, z, t.N, 0, 40);
            std::map<long, std::size_t> c20, c40;
            for (const auto& a : a20) ++c20[a.cls];
            for (const auto& a : a40) ++c40[a.cls];
            bool monotone = true;
            for (const auto& [cls, k] : c20) monotone = monotone && c40[cls] >= k;
            c.require(monotone, "per-class counts monotone for " + z.str());
            grew += a40.size() > a20.size();
        }
        c.require(grew == rs.size(), "counts grow from depth 20 to 40");
        c.note << rs.size() << " residual fixtures, failures named: " << bad.failures.size() + nb.failures.size() << "; ";
    });

    criterion(7, "diamond map dilatation <= 3 on a 512^2 grid, max (3+sqrt5)/2", [](Check& c) {
        auto d = diamond_dilatation_grid(512);
        const double expect = (3 + std::sqrt(5.0)) / 2;
        c.require(d.above_three == 0 && d.max <= 3 + 1e-9, "K <= 3 + 1e-9");
        c.require(std::abs(d.max - expect) < 1e-6, "max equals (3+sqrt5)/2");
        const double locus = std::abs(d.argmax.y) / (1 - std::abs(d.argmax.x));
        c.require(std::abs(locus - 1) < 1e-9, "max on |y / (1 - |x|)| = 1");
        std::ostringstream s;
        s.precision(12);
        s << d.samples << " samples, max " << d.max << "; ";
        c.note << s.str();
    });

    criterion(8, "slit images lie in pi/5 <= Im <= 4pi/5 for depths 1..6", [](Check& c) {
        std::size_t slits = 0;
        double lo = 1e300, hi = -1e300;
        for (std::size_t d = 1; d <= 6; ++d) {
            auto m = strip_model(d);
            for (const auto& s : m.slits) {
                lo = std::min(lo, s.im_lo);
                hi = std::max(hi, s.im_hi);
                ++slits;
            }
        }
        c.require(lo >= kPi / 5 - 1e-9 && hi <= 4 * kPi / 5 + 1e-9, "band");
        std::ostringstream s;
        s.precision(12);
        s << slits << " slits, Im in [" << lo << ", " << hi << "]; ";
        c.note << s.str();
    });

    criterion(9, "phi: dilatations equal at depths 3 and 6, continuous, Cantor limit", [](Check& c) {
        PhiMap p3(3), p6(6);
        auto d3 = p3.atlas().distinct_dilatations(), d6 = p6.atlas().distinct_dilatations();
        bool same = d3.size() == d6.size();
        for (std::size_t i = 0; same && i < d3.size(); ++i) same = std::abs(d3[i] - d6[i]) < 1e-12;
        c.require(same, "distinct per-cell dilatations agree to 1e-12");

        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0, 1);
        double worst = 0;
        std::size_t samples = 0;
        while (samples < 2000) {
            const std::size_t n = 1 + rng() % 6;
            Vec2 q = (rng() & 1) ? Vec2{u(rng), 0.5 * std::pow(3.0, -double(n))}
                                 : Vec2{std::round(u(rng) * 3 * std::pow(3.0, n)) / (3 * std::pow(3.0, n)),
                                        0.5 * std::pow(3.0, -double(n)) * (1 + 2 * u(rng)) / 3};
            if (rng() & 1) q.y = -q.y;
            try {
                p6(q);
            } catch (const Error&) {
                continue;
            }
            auto cells = p6.atlas().locate_all(q);
            Vec2 ref = p6.atlas().cells()[cells[0]].apply(q);
            for (auto ci : cells) {
                Vec2 v = p6.atlas().cells()[ci].apply(q);
                worst = std::max(worst, std::hypot(v.x - ref.x, v.y - ref.y));
            }
            ++samples;
        }
        c.require(worst < 1e-12, "shared edges agree");

        PhiMap p12(12);
        Vec2 img = p12({0.25, std::pow(3.0, -13.0)});
        const double err = std::abs((img.x + 1) / 2 - 1.0 / 3);
        c.require(err < 1e-3, "Cantor limit at 1/4");
        c.note << d3.size() << " distinct values, edge gap " << worst << ", Cantor error " << err << "; ";
    });

    criterion(10, "Sobolev: half-plane pi/4, strip constant 1, slit bound over 20 trials", [](Check& c) {
        const auto t0 = std::chrono::steady_clock::now();
        BoundaryFn g{[](double t) { return 1.0 / (1.0 + t * t); }, 0.0, 0.0};
        const double e = halfplane_norm(g);
        c.require(std::abs(e / (kPi / 4) - 1) < 0.02, "half-plane norm pi/4 +- 2%");
        const double R = 24, h = 1.0 / 16;
        auto grid = sample_grid(-R, 0, h, std::size_t(2 * R / h) + 1, std::size_t(R / h) + 1,
                                [](double x, double y) { return (y + 1) / (x * x + (y + 1) * (y + 1)); });
        const double direct = dirichlet_norm(grid);
        c.require(std::abs(e / direct - 1) < 0.03, "equals the Dirichlet energy of the extension +- 3%");
        const double k = strip_kernel_constant();
        c.require(std::abs(k - 1) < 1e-6, "strip kernel constant 1 +- 1e-6");
        auto rep = verify_slitbounds(strip_model(6), 20, 1);
        c.require(rep.trials == 20, "20 trials");
        c.require(rep.violations == 0, "no violations of B_proof");
        c.require(rep.squeeze_max <= 5 + 1e-9, "squeeze ratio <= 5");
        c.require(elapsed(t0) < 300, "time budget 5 min");
        std::ostringstream s;
        s.precision(6);
        s << "norm " << e << " vs energy " << direct << ", B_emp " << std::sqrt(rep.b_empirical2) << " <= B_proof "
          << std::sqrt(rep.b_proof2) << ", squeeze " << rep.squeeze_max << "; ";
        c.note << s.str();
    });

    criterion(11, "rays radial at c = 0, functional equation, grid modulus at h = 1/256", [](Check& c) {
        std::mt19937_64 rng(11);
        auto rational = [&] {
            long q = std::uniform_int_distribution<long>(3, 200)(rng);
            return A(std::uniform_int_distribution<long>(1, q - 1)(rng), q);
        };
        double radial = 0;
        for (int i = 0; i < 20; ++i) {
            Angle t = rational();
            for (const auto& p : trace_ray(0.0, t, 4.0, 1e-4).points) {
                double d = std::fmod(std::abs(std::arg(p.z) / (2 * kPi) - t.to_double()), 1.0);
                radial = std::max(radial, std::min(d, 1 - d));
            }
        }
        c.require(radial < 1e-9, "radial within 1e-9");

        double functional = 0;
        for (Complex cp : {Complex(-1.7548776662466927, 0.0), Complex(0.0, 1.0)})
            for (int i = 0; i < 20; ++i) {
                Angle t = rational();
                auto ray = trace_ray(cp, t, 1.0, 1e-3);
                for (std::size_t k = 0; k < ray.points.size(); k += 7) {
                    const auto& p = ray.points[k];
                    auto twice = trace_ray(cp, t.doubled(1), 2 * p.potential, p.potential);
                    functional = std::max(functional, std::abs(p.z * p.z + cp - twice.points.front().z));
                }
            }
        c.require(functional < 1e-6, "functional equation within 1e-6");

        double worst = 0;
        for (double logR : {0.5, 1.0, 1.5}) {
            const double m = modulus_estimate(round_annulus_mask(1.0, std::exp(logR), 1.0 / 256));
            worst = std::max(worst, std::abs(m / (logR / (2 * kPi)) - 1));
        }
        c.require(worst < 0.05, "modulus within 5%");
        c.note << "radial " << radial << ", functional " << functional << ", modulus rel. error " << worst << "; ";
    });

    criterion(12, "renormalization: satellite fixture, negative to budget, tuning", [](Check& c) {
        std::optional<Angle> first;
        for (long den = 3; den <= 1024 && !first; ++den)
            for (long num = 1; num < den && !first; ++num) {
                Angle t = A(num, den);
                if (t.den() != den || in_arc(t, A(1, 3), A(2, 3)) != ArcPos::Inside) continue;
                if (detect(1, 2, t, 30, 30).renormalizable()) first = t;
            }
        c.require(first && first->str() == fixtures::satellite, "predicate scan finds the frozen fixture");
        auto sat = detect(1, 2, Angle::parse(fixtures::satellite), 30, 30);
        c.require(sat.renormalizable() && sat.kind == RenormKind::Satellite && sat.period == 2, "satellite, period 2");
        auto mis = detect(1, 2, Angle::parse(fixtures::misiurewicz), 30, 30);
        c.require(mis.status == RenormStatus::NotToBudget, "non-renormalizable fixture negative to budget");

        // Digit substitution by hand.
        struct Hand {
            const char *a0, *a1, *in, *out;
        };
        for (const Hand& h : {Hand{"01", "10", ".(1)", ".(10)"}, Hand{"01", "10", ".(011)", ".(011010)"},
                              Hand{"011", "100", ".0(01)", ".011(011100)"}, Hand{"0", "1", ".1(01)", ".1(01)"}})
            c.require(tune(h.a0, h.a1, BinaryExpansion::parse(h.in)) == BinaryExpansion::parse(h.out).canonical(),
                      std::string("tune ") + h.in);

        // Dyadic pairs of the tuned-from map become landing pairs of the tuned one.
        auto tuned = tune("01", "10", BinaryExpansion::parse(fixtures::airplane)).to_angle();
        auto lam = Lamination::build(1, 2, tuned, 12, 0);
        int pairs = 0, kept = 0;
        for (long k = 1; k <= 4; ++k)
            for (long num = 1; num < (1L << k); num += 2) {
                std::string bits;
                for (long b = k - 1; b >= 0; --b) bits.push_back((num >> b) & 1 ? '1' : '0');
                Angle e1 = tune("01", "10", BinaryExpansion{bits, "0"}).to_angle();
                Angle e2 = tune("01", "10", BinaryExpansion{bits.substr(0, k - 1) + "0", "1"}).to_angle();
                ++pairs;
                kept += e1 != e2 && ray_pair_equiv(lam, e1, e2) == Equiv::Equivalent;
            }
        c.require(kept == pairs, "ray pairs preserved");
        c.note << "first hit " << (first ? first->str() : "none") << ", " << kept << "/" << pairs << " pairs; ";
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
