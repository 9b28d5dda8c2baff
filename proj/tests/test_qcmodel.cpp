#include "doctest.h"

#include "yoccoz/error.hpp"
#include "yoccoz/qcmodel.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace yoccoz;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
std::string code_of(F f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "none";
}

double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Independent oracle: remove open middle thirds `steps` times.
std::vector<std::pair<Rational, Rational>> middle_thirds(std::size_t steps) {
    std::vector<std::pair<Rational, Rational>> iv{{Rational(0), Rational(1)}};
    for (std::size_t s = 0; s < steps; ++s) {
        std::vector<std::pair<Rational, Rational>> next;
        for (const auto& [a, b] : iv) {
            Rational t = (b - a) / 3;
            next.emplace_back(a, a + t);
            next.emplace_back(b - t, b);
        }
        iv = std::move(next);
    }
    return iv;
}

}  // namespace

TEST_CASE("notched square: exact squares and the midline Cantor construction") {
    auto s0 = build_notched(0);
    REQUIRE(s0.squares.size() == 1);
    CHECK(s0.squares[0].x0 == Rational(1, 3));
    CHECK(s0.squares[0].x1 == Rational(2, 3));
    CHECK(s0.squares[0].y0 == Rational(-1, 6));
    CHECK(s0.squares[0].y1 == Rational(1, 6));
    for (std::size_t d = 0; d <= 6; ++d) {
        auto s = build_notched(d);
        CHECK(s.squares.size() == (std::size_t{1} << (d + 1)) - 1);
        for (const auto& r : s.squares) CHECK(r.x1 - r.x0 == r.y1 - r.y0);
        CHECK(midline_intervals(s) == middle_thirds(d + 1));
    }
}

TEST_CASE("slitted square: heights and the angle bound") {
    auto s1 = build_slitted(1);
    REQUIRE(s1.slits.size() == 3);
    CHECK(s1.slits[0].x == Rational(-1, 2));
    CHECK(s1.slits[1].x == 0);
    CHECK(s1.slits[2].x == Rational(1, 2));
    CHECK(s1.slits[1].half_height == Rational(3, 5));
    CHECK(s1.slits[0].half_height == Rational(3, 10));
    CHECK(s1.slits[2].half_height == Rational(3, 10));
    for (std::size_t d = 0; d <= 8; ++d) {
        auto s = build_slitted(d);
        CHECK(s.slits.size() == (std::size_t{1} << (d + 1)) - 1);
        for (const auto& sl : s.slits) CHECK(slit_angle_ok(sl));
    }
    // The bound is attained at x = -1/2 and -3/4.
    CHECK(Rational(3, 10) / (1 + Rational(-1, 2)) == Rational(3, 5));
    CHECK(Rational(3, 20) / (1 + Rational(-3, 4)) == Rational(3, 5));
    CHECK_FALSE(slit_angle_ok({Rational(-3, 4), Rational(3, 10), 1}));
}

TEST_CASE("block map: boundary contract, injectivity, similarity invariance") {
    MarkedRect m{{0, 0}, 3, 1, 1, 2};
    SlittedRect s{{0, 0}, 4, 1, 2, 0.2};
    PLAtlas blk = block_map(m, s);
    CHECK(blk.cells().size() == 9);
    for (auto [p, q] : std::vector<std::pair<Vec2, Vec2>>{
             {{0, 0}, {0, 0}}, {{3, 0}, {4, 0}}, {{3, 1}, {4, 1}}, {{0, 1}, {0, 1}}, {{1.5, 0}, {2, 0.2}}}) {
        CHECK(dist(blk.map(p), q) < 1e-14);
    }
    // The two halves of the marked interval open onto the two sides of the slit.
    for (double t : {0.1, 0.3, 0.45}) {
        Vec2 l = blk.map({1.0 + t, 0.0}), r = blk.map({2.0 - t, 0.0});
        CHECK(std::abs(l.x - 2.0) < 1e-14);
        CHECK(std::abs(r.x - 2.0) < 1e-14);
        CHECK(std::abs(l.y - r.y) < 1e-14);
        // Nearby interior points land on opposite sides.
        CHECK(blk.map({1.0 + t, 1e-6}).x < 2.0);
        CHECK(blk.map({2.0 - t, 1e-6}).x > 2.0);
    }
    for (const auto& c : blk.cells()) CHECK(std::isfinite(c.dilatation));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(0, 3), uy(0, 1);
    std::size_t tested = 0;
    for (int i = 0; i < 10000; ++i) {
        Vec2 p{ux(rng), uy(rng)};
        if (p.y == 0 && p.x >= 1 && p.x <= 2) continue;
        Vec2 back = blk.inverse(blk.map(p));
        CHECK(dist(back, p) < 1e-12);
        ++tested;
    }
    CHECK(tested > 9900);

    const double kb = blk.max_dilatation();
    const std::vector<std::pair<double, double>> shapes{{0.5, 0.25}, {2.0, 3.0}, {1.0 / 3, 0.125}, {7.0, 0.01},
                                                        {1e-4, 1e-3}};
    for (auto [a, b] : shapes) {
        PLAtlas other = block_map({{-1.0, 5.0}, 3 * a, a, a, 2 * a}, {{2.0, 3.0}, 4 * b, b, 2 * b, 0.2 * b});
        CHECK(std::abs(other.max_dilatation() - kb) < 1e-12);
    }

    CHECK(code_of([] { block_map({{0, 0}, 0, 1, 0.2, 0.3}, {{0, 0}, 4, 1, 2, 0.2}); }) == "invalid-geometry");
    CHECK(code_of([] { block_map({{0, 0}, 3, 1, 0, 2}, {{0, 0}, 4, 1, 2, 0.2}); }) == "invalid-geometry");
    CHECK(code_of([] { block_map({{0, 0}, 3, 1, 1, 2}, {{0, 0}, 4, 1, 4, 0.2}); }) == "invalid-geometry");
    CHECK(code_of([] { block_map({{0, 0}, 3, 1, 1, 2}, {{0, 0}, 4, 1, 2, 0.7}); }) == "invalid-geometry");
}

TEST_CASE("phi: self-similar dilatation, continuity, injectivity") {
    PhiMap p3(3), p6(6);
    CHECK(p3.atlas().cells().size() == 2 * 9 * 15);
    auto d3 = p3.atlas().distinct_dilatations(), d6 = p6.atlas().distinct_dilatations();
    REQUIRE(d3.size() == d6.size());
    for (std::size_t i = 0; i < d3.size(); ++i) CHECK(std::abs(d3[i] - d6[i]) < 1e-12);
    CHECK(std::abs(p3.atlas().max_dilatation() - p6.atlas().max_dilatation()) < 1e-12);
    for (const auto& c : p6.atlas().cells()) CHECK(c.dilatation < 1e6);

    // Shared edges: horizontal strip boundaries and vertical block sides.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t samples = 0;
    double worst = 0;
    while (samples < 1000) {
        std::size_t n = 1 + rng() % 6;
        Vec2 q = (rng() & 1) ? Vec2{u(rng), 0.5 * std::pow(3.0, -double(n))}
                             : Vec2{std::round(u(rng) * 3 * std::pow(3.0, n)) / (3 * std::pow(3.0, n)),
                                    0.5 * std::pow(3.0, -double(n)) * (1 + 2 * u(rng)) / 3};
        if (rng() & 1) q.y = -q.y;
        if (code_of([&] { p6(q); }) != "none") continue;
        auto cells = p6.atlas().locate_all(q);
        REQUIRE(!cells.empty());
        Vec2 ref = p6.atlas().cells()[cells[0]].apply(q);
        for (auto ci : cells) worst = std::max(worst, dist(ref, p6.atlas().cells()[ci].apply(q)));
        ++samples;
    }
    CHECK(worst < 1e-12);

    std::size_t tested = 0;
    for (int i = 0; i < 5000; ++i) {
        Vec2 q{u(rng), u(rng) - 0.5};
        if (code_of([&] { p6(q); }) != "none") continue;
        Vec2 img = p6(q);
        CHECK(std::abs(img.x) <= 1 + 1e-12);
        CHECK(std::abs(img.y) <= 1 + 1e-12);
        CHECK(dist(p6.atlas().inverse(img), q) < 1e-12);
        ++tested;
    }
    CHECK(tested > 3000);

    CHECK(code_of([&] { p3({0.5, 0.0}); }) == "outside-domain");
    CHECK(code_of([&] { p3({0.5, 1.0 / 6}); }) == "outside-domain");
    CHECK(code_of([&] { p3({1.5 / 9, -1.0 / 18}); }) == "outside-domain");
    CHECK(code_of([&] { p3({2.0, 0.1}); }) == "outside-domain");
    CHECK(code_of([&] { p3({0.25, 1e-9}); }) == "beyond-depth");
    CHECK(code_of([] { PhiMap(0); }) == "invalid-argument");
}

TEST_CASE("phi: boundary values follow the Cantor function") {
    CHECK(std::abs(PhiMap::boundary_value(0.25) - (-1.0 / 3)) < 1e-15);
    CHECK(PhiMap::boundary_value(0.0) == -1.0);
    CHECK(std::abs(PhiMap::boundary_value(1.0) - 1.0) < 1e-15);
    CHECK(PhiMap::boundary_value(0.5) == 0.0);

    double prev = 1;
    for (std::size_t d : {4, 8, 12}) {
        PhiMap phi(d);
        const double y = std::pow(3.0, -double(d) - 1);  // inside the deepest strip
        Vec2 img = phi({0.25, y});
        double err = std::abs((img.x + 1) / 2 - 1.0 / 3);
        CHECK(err < prev);
        prev = err;
        if (d == 12) CHECK(err < 1e-3);
    }
}

TEST_CASE("psi extension agrees with phi on the boundary and is a homeomorphism") {
    const std::size_t d = 6;
    PhiMap phi(d);
    PLAtlas psi = psi_extension(d);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0, 1);
    const double band = 0.5 * std::pow(3.0, -double(d) - 1);
    double worst = 0;
    std::size_t samples = 0;
    while (samples < 1000) {
        double t = u(rng);
        Vec2 p;
        switch (rng() % 4) {
            case 0: p = {t, 0.5}; break;
            case 1: p = {t, -0.5}; break;
            case 2: p = {0.0, t - 0.5}; break;
            default: p = {1.0, t - 0.5}; break;
        }
        if (std::abs(p.y) < band) continue;
        worst = std::max(worst, dist(psi.map(p), phi(p)));
        ++samples;
    }
    CHECK(worst < 1e-9);

    for (int i = 0; i < 5000; ++i) {
        Vec2 p{u(rng), u(rng) - 0.5};
        Vec2 img = psi.map(p);
        CHECK(dist(psi.inverse(img), p) < 1e-12);
    }
    double area = 0;
    for (const auto& c : psi.cells()) {
        const auto& t = c.dst;
        area += ((t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x)) / 2;
    }
    CHECK(std::abs(area - 4.0) < 1e-12);

    double k6 = psi.max_dilatation(), k8 = psi_extension(d + 2).max_dilatation();
    CHECK(std::isfinite(k6));
    CHECK(std::abs(k8 / k6 - 1) < 0.05);
}

TEST_CASE("square to diamond fixes the slits") {
    PLAtlas sd = square_to_diamond();
    CHECK(sd.cells().size() == 12);
    for (const auto& s : build_slitted(8).slits) {
        const double x = s.x.convert_to<double>(), h = s.half_height.convert_to<double>();
        for (int k = 0; k <= 8; ++k) {
            Vec2 p{x, -h + 2 * h * k / 8};
            CHECK(dist(sd.map(p), p) < 1e-15);
        }
    }
    CHECK(dist(sd.map({-1, 1}), {-0.5, 0.5}) < 1e-15);
    CHECK(dist(sd.map({1, -1}), {0.5, -0.5}) < 1e-15);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 2000; ++i) {
        Vec2 img = sd.map({u(rng), u(rng)});
        CHECK(std::abs(img.x) + std::abs(img.y) <= 1 + 1e-12);
    }
    CHECK(code_of([&] { sd.map({1.5, 0}); }) == "outside-domain");
}

TEST_CASE("diamond to strip") {
    for (double y : {-0.3, 0.0, 0.9}) CHECK(dist(rho_minus({0, y}), {0, y}) == 0.0);
    CHECK(dist(rho_minus({-0.5, 0}), {-std::log(2.0), 0}) < 1e-15);
    CHECK(dist(rho_plus({0.5, 0.25}), {std::log(2.0), 0.5}) < 1e-15);
    CHECK(code_of([] { diamond_to_strip({0.8, 0.8}); }) == "outside-domain");

    // Shear of slope 1 on the diamond edge.
    CHECK(std::abs(diamond_dilatation({-0.5, 0.5}) - (3 + std::sqrt(5.0)) / 2) < 1e-12);
    auto rep = diamond_dilatation_grid(512);
    CHECK(rep.samples == 512 * 512);
    CHECK(rep.above_three == 0);
    CHECK(std::abs(rep.max - (3 + std::sqrt(5.0)) / 2) < 1e-6);
}

TEST_CASE("strip model: slit band, vertical images, reflection symmetry") {
    for (std::size_t d = 1; d <= 6; ++d) {
        auto m = strip_model(d);
        CHECK(m.slits.size() == (std::size_t{1} << (d + 1)) - 1);
        double lo = 10, hi = -10;
        for (const auto& s : m.slits) {
            CHECK(s.im_lo >= kPi / 5 - 1e-9);
            CHECK(s.im_hi <= 4 * kPi / 5 + 1e-9);
            CHECK(s.x_spread < 1e-9);
            CHECK(s.im_lo < kPi / 2);
            CHECK(s.im_hi > kPi / 2);
            lo = std::min(lo, s.im_lo);
            hi = std::max(hi, s.im_hi);
        }
        // Extremal slits reach the band exactly.
        CHECK(std::abs(lo - kPi / 5) < 1e-12);
        CHECK(std::abs(hi - 4 * kPi / 5) < 1e-12);
    }

    PhiMap phi(5);
    PLAtlas sd = square_to_diamond();
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t tested = 0;
    for (int i = 0; i < 2000; ++i) {
        Vec2 p{u(rng), 0.5 * u(rng)};
        if (code_of([&] { phi(p); }) != "none") continue;
        Vec2 a = strip_map(phi, sd, p), b = strip_map(phi, sd, {p.x, -p.y});
        CHECK(std::abs(a.x - b.x) < 1e-12);
        CHECK(std::abs(a.y + b.y - kPi) < 1e-12);
        CHECK(a.y > 0);
        CHECK(a.y < kPi);
        ++tested;
    }
    CHECK(tested > 1000);
}

TEST_CASE("slice embedding of the airplane Cantor family") {
    const Complex airplane(-1.7548776662466927, 0.0);
    auto lam = Lamination::build(1, 2, Angle::normalize(3, 7), 24, 8);
    SliceData s = slice_data(lam);
    auto samples = cantor_samples(s, 4);
    REQUIRE(samples.size() >= 4);
    CHECK(samples.front().x == 0);
    CHECK(samples.front().q1 == s.A);
    CHECK(samples.back().x == 1);
    CHECK(samples.back().q1 == s.B);
    CHECK(normalized_q(samples, s, 0) == 0.0);
    CHECK(std::abs(normalized_q(samples, s, 1) - 1) < 1e-15);

    // Boundary extension formulas.
    for (double t : {0.1, 0.37, 0.8}) {
        Vec2 b = square_extension(samples, s, {t, 0}), l = square_extension(samples, s, {0, t});
        Vec2 top = square_extension(samples, s, {t, 1}), r = square_extension(samples, s, {1, t});
        CHECK(dist(b, {normalized_q(samples, s, t), 0}) < 1e-15);
        CHECK(dist(l, {0, normalized_q(samples, s, t)}) < 1e-15);
        CHECK(dist(top, {1 - normalized_q(samples, s, 1 - t), 1}) < 1e-15);
        CHECK(dist(r, {1, 1 - normalized_q(samples, s, 1 - t)}) < 1e-15);
    }

    // Depth 2 keeps the Cantor pieces resolved by a 64-cell mesh.
    SliceEmbeddingOptions opt;
    opt.mesh = 64;
    auto rep = slice_embedding(s, lam, airplane, 2, opt);
    CHECK(rep.q1_monotone);
    CHECK(rep.q2_monotone);
    CHECK(rep.q_orientation_ok);
    CHECK(std::isfinite(rep.q_dilatation));
    CHECK(std::isfinite(rep.xi_dilatation));
    MESSAGE("Q dilatation " << rep.q_dilatation << " -> " << rep.q_dilatation_refined << ", xi "
                            << rep.xi_dilatation << " -> " << rep.xi_dilatation_refined);
    CHECK(std::abs(rep.q_dilatation_refined / rep.q_dilatation - 1) < 0.1);
    CHECK(std::abs(rep.xi_dilatation_refined / rep.xi_dilatation - 1) < 0.1);
    CHECK(std::abs(rep.xi_dilatation / rep.q_pointwise - 1) < 1e-3);
    CHECK(rep.min_green_off_cantor > 0);
    for (double e : rep.corner_error) CHECK(e < 1e-9);
}
