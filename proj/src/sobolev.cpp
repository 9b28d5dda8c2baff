#include "yoccoz/sobolev.hpp"

#include "yoccoz/error.hpp"
#include "yoccoz/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace yoccoz {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite_energy(double e, double cap, const char* what) {
    if (!std::isfinite(e) || e > cap)
        throw Error("not-finite-energy", std::string(what) + ": energy exceeds the cap");
}

// Three refinements e[0..2]; growth that does not settle like a convergent
// quadrature (geometric decay of the increments) signals divergence.
void check_refinements(const double e[3], double cap, const char* what) {
    for (int i = 0; i < 3; ++i) require_finite_energy(e[i], cap, what);
    const double d1 = e[1] - e[0], d2 = e[2] - e[1];
    if (d2 > 0.7 * d1 && d2 > 1e-6 * std::abs(e[2]))
        throw Error("not-finite-energy", std::string(what) + ": quadrature grows under refinement");
}

// Periodic trapezoid for (1/2pi) ∬ (G(a) - G(b))^2 / sin^2(a - b) on a circle
// of length pi with n nodes.
double circle_energy(const std::function<double(double)>& G, std::size_t n, const kernels::Table& k) {
    const double h = kPi / double(n);
    std::vector<double> v(2 * n);
    for (std::size_t i = 0; i < n; ++i) v[i] = v[i + n] = G(-kPi / 2 + (double(i) + 0.5) * h);
    // Diagonal limit G'^2 from periodic central differences of the samples.
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = (v[i + 1] - v[i + n - 1]) / (2 * h);
        diag += g * g;
    }
    double sum = diag;
    for (std::size_t off = 1; off < n; ++off) {
        const double s = std::sin(h * double(off));
        sum += k.sqdiff(v.data(), v.data() + off, n) / (s * s);
    }
    return h * h * sum / (2 * kPi);
}

struct StripSamples {
    std::vector<double> f0, f1;
    double diag0 = 0.0, diag1 = 0.0;  // sums of squared derivatives
    double h = 0.0, L = 0.0;
};

StripSamples sample_strip(const BoundaryFn& f0, const BoundaryFn& f1, double L, double h) {
    StripSamples s;
    s.h = h;
    const auto n = std::size_t(std::llround(2 * L / h)) + 1;
    s.L = 0.5 * double(n - 1) * h;
    s.f0.resize(n);
    s.f1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = -s.L + double(i) * h;
        s.f0[i] = f0.f(t);
        s.f1[i] = f1.f(t);
    }
    // Diagonal limit f'^2 from central differences, one-sided at the ends.
    auto diag = [&](const std::vector<double>& f) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t a = i ? i - 1 : 0, b = i + 1 < n ? i + 1 : n - 1;
            const double d = (f[b] - f[a]) / (double(b - a) * h);
            sum += d * d;
        }
        return sum;
    };
    s.diag0 = diag(s.f0);
    s.diag1 = diag(s.f1);
    return s;
}

double ksinh(double d) {
    const double s = std::sinh(0.5 * d);
    return 1.0 / (4 * s * s);
}
double kcosh(double d) {
    const double c = std::cosh(0.5 * d);
    return 1.0 / (4 * c * c);
}
// Integrals of the kernels over [D, inf), D > 0.
double tail_sinh(double D) { return 0.5 * (1.0 / std::tanh(0.5 * D) - 1.0); }
double tail_cosh(double D) { return 0.5 * (1.0 - std::tanh(0.5 * D)); }

// ∬ (a(s) - b(t))^2 K(s - t) over the line squared, windowed with tail closures
// at the limits lm, lp of both functions.
double strip_integral(const std::vector<double>& a, const std::vector<double>& b, double diag, bool same,
                      double h, double L, double lm, double lp, const kernels::Table& k) {
    const std::size_t n = a.size();
    double sum = same ? diag : 0.0;
    for (std::size_t off = 0; off < n; ++off) {
        const double d = h * double(off);
        if (off == 0) {
            if (!same) sum += kcosh(0.0) * k.sqdiff(a.data(), b.data(), n);
            continue;
        }
        const double w = same ? ksinh(d) : kcosh(d);
        if (w < 1e-300) break;
        // a(s_i) against b(s_{i+off}) and a(s_{i+off}) against b(s_i).
        sum += w * (k.sqdiff(a.data(), b.data() + off, n - off) + k.sqdiff(a.data() + off, b.data(), n - off));
    }
    sum *= h * h;
    // One variable in the window, the other beyond an end where its function
    // sits at the limit; the window cells extend h/2 past the end nodes.
    double tails = 0.0;
    const double edge = L + 0.5 * h;
    auto tail = same ? tail_sinh : tail_cosh;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = -L + double(i) * h;
        const double right = tail(edge - s), left = tail(edge + s);
        const double ea = a[i], eb = b[i];
        tails += (ea - lp) * (ea - lp) * right + (ea - lm) * (ea - lm) * left;
        tails += (eb - lp) * (eb - lp) * right + (eb - lm) * (eb - lm) * left;
    }
    return sum + h * tails;
}

}  // namespace

GridFunction sample_grid(double x0, double y0, double h, std::size_t nx, std::size_t ny,
                         const std::function<double(double, double)>& f) {
    GridFunction g;
    g.x0 = x0;
    g.y0 = y0;
    g.h = h;
    g.nx = nx;
    g.ny = ny;
    g.u.resize(nx * ny);
    g.cell.assign(nx * ny, 0.0);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            g.at(i, j) = f(x0 + double(i) * h, y0 + double(j) * h);
            if (i + 1 < nx && j + 1 < ny) g.cell[j * nx + i] = 1.0;
        }
    return g;
}

double dirichlet_norm(const GridFunction& g, const kernels::Table& k) {
    if (g.u.size() != g.nx * g.ny || g.cell.size() != g.u.size())
        throw Error("invalid-region", "grid function arrays do not match the window");
    if (std::none_of(g.cell.begin(), g.cell.end(), [](double c) { return c != 0.0; }))
        throw Error("invalid-region", "empty region mask");
    for (std::size_t j = 0; j + 1 < g.ny; ++j)
        for (std::size_t i = 0; i + 1 < g.nx; ++i)
            if (g.cell[j * g.nx + i] != 0.0)
                for (std::size_t q : {j * g.nx + i, j * g.nx + i + 1, (j + 1) * g.nx + i, (j + 1) * g.nx + i + 1})
                    if (!std::isfinite(g.u[q])) throw Error("invalid-region", "non-finite value on the region");
    return k.cell_energy(g.u.data(), g.cell.data(), g.nx, g.ny);
}

double halfplane_norm(const BoundaryFn& g, const QuadratureOptions& opt) {
    if (std::abs(g.limit_minus - g.limit_plus) > 1e-12 * std::max(1.0, std::abs(g.limit_plus)))
        throw Error("not-finite-energy", "limits at -inf and +inf differ");
    const double lim = g.limit_plus;
    std::function<double(double)> G = [&](double a) {
        if (std::abs(a) >= kPi / 2) return lim;
        return g.f(std::tan(a));
    };
    const auto& k = kernels::active();
    if (!opt.check_divergence) {
        double e = circle_energy(G, opt.n, k);
        require_finite_energy(e, opt.cap, "half-plane norm");
        return e;
    }
    double e[3];
    for (int i = 0; i < 3; ++i) e[i] = circle_energy(G, opt.n << i, k);
    check_refinements(e, opt.cap, "half-plane norm");
    return e[2];
}

std::array<double, 4> strip_Iij(const BoundaryFn& f0, const BoundaryFn& f1, const QuadratureOptions& opt) {
    const double tol = 1e-12;
    if (std::abs(f0.limit_minus - f1.limit_minus) > tol || std::abs(f0.limit_plus - f1.limit_plus) > tol)
        throw Error("not-finite-energy", "boundary components have different limits");
    const double lm = f0.limit_minus, lp = f0.limit_plus;
    const auto& k = kernels::active();
    auto once = [&](double h) {
        auto s = sample_strip(f0, f1, opt.strip_length, h);
        std::array<double, 4> I{};
        I[0] = strip_integral(s.f0, s.f0, s.diag0, true, h, s.L, lm, lp, k);
        I[1] = strip_integral(s.f0, s.f1, 0.0, false, h, s.L, lm, lp, k);
        I[2] = strip_integral(s.f1, s.f0, 0.0, false, h, s.L, lm, lp, k);
        I[3] = strip_integral(s.f1, s.f1, s.diag1, true, h, s.L, lm, lp, k);
        return I;
    };
    if (!opt.check_divergence) {
        auto I = once(opt.strip_step);
        for (double v : I) require_finite_energy(v, opt.cap, "strip integrals");
        return I;
    }
    std::array<std::array<double, 4>, 3> r;
    for (int i = 0; i < 3; ++i) r[i] = once(opt.strip_step / double(1 << i));
    for (int c = 0; c < 4; ++c) {
        const double e[3] = {r[0][c], r[1][c], r[2][c]};
        check_refinements(e, opt.cap, "strip integrals");
    }
    return r[2];
}

double strip_kernel_constant() {
    // Trapezoid on [-60, 60]; the integrand is analytic in a strip, so the
    // error decays geometrically in the step.
    const double h = 1.0 / 64, L = 60.0;
    const auto n = std::size_t(2 * L / h);
    double sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = -L + double(i) * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const double e = std::exp(0.5 * s) + std::exp(-0.5 * s);
        sum += w / (e * e);
    }
    return h * sum;
}

GridFunction harmonic_extension_strip(const BoundaryFn& f0, const BoundaryFn& f1, const StripGrid& grid) {
    if (grid.rows < 2 || !(grid.length > 0)) throw Error("invalid-argument", "strip grid needs rows >= 2 and length > 0");
    if (std::abs(f0.limit_minus - f1.limit_minus) > 1e-12 || std::abs(f0.limit_plus - f1.limit_plus) > 1e-12)
        throw Error("not-finite-energy", "boundary components have different limits");
    const double h = kPi / double(grid.rows);
    const auto half = std::size_t(std::ceil(grid.length / h));
    const std::size_t nx = 2 * half + 1, ny = grid.rows + 1;
    const double x0 = -double(half) * h;

    LaplaceProblem p(nx, ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t q = p.at(i, j);
            const double x = x0 + double(i) * h;
            if (j == 0) {
                p.type[q] = NodeType::Fixed;
                p.u[q] = f0.f(x);
            } else if (j + 1 == ny) {
                p.type[q] = NodeType::Fixed;
                p.u[q] = f1.f(x);
            } else if (i == 0 || i + 1 == nx) {
                p.type[q] = NodeType::Fixed;
                p.u[q] = i == 0 ? f0.limit_minus : f0.limit_plus;
            } else {
                p.type[q] = NodeType::Free;
                p.u[q] = 0.5 * (f0.limit_minus + f0.limit_plus);
            }
        }
    solve_laplace(p, 1e-10, 400);

    GridFunction g;
    g.x0 = x0;
    g.y0 = 0.0;
    g.h = h;
    g.nx = nx;
    g.ny = ny;
    g.u = std::move(p.u);
    g.cell.assign(nx * ny, 0.0);
    for (std::size_t j = 0; j + 1 < ny; ++j)
        for (std::size_t i = 0; i + 1 < nx; ++i) g.cell[j * nx + i] = 1.0;
    return g;
}

// ---------------------------------------------------------------------------

namespace {

// exp(1 - 1/(1 - t^2)) on (-1, 1): smooth, compactly supported, peak 1.
double plateau(double t, double* dt) {
    if (std::abs(t) >= 1.0) {
        *dt = 0.0;
        return 0.0;
    }
    const double q = 1.0 - t * t;
    const double v = std::exp(1.0 - 1.0 / q);
    *dt = v * (-2.0 * t / (q * q));
    return v;
}

struct JumpParts {
    double b, db, g, dg;
    bool right;
};

JumpParts jump_parts(const SlitTestFunction::Jump& J, double x, double y) {
    JumpParts p;
    const double half = 0.5 * (J.hi - J.lo), mid = 0.5 * (J.hi + J.lo);
    double dt;
    p.b = plateau((y - mid) / half, &dt);
    p.db = dt / half;
    const double u = (x - J.x) / J.sigma;
    p.g = std::exp(-0.5 * u * u);
    p.dg = -u / J.sigma * p.g;
    p.right = x > J.x;
    return p;
}

}  // namespace

double SlitTestFunction::value(double x, double y) const {
    double v = 0.0;
    for (const auto& b : bumps) {
        const double dx = x - b.cx, dy = y - b.cy;
        v += b.amp * std::exp(-(dx * dx + dy * dy) / (2 * b.sigma * b.sigma));
    }
    for (const auto& j : jumps) {
        auto p = jump_parts(j, x, y);
        if (p.right) v += j.amp * p.b * p.g;
    }
    return scale * v;
}

std::array<double, 2> SlitTestFunction::gradient(double x, double y) const {
    double gx = 0.0, gy = 0.0;
    for (const auto& b : bumps) {
        const double dx = x - b.cx, dy = y - b.cy, s2 = b.sigma * b.sigma;
        const double e = b.amp * std::exp(-(dx * dx + dy * dy) / (2 * s2));
        gx -= e * dx / s2;
        gy -= e * dy / s2;
    }
    for (const auto& j : jumps) {
        auto p = jump_parts(j, x, y);
        if (!p.right) continue;
        gx += j.amp * p.b * p.dg;
        gy += j.amp * p.db * p.g;
    }
    return {scale * gx, scale * gy};
}

double test_energy(const SlitTestFunction& f, double lo, double hi, const EnergyGrid& g, double squeeze,
                   double anchor) {
    const auto nx = std::size_t(std::ceil(2 * g.length / g.step));
    const auto ny = std::max<std::size_t>(1, std::size_t(std::ceil((hi - lo) / g.step)));
    const double hx = 2 * g.length / double(nx), hy = (hi - lo) / double(ny);
    double sum = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const double y = lo + (double(j) + 0.5) * hy;
        const double yv = anchor + (y - anchor) / squeeze;
        double row = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = -g.length + (double(i) + 0.5) * hx;
            auto d = f.gradient(x, yv);
            const double dy = d[1] / squeeze;
            row += d[0] * d[0] + dy * dy;
        }
        sum += row;
    }
    return sum * hx * hy;
}

SlitBoundsReport verify_slitbounds(const StripModel& model, std::size_t trials, std::uint64_t seed,
                                   const QuadratureOptions& quad, const EnergyGrid& grid) {
    SlitBoundsReport rep;
    rep.b_proof2 = slit_bound_squared();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };

    std::vector<const StripSlit*> usable;
    for (const auto& s : model.slits)
        if (std::abs(s.x) < grid.length - 6.0) usable.push_back(&s);

    const double band_lo = kPi / 5, band_hi = 4 * kPi / 5;
    std::size_t attempt = 0;
    while (rep.runs.size() < trials && attempt < 4 * trials + 8) {
        ++attempt;
        SlitTestFunction f;
        const int nb = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int i = 0; i < nb; ++i) f.bumps.push_back({uni(-1, 1), uni(-4, 4), uni(0, kPi), uni(0.3, 1.2)});
        if (!usable.empty()) {
            const int nj = std::uniform_int_distribution<int>(1, 3)(rng);
            for (int i = 0; i < nj; ++i) {
                const auto* s = usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng)];
                // Keep the jump strictly inside the slit's height range.
                const double pad = 0.05 * (s->im_hi - s->im_lo);
                f.jumps.push_back({uni(-1, 1), s->x, s->im_lo + pad, s->im_hi - pad, uni(0.2, 1.0)});
            }
        }

        const double e = test_energy(f, 0.0, kPi, grid);
        if (!std::isfinite(e) || e < 1e-12) {
            std::ostringstream msg;
            msg << "attempt " << attempt << ": energy " << e << " cannot be normalized; skipped";
            rep.log.push_back(msg.str());
            ++rep.skipped;
            continue;
        }
        f.scale = 1.0 / std::sqrt(e);

        SlitTrial t;
        t.energy = test_energy(f, 0.0, kPi, grid);
        BoundaryFn b0{[&](double x) { return f.value(x, 0.0); }, 0.0, 0.0};
        BoundaryFn b1{[&](double x) { return f.value(x, kPi); }, 0.0, 0.0};
        try {
            t.I = strip_Iij(b0, b1, quad);
        } catch (const Error& err) {
            rep.log.push_back("attempt " + std::to_string(attempt) + ": " + err.code() + "; skipped");
            ++rep.skipped;
            continue;
        }
        t.extension_norm2 = (t.I[0] + t.I[1] + t.I[2] + t.I[3]) / (2 * kPi);

        const double below = test_energy(f, 0.0, band_lo, grid), above = test_energy(f, band_hi, kPi, grid);
        const double sq_b = test_energy(f, 0.0, kPi, grid, 5.0, 0.0);
        const double sq_t = test_energy(f, 0.0, kPi, grid, 5.0, kPi);
        t.squeeze_bottom = below > 0 ? sq_b / below : 0.0;
        t.squeeze_top = above > 0 ? sq_t / above : 0.0;
        t.link_bottom = t.I[0] / (2 * kPi) - sq_b;
        t.link_top = t.I[3] / (2 * kPi) - sq_t;

        // Trace difference and the identity f(t + i pi) - f(t) = ∫ df/dy.
        double trace = 0.0;
        {
            const double h = 1.0 / 64;
            const auto n = std::size_t(2 * quad.strip_length / h);
            for (std::size_t i = 0; i <= n; ++i) {
                const double x = -quad.strip_length + double(i) * h;
                const double d = f.value(x, kPi) - f.value(x, 0.0);
                trace += d * d;
            }
            trace *= h;
        }
        t.link_trace = trace - kPi * t.energy;
        t.link_cross = t.I[1] - 2 * t.I[0] - 2 * trace;
        t.link_cross_single = t.I[1] - 2 * t.I[0] - trace;
        for (int s = 0; s < 8; ++s) {
            double x = uni(-6, 6);
            bool near = false;
            for (const auto& sl : model.slits) near = near || std::abs(sl.x - x) < 1e-3;
            if (near) continue;
            const std::size_t m = 2000;  // Simpson on [0, pi]
            const double hy = kPi / double(m);
            double integral = 0.0;
            for (std::size_t k = 0; k <= m; ++k) {
                const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
                integral += w * f.gradient(x, double(k) * hy)[1];
            }
            integral *= hy / 3;
            t.identity_residual = std::max(t.identity_residual, std::abs(f.value(x, kPi) - f.value(x, 0.0) - integral));
        }

        const double slack = 1e-6;
        t.violation = t.extension_norm2 > rep.b_proof2 * t.energy * (1 + slack);
        const bool link_bad = t.link_bottom > slack || t.link_top > slack || t.link_trace > slack ||
                              t.link_cross > slack || t.squeeze_bottom > 5 + slack || t.squeeze_top > 5 + slack;
        rep.violations += t.violation;
        rep.link_failures += link_bad;
        rep.single_weight_failures += t.link_cross_single > slack;
        rep.b_empirical2 = std::max(rep.b_empirical2, t.extension_norm2 / t.energy);
        rep.squeeze_max = std::max({rep.squeeze_max, t.squeeze_bottom, t.squeeze_top});
        rep.identity_residual_max = std::max(rep.identity_residual_max, t.identity_residual);
        rep.runs.push_back(t);
    }
    rep.trials = rep.runs.size();
    return rep;
}

}  // namespace yoccoz
