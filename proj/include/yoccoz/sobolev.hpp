#pragma once

#include "yoccoz/kernels.hpp"
#include "yoccoz/qcmodel.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace yoccoz {

/// Real function on a boundary line with its limits at -inf and +inf.
struct BoundaryFn {
    std::function<double(double)> f;
    double limit_minus = 0.0, limit_plus = 0.0;
};

/// Node values on a rectangular window with spacing h; `cell` marks the
/// cells (indexed by their lower-left node) that belong to the region.
struct GridFunction {
    double x0 = 0.0, y0 = 0.0, h = 1.0;
    std::size_t nx = 0, ny = 0;
    std::vector<double> u;
    std::vector<double> cell;

    double& at(std::size_t i, std::size_t j) { return u[j * nx + i]; }
    double at(std::size_t i, std::size_t j) const { return u[j * nx + i]; }
};

/// Samples f on the window with all cells in the region.
GridFunction sample_grid(double x0, double y0, double h, std::size_t nx, std::size_t ny,
                         const std::function<double(double, double)>& f);

/// Dirichlet energy (the squared norm) of the bilinear-per-cell gradient,
/// summed over marked cells. Throws invalid-region on an empty mask.
double dirichlet_norm(const GridFunction& g, const kernels::Table& k = kernels::active());

struct QuadratureOptions {
    std::size_t n = 1024;        // half-plane: nodes on the circle at the coarsest level
    double strip_length = 30.0;  // strip: the window [-L, L]
    double strip_step = 1.0 / 32;
    bool check_divergence = true;  // compare three refinements
    double cap = 1e12;
};

/// Squared norm of the harmonic extension of g to the upper half-plane,
/// (1/2pi) double integral of (g(s) - g(t))^2 / (s - t)^2. Computed after
/// s = tan a, which turns the kernel into 1/sin^2(a - b) on a circle.
/// Throws not-finite-energy when the refinements grow like a divergent
/// integral, when the limits at +-inf differ, or past the cap.
double halfplane_norm(const BoundaryFn& g, const QuadratureOptions& opt = {});

/// The four strip integrals I_00, I_01, I_10, I_11 for boundary values f0 on
/// Im z = 0 and f1 on Im z = pi; the squared norm of the harmonic extension
/// is their sum over 2pi. Throws not-finite-energy as halfplane_norm does,
/// including when the limits of f0 and f1 disagree at an end.
std::array<double, 4> strip_Iij(const BoundaryFn& f0, const BoundaryFn& f1, const QuadratureOptions& opt = {});

/// Integral of 1 / (e^{s/2} + e^{-s/2})^2 over the line, by quadrature.
double strip_kernel_constant();

struct StripGrid {
    double length = 20.0;     // window [-L, L]
    std::size_t rows = 64;    // cells across the strip; h = pi / rows
};

/// Harmonic extension to {0 <= Im z <= pi} truncated to [-L, L], with the
/// limits imposed on the two ends. Throws relaxation-failed.
GridFunction harmonic_extension_strip(const BoundaryFn& f0, const BoundaryFn& f1, const StripGrid& grid = {});

// ---------------------------------------------------------------------------

/// Test function on the slitted strip with closed-form value and gradient.
/// Bumps are Gaussians; jump terms are b(y) g(x) [x > X] with b supported
/// strictly inside a slit's height range, so f jumps across that slit only.
struct SlitTestFunction {
    struct Bump {
        double amp, cx, cy, sigma;
    };
    struct Jump {
        double amp, x, lo, hi, sigma;
    };
    std::vector<Bump> bumps;
    std::vector<Jump> jumps;
    double scale = 1.0;

    double value(double x, double y) const;
    std::array<double, 2> gradient(double x, double y) const;
};

struct EnergyGrid {
    double length = 16.0;  // x window [-L, L]
    double step = 1.0 / 48;
};

/// Energy of f o v over {lo < Im z < hi} by the midpoint rule on closed-form
/// gradients, where v(x + iy) = x + i(anchor + (y - anchor) / squeeze).
/// squeeze = 1 is the energy of f itself.
double test_energy(const SlitTestFunction& f, double lo, double hi, const EnergyGrid& g = {},
                   double squeeze = 1.0, double anchor = 0.0);

struct SlitTrial {
    double energy = 0.0;           // of f on the strip minus the slits (1 after scaling)
    std::array<double, 4> I{};     // strip integrals of the boundary values
    double extension_norm2 = 0.0;  // sum I / 2pi
    double squeeze_bottom = 0.0;   // energy(f o v) / energy of f on {Im < pi/5}
    double squeeze_top = 0.0;
    double link_bottom = 0.0;      // I00 / 2pi minus energy(f o v), <= 0 expected
    double link_top = 0.0;
    double link_cross = 0.0;       // I01 - 2 I00 - 2 int (f0 - f1)^2, <= 0 expected
    double link_cross_single = 0.0;  // the same with weight 1 on the last term
    double link_trace = 0.0;       // int (f0 - f1)^2 - pi energy, <= 0 expected
    double identity_residual = 0.0;
    bool violation = false;
};

struct SlitBoundsReport {
    std::size_t trials = 0, skipped = 0, violations = 0, link_failures = 0;
    double b_proof2 = 0.0;      // 25 + 25 + 2 (50 + 1)
    double b_empirical2 = 0.0;  // max extension_norm2 over trials
    std::size_t single_weight_failures = 0;  // trials with link_cross_single > 0
    double squeeze_max = 0.0;
    double identity_residual_max = 0.0;
    std::vector<SlitTrial> runs;
    std::vector<std::string> log;
};

/// Random unit-energy test functions on the strip minus the model's slits:
/// bounds the harmonic extension of their boundary values against the
/// constant assembled from the chain of inequalities, link by link.
SlitBoundsReport verify_slitbounds(const StripModel& model, std::size_t trials, std::uint64_t seed = 1,
                                   const QuadratureOptions& quad = {}, const EnergyGrid& grid = {});

/// The assembled bound on the squared extension norm for unit energy.
constexpr double slit_bound_squared() { return 25.0 + 25.0 + 2.0 * (50.0 + 1.0); }

}  // namespace yoccoz
