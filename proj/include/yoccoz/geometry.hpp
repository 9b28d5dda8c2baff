#pragma once

#include "yoccoz/puzzle.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace yoccoz {

using Complex = std::complex<double>;

enum class FixedKind { Repelling, Indifferent, Attracting };
const char* to_string(FixedKind k);

/// Fixed points of z^2 + c. beta = (1 + sqrt(1 - 4c)) / 2 with the principal
/// square root, so Re(2 beta) >= 1; ray 0 lands there. Multipliers are 2z.
struct FixedPoints {
    Complex alpha, beta;
    Complex mult_alpha, mult_beta;
    FixedKind kind_alpha, kind_beta;
};
/// Throws degenerate-fixed-points at c = 1/4.
FixedPoints fixed_points(Complex c);

struct TraceConfig {
    double start_radius = 100.0;   // the Boettcher map is taken as the identity beyond this radius
    unsigned newton_cap = 60;
    unsigned max_subdivisions = 24;
    double newton_tol = 1e-14;     // relative step size declaring convergence
    unsigned orbit_check = 4000;   // critical-orbit iterations for the connectedness test
    double arc_step = 1.0 / 16.0;  // max phase step (in turns) of f^m along equipotentials
};

struct RayPoint {
    Complex z;
    double potential;
};

struct RayPolyline {
    Complex c;
    Angle theta;
    std::vector<RayPoint> points;  // potentials strictly decreasing
};

/// Green's function of the filled Julia set by escape time (0 inside).
double green(Complex c, Complex z, unsigned max_iter = 100000);

/// True when the critical orbit stays in |z| <= 2 for cfg.orbit_check steps.
bool critical_orbit_bounded(Complex c, const TraceConfig& cfg = {});

/// External ray of angle theta from potential pot_hi down to pot_lo, sampled
/// at dyadic potentials pot * 2^(-k / steps_per_halving) plus both ends.
/// Throws not-connected, trace-failed or invalid-argument.
RayPolyline trace_ray(Complex c, const Angle& theta, double pot_hi, double pot_lo, unsigned steps_per_halving = 8,
                      const TraceConfig& cfg = {});

/// Point with potential t and external argument phi (turns, any real).
Complex boettcher_inverse(Complex c, double phi, double t, const TraceConfig& cfg = {});

/// Newton correction |F(z) / F'(z)| for F(z) = f^m(z) - w, the equation
/// defining the point of argument phi and potential t: the distance from z to
/// the solution, to first order.
double ray_residual(Complex c, double phi, double t, Complex z, const TraceConfig& cfg = {});

/// Equipotential of potential t from argument a counterclockwise to b
/// (turns), starting from a known point near argument a.
std::vector<Complex> equipotential_arc(Complex c, const Angle& a, const Angle& b, double t, Complex start,
                                       const TraceConfig& cfg = {});

struct CurveOptions {
    double pot_lo = 1e-6;  // rays are followed down to this potential
    unsigned steps_per_halving = 8;
    TraceConfig trace;
};

/// Boundary of a puzzle piece cut off by the equipotential of `potential`:
/// equipotential arcs joined through ray pairs, counterclockwise.
std::vector<Complex> piece_curve(Complex c, const Lamination& lam, const PieceRef& piece, double potential,
                                 const CurveOptions& opt = {});

double winding_number(const std::vector<Complex>& closed_curve, Complex z);
double signed_area(const std::vector<Complex>& closed_curve);
double diameter(const std::vector<Complex>& pts);

struct DiameterStats {
    std::size_t level = 0;
    std::size_t pieces = 0;
    double max = 0.0;
    double median = 0.0;
};
/// Diameters of all level-n pieces, cut off at potential potential0 / 2^level.
/// Throws empty-level when the lamination stores no polygons at that level.
DiameterStats piece_diameters(Complex c, const Lamination& lam, std::size_t level, double potential0 = 1.0,
                              const CurveOptions& opt = {});

/// Node grid for the discrete modulus. Labels: 0 outside, 1 region,
/// 2 inner boundary, 3 outer boundary.
struct GridMask {
    enum Label : std::uint8_t { Outside = 0, Region = 1, Inner = 2, Outer = 3 };
    double x0 = 0.0, y0 = 0.0, h = 1.0;
    std::size_t nx = 0, ny = 0;
    std::vector<std::uint8_t> label;

    Complex point(std::size_t i, std::size_t j) const { return {x0 + h * double(i), y0 + h * double(j)}; }
};

/// Mask of {inner(z) false, outer(z) false} between the two boundary sets on
/// the square |Re z|, |Im z| <= half_width, spacing h.
template <class In, class Out>
GridMask make_annulus_mask(double half_width, double h, In inner, Out outer);

GridMask round_annulus_mask(double r, double R, double h);

/// Modulus of the grid annulus (convention log(R/r) / 2pi for round annuli),
/// as the reciprocal of the resistor-network energy between the boundaries.
/// Throws invalid-region for non-annular masks.
double modulus_estimate(const GridMask& mask);

struct RenderOptions {
    double potential0 = 1.0;
    std::size_t pixels = 800;
    CurveOptions curve;
};
/// SVG with layers equipotentials, rays, pieces and annuli.
std::string render_svg(Complex c, const Lamination& lam, std::size_t level, const RenderOptions& opt = {});

/// JSON polyline cache keyed by (c, theta, trace parameters). The directory
/// comes from the constructor or YOCCOZ_CACHE_DIR; empty disables caching.
class RayCache {
public:
    explicit RayCache(std::optional<std::string> dir = std::nullopt);
    const std::string& dir() const { return dir_; }
    RayPolyline get(Complex c, const Angle& theta, double pot_hi, double pot_lo, unsigned steps,
                    const TraceConfig& cfg = {});
    std::size_t hits() const { return hits_; }

private:
    std::string dir_;
    std::size_t hits_ = 0;
};

std::string polyline_json(const RayPolyline& ray);

// ---------------------------------------------------------------------------

template <class In, class Out>
GridMask make_annulus_mask(double half_width, double h, In inner, Out outer) {
    GridMask m;
    m.h = h;
    std::size_t n = static_cast<std::size_t>(2.0 * half_width / h) + 3;
    m.nx = m.ny = n;
    m.x0 = m.y0 = -h * double(n - 1) / 2.0;
    m.label.assign(n * n, GridMask::Outside);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            Complex z = m.point(i, j);
            std::uint8_t l = GridMask::Region;
            if (inner(z)) l = GridMask::Inner;
            else if (outer(z)) l = GridMask::Outer;
            m.label[j * n + i] = l;
        }
    }
    return m;
}

}  // namespace yoccoz
