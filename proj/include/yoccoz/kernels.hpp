#pragma once

#include <cstddef>

// Numeric inner loops with a scalar reference and an AVX2 variant.
//
// Grids are row-major, index j*nx + i. Edge weights: wx[k] belongs to the
// edge (k, k+1), wy[k] to the edge (k, k+nx). Nodes on the outer ring of the
// grid must have free = 0; the stencil kernels never read past it.
namespace yoccoz::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
    Isa isa;
    // out = free * (A u), A the weighted graph Laplacian.
    void (*laplacian)(const double* u, const double* wx, const double* wy, const double* free, double* out,
                      std::size_t nx, std::size_t ny);
    // out = u + omega * free * (b - A u) / diag(A).
    void (*jacobi)(const double* u, const double* b, const double* wx, const double* wy, const double* free,
                   double omega, double* out, std::size_t nx, std::size_t ny);
    // Sum over edges of w * (u_a - u_b)^2.
    double (*edge_energy)(const double* u, const double* wx, const double* wy, std::size_t nx, std::size_t ny);
    // Sum over cells with cell[k] != 0 of |grad u|^2 at the cell centre, times h^2
    // (h cancels: returns the bare sum of squared averaged differences).
    double (*cell_energy)(const double* u, const double* cell, std::size_t nx, std::size_t ny);
    // Sum of (a_i - b_i)^2.
    double (*sqdiff)(const double* a, const double* b, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += s * x
    void (*axpy)(double s, const double* x, double* y, std::size_t n);
    // y = x + s * y
    void (*xpay)(const double* x, double s, double* y, std::size_t n);
    // Dilatation sigma_max / sigma_min of [[a b][c d]]; +inf when singular.
    void (*dilatation)(const double* a, const double* b, const double* c, const double* d, double* k,
                       std::size_t n);
};

const Table& scalar();
// nullptr when the CPU or the build lacks AVX2/FMA.
const Table* avx2();

// Best available table. YOCCOZ_KERNELS=scalar forces the reference path.
const Table& active();
const char* name(Isa isa);

}  // namespace yoccoz::kernels
