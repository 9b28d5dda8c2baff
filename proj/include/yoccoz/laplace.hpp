#pragma once

#include "yoccoz/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace yoccoz {

enum class NodeType : std::uint8_t { Outside = 0, Free = 1, Fixed = 2 };

/// Discrete Dirichlet problem for the graph Laplacian on a node grid.
/// Edges join horizontally or vertically adjacent nodes that are both not
/// Outside. The outer ring of the grid must be Outside or Fixed.
struct LaplaceProblem {
    std::size_t nx = 0, ny = 0;
    std::vector<NodeType> type;
    std::vector<double> u;  // Dirichlet values on Fixed nodes, initial guess elsewhere

    LaplaceProblem() = default;
    LaplaceProblem(std::size_t nx_, std::size_t ny_)
        : nx(nx_), ny(ny_), type(nx_ * ny_, NodeType::Outside), u(nx_ * ny_, 0.0) {}

    std::size_t at(std::size_t i, std::size_t j) const { return j * nx + i; }
};

struct SolveStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Multigrid-preconditioned conjugate gradients. Overwrites p.u.
/// Throws relaxation-failed when rtol is not reached within max_iter.
SolveStats solve_laplace(LaplaceProblem& p, double rtol = 1e-9, std::size_t max_iter = 200,
                         const kernels::Table& k = kernels::active());

/// Edge weights for p: 1 where both endpoints exist, 0 elsewhere.
void edge_weights(const LaplaceProblem& p, std::vector<double>& wx, std::vector<double>& wy);

/// Resistor-network energy: sum over edges of (u_a - u_b)^2.
double network_energy(const LaplaceProblem& p, const kernels::Table& k = kernels::active());

}  // namespace yoccoz
