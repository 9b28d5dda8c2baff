#include "yoccoz/laplace.hpp"

#include "yoccoz/error.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace yoccoz {

void edge_weights(const LaplaceProblem& p, std::vector<double>& wx, std::vector<double>& wy) {
    const std::size_t n = p.nx * p.ny;
    wx.assign(n, 0.0);
    wy.assign(n, 0.0);
    auto exists = [&](std::size_t k) { return p.type[k] != NodeType::Outside; };
    for (std::size_t j = 0; j < p.ny; ++j) {
        for (std::size_t i = 0; i < p.nx; ++i) {
            std::size_t k = p.at(i, j);
            if (!exists(k)) continue;
            if (i + 1 < p.nx && exists(k + 1)) wx[k] = 1.0;
            if (j + 1 < p.ny && exists(k + p.nx)) wy[k] = 1.0;
        }
    }
}

double network_energy(const LaplaceProblem& p, const kernels::Table& k) {
    std::vector<double> wx, wy;
    edge_weights(p, wx, wy);
    return k.edge_energy(p.u.data(), wx.data(), wy.data(), p.nx, p.ny);
}

namespace {

struct Level {
    std::size_t nx = 0, ny = 0;
    std::vector<std::uint8_t> exists;
    std::vector<double> wx, wy, free;
    std::vector<double> x, b, tmp, res;

    std::size_t size() const { return nx * ny; }
};

// Rediscretised coarse grid on the even nodes. Coarse edges need the whole
// fine path to exist; coarse border nodes are never free.
std::unique_ptr<Level> coarsen(const Level& f) {
    auto c = std::make_unique<Level>();
    c->nx = (f.nx + 1) / 2;
    c->ny = (f.ny + 1) / 2;
    const std::size_t n = c->size();
    c->exists.assign(n, 0);
    c->free.assign(n, 0.0);
    c->wx.assign(n, 0.0);
    c->wy.assign(n, 0.0);
    for (std::size_t J = 0; J < c->ny; ++J) {
        for (std::size_t I = 0; I < c->nx; ++I) {
            std::size_t K = J * c->nx + I, k = 2 * J * f.nx + 2 * I;
            c->exists[K] = f.exists[k];
            bool border = I == 0 || J == 0 || I + 1 == c->nx || J + 1 == c->ny;
            c->free[K] = border ? 0.0 : f.free[k];
            if (I + 1 < c->nx && f.wx[k] > 0 && f.wx[k + 1] > 0) c->wx[K] = 2.0 / (1.0 / f.wx[k] + 1.0 / f.wx[k + 1]);
            if (J + 1 < c->ny && f.wy[k] > 0 && f.wy[k + f.nx] > 0)
                c->wy[K] = 2.0 / (1.0 / f.wy[k] + 1.0 / f.wy[k + f.nx]);
        }
    }
    return c;
}

void allocate(Level& l) {
    l.x.assign(l.size(), 0.0);
    l.b.assign(l.size(), 0.0);
    l.tmp.assign(l.size(), 0.0);
    l.res.assign(l.size(), 0.0);
}

class Multigrid {
public:
    Multigrid(std::unique_ptr<Level> fine, const kernels::Table& k) : k_(k) {
        levels_.push_back(std::move(fine));
        while (true) {
            const Level& f = *levels_.back();
            if (f.nx < 9 || f.ny < 9) break;
            auto c = coarsen(f);
            double nfree = 0;
            for (double v : c->free) nfree += v;
            if (nfree < 16) break;
            levels_.push_back(std::move(c));
        }
        for (auto& l : levels_) allocate(*l);
    }

    Level& fine() { return *levels_.front(); }

    // z = M r: one V(2,2) cycle from a zero guess.
    void apply(const std::vector<double>& r, std::vector<double>& z) {
        Level& f = fine();
        f.b = r;
        vcycle(0);
        z = f.x;
    }

private:
    void smooth(Level& l, int sweeps) {
        for (int s = 0; s < sweeps; ++s) {
            k_.jacobi(l.x.data(), l.b.data(), l.wx.data(), l.wy.data(), l.free.data(), 0.8, l.tmp.data(), l.nx,
                      l.ny);
            l.x.swap(l.tmp);
        }
    }

    void vcycle(std::size_t li) {
        Level& l = *levels_[li];
        std::fill(l.x.begin(), l.x.end(), 0.0);
        if (li + 1 == levels_.size()) {
            smooth(l, 60);
            return;
        }
        smooth(l, 2);
        k_.laplacian(l.x.data(), l.wx.data(), l.wy.data(), l.free.data(), l.res.data(), l.nx, l.ny);
        for (std::size_t i = 0; i < l.size(); ++i) l.res[i] = l.free[i] * (l.b[i] - l.res[i]);

        Level& c = *levels_[li + 1];
        // Restriction is the transpose of bilinear prolongation.
        for (std::size_t J = 1; J + 1 < c.ny; ++J) {
            for (std::size_t I = 1; I + 1 < c.nx; ++I) {
                std::size_t K = J * c.nx + I;
                if (c.free[K] == 0.0) {
                    c.b[K] = 0.0;
                    continue;
                }
                std::size_t k = 2 * J * l.nx + 2 * I;
                const double* r = l.res.data();
                c.b[K] = r[k] + 0.5 * (r[k - 1] + r[k + 1] + r[k - l.nx] + r[k + l.nx]) +
                         0.25 * (r[k - l.nx - 1] + r[k - l.nx + 1] + r[k + l.nx - 1] + r[k + l.nx + 1]);
            }
        }
        vcycle(li + 1);
        for (std::size_t j = 1; j + 1 < l.ny; ++j) {
            for (std::size_t i = 1; i + 1 < l.nx; ++i) {
                std::size_t k = j * l.nx + i;
                if (l.free[k] == 0.0) continue;
                std::size_t I0 = i / 2, J0 = j / 2, I1 = (i + 1) / 2, J1 = (j + 1) / 2;
                double v = 0.25 * (c.x[J0 * c.nx + I0] + c.x[J0 * c.nx + I1] + c.x[J1 * c.nx + I0] +
                                   c.x[J1 * c.nx + I1]);
                l.x[k] += v;
            }
        }
        smooth(l, 2);
    }

    const kernels::Table& k_;
    std::vector<std::unique_ptr<Level>> levels_;
};

}  // namespace

SolveStats solve_laplace(LaplaceProblem& p, double rtol, std::size_t max_iter, const kernels::Table& k) {
    const std::size_t n = p.nx * p.ny;
    if (p.type.size() != n || p.u.size() != n) throw Error("invalid-region", "grid arrays do not match dimensions");
    for (std::size_t i = 0; i < p.nx; ++i)
        for (std::size_t j : {std::size_t{0}, p.ny - 1})
            if (p.type[p.at(i, j)] == NodeType::Free) throw Error("invalid-region", "free node on the grid border");
    for (std::size_t j = 0; j < p.ny; ++j)
        for (std::size_t i : {std::size_t{0}, p.nx - 1})
            if (p.type[p.at(i, j)] == NodeType::Free) throw Error("invalid-region", "free node on the grid border");

    auto fine = std::make_unique<Level>();
    fine->nx = p.nx;
    fine->ny = p.ny;
    fine->exists.resize(n);
    fine->free.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        fine->exists[i] = p.type[i] != NodeType::Outside;
        fine->free[i] = p.type[i] == NodeType::Free ? 1.0 : 0.0;
    }
    edge_weights(p, fine->wx, fine->wy);
    const std::vector<double>& free = fine->free;
    Multigrid mg(std::move(fine), k);
    Level& f = mg.fine();

    std::vector<double> r(n), z(n), zold(n), q(n), pdir(n);
    k.laplacian(p.u.data(), f.wx.data(), f.wy.data(), free.data(), r.data(), p.nx, p.ny);
    for (std::size_t i = 0; i < n; ++i) r[i] = -r[i];
    const double r0 = std::sqrt(k.dot(r.data(), r.data(), n));
    SolveStats st;
    if (r0 == 0.0) {
        st.converged = true;
        return st;
    }
    mg.apply(r, z);
    pdir = z;
    double rz = k.dot(r.data(), z.data(), n);
    for (st.iterations = 1; st.iterations <= max_iter; ++st.iterations) {
        k.laplacian(pdir.data(), f.wx.data(), f.wy.data(), free.data(), q.data(), p.nx, p.ny);
        double pq = k.dot(pdir.data(), q.data(), n);
        if (!(pq > 0.0)) break;
        double alpha = rz / pq;
        k.axpy(alpha, pdir.data(), p.u.data(), n);
        k.axpy(-alpha, q.data(), r.data(), n);
        st.relative_residual = std::sqrt(k.dot(r.data(), r.data(), n)) / r0;
        if (st.relative_residual < rtol) {
            st.converged = true;
            return st;
        }
        zold.swap(z);
        mg.apply(r, z);
        // Polak-Ribiere keeps CG stable under the inexact coarse solve.
        double rz_new = k.dot(r.data(), z.data(), n);
        double beta = (rz_new - k.dot(r.data(), zold.data(), n)) / rz;
        if (beta < 0) beta = 0;
        rz = rz_new;
        k.xpay(z.data(), beta, pdir.data(), n);
    }
    throw Error("relaxation-failed", "Laplace solve stalled at relative residual " +
                                         std::to_string(st.relative_residual));
}

}  // namespace yoccoz
