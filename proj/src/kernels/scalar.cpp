#include "kernels_impl.hpp"

#include <cmath>
#include <limits>

namespace yoccoz::kernels::detail {

void laplacian_scalar(const double* u, const double* wx, const double* wy, const double* free, double* out,
                      std::size_t nx, std::size_t ny) {
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            std::size_t k = j * nx + i;
            if (free[k] == 0.0) {
                out[k] = 0.0;
                continue;
            }
            double uk = u[k];
            out[k] = wx[k] * (uk - u[k + 1]) + wx[k - 1] * (uk - u[k - 1]) + wy[k] * (uk - u[k + nx]) +
                     wy[k - nx] * (uk - u[k - nx]);
        }
    }
}

void jacobi_scalar(const double* u, const double* b, const double* wx, const double* wy, const double* free,
                   double omega, double* out, std::size_t nx, std::size_t ny) {
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            std::size_t k = j * nx + i;
            if (free[k] == 0.0) {
                out[k] = u[k];
                continue;
            }
            double diag = wx[k] + wx[k - 1] + wy[k] + wy[k - nx];
            double au = diag * u[k] - wx[k] * u[k + 1] - wx[k - 1] * u[k - 1] - wy[k] * u[k + nx] -
                        wy[k - nx] * u[k - nx];
            out[k] = diag > 0.0 ? u[k] + omega * (b[k] - au) / diag : u[k];
        }
    }
}

double edge_energy_scalar(const double* u, const double* wx, const double* wy, std::size_t nx, std::size_t ny) {
    double s = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            std::size_t k = j * nx + i;
            double d = u[k + 1] - u[k];
            s += wx[k] * d * d;
        }
    }
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            std::size_t k = j * nx + i;
            double d = u[k + nx] - u[k];
            s += wy[k] * d * d;
        }
    }
    return s;
}

double cell_energy_scalar(const double* u, const double* cell, std::size_t nx, std::size_t ny) {
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            std::size_t k = j * nx + i;
            double gx = 0.5 * ((u[k + 1] - u[k]) + (u[k + nx + 1] - u[k + nx]));
            double gy = 0.5 * ((u[k + nx] - u[k]) + (u[k + nx + 1] - u[k + 1]));
            s += cell[k] * (gx * gx + gy * gy);
        }
    }
    return s;
}

double sqdiff_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double s, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void xpay_scalar(const double* x, double s, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + s * y[i];
}

void dilatation_scalar(const double* a, const double* b, const double* c, const double* d, double* k,
                       std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        // |f_z| and |f_zbar| of the linear map; K = (|fz|+|fzb|)/(|fz|-|fzb|).
        double p = std::hypot(a[i] + d[i], c[i] - b[i]);
        double m = std::hypot(a[i] - d[i], c[i] + b[i]);
        double den = std::fabs(p - m);
        k[i] = den > 0.0 ? (p + m) / den : std::numeric_limits<double>::infinity();
    }
}

}  // namespace yoccoz::kernels::detail
