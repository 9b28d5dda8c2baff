// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace yoccoz::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

void laplacian_avx2(const double* u, const double* wx, const double* wy, const double* free, double* out,
                    std::size_t nx, std::size_t ny) {
    for (std::size_t i = 0; i < nx; ++i) out[i] = out[(ny - 1) * nx + i] = 0.0;
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        std::size_t row = j * nx;
        out[row] = out[row + nx - 1] = 0.0;
        std::size_t i = 1;
        for (; i + 4 < nx; i += 4) {
            std::size_t k = row + i;
            __m256d uk = _mm256_loadu_pd(u + k);
            __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(wx + k), _mm256_sub_pd(uk, _mm256_loadu_pd(u + k + 1)));
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(wx + k - 1), _mm256_sub_pd(uk, _mm256_loadu_pd(u + k - 1)), acc);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(wy + k), _mm256_sub_pd(uk, _mm256_loadu_pd(u + k + nx)), acc);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(wy + k - nx), _mm256_sub_pd(uk, _mm256_loadu_pd(u + k - nx)),
                                  acc);
            __m256d f = _mm256_loadu_pd(free + k);
            __m256d on = _mm256_cmp_pd(f, _mm256_setzero_pd(), _CMP_NEQ_OQ);
            _mm256_storeu_pd(out + k, _mm256_and_pd(on, acc));
        }
        for (; i + 1 < nx; ++i) {
            std::size_t k = row + i;
            double uk = u[k];
            out[k] = free[k] == 0.0 ? 0.0
                                    : wx[k] * (uk - u[k + 1]) + wx[k - 1] * (uk - u[k - 1]) +
                                          wy[k] * (uk - u[k + nx]) + wy[k - nx] * (uk - u[k - nx]);
        }
    }
}

void jacobi_avx2(const double* u, const double* b, const double* wx, const double* wy, const double* free,
                 double omega, double* out, std::size_t nx, std::size_t ny) {
    for (std::size_t i = 0; i < nx; ++i) {
        out[i] = u[i];
        out[(ny - 1) * nx + i] = u[(ny - 1) * nx + i];
    }
    const __m256d om = _mm256_set1_pd(omega);
    const __m256d zero = _mm256_setzero_pd();
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        std::size_t row = j * nx;
        out[row] = u[row];
        out[row + nx - 1] = u[row + nx - 1];
        std::size_t i = 1;
        for (; i + 4 < nx; i += 4) {
            std::size_t k = row + i;
            __m256d ax = _mm256_loadu_pd(wx + k), bx = _mm256_loadu_pd(wx + k - 1);
            __m256d ay = _mm256_loadu_pd(wy + k), by = _mm256_loadu_pd(wy + k - nx);
            __m256d diag = _mm256_add_pd(_mm256_add_pd(ax, bx), _mm256_add_pd(ay, by));
            __m256d uk = _mm256_loadu_pd(u + k);
            __m256d au = _mm256_mul_pd(diag, uk);
            au = _mm256_fnmadd_pd(ax, _mm256_loadu_pd(u + k + 1), au);
            au = _mm256_fnmadd_pd(bx, _mm256_loadu_pd(u + k - 1), au);
            au = _mm256_fnmadd_pd(ay, _mm256_loadu_pd(u + k + nx), au);
            au = _mm256_fnmadd_pd(by, _mm256_loadu_pd(u + k - nx), au);
            __m256d step = _mm256_div_pd(_mm256_mul_pd(om, _mm256_sub_pd(_mm256_loadu_pd(b + k), au)), diag);
            __m256d ok = _mm256_and_pd(_mm256_cmp_pd(_mm256_loadu_pd(free + k), zero, _CMP_NEQ_OQ),
                                       _mm256_cmp_pd(diag, zero, _CMP_GT_OQ));
            _mm256_storeu_pd(out + k, _mm256_add_pd(uk, _mm256_and_pd(ok, step)));
        }
        for (; i + 1 < nx; ++i) {
            std::size_t k = row + i;
            double diag = wx[k] + wx[k - 1] + wy[k] + wy[k - nx];
            if (free[k] == 0.0 || diag <= 0.0) {
                out[k] = u[k];
                continue;
            }
            double au = diag * u[k] - wx[k] * u[k + 1] - wx[k - 1] * u[k - 1] - wy[k] * u[k + nx] -
                        wy[k - nx] * u[k - nx];
            out[k] = u[k] + omega * (b[k] - au) / diag;
        }
    }
}

double edge_energy_avx2(const double* u, const double* wx, const double* wy, std::size_t nx, std::size_t ny) {
    __m256d acc = _mm256_setzero_pd();
    double tail = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        std::size_t row = j * nx, i = 0;
        for (; i + 4 < nx; i += 4) {
            std::size_t k = row + i;
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(u + k + 1), _mm256_loadu_pd(u + k));
            acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(wx + k), d), d, acc);
        }
        for (; i + 1 < nx; ++i) {
            double d = u[row + i + 1] - u[row + i];
            tail += wx[row + i] * d * d;
        }
    }
    if (ny > 1) {
        std::size_t total = (ny - 1) * nx, k = 0;
        for (; k + 4 <= total; k += 4) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(u + k + nx), _mm256_loadu_pd(u + k));
            acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(wy + k), d), d, acc);
        }
        for (; k < total; ++k) {
            double d = u[k + nx] - u[k];
            tail += wy[k] * d * d;
        }
    }
    return hsum(acc) + tail;
}

double cell_energy_avx2(const double* u, const double* cell, std::size_t nx, std::size_t ny) {
    __m256d acc = _mm256_setzero_pd();
    const __m256d half = _mm256_set1_pd(0.5);
    double tail = 0.0;
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        std::size_t row = j * nx, i = 0;
        for (; i + 5 <= nx; i += 4) {
            std::size_t k = row + i;
            __m256d a = _mm256_loadu_pd(u + k), b = _mm256_loadu_pd(u + k + 1);
            __m256d c = _mm256_loadu_pd(u + k + nx), d = _mm256_loadu_pd(u + k + nx + 1);
            __m256d gx = _mm256_mul_pd(half, _mm256_add_pd(_mm256_sub_pd(b, a), _mm256_sub_pd(d, c)));
            __m256d gy = _mm256_mul_pd(half, _mm256_add_pd(_mm256_sub_pd(c, a), _mm256_sub_pd(d, b)));
            __m256d g2 = _mm256_fmadd_pd(gx, gx, _mm256_mul_pd(gy, gy));
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(cell + k), g2, acc);
        }
        for (; i + 1 < nx; ++i) {
            std::size_t k = row + i;
            double gx = 0.5 * ((u[k + 1] - u[k]) + (u[k + nx + 1] - u[k + nx]));
            double gy = 0.5 * ((u[k + nx] - u[k]) + (u[k + nx + 1] - u[k + 1]));
            tail += cell[k] * (gx * gx + gy * gy);
        }
    }
    return hsum(acc) + tail;
}

double sqdiff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double s, const double* x, double* y, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(sv, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += s * x[i];
}

void xpay_avx2(const double* x, double s, double* y, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(sv, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = x[i] + s * y[i];
}

void dilatation_avx2(const double* a, const double* b, const double* c, const double* d, double* k,
                     std::size_t n) {
    const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i), vb = _mm256_loadu_pd(b + i);
        __m256d vc = _mm256_loadu_pd(c + i), vd = _mm256_loadu_pd(d + i);
        __m256d s1 = _mm256_add_pd(va, vd), s2 = _mm256_sub_pd(vc, vb);
        __m256d t1 = _mm256_sub_pd(va, vd), t2 = _mm256_add_pd(vc, vb);
        __m256d p = _mm256_sqrt_pd(_mm256_fmadd_pd(s1, s1, _mm256_mul_pd(s2, s2)));
        __m256d m = _mm256_sqrt_pd(_mm256_fmadd_pd(t1, t1, _mm256_mul_pd(t2, t2)));
        __m256d den = _mm256_andnot_pd(sign, _mm256_sub_pd(p, m));
        __m256d q = _mm256_div_pd(_mm256_add_pd(p, m), den);
        __m256d zero = _mm256_cmp_pd(den, _mm256_setzero_pd(), _CMP_EQ_OQ);
        _mm256_storeu_pd(k + i, _mm256_blendv_pd(q, inf, zero));
    }
    dilatation_scalar(a + i, b + i, c + i, d + i, k + i, n - i);
}

}  // namespace yoccoz::kernels::detail
