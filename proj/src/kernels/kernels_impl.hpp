#pragma once

#include <cstddef>

namespace yoccoz::kernels::detail {

void laplacian_scalar(const double*, const double*, const double*, const double*, double*, std::size_t, std::size_t);
void jacobi_scalar(const double*, const double*, const double*, const double*, const double*, double, double*,
                   std::size_t, std::size_t);
double edge_energy_scalar(const double*, const double*, const double*, std::size_t, std::size_t);
double cell_energy_scalar(const double*, const double*, std::size_t, std::size_t);
double sqdiff_scalar(const double*, const double*, std::size_t);
double dot_scalar(const double*, const double*, std::size_t);
void axpy_scalar(double, const double*, double*, std::size_t);
void xpay_scalar(const double*, double, double*, std::size_t);
void dilatation_scalar(const double*, const double*, const double*, const double*, double*, std::size_t);

#ifdef YOCCOZ_HAVE_AVX2
void laplacian_avx2(const double*, const double*, const double*, const double*, double*, std::size_t, std::size_t);
void jacobi_avx2(const double*, const double*, const double*, const double*, const double*, double, double*,
                 std::size_t, std::size_t);
double edge_energy_avx2(const double*, const double*, const double*, std::size_t, std::size_t);
double cell_energy_avx2(const double*, const double*, std::size_t, std::size_t);
double sqdiff_avx2(const double*, const double*, std::size_t);
double dot_avx2(const double*, const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void xpay_avx2(const double*, double, double*, std::size_t);
void dilatation_avx2(const double*, const double*, const double*, const double*, double*, std::size_t);
#endif

}  // namespace yoccoz::kernels::detail
