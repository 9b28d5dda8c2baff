#include "yoccoz/kernels.hpp"

#include "kernels_impl.hpp"

#include <cstdlib>
#include <cstring>

namespace yoccoz::kernels {

using namespace detail;

const Table& scalar() {
    static const Table t{Isa::Scalar,   laplacian_scalar, jacobi_scalar, edge_energy_scalar,
                         cell_energy_scalar, sqdiff_scalar, dot_scalar,  axpy_scalar,
                         xpay_scalar,   dilatation_scalar};
    return t;
}

const Table* avx2() {
#ifdef YOCCOZ_HAVE_AVX2
    static const Table t{Isa::Avx2,   laplacian_avx2, jacobi_avx2, edge_energy_avx2, cell_energy_avx2,
                         sqdiff_avx2, dot_avx2,       axpy_avx2,   xpay_avx2,        dilatation_avx2};
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &t : nullptr;
#else
    return nullptr;
#endif
}

const Table& active() {
    static const Table* chosen = [] {
        const char* env = std::getenv("YOCCOZ_KERNELS");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar();
        const Table* v = avx2();
        return v ? v : &scalar();
    }();
    return *chosen;
}

const char* name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace yoccoz::kernels
