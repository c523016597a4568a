#include "mlspeed/simd.hpp"

#include <atomic>

namespace mlspeed::kernels {

#if defined(__x86_64__) || defined(__i386__)
const Ops& avx2_ops();  // simd_avx2.cpp
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
std::atomic<bool> g_force_scalar{false};
}

bool force_scalar(bool on) {
    return g_force_scalar.exchange(on);
}

const Ops& active() {
    if (g_force_scalar.load(std::memory_order_relaxed))
        return scalar_ops();
#if defined(__x86_64__) || defined(__i386__)
    static const bool avx2 = cpu_has_avx2();
    if (avx2)
        return avx2_ops();
#endif
    return scalar_ops();
}

}  // namespace mlspeed::kernels
