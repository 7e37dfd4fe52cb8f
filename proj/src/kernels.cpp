#include "enavs/kernels.hpp"

#include <atomic>

#include "enavs/errors.hpp"

namespace enavs::kernels {

bool avx2_available() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
std::atomic<const Backend*> g_active{nullptr};

const Backend* pick_auto() {
    return avx2_available() ? &avx2_backend() : &scalar_backend();
}
}  // namespace

const Backend& active() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (!b) {
        b = pick_auto();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void select(const std::string& name) {
    if (name == "auto") {
        g_active.store(pick_auto(), std::memory_order_release);
    } else if (name == "scalar") {
        g_active.store(&scalar_backend(), std::memory_order_release);
    } else if (name == "avx2") {
        if (!avx2_available())
            throw ConfigError("kernel backend 'avx2' requested but CPU lacks AVX2/FMA");
        g_active.store(&avx2_backend(), std::memory_order_release);
    } else {
        throw ConfigError("unknown kernel backend '" + name + "' (scalar|avx2|auto)");
    }
}

}  // namespace enavs::kernels
