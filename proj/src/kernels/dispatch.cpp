#include "ecoamlp/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace ecoamlp::kernels {

#if !defined(ECOAMLP_HAVE_AVX2)
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(ECOAMLP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend initial_backend() noexcept {
    Backend backend = best_backend();
    if (const char* env = std::getenv("ECOAMLP_SIMD")) {
        Backend requested{};
        if (parse_backend(env, requested) && backend_supported(requested)) {
            backend = requested;
        }
    }
    return backend;
}

std::atomic<const KernelTable*>& active_table() noexcept {
    static std::atomic<const KernelTable*> current{&table(initial_backend())};
    return current;
}

} // namespace

bool backend_supported(Backend backend) noexcept {
    switch (backend) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
        return avx2_table() != nullptr && cpu_has_avx2();
    }
    return false;
}

Backend best_backend() noexcept { return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar; }

const KernelTable& table(Backend backend) {
    if (!backend_supported(backend)) {
        throw std::invalid_argument("kernel backend not supported on this machine");
    }
    return backend == Backend::avx2 ? *avx2_table() : scalar_table();
}

Backend active_backend() noexcept {
    return active_table().load(std::memory_order_acquire) == &scalar_table() ? Backend::scalar : Backend::avx2;
}

bool set_backend(Backend backend) noexcept {
    if (!backend_supported(backend)) {
        return false;
    }
    active_table().store(&table(backend), std::memory_order_release);
    return true;
}

const KernelTable& active() noexcept { return *active_table().load(std::memory_order_acquire); }

std::string_view backend_name(Backend backend) noexcept {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool parse_backend(std::string_view name, Backend& out) noexcept {
    if (name == "scalar") {
        out = Backend::scalar;
    } else if (name == "avx2") {
        out = Backend::avx2;
    } else if (name == "auto") {
        out = best_backend();
    } else {
        return false;
    }
    return true;
}

} // namespace ecoamlp::kernels
