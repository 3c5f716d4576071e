#pragma once

// Data-parallel inner loops used by the distance measures and the MLP.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA implementation. The backend is picked once at startup from the
// CPU's capabilities (override with ECOAMLP_SIMD=scalar|avx2) and can be
// switched at runtime with set_backend(). SIMD variants reassociate sums,
// so results agree with the scalar reference to rounding, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace ecoamlp::kernels {

enum class Backend { scalar, avx2 };

struct KernelTable {
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// Centered cross/auto sums: sab = sum (a-ma)(b-mb), saa, sbb.
    void (*centered_moments)(const double* a, const double* b, std::size_t n, double mean_a, double mean_b,
                             double* sab, double* saa, double* sbb);
};

const KernelTable& scalar_table() noexcept;
/// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table() noexcept;

bool backend_supported(Backend backend) noexcept;
Backend best_backend() noexcept;
Backend active_backend() noexcept;
/// Returns false (and leaves the active backend alone) if unsupported.
bool set_backend(Backend backend) noexcept;
const KernelTable& table(Backend backend);
std::string_view backend_name(Backend backend) noexcept;
/// Parses "scalar" / "avx2" / "auto"; "auto" maps to best_backend().
bool parse_backend(std::string_view name, Backend& out) noexcept;

const KernelTable& active() noexcept;

inline double sum(std::span<const double> x) noexcept { return active().sum(x.data(), x.size()); }

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    return active().squared_distance(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

/// RAII backend override for tests and benchmarks.
class ScopedBackend {
public:
    explicit ScopedBackend(Backend backend) noexcept : previous_(active_backend()) { set_backend(backend); }
    ~ScopedBackend() { set_backend(previous_); }
    ScopedBackend(const ScopedBackend&) = delete;
    ScopedBackend& operator=(const ScopedBackend&) = delete;

private:
    Backend previous_;
};

} // namespace ecoamlp::kernels
