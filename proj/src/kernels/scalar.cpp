#include "ecoamlp/kernels.hpp"

namespace ecoamlp::kernels {

namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i];
    }
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

void centered_moments_scalar(const double* a, const double* b, std::size_t n, double mean_a, double mean_b,
                             double* sab, double* saa, double* sbb) {
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        ab += da * db;
        aa += da * da;
        bb += db * db;
    }
    *sab = ab;
    *saa = aa;
    *sbb = bb;
}

constexpr KernelTable kScalar{sum_scalar, dot_scalar, squared_distance_scalar, axpy_scalar, centered_moments_scalar};

} // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

} // namespace ecoamlp::kernels
