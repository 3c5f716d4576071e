// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.

#include "ecoamlp/kernels.hpp"

#include <immintrin.h>

namespace ecoamlp::kernels {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        s += x[i];
    }
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

void centered_moments_avx2(const double* a, const double* b, std::size_t n, double mean_a, double mean_b,
                           double* sab, double* saa, double* sbb) {
    const __m256d ma = _mm256_set1_pd(mean_a);
    const __m256d mb = _mm256_set1_pd(mean_b);
    __m256d ab = _mm256_setzero_pd();
    __m256d aa = _mm256_setzero_pd();
    __m256d bb = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d da = _mm256_sub_pd(_mm256_loadu_pd(a + i), ma);
        const __m256d db = _mm256_sub_pd(_mm256_loadu_pd(b + i), mb);
        ab = _mm256_fmadd_pd(da, db, ab);
        aa = _mm256_fmadd_pd(da, da, aa);
        bb = _mm256_fmadd_pd(db, db, bb);
    }
    double s_ab = hsum(ab);
    double s_aa = hsum(aa);
    double s_bb = hsum(bb);
    for (; i < n; ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        s_ab += da * db;
        s_aa += da * da;
        s_bb += db * db;
    }
    *sab = s_ab;
    *saa = s_aa;
    *sbb = s_bb;
}

constexpr KernelTable kAvx2{sum_avx2, dot_avx2, squared_distance_avx2, axpy_avx2, centered_moments_avx2};

} // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }

} // namespace ecoamlp::kernels
