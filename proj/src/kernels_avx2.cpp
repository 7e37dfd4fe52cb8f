// Compiled with -mavx2 -mfma; callers must gate on avx2_available().
#include "enavs/kernels.hpp"

#ifdef __AVX2__
#include <immintrin.h>
#endif

#include <cstdlib>

namespace enavs::kernels {

#ifdef __AVX2__

namespace {

inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline double dot_row(const double* a, const double* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j + 4), _mm256_loadu_pd(b + j + 4), acc1);
    }
    if (j + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), acc0);
        j += 4;
    }
    double acc = hsum4(_mm256_add_pd(acc0, acc1));
    for (; j < n; ++j) acc += a[j] * b[j];
    return acc;
}

void matvec_avx2(const double* W, const double* x, const double* b, double* y,
                 size_t m, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        const double acc = dot_row(W + i * n, x, n);
        y[i] = b ? b[i] + acc : acc;
    }
}

void matvec_t_avx2(const double* W, const double* g, double* out, size_t m, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        const double* row = W + i * n;
        const __m256d gi = _mm256_set1_pd(g[i]);
        size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256d o = _mm256_loadu_pd(out + j);
            o = _mm256_fmadd_pd(gi, _mm256_loadu_pd(row + j), o);
            _mm256_storeu_pd(out + j, o);
        }
        const double gs = g[i];
        for (; j < n; ++j) out[j] += gs * row[j];
    }
}

void ger_avx2(double* G, const double* g, const double* x, double scale,
              size_t m, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        double* row = G + i * n;
        const double gs = scale * g[i];
        const __m256d gi = _mm256_set1_pd(gs);
        size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256d r = _mm256_loadu_pd(row + j);
            r = _mm256_fmadd_pd(gi, _mm256_loadu_pd(x + j), r);
            _mm256_storeu_pd(row + j, r);
        }
        for (; j < n; ++j) row[j] += gs * x[j];
    }
}

void axpy_avx2(double a, const double* x, double* y, size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d yv = _mm256_loadu_pd(y + j);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + j), yv);
        _mm256_storeu_pd(y + j, yv);
    }
    for (; j < n; ++j) y[j] += a * x[j];
}

double dot_avx2(const double* a, const double* b, size_t n) { return dot_row(a, b, n); }

}  // namespace

const Backend& avx2_backend() {
    static const Backend k{"avx2", matvec_avx2, matvec_t_avx2, ger_avx2,
                           axpy_avx2, dot_avx2};
    return k;
}

#else

const Backend& avx2_backend() {
    // Build without AVX2 support; avx2_available() reports false and the
    // dispatcher never hands this out.
    std::abort();
}

#endif

}  // namespace enavs::kernels
